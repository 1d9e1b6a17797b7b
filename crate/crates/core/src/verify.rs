//! Property suites over one body. Every check yields a [`CheckRow`].

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::asdim_cover::{audit_cover, build_cover, footprint_diameter, ArcConfig, CoverAuditConfig};
use crate::coarse_props::{
    clearance_set_diameter, corona_probe, flat_edge_check, greedy_packing, higson_defect, higson_defect_on_pairs,
    parallel_pairs, verify_contraction,
};
use crate::convex_domain::{line_intersection, BodySpec, Chord, ConvexBody, Direction, LineMeet, Point};
use crate::error::{GeomError, Result};
use crate::hilbert_metric::{
    ball_boundary, concurrency_defect, cross_ratio, distance, geodesic_defect, sphere_point, ConcurrencyMode, RaySpec,
};
use crate::sampling::{random_direction, random_interior, rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Metric,
    Coarse,
    Corona,
    Asdim,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Metric => "metric",
            Suite::Coarse => "coarse",
            Suite::Corona => "corona",
            Suite::Asdim => "asdim",
            Suite::All => "all",
        }
    }

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Metric, Suite::Coarse, Suite::Corona, Suite::Asdim],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "metric" => Ok(Suite::Metric),
            "coarse" => Ok(Suite::Coarse),
            "corona" => Ok(Suite::Corona),
            "asdim" => Ok(Suite::Asdim),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite '{other}' (expected metric, coarse, corona, asdim or all)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub suite: Suite,
    pub name: String,
    pub status: Status,
    pub worst_defect: f64,
    pub threshold: Option<f64>,
    pub samples: usize,
    pub detail: String,
}

impl CheckRow {
    fn at_most(suite: Suite, name: impl Into<String>, worst: f64, threshold: f64, samples: usize) -> Self {
        Self {
            suite,
            name: name.into(),
            status: if worst <= threshold { Status::Pass } else { Status::Fail },
            worst_defect: worst,
            threshold: Some(threshold),
            samples,
            detail: String::new(),
        }
    }

    fn info(suite: Suite, name: impl Into<String>, value: f64, samples: usize, detail: impl Into<String>) -> Self {
        Self {
            suite,
            name: name.into(),
            status: Status::Info,
            worst_defect: value,
            threshold: None,
            samples,
            detail: detail.into(),
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    fn failing_if(mut self, fail: bool) -> Self {
        if fail {
            self.status = Status::Fail;
        }
        self
    }
}

/// Sample counts, tolerances and parameters of the suites.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random instances per property.
    pub samples: usize,
    /// Tolerance for metric identities and inequalities.
    pub tol: f64,
    pub klein_tol: f64,
    pub concurrency_tol: f64,
    pub packing_trials: usize,
    pub packing_seeds: u64,
    pub corona_samples: usize,
    pub corona_delta: f64,
    pub corona_c: f64,
    pub corona_radii: Vec<f64>,
    pub flat_max_radius: f64,
    #[serde(rename = "cover_R")]
    pub cover_big_r: f64,
    pub cover_r: f64,
    pub cover_levels: usize,
    pub cover_trials: usize,
    pub cover_ball_samples: usize,
    pub cover_diameter_samples: usize,
    pub arc: ArcConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 1000,
            tol: 1e-9,
            klein_tol: 1e-12,
            concurrency_tol: 1e-7,
            packing_trials: 20_000,
            packing_seeds: 5,
            corona_samples: 5000,
            corona_delta: 0.1,
            corona_c: 1.0,
            corona_radii: (1..=8).map(|k| 2.0 * k as f64).collect(),
            flat_max_radius: 20.0,
            cover_big_r: 1.0,
            cover_r: 0.2,
            cover_levels: 5,
            cover_trials: 5000,
            cover_ball_samples: 128,
            cover_diameter_samples: 256,
            arc: ArcConfig::default(),
        }
    }
}

pub fn run_suite(body: &ConvexBody, suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for s in suite.expand() {
        log::info!("running suite {s}");
        rows.extend(match s {
            Suite::Metric => metric_suite(body, cfg)?,
            Suite::Coarse => coarse_suite(body, cfg)?,
            Suite::Corona => corona_suite(body, cfg)?,
            Suite::Asdim => asdim_suite(body, cfg)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(rows)
}

pub fn all_passed(rows: &[CheckRow]) -> bool {
    rows.iter().all(|r| r.status != Status::Fail)
}

fn require_planar(body: &ConvexBody, op: &'static str) -> Result<()> {
    if body.dim() != 2 {
        return Err(GeomError::DimensionUnsupported { op, dim: body.dim() });
    }
    Ok(())
}

pub fn metric_suite(body: &ConvexBody, cfg: &SuiteConfig) -> Result<Vec<CheckRow>> {
    let s = Suite::Metric;
    let n = cfg.samples;
    let mut rng = rng(cfg.seed);
    let (mut sym, mut tri, mut geo, mut convex, mut iso) = (0f64, 0f64, 0f64, 0f64, 0f64);
    for _ in 0..n {
        let x = random_interior(body, &mut rng);
        let y = random_interior(body, &mut rng);
        let z = random_interior(body, &mut rng);
        let (dxy, dyx) = (distance(body, &x, &y)?, distance(body, &y, &x)?);
        sym = sym.max((dxy - dyx).abs());
        tri = tri.max(distance(body, &x, &z)? - dxy - distance(body, &y, &z)?);
        geo = geo.max(geodesic_defect(body, &x, &y, rng.random_range(0.05..0.95))?);

        let w = x.lerp(&y, rng.random_range(0.0..=1.0));
        let reach = distance(body, &z, &x)?.max(distance(body, &z, &y)?);
        convex = convex.max(distance(body, &z, &w)? - reach);

        let ray = RaySpec::new(body, &x, &random_direction(&mut rng, body.dim()))?;
        // float error near the boundary grows like e^t, so stay at moderate radii
        let t0 = rng.random_range(0.0..6.0);
        let t1 = rng.random_range(0.0..6.0);
        let along = distance(body, &ray.point(t0)?, &ray.point(t1)?)?;
        iso = iso.max((along - (t0 - t1).abs()).abs());
    }
    let mut rows = vec![
        CheckRow::at_most(s, "symmetry", sym, cfg.tol, n),
        CheckRow::at_most(s, "triangle_inequality", tri, cfg.tol, n),
        CheckRow::at_most(s, "geodesic_segments", geo, cfg.tol, n),
        CheckRow::at_most(s, "ray_isometry", iso, cfg.tol, n),
        CheckRow::at_most(s, "ball_convexity", convex, cfg.tol, n),
    ];
    if let BodySpec::Disk { center, radius } = body.spec() {
        let c = Point::new(center.iter().copied());
        let mut worst: f64 = 0.0;
        for k in 1..=9 {
            let tau = k as f64 / 10.0;
            let mut p = c.clone();
            p = p.offset(&Direction::axis(body.dim(), 0, true), tau * radius);
            worst = worst.max((distance(body, &c, &p)? - ((1.0 + tau) / (1.0 - tau)).ln()).abs());
        }
        rows.push(CheckRow::at_most(s, "klein_identity", worst, cfg.klein_tol, 9));
    }
    if body.dim() == 2 {
        let polylines = n.min(200);
        let mut worst: f64 = 0.0;
        for _ in 0..polylines {
            let c = random_interior(body, &mut rng);
            let ball = ball_boundary(body, &c, rng.random_range(0.1..5.0), 64)?;
            worst = worst.max(-ball.min_turn());
        }
        rows.push(CheckRow::at_most(s, "ball_polyline_convexity", worst, cfg.tol, polylines));
    }
    let (conc, par) = projective_invariance(cfg.seed.wrapping_add(1), n)?;
    rows.push(CheckRow::at_most(s, "cross_ratio_invariance_concurrent", conc, cfg.tol, n / 2));
    rows.push(CheckRow::at_most(s, "cross_ratio_invariance_parallel", par, cfg.tol, n - n / 2));
    Ok(rows)
}

/// Worst relative change of the cross ratio of four collinear points under
/// central (first value) and parallel (second value) projection onto another line.
pub fn projective_invariance(seed: u64, configs: usize) -> Result<(f64, f64)> {
    let mut rng = rng(seed);
    let (mut conc, mut par) = (0f64, 0f64);
    let mut done = 0;
    while done < configs {
        let central = done % 2 == 0;
        let p1 = Point::xy(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let u1 = Direction::from_angle(rng.random_range(0.0..TAU));
        let mut params: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        params.sort_by(f64::total_cmp);
        if params.windows(2).any(|w| w[1] - w[0] < 0.05) {
            continue;
        }
        let pts: Vec<Point> = params.iter().map(|t| p1.offset(&u1, *t)).collect();
        let p2 = Point::xy(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let u2 = Direction::from_angle(rng.random_range(0.0..TAU));
        let eye = Point::xy(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let v = Direction::from_angle(rng.random_range(0.0..TAU));
        let mut image = Vec::with_capacity(4);
        for p in &pts {
            let through = if central {
                match Direction::between(&eye, p) {
                    Ok(d) => d,
                    Err(_) => break,
                }
            } else {
                v.clone()
            };
            match line_intersection(p, &through, &p2, &u2)? {
                LineMeet::Point(q) if q.norm() < 50.0 => image.push(q),
                _ => break,
            }
        }
        if image.len() < 4 {
            continue;
        }
        let along: Vec<f64> = image.iter().map(|q| u2.dot(&(q - &p2))).collect();
        let increasing = along.windows(2).all(|w| w[1] - w[0] > 0.02);
        let decreasing = along.windows(2).all(|w| w[0] - w[1] > 0.02);
        if !(increasing || decreasing) {
            continue;
        }
        if decreasing {
            image.reverse();
        }
        let before = cross_ratio(&pts[1], &pts[2], &Chord { tail: pts[0].clone(), head: pts[3].clone() })?;
        let after = cross_ratio(&image[1], &image[2], &Chord { tail: image[0].clone(), head: image[3].clone() })?;
        let rel = (before - after).abs() / before.max(1.0);
        if central {
            conc = conc.max(rel);
        } else {
            par = par.max(rel);
        }
        done += 1;
    }
    Ok((conc, par))
}

pub fn coarse_suite(body: &ConvexBody, cfg: &SuiteConfig) -> Result<Vec<CheckRow>> {
    require_planar(body, "coarse suite")?;
    let s = Suite::Coarse;
    let o = body.center().clone();
    let mut rng = rng(cfg.seed);
    let mut rows = Vec::new();
    for (big_r, r) in [(2.0, 1.0), (3.0, 0.5), (1.0, 1.0)] {
        let mut worst = f64::NEG_INFINITY;
        let off = RaySpec::new(body, &o, &random_direction(&mut rng, 2))?;
        for x in [o.clone(), off.point(big_r - r)?] {
            let rep = verify_contraction(body, &o, big_r, &x, r, cfg.samples, rng.random())?;
            worst = worst.max(rep.max_violation);
        }
        rows.push(CheckRow::at_most(s, format!("contraction_R{big_r}_r{r}"), worst, cfg.tol, 2 * cfg.samples));
    }
    for (big_r, eps) in [(2.0, 0.25), (3.0, 0.5)] {
        let mut worst = f64::NEG_INFINITY;
        let mut counts = Vec::new();
        let mut bound = 0.0;
        for k in 0..cfg.packing_seeds {
            let rep = greedy_packing(body, &o, big_r, eps, cfg.packing_trials, cfg.seed.wrapping_add(k))?;
            worst = worst.max(rep.count as f64 - rep.bound);
            bound = rep.bound;
            counts.push(rep.count);
        }
        rows.push(
            CheckRow::at_most(s, format!("packing_R{big_r}_eps{eps}"), worst, 0.0, cfg.packing_trials * cfg.packing_seeds as usize)
                .with_detail(format!("counts {counts:?}, bound {bound:.6}")),
        );
    }
    let clearance = 0.05 * body.diameter();
    let rep = clearance_set_diameter(body, clearance, cfg.samples.min(200), cfg.seed)?;
    rows.push(
        CheckRow::info(s, "clearance_set_diameter", rep.hilbert_diameter, rep.samples, format!("clearance {clearance}"))
            .failing_if(!rep.hilbert_diameter.is_finite()),
    );
    Ok(rows)
}

pub fn corona_suite(body: &ConvexBody, cfg: &SuiteConfig) -> Result<Vec<CheckRow>> {
    let s = Suite::Corona;
    let o = body.center().clone();
    let strict = body.is_strictly_convex();
    let mut rows = vec![CheckRow::info(s, "strictly_convex", if strict { 1.0 } else { 0.0 }, 0, strict.to_string())];
    if strict {
        let rep = corona_probe(body, &o, cfg.corona_delta, cfg.corona_c, &cfg.corona_radii, cfg.corona_samples, cfg.seed, None)?;
        let last = *rep.sup_euclidean_gap.last().unwrap_or(&0.0);
        rows.push(
            CheckRow::at_most(s, "corona_gap_at_largest_radius", last, cfg.corona_delta, cfg.corona_samples)
                .with_detail(format!("gaps {:?}, non-increasing {}", rep.sup_euclidean_gap, rep.non_increasing)),
        );
        if body.dim() == 2 {
            let f = |p: &Point| p.angle_from(&o).cos();
            let rho = cfg.corona_radii.last().copied().unwrap_or(12.0);
            let defect = higson_defect(body, &o, &f, cfg.corona_c, rho, cfg.samples, cfg.seed)?;
            rows.push(CheckRow::info(s, "higson_defect_at_largest_radius", defect, cfg.samples, "f = cos of polar angle"));
        }
        return Ok(rows);
    }
    let edges = body.flat_edges();
    if edges.is_empty() {
        rows.push(CheckRow::info(s, "flat_edges", 0.0, 0, "no planar flat edges located"));
        return Ok(rows);
    }
    let m = 200;
    let ts: Vec<f64> = (1..=m).map(|k| cfg.flat_max_radius * k as f64 / m as f64).collect();
    for (k, (alpha, beta)) in edges.iter().enumerate() {
        let xi = alpha.lerp(beta, 0.25);
        let eta = alpha.lerp(beta, 0.75);
        let rep = flat_edge_check(body, &o, (alpha, beta), &xi, &eta, &ts)?;
        rows.push(
            CheckRow::at_most(s, format!("flat_edge_ray_bound[{k}]"), rep.max_distance, rep.bound + cfg.tol, rep.pairs)
                .with_detail(format!("edge {alpha} to {beta}, radii up to {}", rep.max_radius)),
        );
        let phase = xi.angle_from(&o);
        let f = |p: &Point| (p.angle_from(&o) - phase).cos();
        let floor = (f(&xi) - f(&eta)).abs() / 2.0;
        let mut weakest = f64::INFINITY;
        for t in &ts {
            let pairs = parallel_pairs(body, &o, &xi, &eta, &[*t])?;
            weakest = weakest.min(higson_defect_on_pairs(&f, &pairs));
        }
        rows.push(CheckRow {
            suite: s,
            name: format!("higson_defect_flat_edge[{k}]"),
            status: if weakest >= floor { Status::Pass } else { Status::Fail },
            worst_defect: weakest,
            threshold: Some(floor),
            samples: ts.len(),
            detail: "minimum over radii, must stay at or above threshold".into(),
        });
    }
    if body.dim() == 2 {
        let (alpha, beta) = &edges[0];
        let dirs = [0.25, 0.5, 0.75].map(|f| Direction::between(&o, &alpha.lerp(beta, f)));
        let dirs: Vec<Direction> = dirs.into_iter().collect::<Result<_>>()?;
        let rep = corona_probe(body, &o, cfg.corona_delta, cfg.corona_c, &cfg.corona_radii, cfg.corona_samples, cfg.seed, Some(&dirs))?;
        let floor = rep.sup_euclidean_gap.iter().copied().fold(f64::INFINITY, f64::min);
        rows.push(CheckRow::info(
            s,
            "corona_gap_toward_flat_edge",
            floor,
            cfg.corona_samples,
            format!("gaps {:?}", rep.sup_euclidean_gap),
        ));
    }
    Ok(rows)
}

pub fn asdim_suite(body: &ConvexBody, cfg: &SuiteConfig) -> Result<Vec<CheckRow>> {
    require_planar(body, "asdim suite")?;
    let s = Suite::Asdim;
    let n = cfg.samples;
    let mut rng = rng(cfg.seed);
    let mut rows = Vec::new();

    let mut mono = f64::NEG_INFINITY;
    for _ in 0..n {
        let o = random_interior(body, &mut rng);
        let r1 = RaySpec::new(body, &o, &random_direction(&mut rng, 2))?;
        let r2 = RaySpec::new(body, &o, &random_direction(&mut rng, 2))?;
        let sm = rng.random_range(0.0..8.0);
        let tm = sm + rng.random_range(0.0..4.0);
        let near = distance(body, &r1.point(sm)?, &r2.point(sm)?)?;
        let far = distance(body, &r1.point(tm)?, &r2.point(tm)?)?;
        mono = mono.max(near - far);
    }
    rows.push(CheckRow::at_most(s, "ray_pair_monotonicity", mono, cfg.tol, n));

    let mut conc: f64 = 0.0;
    let mut inside = 0usize;
    let mut done = 0;
    while done < n {
        let o = random_interior(body, &mut rng);
        let (a, b) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        if (a - b).sin().abs() < 0.05 {
            continue;
        }
        let t = rng.random_range(0.2..6.0);
        let rep = concurrency_defect(body, &o, &sphere_point(body, &o, a, t)?, &sphere_point(body, &o, b, t)?)?;
        conc = conc.max(rep.defect);
        if rep.mode == ConcurrencyMode::Concurrent && !rep.meeting_outside {
            inside += 1;
        }
        done += 1;
    }
    rows.push(
        CheckRow::at_most(s, "equidistant_chords_concurrent", conc, cfg.concurrency_tol, n)
            .with_detail(format!("{inside} meeting points inside the body"))
            .failing_if(inside > 0),
    );

    let mut two_r = f64::NEG_INFINITY;
    for _ in 0..n {
        let o = body.center();
        let r = rng.random_range(0.01..1.0);
        let x0 = random_interior(body, &mut rng);
        let y0 = RaySpec::new(body, &x0, &random_direction(&mut rng, 2))?.point(rng.random_range(0.0..=r))?;
        let (dx, dy) = (distance(body, o, &x0)?, distance(body, o, &y0)?);
        let (x, y, dy) = if dx <= dy { (x0, y0, dy) } else { (y0, x0, dx) };
        if distance(body, o, &x)? == 0.0 || dy == 0.0 {
            continue;
        }
        let (lx, ly) = (RaySpec::through(body, o, &x)?, RaySpec::through(body, o, &y)?);
        for k in 1..=20 {
            let t = dy * k as f64 / 20.0;
            two_r = two_r.max(distance(body, &lx.point(t)?, &ly.point(t)?)? - 2.0 * r);
        }
    }
    rows.push(CheckRow::at_most(s, "near_pairs_stay_within_2r", two_r, cfg.tol, 20 * n));

    let (big_r, r) = (cfg.cover_big_r, cfg.cover_r);
    let o = body.center().clone();
    let balls = n.min(200);
    let mut foot = f64::NEG_INFINITY;
    for _ in 0..balls {
        let i = rng.random_range(1..=cfg.cover_levels.max(1)) as f64;
        let t = i * big_r + rng.random_range(-r..r);
        let x = sphere_point(body, &o, rng.random_range(0.0..TAU), t)?;
        foot = foot.max(footprint_diameter(body, &o, &x, r, i * big_r, 128)? - 4.0 * r);
    }
    rows.push(CheckRow::at_most(s, "ball_footprint_within_4r", foot, cfg.arc.tol_arc(big_r), balls));

    let cover = build_cover(body, &o, big_r, cfg.cover_levels, &cfg.arc)?;
    let audit = audit_cover(
        body,
        &cover,
        &CoverAuditConfig {
            r,
            trials: cfg.cover_trials,
            seed: cfg.seed,
            ball_samples: cfg.cover_ball_samples,
            diameter_samples: cfg.cover_diameter_samples,
        },
    )?;
    let dec = &audit.decomposition;
    let arcs: Vec<_> = dec.levels.iter().flat_map(|l| l.arcs.iter()).collect();
    let star1 = arcs.iter().map(|a| big_r - a.max_from_start).fold(f64::NEG_INFINITY, f64::max);
    let star2 = arcs.iter().map(|a| a.diameter).fold(0.0, f64::max);
    let structure_ok = dec.levels.iter().all(|l| l.even_count && l.alternating && l.sub_counts_odd && l.admissible);
    let markers: Vec<usize> = dec.levels.iter().map(|l| l.markers).collect();
    rows.push(
        CheckRow::at_most(s, "arc_star1", star1, dec.tol_arc, arcs.len())
            .with_detail(format!("grid resolution {:.3e}", dec.grid_resolution)),
    );
    rows.push(CheckRow::at_most(s, "arc_star2", star2, 4.0 * big_r + dec.tol_arc, arcs.len()));
    rows.push(CheckRow {
        suite: s,
        name: "odd_counts_and_admissibility".into(),
        status: if structure_ok { Status::Pass } else { Status::Fail },
        worst_defect: 0.0,
        threshold: None,
        samples: dec.levels.len(),
        detail: format!("markers per level {markers:?}"),
    });
    rows.push(CheckRow::at_most(s, "piece_diameter", audit.max_piece_diameter, audit.diameter_bound, cover.pieces.len()));
    rows.push(
        CheckRow::at_most(s, "r_multiplicity", audit.multiplicity.max_count as f64, 3.0, audit.multiplicity.trials)
            .with_detail(format!("histogram {:?}", audit.multiplicity.histogram)),
    );
    Ok(rows)
}
