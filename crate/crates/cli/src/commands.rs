use std::f64::consts::TAU;
use std::fs;

use hilbert_core::asdim_cover::{audit_cover, build_cover, ArcConfig, Cover, CoverAudit, CoverAuditConfig, CoverPiece};
use hilbert_core::coarse_props::{corona_probe, greedy_packing};
use hilbert_core::hilbert_metric::{ball_boundary, sphere_point};
use hilbert_core::verify::{all_passed, run_suite, Status, SuiteConfig};
use hilbert_core::{distance, BodySpec, ConvexBody, Point};
use serde::Serialize;

use crate::report::{Header, OutDir};
use crate::svg::{fmt6, Canvas};
use crate::{Cli, CliError, Command};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (spec, body) = load_body(cli)?;
    match &cli.command {
        Command::Dist { x, y } => cmd_dist(&body, &x.0, &y.0),
        Command::Ball { center, t, n } => cmd_ball(cli, &spec, &body, &center.0, *t, *n),
        Command::Cover { big_r, levels, r } => cmd_cover(cli, &spec, &body, *big_r, *levels, *r),
        Command::Verify { suite } => cmd_verify(cli, &spec, &body, *suite),
        Command::ProbeCorona { delta, c, radii } => cmd_corona(cli, &spec, &body, *delta, *c, radii),
        Command::Packing { big_r, eps, seeds } => cmd_packing(cli, &spec, &body, *big_r, *eps, *seeds),
    }
}

fn load_body(cli: &Cli) -> Result<(BodySpec, ConvexBody), CliError> {
    let path = cli.body.as_ref().ok_or_else(|| CliError::Usage("--body <path> is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let spec = BodySpec::from_json(&text)?;
    let body = ConvexBody::new(&spec)?;
    Ok((spec, body))
}

fn point(body: &ConvexBody, coords: &[f64], flag: &str) -> Result<Point, CliError> {
    if coords.len() != body.dim() {
        return Err(CliError::Usage(format!(
            "{flag} has {} coordinates, the body is {}-dimensional",
            coords.len(),
            body.dim()
        )));
    }
    Ok(Point::new(coords.iter().copied()))
}

fn require_planar(body: &ConvexBody, what: &str) -> Result<(), CliError> {
    if body.dim() != 2 {
        return Err(CliError::Precondition(format!("{what} needs a planar body, got dimension {}", body.dim())));
    }
    Ok(())
}

fn cmd_dist(body: &ConvexBody, x: &[f64], y: &[f64]) -> Result<(), CliError> {
    let (x, y) = (point(body, x, "--x")?, point(body, y, "--y")?);
    println!("{:.12}", distance(body, &x, &y)?);
    Ok(())
}

fn canvas(body: &ConvexBody) -> Result<Canvas, CliError> {
    let (lo, hi) = body.bounding_box();
    let mut c = Canvas::new(lo, hi);
    let outline = body.outline(512)?;
    c.closed_path(&outline, "body", "none", "black");
    Ok(c)
}

fn cmd_ball(cli: &Cli, spec: &BodySpec, body: &ConvexBody, center: &[f64], t: f64, n: usize) -> Result<(), CliError> {
    require_planar(body, "ball")?;
    let c = point(body, center, "--center")?;
    let ball = ball_boundary(body, &c, t, n)?;
    let mut svg = canvas(body)?;
    svg.comment(format!("body: {}", spec.to_json()));
    svg.comment(format!("ball center ({}, {}), t = {}, N = {n}", fmt6(c.x()), fmt6(c.y()), fmt6(t)));
    for (k, p) in ball.samples.iter().enumerate() {
        svg.comment(format!("vertex {k}: ({}, {})", fmt6(p.x()), fmt6(p.y())));
    }
    svg.closed_path(&ball.samples, "ball", "#9ecae1", "#08519c");
    svg.dot(&c, "center");
    let out = OutDir::create(&cli.out)?;
    let path = out.text("ball.svg", &svg.render())?;
    println!("{}", path.display());
    Ok(())
}

fn piece_outline(body: &ConvexBody, o: &Point, piece: &CoverPiece) -> Result<Vec<Point>, CliError> {
    let steps = ((piece.span / TAU * 256.0).ceil() as usize).max(8);
    let arc = |t: f64| -> Result<Vec<Point>, CliError> {
        (0..=steps)
            .map(|k| Ok(sphere_point(body, o, piece.start_angle + piece.span * k as f64 / steps as f64, t)?))
            .collect()
    };
    if piece.is_central() {
        let mut ring = arc(piece.outer_radius)?;
        ring.pop();
        return Ok(ring);
    }
    let mut ring = arc(piece.inner_radius)?;
    let mut outer = arc(piece.outer_radius)?;
    outer.reverse();
    ring.extend(outer);
    Ok(ring)
}

#[derive(Serialize)]
struct AuditRow {
    record: &'static str,
    level: usize,
    index: usize,
    value: f64,
    bound: f64,
    pass: bool,
}

fn audit_rows(audit: &CoverAudit) -> Vec<AuditRow> {
    let mut rows = Vec::new();
    let dec = &audit.decomposition;
    for level in &dec.levels {
        for a in &level.arcs {
            rows.push(AuditRow {
                record: "arc_star1",
                level: a.level,
                index: a.index,
                value: a.max_from_start,
                bound: dec.big_r - dec.tol_arc,
                pass: a.star1,
            });
            rows.push(AuditRow {
                record: "arc_star2",
                level: a.level,
                index: a.index,
                value: a.diameter,
                bound: 4.0 * dec.big_r + dec.tol_arc,
                pass: a.star2,
            });
        }
    }
    for p in &audit.piece_diameters {
        rows.push(AuditRow {
            record: "piece_diameter",
            level: p.level,
            index: p.ordinal,
            value: p.diameter,
            bound: audit.diameter_bound,
            pass: p.diameter <= audit.diameter_bound,
        });
    }
    for (k, freq) in audit.multiplicity.histogram.iter().enumerate() {
        rows.push(AuditRow {
            record: "multiplicity_histogram",
            level: 0,
            index: k,
            value: *freq as f64,
            bound: 3.0,
            pass: k <= 3 || *freq == 0,
        });
    }
    rows
}

fn cmd_cover(cli: &Cli, spec: &BodySpec, body: &ConvexBody, big_r: f64, levels: usize, r: f64) -> Result<(), CliError> {
    require_planar(body, "cover")?;
    if big_r <= 4.0 * r {
        return Err(CliError::Precondition(format!("the cover needs R > 4r, got R = {big_r}, r = {r}")));
    }
    if levels == 0 {
        return Err(CliError::Usage("--levels must be at least 1".into()));
    }
    let mut arc = ArcConfig::default();
    if let Some(tol) = cli.tol {
        arc.tol_arc_rel = tol;
    }
    let audit_cfg = CoverAuditConfig {
        r,
        trials: cli.samples.unwrap_or(5000),
        seed: cli.seed,
        ball_samples: 128,
        diameter_samples: 256,
    };
    let o = body.center().clone();
    let cover: Cover = build_cover(body, &o, big_r, levels, &arc)?;
    let audit = audit_cover(body, &cover, &audit_cfg)?;

    let header = Header::new("cover", cli.seed, spec)
        .tol("tol_arc_rel", arc.tol_arc_rel)
        .tol("angle_tol", arc.angle_tol)
        .samples("n_arc", arc.n_arc)
        .samples("star_samples", arc.star_samples)
        .samples("multiplicity_trials", audit_cfg.trials)
        .samples("ball_samples", audit_cfg.ball_samples)
        .samples("diameter_samples", audit_cfg.diameter_samples)
        .param("R", big_r)
        .param("r", r)
        .param("levels", levels as f64);
    let out = OutDir::create(&cli.out)?;
    out.json("cover.json", &header, &cover)?;
    out.json("audit.json", &header, &audit)?;
    out.csv("audit.csv", &header, &audit_rows(&audit))?;

    let mut svg = canvas(body)?;
    svg.comment(format!("body: {}", spec.to_json()));
    svg.comment(format!(
        "cover about ({}, {}), R = {}, levels = {levels}, pieces = {}",
        fmt6(o.x()),
        fmt6(o.y()),
        fmt6(big_r),
        cover.pieces.len()
    ));
    for piece in cover.pieces.iter().rev() {
        let fill = if piece.level % 2 == 0 { "#c6dbef" } else { "#fdd0a2" };
        svg.closed_path(&piece_outline(body, &o, piece)?, &format!("piece L{} J{}", piece.level, piece.ordinal), fill, "#444444");
    }
    out.text("cover.svg", &svg.render())?;

    println!(
        "pieces {}, max piece diameter {:.6} (bound {:.6}), max multiplicity {} over {} balls",
        cover.pieces.len(),
        audit.max_piece_diameter,
        audit.diameter_bound,
        audit.multiplicity.max_count,
        audit.multiplicity.trials
    );
    if !audit.passed {
        let mut failed = Vec::new();
        if !audit.decomposition.passed {
            failed.push("arc decomposition audit".to_string());
        }
        if !audit.diameters_ok {
            failed.push(format!("piece diameter {} > {}", audit.max_piece_diameter, audit.diameter_bound));
        }
        if !audit.multiplicity_ok {
            failed.push(format!("r-multiplicity {} > 3", audit.multiplicity.max_count));
        }
        return Err(CliError::Violation(failed.join("; ")));
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, spec: &BodySpec, body: &ConvexBody, suite: hilbert_core::verify::Suite) -> Result<(), CliError> {
    let mut cfg = SuiteConfig {
        seed: cli.seed,
        ..SuiteConfig::default()
    };
    if let Some(n) = cli.samples {
        cfg.samples = n;
    }
    if let Some(tol) = cli.tol {
        cfg.tol = tol;
    }
    let rows = run_suite(body, suite, &cfg)?;
    let header = Header::new(&format!("verify {suite}"), cli.seed, spec)
        .tol("metric", cfg.tol)
        .tol("klein", cfg.klein_tol)
        .tol("concurrency", cfg.concurrency_tol)
        .tol("tol_arc_rel", cfg.arc.tol_arc_rel)
        .samples("per_property", cfg.samples)
        .samples("packing_trials", cfg.packing_trials)
        .samples("corona_samples", cfg.corona_samples)
        .samples("cover_trials", cfg.cover_trials)
        .samples("n_arc", cfg.arc.n_arc);
    let out = OutDir::create(&cli.out)?;
    out.json("verify.json", &header, &rows)?;
    out.csv("verify.csv", &header, &rows)?;
    for row in &rows {
        println!("{:<7} {:<6} {:<40} {:.3e}", row.suite, row.status, row.name, row.worst_defect);
    }
    if !all_passed(&rows) {
        let failed: Vec<&str> = rows.iter().filter(|r| r.status == Status::Fail).map(|r| r.name.as_str()).collect();
        return Err(CliError::Violation(format!("failed checks: {}", failed.join(", "))));
    }
    Ok(())
}

#[derive(Serialize)]
struct CoronaRow {
    radius: f64,
    sup_euclidean_gap: f64,
    delta: f64,
    #[serde(rename = "C")]
    c: f64,
    samples: usize,
}

fn cmd_corona(cli: &Cli, spec: &BodySpec, body: &ConvexBody, delta: f64, c: f64, radii: &[f64]) -> Result<(), CliError> {
    let samples = cli.samples.unwrap_or(5000);
    let o = body.center().clone();
    let rep = corona_probe(body, &o, delta, c, radii, samples, cli.seed, None)?;
    let header = Header::new("probe-corona", cli.seed, spec)
        .samples("per_radius", samples)
        .param("delta", delta)
        .param("C", c);
    let rows: Vec<CoronaRow> = rep
        .probe_radii
        .iter()
        .zip(&rep.sup_euclidean_gap)
        .map(|(radius, gap)| CoronaRow {
            radius: *radius,
            sup_euclidean_gap: *gap,
            delta,
            c,
            samples,
        })
        .collect();
    let out = OutDir::create(&cli.out)?;
    out.json("corona.json", &header, &rep)?;
    out.csv("corona.csv", &header, &rows)?;
    for row in &rows {
        println!("radius {:>8.3}  sup gap {:.6e}", row.radius, row.sup_euclidean_gap);
    }
    if body.is_strictly_convex() && !rep.below_delta_at_largest {
        return Err(CliError::Violation(format!(
            "strictly convex body but the gap at the largest radius is not below {delta}"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct PackingRow {
    seed: u64,
    #[serde(rename = "R")]
    big_r: f64,
    epsilon: f64,
    trials: usize,
    count: usize,
    bound: f64,
    pass: bool,
}

fn cmd_packing(cli: &Cli, spec: &BodySpec, body: &ConvexBody, big_r: f64, eps: f64, seeds: u64) -> Result<(), CliError> {
    require_planar(body, "packing")?;
    let trials = cli.samples.unwrap_or(20_000);
    let o = body.center().clone();
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for k in 0..seeds {
        let seed = cli.seed.wrapping_add(k);
        let rep = greedy_packing(body, &o, big_r, eps, trials, seed)?;
        rows.push(PackingRow {
            seed,
            big_r,
            epsilon: eps,
            trials,
            count: rep.count,
            bound: rep.bound,
            pass: rep.count as f64 <= rep.bound,
        });
        reports.push(rep);
    }
    let header = Header::new("packing", cli.seed, spec)
        .samples("trials", trials)
        .samples("seeds", seeds as usize)
        .param("R", big_r)
        .param("epsilon", eps);
    let out = OutDir::create(&cli.out)?;
    out.json("packing.json", &header, &reports)?;
    out.csv("packing.csv", &header, &rows)?;
    for row in &rows {
        println!("seed {:>4}  count {:>6}  bound {:.3}", row.seed, row.count, row.bound);
    }
    if rows.iter().any(|r| !r.pass) {
        return Err(CliError::Violation("packing count exceeds the volume bound".into()));
    }
    Ok(())
}
