//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; the process fails if any line is FAIL.

use std::f64::consts::TAU;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hilbert_core::asdim_cover::{audit_cover, build_cover, ArcConfig, CoverAuditConfig};
use hilbert_core::coarse_props::{contraction_constant, corona_probe, flat_edge_check, greedy_packing, verify_contraction};
use hilbert_core::hilbert_metric::{ball_boundary, concurrency_defect, geodesic_defect, sphere_point, RaySpec};
use hilbert_core::sampling::{random_direction, random_interior, random_polygon, rng};
use hilbert_core::verify::projective_invariance;
use hilbert_core::{distance, BodySpec, ConvexBody, Point};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn bodies() -> Vec<(&'static str, ConvexBody)> {
    let specs = [
        ("disk", BodySpec::unit_disk()),
        ("square", BodySpec::square(1.0)),
        ("ellipse", BodySpec::ellipse(2.0, 1.0, 0.0)),
        ("7-gon", random_polygon(&mut rng(7), 7)),
    ];
    specs
        .into_iter()
        .map(|(name, spec)| (name, ConvexBody::new(&spec).expect("valid body")))
        .collect()
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn metric_core() -> Outcome {
    let mut worst = [0f64; 3];
    for (name, body) in bodies() {
        let mut g = rng(1);
        for _ in 0..1000 {
            let x = random_interior(&body, &mut g);
            let y = random_interior(&body, &mut g);
            let z = random_interior(&body, &mut g);
            let dxy = distance(&body, &x, &y).map_err(|e| e.to_string())?;
            let dyx = distance(&body, &y, &x).map_err(|e| e.to_string())?;
            let dxz = distance(&body, &x, &z).map_err(|e| e.to_string())?;
            let dyz = distance(&body, &y, &z).map_err(|e| e.to_string())?;
            let geo = geodesic_defect(&body, &x, &y, g.random_range(0.05..0.95)).map_err(|e| e.to_string())?;
            worst[0] = worst[0].max((dxy - dyx).abs());
            worst[1] = worst[1].max(dxz - dxy - dyz);
            worst[2] = worst[2].max(geo);
        }
        check(worst.iter().all(|w| *w <= 1e-9), || format!("{name}: worst {worst:?}"))?;
    }
    let disk = ConvexBody::new(&BodySpec::unit_disk()).unwrap();
    let mut klein: f64 = 0.0;
    for k in 1..=9 {
        let tau = k as f64 / 10.0;
        let d = distance(&disk, &Point::xy(0.0, 0.0), &Point::xy(tau, 0.0)).unwrap();
        klein = klein.max((d - ((1.0 + tau) / (1.0 - tau)).ln()).abs());
    }
    check(klein <= 1e-12, || format!("Klein identity off by {klein:e}"))?;
    Ok(format!(
        "symmetry {:.1e}, triangle {:.1e}, geodesic {:.1e}, Klein {klein:.1e}",
        worst[0], worst[1], worst[2]
    ))
}

fn ball_convexity() -> Outcome {
    let (mut convex, mut turn) = (f64::NEG_INFINITY, f64::INFINITY);
    for (name, body) in bodies() {
        let mut g = rng(2);
        for _ in 0..1000 {
            let o = random_interior(&body, &mut g);
            let x = random_interior(&body, &mut g);
            let y = random_interior(&body, &mut g);
            let z = x.lerp(&y, g.random_range(0.0..=1.0));
            let reach = distance(&body, &o, &x).unwrap().max(distance(&body, &o, &y).unwrap());
            convex = convex.max(distance(&body, &o, &z).unwrap() - reach);
        }
        for _ in 0..200 {
            let c = random_interior(&body, &mut g);
            let ball = ball_boundary(&body, &c, g.random_range(0.1..5.0), 64).unwrap();
            turn = turn.min(ball.min_turn());
        }
        check(convex <= 1e-9 && turn >= -1e-9, || {
            format!("{name}: convexity excess {convex:e}, min turn {turn:e}")
        })?;
    }
    Ok(format!("max excess {convex:.1e}, min polyline turn {turn:.1e}"))
}

fn contraction_and_packing() -> Outcome {
    let mut violation = f64::NEG_INFINITY;
    let mut packings = 0;
    for (name, body) in bodies() {
        let o = body.center().clone();
        let mut g = rng(3);
        for (big_r, r) in [(2.0, 1.0), (3.0, 0.5), (1.0, 1.0)] {
            let off = RaySpec::new(&body, &o, &random_direction(&mut g, 2)).unwrap().point(big_r - r).unwrap();
            for x in [o.clone(), off] {
                let rep = verify_contraction(&body, &o, big_r, &x, r, 1000, g.random()).map_err(|e| e.to_string())?;
                violation = violation.max(rep.max_violation);
            }
        }
        check(violation <= 1e-9, || format!("{name}: contraction violation {violation:e}"))?;
        for (big_r, eps) in [(2.0, 0.25), (3.0, 0.5)] {
            let bound = contraction_constant(eps, big_r + eps).unwrap().powi(2).recip();
            for seed in 0..5 {
                let rep = greedy_packing(&body, &o, big_r, eps, 20000, seed).map_err(|e| e.to_string())?;
                check(rep.count as f64 <= bound, || {
                    format!("{name}: packing R={big_r} eps={eps} seed {seed}: {} > {bound}", rep.count)
                })?;
                packings += 1;
            }
        }
    }
    Ok(format!("max contraction violation {violation:.1e}, {packings} packings within 1/D^2"))
}

fn projective() -> Outcome {
    let (conc, par) = projective_invariance(4, 1000).map_err(|e| e.to_string())?;
    check(conc <= 1e-9 && par <= 1e-9, || format!("concurrent {conc:e}, parallel {par:e}"))?;
    Ok(format!("concurrent {conc:.1e}, parallel {par:.1e}"))
}

fn dichotomy() -> Outcome {
    let square = ConvexBody::new(&BodySpec::square(1.0)).unwrap();
    let ts: Vec<f64> = (1..=200).map(|k| 20.0 * k as f64 / 200.0).collect();
    let (alpha, beta) = (Point::xy(-1.0, 1.0), Point::xy(1.0, 1.0));
    let rep = flat_edge_check(
        &square,
        &Point::xy(0.0, 0.0),
        (&alpha, &beta),
        &Point::xy(-0.5, 1.0),
        &Point::xy(0.5, 1.0),
        &ts,
    )
    .map_err(|e| e.to_string())?;
    let log9 = 9f64.ln();
    check((rep.bound - log9).abs() <= 1e-12, || format!("bound {} differs from log 9", rep.bound))?;
    check(rep.max_distance <= log9 + 1e-9, || format!("square pairs reach {} > log 9", rep.max_distance))?;
    let mut gaps = Vec::new();
    for name in ["disk", "ellipse"] {
        let spec = if name == "disk" { BodySpec::unit_disk() } else { BodySpec::ellipse(2.0, 1.0, 0.0) };
        let body = ConvexBody::new(&spec).unwrap();
        let radii: Vec<f64> = (1..=8).map(|k| 2.0 * k as f64).collect();
        let rep = corona_probe(&body, body.center(), 0.1, 1.0, &radii, 5000, 5, None).map_err(|e| e.to_string())?;
        let gap = *rep.sup_euclidean_gap.last().unwrap();
        check(gap < 0.1, || format!("{name}: gap {gap} at radius 16"))?;
        gaps.push(format!("{name} gap {gap:.2e}"));
    }
    Ok(format!("square pairs {:.6} <= log 9 up to radius 20; {}", rep.max_distance, gaps.join(", ")))
}

fn ray_lemmas() -> Outcome {
    let (mut mono, mut conc, mut two_r) = (f64::NEG_INFINITY, 0f64, f64::NEG_INFINITY);
    for (name, body) in bodies() {
        let mut g = rng(6);
        for _ in 0..1000 {
            let o = random_interior(&body, &mut g);
            let r1 = RaySpec::new(&body, &o, &random_direction(&mut g, 2)).unwrap();
            let r2 = RaySpec::new(&body, &o, &random_direction(&mut g, 2)).unwrap();
            let s = g.random_range(0.0..8.0);
            let t = s + g.random_range(0.0..4.0);
            let near = distance(&body, &r1.point(s).unwrap(), &r2.point(s).unwrap()).unwrap();
            let far = distance(&body, &r1.point(t).unwrap(), &r2.point(t).unwrap()).unwrap();
            mono = mono.max(near - far);
        }
        let mut done = 0;
        while done < 1000 {
            let o = random_interior(&body, &mut g);
            let (a, b) = (g.random_range(0.0..TAU), g.random_range(0.0..TAU));
            if (a - b).sin().abs() < 0.05 {
                continue;
            }
            let t = g.random_range(0.2..6.0);
            let a2 = sphere_point(&body, &o, a, t).unwrap();
            let b2 = sphere_point(&body, &o, b, t).unwrap();
            conc = conc.max(concurrency_defect(&body, &o, &a2, &b2).map_err(|e| e.to_string())?.defect);
            done += 1;
        }
        let o = body.center().clone();
        for _ in 0..1000 {
            let r = g.random_range(0.01..1.0);
            let x0 = random_interior(&body, &mut g);
            let y0 = RaySpec::new(&body, &x0, &random_direction(&mut g, 2))
                .unwrap()
                .point(g.random_range(0.0..=r))
                .unwrap();
            let (dx, dy) = (distance(&body, &o, &x0).unwrap(), distance(&body, &o, &y0).unwrap());
            let (x, y, far) = if dx <= dy { (x0, y0, dy) } else { (y0, x0, dx) };
            if distance(&body, &o, &x).unwrap() == 0.0 {
                continue;
            }
            let lx = RaySpec::through(&body, &o, &x).unwrap();
            let ly = RaySpec::through(&body, &o, &y).unwrap();
            for k in 1..=20 {
                let t = far * k as f64 / 20.0;
                two_r = two_r.max(distance(&body, &lx.point(t).unwrap(), &ly.point(t).unwrap()).unwrap() - 2.0 * r);
            }
        }
        check(mono <= 1e-9 && conc <= 1e-7 && two_r <= 1e-9, || {
            format!("{name}: monotonicity {mono:e}, concurrency {conc:e}, 2r excess {two_r:e}")
        })?;
    }
    Ok(format!("monotonicity {mono:.1e}, concurrency {conc:.1e}, 2r excess {two_r:.1e}"))
}

fn cover_construction() -> Outcome {
    let mut summary = Vec::new();
    for (name, body) in bodies().into_iter().filter(|(n, _)| *n != "7-gon") {
        let o = body.center().clone();
        let cover = build_cover(&body, &o, 1.0, 5, &ArcConfig::default()).map_err(|e| format!("{name}: {e}"))?;
        let cfg = CoverAuditConfig {
            r: 0.2,
            trials: 5000,
            seed: 8,
            ball_samples: 128,
            diameter_samples: 256,
        };
        let audit = audit_cover(&body, &cover, &cfg).map_err(|e| format!("{name}: {e}"))?;
        let structure = audit
            .decomposition
            .levels
            .iter()
            .all(|l| l.even_count && l.alternating && l.sub_counts_odd && l.admissible);
        check(audit.max_piece_diameter <= 10.0 + 1e-6, || {
            format!("{name}: piece diameter {}", audit.max_piece_diameter)
        })?;
        check(audit.multiplicity.max_count <= 3, || {
            format!("{name}: multiplicity {}", audit.multiplicity.max_count)
        })?;
        check(structure && audit.passed, || format!("{name}: decomposition audit failed"))?;
        summary.push(format!(
            "{name}: {} pieces, diam {:.3}, mult {}",
            cover.pieces.len(),
            audit.max_piece_diameter,
            audit.multiplicity.max_count
        ));
    }
    Ok(summary.join("; "))
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let body = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../bodies/disk.json");
    let status = Command::new(env!("CARGO_BIN_EXE_hilbert"))
        .arg("--body")
        .arg(&body)
        .arg("--out")
        .arg(dir)
        .args(["--seed", "11"])
        .args(args)
        .output()
        .map_err(|e| e.to_string())?
        .status;
    check(status.success(), || format!("hilbert {args:?} exited with {status}"))
}

fn determinism() -> Outcome {
    let runs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &runs {
        run_cli(dir.path(), &["cover", "--R", "1", "--r", "0.2", "--levels", "5"])?;
        run_cli(dir.path(), &["verify", "--suite", "all"])?;
    }
    let files = ["cover.json", "audit.json", "verify.json"];
    for f in files {
        let a = std::fs::read(runs[0].path().join(f)).map_err(|e| e.to_string())?;
        let b = std::fs::read(runs[1].path().join(f)).map_err(|e| e.to_string())?;
        check(a == b, || format!("{f} differs between runs"))?;
    }
    Ok(format!("{} byte-identical across two runs", files.join(", ")))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("metric core", metric_core, Some(10)),
        ("ball convexity", ball_convexity, None),
        ("contraction and packing", contraction_and_packing, Some(60)),
        ("cross-ratio invariance", projective, None),
        ("corona dichotomy", dichotomy, None),
        ("ray monotonicity, concurrency, 2r bound", ray_lemmas, None),
        ("cover diameter and multiplicity", cover_construction, Some(300)),
        ("deterministic reports", determinism, None),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(secs)) = (&outcome, limit) {
            if elapsed > Duration::from_secs(*secs) {
                outcome = Err(format!("took {elapsed:.1?}, limit {secs} s"));
            }
        }
        let (tag, text) = match &outcome {
            Ok(msg) => ("PASS", msg),
            Err(msg) => {
                failed += 1;
                ("FAIL", msg)
            }
        };
        println!("[{tag}] criterion {} {name} ({:.2} s): {text}", k + 1, elapsed.as_secs_f64());
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
