//! Acceptance suite: one line per criterion, exit status 1 if any hard check fails.

use nslab::fields::*;
use nslab::freqgeo::{partition_stats, time_partition, FreqPair, Tile, ZoneConstants};
use nslab::kernels::{kernel_l3_on_cylinder, rescaling_cross_check, strichartz_ratio, KernelKind};
use nslab::ledger::{catalog, logfree_margin, rat, DeltaParam, ExponentExpr};
use nslab::packets::{decoupling_ratio, decoupling_trials, plane_wave_ratio, Geometry};
use nslab::phase::{duhamel_normal_form_check, heat_amplitude_remainder, phase_hessian, phi_trr};
use nslab::profile::lp_phi;
use nslab::symbols::corona_sup_scan;
use nslab::fit_slope;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

struct Verdict {
    pass: bool,
    /// A failing informational part that does not fail the suite.
    soft_fail: bool,
    detail: String,
}

impl Verdict {
    fn hard(pass: bool, detail: String) -> Self {
        Verdict { pass, soft_fail: false, detail }
    }
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::MIN, f64::max);
    let lo = v.iter().cloned().fold(f64::MAX, f64::min);
    hi / lo
}

fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

fn ac1() -> Verdict {
    use ExponentExpr as E;
    let expected = [
        ("local-balance", E::c(-21, 4)),
        ("coronal-local", E::affine(-19, 4, -1, 1)),
        ("coronal-global", E::affine(-7, 4, -1, 1)),
        ("offdiag-global", E::c(-15, 4)),
        ("heat-local", E::c(-19, 6)),
        ("heat-global", E::c(-25, 12)),
        ("local-A", E::c(-21, 4)),
        ("local-B", E::c(-19, 6)),
        ("global-A", E::c(-15, 4)),
        ("global-B", E::c(-25, 12)),
    ];
    let tables = catalog();
    let mut exact = 0;
    for (name, want) in &expected {
        if tables.iter().any(|t| t.name == *name && t.total() == *want && t.expected_total == *want) {
            exact += 1;
        }
    }
    let mut margins = 0;
    let mut active = 0;
    for d in [DeltaParam::from_ratio(51, 100).unwrap(), DeltaParam::max()] {
        for t in tables.iter().filter(|t| t.is_active(&d)) {
            active += 1;
            if logfree_margin(&t.total(), &d) > rat(0, 1) {
                margins += 1;
            }
        }
    }
    let pass = exact == expected.len() && tables.len() == expected.len() && margins == active;
    Verdict::hard(pass, format!("{exact}/{} totals exact, {margins}/{active} margins positive at δ ∈ {{51/100, 5/8}}", expected.len()))
}

fn fd_det(t: f64, r1: f64, r2: f64) -> f64 {
    let p = [t, r1, r2];
    let h: Vec<f64> = p.iter().map(|v| 1e-4 * v.abs().max(1e-3)).collect();
    let f = |q: [f64; 3]| phi_trr(0.3, q[0], q[1], q[2]);
    let mut a = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut q = [p; 4];
            q[0][i] += h[i];
            q[0][j] += h[j];
            q[1][i] += h[i];
            q[1][j] -= h[j];
            q[2][i] -= h[i];
            q[2][j] += h[j];
            q[3][i] -= h[i];
            q[3][j] -= h[j];
            a[i][j] = (f(q[0]) - f(q[1]) - f(q[2]) + f(q[3])) / (4.0 * h[i] * h[j]);
        }
    }
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn ac2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t = rng.gen_range(0.05..2.0);
        let r1 = rng.gen_range(0.5..50.0);
        let r2 = rng.gen_range(0.05..20.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let d = phase_hessian(t, r1, r2).1;
        worst = worst.max((fd_det(t, r1, r2) - d).abs() / d.abs());
    }
    Verdict::hard(worst < 1e-6, format!("max rel. err {worst:.2e} over 1000 points (< 1e-6)"))
}

fn ac3() -> Verdict {
    let k = ZoneConstants::default();
    let mut sups = Vec::new();
    let mut bounded = true;
    for e in [8, 10, 12] {
        match corona_sup_scan(f64::from(1u32 << e), &DeltaParam::max(), 4000, 11, &k).max_ratio() {
            Some(r) => {
                bounded &= r <= 2.0 * k.corona_c;
                sups.push(r);
            }
            None => bounded = false,
        }
    }
    let empty = [8, 10, 12].iter().all(|&e| {
        corona_sup_scan(f64::from(1u32 << e), &DeltaParam::half(), 2000, 3, &k).max_ratio().is_none()
    });
    let s = spread(&sups);
    Verdict::hard(
        bounded && empty && s - 1.0 < 0.2,
        format!("sup ratios {} (≤ 2c), spread {s:.3} (< 1.2), empty at δ = 1/2: {empty}", fmt_list(&sups)),
    )
}

fn ac4() -> Verdict {
    let l3 = |n: f64, kind| kernel_l3_on_cylinder(n, kind).map(|r| r.ratio);
    let s: Result<Vec<f64>, _> = [32.0, 64.0, 128.0].iter().map(|&n| l3(n, KernelKind::Schrodinger)).collect();
    let h: Result<Vec<f64>, _> = [64.0, 128.0, 256.0].iter().map(|&n| l3(n, KernelKind::Heat)).collect();
    let (s, h) = match (s, h) {
        (Ok(s), Ok(h)) => (s, h),
        (Err(e), _) | (_, Err(e)) => return Verdict::hard(false, format!("quadrature: {e}")),
    };
    let gap = rescaling_cross_check(16.0);
    let pass = spread(&s) < 2.0 && spread(&h) < 2.0 && gap < 0.01;
    Verdict::hard(
        pass,
        format!(
            "Schrödinger L³/N^{{4/3}} {} at N = 32..128, heat L³/N^{{1/12}} {} at N = 64..256, rescaling gap {gap:.1e}",
            fmt_list(&s),
            fmt_list(&h)
        ),
    )
}

fn ac5() -> Verdict {
    let ns = [16.0, 64.0, 256.0, 1024.0];
    let reps: Result<Vec<_>, _> = ns.iter().map(|&n| strichartz_ratio(n, 8, KernelKind::Schrodinger, 5)).collect();
    let reps = match reps {
        Ok(r) => r,
        Err(e) => return Verdict::hard(false, format!("quadrature: {e}")),
    };
    let c: Vec<f64> = reps.iter().map(|r| r.normalized).collect();
    let xs: Vec<f64> = ns.iter().map(|n| n.log2()).collect();
    let ys: Vec<f64> = reps.iter().map(|r| r.ratio.log2()).collect();
    let slope = fit_slope(&xs, &ys);
    Verdict::hard(
        spread(&c) < 2.0,
        format!(
            "C = ratio/N^{{2/3}} {} spread {:.3} (< 2); fitted exponent {slope:.3} [info; references 2/3 and -1/2]",
            fmt_list(&c),
            spread(&c)
        ),
    )
}

fn ac6() -> Verdict {
    let mut ratios = Vec::new();
    let mut holder_ok = true;
    let mut plane_ok = true;
    for e in [6, 8, 10] {
        let n = f64::from(1u32 << e);
        let r = match decoupling_ratio(&Tile::at(&[1.0, 0.0, 0.0], n), &Tile::at(&[0.0, 1.0, 0.0], n), n) {
            Ok(r) => r,
            Err(e) => return Verdict::hard(false, format!("decoupling: {e}")),
        };
        holder_ok &= r.holder <= 1.0;
        for g in [Geometry::Orthogonal, Geometry::Generic] {
            match decoupling_trials(n, g, 3, 17) {
                Ok(v) => holder_ok &= v.iter().all(|t| t.holder <= 1.0),
                Err(e) => return Verdict::hard(false, format!("decoupling trials: {e}")),
            }
        }
        plane_ok &= plane_wave_ratio(n).map_or(false, |p| p > r.ratio);
        ratios.push(r.ratio);
    }
    let s = spread(&ratios);
    Verdict::hard(
        s < 2.0 && holder_ok && plane_ok,
        format!("ratios {} spread {s:.3} (< 2), Hölder ≤ 1: {holder_ok}, plane wave larger: {plane_ok}", fmt_list(&ratios)),
    )
}

fn ac7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let [a, b, c, d, e]: [f64; 5] = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
        let (w1, w2) = (rng.gen_range(0.5..20.0), rng.gen_range(0.1..5.0));
        let f = move |s: f64| {
            let v = 2.0 + a + b * (w1 * s + c).sin() + d * (-w2 * s).exp() + e * s * s;
            let dv = b * w1 * (w1 * s + c).cos() - d * w2 * (-w2 * s).exp() + 2.0 * e * s;
            (v, dv)
        };
        let t = rng.gen_range(0.02..1.0);
        let z = rng.gen_range(1.0..200.0);
        let w = rng.gen_range(-100.0..100.0);
        match duhamel_normal_form_check(f, t, z, w) {
            Ok(chk) => worst = worst.max(chk.relative),
            Err(e) => return Verdict::hard(false, format!("quadrature: {e}")),
        }
    }
    let mut rem: f64 = 0.0;
    for _ in 0..100 {
        let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-300.0..300.0));
        let y: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-300.0..300.0));
        let h = heat_amplitude_remainder(&FreqPair::new(x, y), rng.gen_range(0.0..0.01));
        rem = rem.max((h.remainder - h.bound).abs() / h.a_n.norm());
    }
    Verdict::hard(
        worst < 1e-9 && rem <= 1e-12,
        format!("max rel. residual {worst:.2e} over 100 sources (< 1e-9), remainder identity defect {rem:.1e} (≤ 1e-12)"),
    )
}

fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    (0..3)
        .flat_map(|c| a.coeffs[c].iter().zip(&b.coeffs[c]).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

fn ac8() -> Verdict {
    let d = DeltaParam::half();
    let mut worst: f64 = 0.0;
    let mut recon: f64 = 0.0;
    for seed in 0..3u64 {
        let u = SpectralField::random_divergence_free(8, 1.0, 1.0, 100 + seed);
        let v = SpectralField::random_divergence_free(8, 1.5, 0.8, 200 + seed);
        for n in [1u32, 2, 4] {
            for spec in BlockSpec::all_labels(n, Zone::None, &d) {
                let a = bilinear_block(&u, &v, &spec, Method::Direct).unwrap();
                let b = bilinear_block(&u, &v, &spec, Method::Convolution).unwrap();
                worst = worst.max(max_diff(&a, &b));
            }
        }
        let solver = ns_nonlinearity(&u, &Fft3::new(8)).scaled(-1.0);
        let mut sum = SpectralField::zeros(8);
        for n in [1u32, 2, 4] {
            for spec in BlockSpec::all_labels(n, Zone::None, &d).into_iter().filter(|s| !s.mirrored) {
                let b = bilinear_block(&u, &u, &spec, Method::Direct).unwrap();
                sum = sum.add(&b.multiplier(|k| lp_phi(knorm(k) / n as f64))).unwrap();
            }
        }
        let scale = solver.coeffs.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        recon = recon.max(max_diff(&sum, &solver) / scale);
    }
    Verdict::hard(
        worst < 1e-10 && recon < 1e-12,
        format!("direct vs convolution {worst:.2e} (< 1e-10) over 24 blocks x 3 seeds, Σ_N P_N(blocks) vs solver {recon:.2e}"),
    )
}

fn ac9() -> Verdict {
    let ns = [64.0, 128.0, 256.0, 512.0];
    let mut err: f64 = 0.0;
    let mut sups = Vec::new();
    for &n in &ns {
        let st = match time_partition(n, 1.0) {
            Ok(p) => partition_stats(&p, 400),
            Err(e) => return Verdict::hard(false, format!("partition: {e}")),
        };
        err = err.max(st.max_sum_sq_error);
        sups.push(st.sup_sum_abs_d1);
    }
    let c: Vec<f64> = sups.iter().zip(&ns).map(|(s, n)| s / n.sqrt()).collect();
    let doubling: Vec<f64> = sups.windows(2).map(|w| w[1] / w[0] / 2f64.sqrt()).collect();
    let law = doubling.iter().all(|r| (r - 1.0).abs() < 0.1);
    Verdict::hard(
        err <= 1e-12 && spread(&c) < 2.0 && law,
        format!("|Σχ²-1| ≤ {err:.1e}, C = sup Σ|χ'|/N^{{1/2}} {}, doubling ratios / √2 {}", fmt_list(&c), fmt_list(&doubling)),
    )
}

fn ac10(pipeline_ok: bool) -> Verdict {
    let cfg = NsConfig::default();
    let traj = match ns_run(&cfg) {
        Ok(t) => t,
        Err(e) => return Verdict::hard(false, format!("solver: {e}")),
    };
    let dyads = [1u32, 2, 4, 8];
    let fit = match scaling_fit(&traj, &dyads, &DeltaParam::half()) {
        Ok(f) => f,
        Err(e) => return Verdict::hard(false, format!("scaling: {e}")),
    };
    let finite = fit.rows.iter().all(|r| r.r_n.is_finite());
    let live = fit.rows.iter().filter(|r| r.a_n > 0.0).count();

    let mut spec = BlockSpec::new(Paraproduct::HighHighToLow, 2, Zone::NarrowCorona, DeltaParam::half());
    spec.zone_scale = Some(8);
    let last = traj.fields.last().unwrap();
    let corona_zero = bilinear_block(last, last, &spec, Method::Direct)
        .map(|b| b.coeffs.iter().flatten().all(|z| z.norm() == 0.0))
        .unwrap_or(false);

    let slope_ok = fit.slope.map_or(false, |s| s <= -0.8) && live >= 3;
    let hard = finite && corona_zero && traj.max_divergence_defect() < 1e-12;
    let rows: Vec<String> = fit.rows.iter().map(|r| format!("N={} A_N={:.4e} r_N={:.4e}", r.n, r.a_n, r.r_n)).collect();
    let slope = fit.slope.map_or("none".to_string(), |s| format!("{s:.3}"));
    let detail = format!(
        "32^3, T = 1, ν = 1, seed {}; R = {:.4e}; {}; slope {slope} over {live} dyads (band ≤ -0.8); r_N finite: {finite}; narrow corona ≡ 0 at δ = 1/2: {corona_zero}",
        cfg.seed,
        fit.reference,
        rows.join("; ")
    );
    if hard && !slope_ok && pipeline_ok {
        Verdict { pass: false, soft_fail: true, detail: format!("{detail} [informational: slope band missed, checks 8-9 pass]") }
    } else {
        Verdict::hard(hard && slope_ok, detail)
    }
}

fn main() {
    let criteria: [(&str, &str, f64); 10] = [
        ("AC-1", "ledger exactness", 1.0),
        ("AC-2", "phase Hessian determinant", 5.0),
        ("AC-3", "null-form corona", 30.0),
        ("AC-4", "kernel scaling", 120.0),
        ("AC-5", "local L6", 120.0),
        ("AC-6", "decoupling experiment", 180.0),
        ("AC-7", "Duhamel normal form", 10.0),
        ("AC-8", "bilinear oracle", 30.0),
        ("AC-9", "partition bounds", 10.0),
        ("AC-10", "off-diagonal scaling", 900.0),
    ];
    let mut hard_failures = 0;
    let mut pipeline_ok = true;
    for (i, (id, name, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = match i {
            0 => ac1(),
            1 => ac2(),
            2 => ac3(),
            3 => ac4(),
            4 => ac5(),
            5 => ac6(),
            6 => ac7(),
            7 => ac8(),
            8 => ac9(),
            _ => ac10(pipeline_ok),
        };
        let secs = start.elapsed().as_secs_f64();
        let in_time = secs < *limit;
        let pass = v.pass && in_time;
        if (i == 7 || i == 8) && !pass {
            pipeline_ok = false;
        }
        if !pass && !(v.soft_fail && in_time) {
            hard_failures += 1;
        }
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id} {name}: {} ({secs:.2} s, limit {limit} s)", v.detail);
    }
    if hard_failures > 0 {
        println!("{hard_failures} criteria failed");
        std::process::exit(1);
    }
}
