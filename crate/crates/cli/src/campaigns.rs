//! One function per campaign; each returns a report plus side files.

use crate::{Cli, Command, Common, FieldsCmd, FreqgeoCmd, KernelsCmd, LedgerCmd, PacketsCmd, PhaseCmd, SymbolsCmd};
use anyhow::{bail, Context, Result};
use nslab::fields::{
    bilinear_block, dyad_exponent, load_trajectory, ns_run, save_trajectory, scaling_fit, BlockSpec, InitialData, Method,
    NsConfig, Paraproduct, Trajectory, Zone,
};
use nslab::fit_slope;
use nslab::freqgeo::{
    build_tiling, partition_stats, sphere_samples, time_partition, zone_membership, FreqPair, ZoneConstants, MAX_OVERLAP,
};
use nslab::kernels::{kernel_l3_on_cylinder, kernel_sup_on_cylinder, rescaling_cross_check, strichartz_ratio, KernelKind};
use nslab::ledger::{catalog, dyadic_tail_sum, fmt_pq, parse_rational, rat, verify_tables, DeltaParam};
use nslab::packets::{decoupling_trials, plane_wave_ratio, random_unit, Geometry};
use nslab::phase::{
    duhamel_normal_form_check, heat_amplitude_remainder, ibp_gain, ibp_numeric_ratio, magnitudes, phase_hessian, phi_trr,
};
use nslab::report::{CampaignReport, CheckRecord};
use nslab::symbols::{corona_candidate, corona_sup_scan, CoronaOutcome};
use nslab::vec3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::path::Path;
use std::time::Instant;

/// A finished campaign: its report and extra files, named relative to the output directory.
#[derive(Debug)]
pub struct Outcome {
    pub report: CampaignReport,
    pub files: Vec<(String, String)>,
}

const DEFAULT_SEED: u64 = 7;

fn seed(c: &Common) -> u64 {
    c.seed.unwrap_or(DEFAULT_SEED)
}

fn is_coronal(d: &DeltaParam) -> bool {
    *d.value() > rat(1, 2)
}

fn timed(name: &str, f: impl FnOnce(&mut CampaignReport) -> Result<Vec<(String, String)>>) -> Result<Outcome> {
    let start = Instant::now();
    let mut report = CampaignReport::new(name);
    let files = f(&mut report)?;
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(Outcome { report, files })
}

fn csv(header: &str, rows: &[Vec<String>]) -> String {
    let mut s = format!("{header}\n");
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::MIN, f64::max);
    let lo = v.iter().cloned().fold(f64::MAX, f64::min);
    hi / lo
}

fn dyad_list((k0, k1): (u32, u32)) -> Vec<u32> {
    (k0..=k1).map(|k| 1u32 << k).collect()
}

pub fn dispatch(cli: &Cli) -> Result<Vec<Outcome>> {
    let c = &cli.common;
    let d = c.delta.clone();
    Ok(match &cli.command {
        Command::Ledger(LedgerCmd::Verify) => vec![ledger_verify(d.unwrap_or_else(DeltaParam::max))?],
        Command::Ledger(LedgerCmd::Sum { alpha, k0, kmax }) => vec![ledger_sum(alpha, *k0, *kmax)?],
        Command::Freqgeo(FreqgeoCmd::Check { n, samples }) => {
            vec![freqgeo_check(*n, *samples, d.unwrap_or_else(DeltaParam::max), seed(c))?]
        }
        Command::Phase(PhaseCmd::Verify { n }) => vec![phase_verify(*n, d.unwrap_or_else(DeltaParam::max), seed(c))?],
        Command::Symbols(SymbolsCmd::Corona { n, samples }) => {
            vec![symbols_corona("symbols_corona", *n, *samples, d.unwrap_or_else(DeltaParam::max), seed(c))?]
        }
        Command::Kernels(KernelsCmd::Scan { kind }) => vec![kernels_scan(*kind, c.dyads, c.quick, seed(c))?],
        Command::Packets(PacketsCmd::Decoupling { geometry, trials }) => {
            vec![packets_decoupling(*geometry, *trials, c.dyads, c.quick, seed(c))?]
        }
        Command::Fields(FieldsCmd::Run { config }) => {
            let cfg = load_config(config.as_deref(), c)?;
            vec![fields_run(&cfg, &c.out)?.0]
        }
        Command::Fields(FieldsCmd::Scaling { traj }) => {
            let t = load_trajectory(traj).with_context(|| format!("loading trajectory from {}", traj.display()))?;
            vec![fields_scaling(&t, d.unwrap_or_else(DeltaParam::half), c.dyads)?]
        }
        Command::All => all(c)?,
    })
}

fn ledger_verify(d: DeltaParam) -> Result<Outcome> {
    timed("ledger_verify", |rep| {
        rep.param("delta", fmt_pq(d.value()));
        let checks = verify_tables(&catalog(), &d);
        let mut table = format!("{:<16} {:<14} {:<14} {:<10} {}\n", "name", "total", "expected", "margin", "pass");
        for ch in &checks {
            let margin = ch.margin.as_ref().map_or("inactive".to_string(), fmt_pq);
            let row = format!("{:<16} {:<14} {:<14} {:<10} {}", ch.name, ch.computed.to_string(), ch.expected.to_string(), margin, ch.pass);
            table.push_str(&row);
            table.push('\n');
            rep.push(CheckRecord::boolean(&ch.name, &format!("claim:balance-{}", ch.name), ch.pass, row));
        }
        Ok(vec![
            ("ledger_tables.json".into(), serde_json::to_string_pretty(&checks)?),
            ("ledger_tables.txt".into(), table),
        ])
    })
}

fn ledger_sum(alpha: &str, k0: i64, kmax: i64) -> Result<Outcome> {
    let a = parse_rational(alpha)?;
    if k0 > kmax {
        bail!("k0 = {k0} exceeds kmax = {kmax}");
    }
    let s = dyadic_tail_sum(&a, k0, kmax)?;
    timed("ledger_sum", |rep| {
        rep.param("alpha", fmt_pq(&a)).param("k0", k0).param("kmax", kmax);
        rep.push(CheckRecord::banded("partial sum within tail bound", "claim:log-free-summation", s.partial, 0.0, s.tail_bound));
        Ok(vec![])
    })
}

fn freqgeo_check(n: u32, samples: usize, d: DeltaParam, seed: u64) -> Result<Outcome> {
    dyad_exponent(n)?;
    if n < 4 {
        bail!("freqgeo check needs N >= 4");
    }
    timed("freqgeo_check", |rep| {
        let nf = n as f64;
        rep.param("N", n).param("delta", fmt_pq(d.value())).param("samples", samples).param("seed", seed);
        let tiling = build_tiling(nf);
        rep.push(CheckRecord::banded("tile count", "claim:cap-tiling", tiling.len() as f64, nf, 8.0 * nf));
        let dirs = sphere_samples(samples.max(20 * tiling.len()), 0.37);
        let overlaps: Vec<usize> = dirs.par_iter().map(|x| tiling.overlap(x)).collect();
        let uncovered = overlaps.iter().filter(|&&o| o == 0).count();
        let max_ov = overlaps.iter().copied().max().unwrap_or(0);
        rep.push(CheckRecord::banded("uncovered directions", "claim:cap-tiling", uncovered as f64, 0.0, 0.0));
        rep.push(CheckRecord::banded("max overlap", "claim:cap-tiling", max_ov as f64, 1.0, MAX_OVERLAP as f64));
        let partners = tiling.partner_count(&tiling.tiles[0]);
        rep.push(CheckRecord::banded("rank-4 partners of one tile", "claim:rank4-pairs", partners as f64, 0.0, 8.0 * nf));

        let k = ZoneConstants::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut violations = 0;
        let mut corona = 0;
        for i in 0..samples {
            let pair = if i % 2 == 0 {
                let a = vec3::scale(&random_unit(&mut rng), rng.gen_range(0.5..2.0) * nf);
                let b = vec3::scale(&random_unit(&mut rng), rng.gen_range(0.5..2.0) * nf);
                FreqPair::new(a, b)
            } else {
                let dir = random_unit(&mut rng);
                let (zs, es, af) = (rng.gen_range(1.0..=2.0), rng.gen_range(0.5..=1.0), rng.gen_range(0.0..=1.0));
                corona_candidate(nf, &d, &k, zs, es, af, &dir, rng.gen_range(0.0..std::f64::consts::TAU))
            };
            let f = zone_membership(&pair, nf, &d, &k);
            corona += f.in_narrow_corona as usize;
            let bad = (f.in_narrow_corona && !f.in_offdiag)
                || (f.in_offdiag_rad && !f.in_offdiag)
                || (f.in_offdiag && f.in_diagonal)
                || (f.in_narrow_corona && !is_coronal(&d));
            violations += bad as usize;
        }
        rep.push(CheckRecord::banded("zone flag violations", "claim:zone-geometry", violations as f64, 0.0, 0.0));
        rep.push(CheckRecord::info("corona members among samples", "claim:narrow-corona", corona as f64, ""));

        let p = time_partition(nf, 1.0)?;
        let st = partition_stats(&p, 200);
        rep.push(CheckRecord::banded("|sum chi^2 - 1|", "claim:time-partition", st.max_sum_sq_error, 0.0, 1e-12));
        rep.push(CheckRecord::info("sup sum |chi'| / N^(1/2)", "claim:time-partition", st.sup_sum_abs_d1 / nf.sqrt(), ""));

        let rows: Vec<Vec<String>> = tiling
            .tiles
            .iter()
            .map(|t| vec![t.center[0].to_string(), t.center[1].to_string(), t.center[2].to_string(), t.radius.to_string()])
            .collect();
        Ok(vec![(format!("tiling_N{n}.csv"), csv("center_x,center_y,center_z,radius", &rows))])
    })
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

fn phase_verify(n: u32, d: DeltaParam, seed: u64) -> Result<Outcome> {
    dyad_exponent(n)?;
    timed("phase_verify", |rep| {
        let nf = n as f64;
        let df = d.as_f64();
        rep.param("N", n).param("delta", fmt_pq(d.value())).param("seed", seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let t = rng.gen_range(0.05..2.0);
            let r1 = rng.gen_range(0.5..50.0);
            let r2 = rng.gen_range(0.05..20.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let det = phase_hessian(t, r1, r2).1;
            worst = worst.max((fd_det(t, r1, r2) - det).abs() / det.abs());
        }
        rep.push(CheckRecord::banded("Hessian det vs finite differences", "claim:phase-hessian", worst, 0.0, 1e-6));

        let m = magnitudes(nf.powf(-0.5), nf, nf.powf(1.0 - df));
        let want = [4.0 * nf.powf(2.0 - df), 4.0 * nf.powf(0.5 - df), 4.0 * nf.sqrt()];
        let err = m.iter().zip(&want).map(|(a, b)| (a - b).abs() / b).fold(0.0, f64::max);
        rep.push(CheckRecord::banded("derivative magnitudes", "claim:phase-derivatives", err, 0.0, 1e-12));

        let ratio = ibp_numeric_ratio(nf, &d);
        let reference = 4f64.powi(-6);
        rep.push(
            CheckRecord::banded("six-fold IBP gain / N^(-6+4delta)", "claim:ibp-gain", ratio, reference * (1.0 - 1e-9), reference * (1.0 + 1e-9))
                .with_reference(reference)
                .with_detail(format!("gain exponent {}", ibp_gain())),
        );

        let mut duh: f64 = 0.0;
        for _ in 0..20 {
            let [a, b, c, e]: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
            let w1 = rng.gen_range(0.5..20.0);
            let f = move |s: f64| (2.0 + a + b * (w1 * s + c).sin() + e * s * s, b * w1 * (w1 * s + c).cos() + 2.0 * e * s);
            let chk = duhamel_normal_form_check(f, rng.gen_range(0.02..1.0), rng.gen_range(1.0..200.0), rng.gen_range(-100.0..100.0))?;
            duh = duh.max(chk.relative);
        }
        rep.push(CheckRecord::banded("Duhamel normal form residual", "claim:time-normal-form", duh, 0.0, 1e-9));

        let mut rem: f64 = 0.0;
        for _ in 0..100 {
            let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0) * nf);
            let y: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0) * nf);
            let h = heat_amplitude_remainder(&FreqPair::new(x, y), rng.gen_range(0.0..1.0) / nf);
            rem = rem.max((h.remainder - h.bound).abs() / h.a_n.norm());
        }
        rep.push(CheckRecord::banded("heat remainder identity", "claim:heat-reduction", rem, 0.0, 1e-12));
        Ok(vec![])
    })
}

fn symbols_corona(name: &str, n: u32, samples: usize, d: DeltaParam, seed: u64) -> Result<Outcome> {
    dyad_exponent(n)?;
    timed(name, |rep| {
        let nf = n as f64;
        let k = ZoneConstants::default();
        rep.param("N", n).param("delta", fmt_pq(d.value())).param("samples", samples).param("seed", seed);
        let out = corona_sup_scan(nf, &d, samples, seed, &k);
        let mut row = vec![n.to_string(), fmt_pq(d.value())];
        match &out {
            CoronaOutcome::Empty { candidates } => {
                let detail = format!("{candidates} candidates rejected");
                if is_coronal(&d) {
                    rep.push(CheckRecord::info("narrow corona empty", "claim:narrow-corona", 0.0, detail));
                } else {
                    rep.push(CheckRecord::boolean("narrow corona empty", "claim:narrow-corona", true, detail));
                }
                row.extend(["".into(), "".into(), "".into(), "".into()]);
            }
            CoronaOutcome::Sup { max_ratio, accepted, argmax } => {
                if !is_coronal(&d) {
                    rep.push(CheckRecord::boolean("narrow corona empty", "claim:narrow-corona", false, format!("{accepted} members")));
                }
                rep.push(
                    CheckRecord::banded("sup |eta.Pi| / N^(1/2-delta)", "claim:narrow-corona-symbol", *max_ratio, 0.0, 2.0 * k.corona_c)
                        .with_detail(format!("{accepted} accepted samples")),
                );
                row.extend([max_ratio.to_string(), argmax.zeta_scale.to_string(), argmax.eta_scale.to_string(), argmax.angle_frac.to_string()]);
            }
        }
        Ok(vec![(format!("{name}.csv"), csv("N,delta,max_ratio,zeta_scale,eta_scale,angle_frac", &[row]))])
    })
}

fn kernels_scan(kind: KernelKind, dyads: Option<(u32, u32)>, quick: bool, seed: u64) -> Result<Outcome> {
    let (label, default, reference) = match kind {
        KernelKind::Schrodinger => ("schrodinger", if quick { (4, 6) } else { (5, 7) }, 2.0 / 3.0),
        KernelKind::Heat => ("heat", (6, 8), 1.0 / 12.0),
    };
    let ns = dyad_list(dyads.unwrap_or(default));
    if ns.len() < 2 || ns[0] < 4 {
        bail!("kernels scan needs at least two dyads with N >= 4");
    }
    let name = format!("kernels_{label}");
    timed(&name, |rep| {
        rep.param("kind", label).param("dyads", format!("{:?}", ns)).param("seed", seed);
        let side = if quick { 60 } else { 100 };
        let mut sup = Vec::new();
        let mut l3 = Vec::new();
        let mut l6 = Vec::new();
        let mut l6_raw = Vec::new();
        for &n in &ns {
            let nf = n as f64;
            sup.push(kernel_sup_on_cylinder(nf, kind, side).ratio);
            l3.push(kernel_l3_on_cylinder(nf, kind)?.ratio);
            let s = strichartz_ratio(nf, 8, kind, seed)?;
            l6.push(s.normalized);
            l6_raw.push(s.ratio);
        }
        let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).log2()).collect();
        let ys: Vec<f64> = l6_raw.iter().map(|v| v.log2()).collect();
        let slope = fit_slope(&xs, &ys);
        rep.push(CheckRecord::banded("sup ratio spread", "claim:kernel-sup", spread(&sup), 1.0, 2.0));
        rep.push(CheckRecord::banded("L3 ratio spread", "claim:kernel-l3", spread(&l3), 1.0, 2.0));
        if kind == KernelKind::Schrodinger {
            rep.push(CheckRecord::banded("L6 constant spread", "claim:local-l6", spread(&l6), 1.0, 2.0));
        } else {
            let note = "annulus-localized heat packets decay like exp(-N^(3/2)) on the cylinder";
            rep.push(CheckRecord::info("L6 constant spread", "claim:local-l6", spread(&l6), note));
        }
        rep.push(CheckRecord::info("fitted L6 exponent", "claim:local-l6", slope, "").with_reference(reference));
        if kind == KernelKind::Schrodinger {
            let gap = rescaling_cross_check(ns[0] as f64);
            rep.push(CheckRecord::banded("rescaling (N, 4N) cross-check", "claim:kernel-l3", gap, 0.0, 0.01));
        }
        let rows: Vec<Vec<String>> = (0..ns.len())
            .map(|i| vec![ns[i].to_string(), sup[i].to_string(), l3[i].to_string(), l6[i].to_string(), slope.to_string()])
            .collect();
        Ok(vec![(format!("{name}.csv"), csv("N,sup_ratio,L3_ratio,L6_ratio,fitted_exponent", &rows))])
    })
}

fn packets_decoupling(geometry: Geometry, trials: usize, dyads: Option<(u32, u32)>, quick: bool, seed: u64) -> Result<Outcome> {
    let ns = dyad_list(dyads.unwrap_or(if quick { (6, 8) } else { (6, 10) }));
    if ns[0] < 4 {
        bail!("decoupling needs N >= 4");
    }
    timed("packets_decoupling", |rep| {
        rep.param("geometry", format!("{geometry:?}").to_lowercase())
            .param("dyads", format!("{:?}", ns))
            .param("trials", trials)
            .param("seed", seed);
        let mut rows = Vec::new();
        let mut best = Vec::new();
        let mut holder_ok = true;
        let mut plane_ok = true;
        for &n in &ns {
            let nf = n as f64;
            let res = decoupling_trials(nf, geometry, trials, seed)?;
            let top = res.iter().map(|r| r.ratio).fold(0.0, f64::max);
            holder_ok &= res.iter().all(|r| r.holder <= 1.0);
            plane_ok &= plane_wave_ratio(nf)? > top;
            best.push(top);
            for r in &res {
                rows.push(vec![n.to_string(), r.angle.to_string(), r.ratio.to_string(), r.l3.to_string(), r.l6f.to_string(), r.l6g.to_string()]);
            }
        }
        let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).log2()).collect();
        let ys: Vec<f64> = best.iter().map(|v| v.log2()).collect();
        rep.push(CheckRecord::banded("decoupling ratio spread", "claim:rank4-decoupling", spread(&best), 1.0, 2.0));
        rep.push(CheckRecord::boolean("Hoelder ratio <= 1", "claim:rank4-decoupling", holder_ok, ""));
        rep.push(CheckRecord::boolean("plane wave exceeds packets", "claim:rank4-decoupling", plane_ok, ""));
        rep.push(CheckRecord::info("fitted ratio exponent", "claim:rank4-decoupling", fit_slope(&xs, &ys), "").with_reference(0.0));
        Ok(vec![("packets_decoupling.csv".into(), csv("N,angleAB,ratio,L3,L6F,L6G", &rows))])
    })
}

fn load_config(path: Option<&Path>, c: &Common) -> Result<NsConfig> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))?
        }
        None if c.quick => NsConfig { grid: 16, horizon: 0.25, snapshots: 17, ..NsConfig::default() },
        None => NsConfig::default(),
    };
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(d) = &c.delta {
        cfg.delta = d.clone();
    }
    if let Some(k) = c.dyads {
        cfg.dyads = k;
    }
    Ok(cfg)
}

fn fields_run(cfg: &NsConfig, out: &Path) -> Result<(Outcome, Trajectory)> {
    let traj = ns_run(cfg)?;
    let o = timed("fields_run", |rep| {
        rep.param("grid", cfg.grid)
            .param("viscosity", cfg.viscosity)
            .param("horizon", cfg.horizon)
            .param("snapshots", cfg.snapshots)
            .param("seed", cfg.seed)
            .param("initial", format!("{:?}", cfg.initial).to_lowercase())
            .param("dt", traj.dt);
        rep.push(CheckRecord::banded("max divergence defect", "claim:leray-solver", traj.max_divergence_defect(), 0.0, 1e-12));
        let reality = traj.fields.iter().map(|f| f.reality_defect()).fold(0.0, f64::max);
        rep.push(CheckRecord::banded("max reality defect", "claim:leray-solver", reality, 0.0, 1e-12));
        let energy: Vec<f64> = traj.fields.iter().map(|f| nslab::fields::sobolev_norm(f, 0.0)).collect();
        let decreasing = energy.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
        rep.push(CheckRecord::boolean("energy non-increasing", "claim:energy-inequality", decreasing || cfg.initial == InitialData::Zero, ""));
        rep.push(CheckRecord::info("final / initial L2 norm", "claim:energy-inequality", energy.last().unwrap() / energy[0], ""));
        let dir = out.join("trajectory");
        save_trajectory(&traj, &dir).with_context(|| format!("saving trajectory to {}", dir.display()))?;
        Ok(vec![])
    })?;
    Ok((o, traj))
}

fn fields_scaling(traj: &Trajectory, d: DeltaParam, dyads: Option<(u32, u32)>) -> Result<Outcome> {
    let m = traj.grid();
    let top = (m / 4).max(1).trailing_zeros();
    let ns = dyad_list(dyads.unwrap_or((0, top)));
    let fit = scaling_fit(traj, &ns, &d)?;
    timed("fields_scaling", |rep| {
        rep.param("grid", m).param("delta", fmt_pq(d.value())).param("dyads", format!("{:?}", ns));
        let finite = fit.rows.iter().all(|r| r.r_n.is_finite());
        rep.push(CheckRecord::boolean("r_N finite", "claim:offdiag-scaling", finite, ""));
        rep.push(CheckRecord::info("reference R", "claim:offdiag-scaling", fit.reference, ""));
        match fit.slope {
            Some(s) => rep.push(
                CheckRecord::info("slope of log2 r_N", "claim:offdiag-scaling", s, "acceptance band <= -0.8").with_reference(-1.0),
            ),
            None => rep.push(CheckRecord::info("slope of log2 r_N", "claim:offdiag-scaling", f64::NAN, "fewer than two live dyads")),
        }
        if !is_coronal(&d) {
            let mut spec = BlockSpec::new(Paraproduct::HighHighToLow, 2, Zone::NarrowCorona, d.clone());
            spec.zone_scale = ns.last().copied();
            let last = traj.fields.last().expect("trajectory has snapshots");
            let b = bilinear_block(last, last, &spec, Method::Direct)?;
            let zero = b.coeffs.iter().flatten().all(|z| z.norm() == 0.0);
            rep.push(CheckRecord::boolean("narrow-corona block vanishes", "claim:narrow-corona", zero, ""));
        }
        let rows: Vec<Vec<String>> = fit.rows.iter().map(|r| vec![r.n.to_string(), r.a_n.to_string(), r.r_n.to_string()]).collect();
        let mut body = csv("N,A_N,r_N", &rows);
        body.push_str(&format!("# slope,{}\n", fit.slope.map_or("nan".to_string(), |s| s.to_string())));
        Ok(vec![("fields_scaling.csv".into(), body)])
    })
}

fn all(c: &Common) -> Result<Vec<Outcome>> {
    let s = seed(c);
    let q = c.quick;
    let d = c.delta.clone();
    let jobs: Vec<Box<dyn Fn() -> Result<Vec<Outcome>> + Send + Sync>> = vec![
        Box::new(|| Ok(vec![ledger_verify(d.clone().unwrap_or_else(DeltaParam::max))?])),
        Box::new(|| Ok(vec![freqgeo_check(if q { 64 } else { 256 }, 2000, d.clone().unwrap_or_else(DeltaParam::max), s)?])),
        Box::new(|| Ok(vec![phase_verify(1024, d.clone().unwrap_or_else(DeltaParam::max), s)?])),
        Box::new(|| {
            Ok(vec![
                symbols_corona("symbols_corona", 1024, if q { 2000 } else { 4000 }, DeltaParam::max(), s)?,
                symbols_corona("symbols_corona_half", 1024, 2000, DeltaParam::half(), s)?,
            ])
        }),
        Box::new(|| Ok(vec![kernels_scan(KernelKind::Schrodinger, None, q, s)?, kernels_scan(KernelKind::Heat, None, q, s)?])),
        Box::new(|| Ok(vec![packets_decoupling(Geometry::Orthogonal, if q { 2 } else { 4 }, None, q, s)?])),
        Box::new(|| {
            let cfg = load_config(None, c)?;
            let (run, traj) = fields_run(&cfg, &c.out)?;
            let top = cfg.dyads.1.min((cfg.grid / 4).trailing_zeros());
            let scaling = fields_scaling(&traj, cfg.delta.clone(), Some((cfg.dyads.0, top)))?;
            Ok(vec![run, scaling])
        }),
    ];
    let results: Vec<Result<Vec<Outcome>>> =
        if c.parallel { jobs.par_iter().map(|j| j()).collect() } else { jobs.iter().map(|j| j()).collect() };
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}
