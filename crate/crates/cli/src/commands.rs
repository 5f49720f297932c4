//! The six subcommands. Each writes its data files into an [`Artifact`].

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::io::Write;

use fraglab::basis::{enumerate_blockaded, enumerate_full, fibonacci, Basis, BasisKind, BitConfig, ChainSpec};
use fraglab::dynamics::{
    average_projections, derive_seed, evolve, exact_window_distribution, norm, postselect, representative,
    run_sector_protocol, sample_snapshots, site_populations, z_autocorrelator, Averaging, EvolutionPlan,
    InitialState, PostselectStats, Postselection, SamplingConfig, SnapshotRecord,
};
use fraglab::fragments::{
    discover_fragments, fragment_dim, krylov_growth_rate, largest_sector, FragmentTable, SectorCensus,
};
use fraglab::hamiltonians::{
    build_h_disordered, build_h_eff2, build_h_lgt, build_h_pxq, build_h_ryd, sample_disorder, RydbergParams,
};
use fraglab::lgtmap::{default_k_max, electric_strings, gauss_check, Link};
use fraglab::sliomstats::{
    peak_ratio, scaling_collapse, scaling_exponent, total_variation, AnalyticTables, RightBoundary, ScalingKind,
};
use fraglab::{decompose, pad, sliom_pattern, SparseOperator};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::artifact::Artifact;
use crate::config::{Model, RunConfig};
use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

/// Largest chain for which `fragments` runs the explicit graph search.
const BFS_MAX_ATOMS: usize = 24;

fn blockaded(n: usize) -> Result<Basis> {
    Ok(enumerate_blockaded(ChainSpec::new(n)?)?)
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Config(msg.into()))
}

fn sublattice(doubled: usize) -> &'static str {
    if doubled.is_multiple_of(2) {
        "integer"
    } else {
        "half"
    }
}

fn kind_name(k: ScalingKind) -> &'static str {
    match k {
        ScalingKind::Bulk => "bulk",
        ScalingKind::Boundary => "boundary",
        ScalingKind::Center => "center",
    }
}

/// `{a,b,...}` of the nonzero pattern prefix.
fn brace<T: ToString>(xs: &[T]) -> String {
    format!("{{{}}}", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

pub fn basis(cfg: &RunConfig, art: &mut Artifact) -> Result<()> {
    let n = cfg.n_atoms();
    let b = blockaded(n)?;
    let fib = fibonacci(n + 2);
    art.json(
        "summary.json",
        &json!({
            "n_atoms": n,
            "n_padded": b.spec().n_padded(),
            "count": b.len(),
            "fibonacci": fib.to_string(),
            "fibonacci_check": b.len() as u128 == fib,
            "checksum": b.checksum(),
        }),
    )?;
    if cfg.dump {
        let mut w = art.writer("basis.txt")?;
        b.write_dump(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn table1_rows(basis: &Basis, table: &FragmentTable, n_c: usize) -> Result<Vec<[String; 7]>> {
    let n = basis.spec().n_atoms();
    let mut frags: Vec<_> = table.in_sector(n_c).collect();
    frags.sort_by_key(|f| (Reverse(f.pattern.n_charged()), f.pattern.labels()));
    frags
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let p = &f.pattern;
            let formula = fragment_dim(n, p.n_charged(), p.n_neutral())?;
            Ok([
                (i + 1).to_string(),
                p.labels(),
                brace(p.nonzero()),
                brace(&[p.n_charged(), p.n_neutral()]),
                f.dim().to_string(),
                formula.to_string(),
                representative(basis, f).physical_string(),
            ])
        })
        .collect()
}

pub fn fragments(cfg: &RunConfig, art: &mut Artifact) -> Result<()> {
    let n = cfg.n_atoms();
    let census = SectorCensus::new(n)?;
    let largest = largest_sector(n)?;
    let sector_dims: serde_json::Map<String, serde_json::Value> = census
        .sector_dims()
        .into_iter()
        .map(|(k, d)| (k.to_string(), d.to_string().into()))
        .collect();
    art.json(
        "census.json",
        &json!({
            "n_a": n,
            "n_krylov": census.n_krylov.to_string(),
            "d_total": census.d_total.to_string(),
            "d_max": census.d_max.to_string(),
            "frozen_count": census.frozen_count.to_string(),
            "frozen_fraction": census.frozen_fraction().to_f64(),
            "largest_sector": { "n_c": largest.n_c, "dim": largest.dim.to_string() },
            "sector_dims": sector_dims,
        }),
    )?;

    let mut w = art.csv("sectors.csv")?;
    w.write_record(["n_c", "n_q", "n_0", "k", "dim", "multiplicity"])?;
    for r in &census.rows {
        w.write_record([
            r.n_c().to_string(),
            r.n_q.to_string(),
            r.n_0.to_string(),
            r.k.to_string(),
            r.dim.to_string(),
            r.multiplicity.to_string(),
        ])?;
    }
    w.flush()?;

    if n <= BFS_MAX_ATOMS {
        let b = blockaded(n)?;
        let table = discover_fragments(&b)?;
        let mut w = art.csv("table.csv")?;
        w.write_record(["fragment", "pattern", "slioms", "nq_n0", "size", "formula_size", "initial_state"])?;
        for row in table1_rows(&b, &table, cfg.sector)? {
            w.write_record(&row)?;
        }
        w.flush()?;
    }

    if !cfg.n_list.is_empty() {
        let rows: Vec<SectorCensus> = cfg
            .n_list
            .par_iter()
            .map(|&m| SectorCensus::new(m))
            .collect::<std::result::Result<_, _>>()?;
        let mut w = art.csv("sweep.csv")?;
        w.write_record(["n_a", "n_krylov", "d_total", "frozen_fraction"])?;
        for c in &rows {
            w.write_record([
                c.n_a.to_string(),
                c.n_krylov.to_string(),
                c.d_total.to_string(),
                c.frozen_fraction().to_f64().unwrap_or(f64::NAN).to_string(),
            ])?;
        }
        w.flush()?;
        if cfg.n_list.len() >= 2 {
            art.json(
                "growth.json",
                &json!({
                    "n_list": cfg.n_list,
                    "growth_rate": krylov_growth_rate(&cfg.n_list)?,
                }),
            )?;
        }
    }
    Ok(())
}

fn hamiltonian(cfg: &RunConfig, basis: &Basis, p: &RydbergParams) -> Result<Vec<SparseOperator>> {
    Ok(match cfg.model {
        Model::Lgt => vec![build_h_lgt(basis, p.omega / 2.0)],
        Model::Ryd => vec![build_h_ryd(basis, p, cfg.max_range)?],
        Model::Pxq => vec![build_h_pxq(basis, p.omega)?],
        Model::Eff2 => vec![build_h_eff2(basis, p.omega, p.v(1))?],
        Model::Disordered => (0..cfg.disorder.realizations)
            .into_par_iter()
            .map(|r| {
                let real = sample_disorder(p, cfg.n_atoms(), cfg.disorder.sigma_r, derive_seed(cfg.seed, &[r as u64]))?;
                build_h_disordered(basis, p, &real, cfg.max_range)
            })
            .collect::<std::result::Result<_, _>>()?,
    })
}

/// Time-resolved observables of one quench, reduced on the fly.
struct QuenchData {
    autocorrelator: Vec<Vec<f64>>,
    populations: Vec<Vec<f64>>,
    pbar: Vec<f64>,
    norm_error: f64,
}

fn run_quench(basis: &Basis, h: &SparseOperator, c0: &BitConfig, i0: usize, times: &[f64], mask: &[bool]) -> Result<QuenchData> {
    let states = evolve(&EvolutionPlan::new(h, InitialState::Ordinal(i0), times.to_vec()))?;
    let norm_error = states.iter().map(|s| (norm(s) - 1.0).abs()).fold(0.0, f64::max);
    let window: Vec<Vec<_>> = states
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(s, _)| s.clone())
        .collect();
    Ok(QuenchData {
        autocorrelator: z_autocorrelator(basis, &states, c0),
        populations: site_populations(basis, &states),
        pbar: average_projections(&window, Averaging::Uniform),
        norm_error,
    })
}

fn mean_of(runs: &[QuenchData]) -> QuenchData {
    let n = runs.len() as f64;
    let avg2 = |f: fn(&QuenchData) -> &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        let mut acc = f(&runs[0]).clone();
        for r in &runs[1..] {
            for (a, b) in acc.iter_mut().zip(f(r)) {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            }
        }
        acc.iter_mut().flatten().for_each(|x| *x /= n);
        acc
    };
    let mut pbar = runs[0].pbar.clone();
    for r in &runs[1..] {
        pbar.iter_mut().zip(&r.pbar).for_each(|(x, y)| *x += y);
    }
    pbar.iter_mut().for_each(|x| *x /= n);
    QuenchData {
        autocorrelator: avg2(|d| &d.autocorrelator),
        populations: avg2(|d| &d.populations),
        pbar,
        norm_error: runs.iter().map(|r| r.norm_error).fold(0.0, f64::max),
    }
}

fn write_site_matrix(
    art: &mut Artifact,
    name: &str,
    m: &[Vec<f64>],
    times: &[f64],
    omega_t: &[f64],
) -> Result<()> {
    let mut w = art.csv(name)?;
    let mut header = vec!["t_us".to_string(), "omega_t".to_string()];
    header.extend((1..=m.len()).map(|i| format!("atom_{i}")));
    w.write_record(&header)?;
    for (ti, (t, x)) in times.iter().zip(omega_t).enumerate() {
        let mut row = vec![t.to_string(), x.to_string()];
        row.extend(m.iter().map(|site| site[ti].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct FragmentSummary {
    pattern: String,
    dim: usize,
    in_fragment_weight: f64,
    min_in: f64,
    max_out: f64,
    max_min_ratio: f64,
}

fn fragment_summary(table: &FragmentTable, i0: usize, pbar: &[f64]) -> FragmentSummary {
    let f = table.fragment_of(i0);
    let (mut min_in, mut max_in, mut max_out, mut weight) = (f64::INFINITY, 0.0f64, 0.0f64, 0.0);
    for (k, &v) in pbar.iter().enumerate() {
        if table.fragment_of(k) == f {
            min_in = min_in.min(v);
            max_in = max_in.max(v);
            weight += v;
        } else {
            max_out = max_out.max(v);
        }
    }
    FragmentSummary {
        pattern: table.fragments[f].pattern.labels(),
        dim: table.fragments[f].dim(),
        in_fragment_weight: weight,
        min_in,
        max_out,
        max_min_ratio: max_in / min_in,
    }
}

fn site_time_mean(m: &[Vec<f64>], sites: impl Iterator<Item = usize> + Clone, mask: &[bool]) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for s in sites {
        for (v, _) in m[s].iter().zip(mask).filter(|(_, &k)| k) {
            sum += v;
            count += 1;
        }
    }
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

pub fn quench(cfg: &RunConfig, art: &mut Artifact) -> Result<()> {
    let n = cfg.n_atoms();
    let p = cfg.params();
    let Some(init) = &cfg.init else {
        return config_err("quench needs an initial state (`init` or --init)");
    };
    let c0 = pad(init).map_err(|e| CliError::Config(e.to_string()))?;
    let omega_t = cfg.window.omega_times();
    let times = cfg.window.times(p.omega);
    let mask: Vec<bool> = omega_t.iter().map(|&x| x >= cfg.average_from).collect();
    if !mask.iter().any(|&m| m) {
        return config_err("average_from lies beyond the end of the window");
    }
    let spec = ChainSpec::new(n)?;
    let basis = match cfg.model {
        Model::Pxq => enumerate_full(spec)?,
        _ => enumerate_blockaded(spec)?,
    };
    let i0 = basis
        .index_of(&c0)
        .map_err(|e| CliError::Config(format!("initial state: {e}")))?;
    let table = match basis.kind() {
        BasisKind::Blockaded => Some(discover_fragments(&basis)?),
        BasisKind::Full => None,
    };

    let hs = hamiltonian(cfg, &basis, &p)?;
    let runs: Vec<QuenchData> = hs
        .par_iter()
        .map(|h| run_quench(&basis, h, &c0, i0, &times, &mask))
        .collect::<Result<_>>()?;
    let data = mean_of(&runs);
    let clean = if cfg.model == Model::Disordered {
        let h = build_h_ryd(&basis, &p.with_delta(p.v(1)), cfg.max_range)?;
        Some(run_quench(&basis, &h, &c0, i0, &times, &mask)?)
    } else {
        None
    };

    write_site_matrix(art, "autocorrelator.csv", &data.autocorrelator, &times, &omega_t)?;
    write_site_matrix(art, "populations.csv", &data.populations, &times, &omega_t)?;

    let mut w = art.csv("projections.csv")?;
    let mut header = vec!["ordinal", "config", "fragment", "in_fragment", "pbar"];
    if clean.is_some() {
        header.push("pbar_clean");
    }
    w.write_record(&header)?;
    for (k, &v) in data.pbar.iter().enumerate() {
        let (frag, inside) = match &table {
            Some(t) => (
                t.fragment_of(k).to_string(),
                (t.fragment_of(k) == t.fragment_of(i0)).to_string(),
            ),
            None => (String::new(), String::new()),
        };
        let mut row = vec![k.to_string(), basis.state(k).physical_string(), frag, inside, v.to_string()];
        if let Some(c) = &clean {
            row.push(c.pbar[k].to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut postselection: Option<PostselectStats> = None;
    if cfg.shots > 0 {
        if hs.len() != 1 {
            return config_err("snapshot sampling is not available for the disordered model");
        }
        let sampling = SamplingConfig {
            shots_per_time: cfg.shots,
            spam: cfg.spam_model(),
            prep_errors: cfg.prep_errors,
            seed: cfg.seed,
        };
        let snaps = sample_snapshots(&basis, &hs[0], &c0, &times, &sampling)?;
        let (kept, stats) = postselect(&snaps, cfg.postselect.blockade, cfg.postselect.nc);
        let mut w = art.writer("snapshots.ndjson")?;
        for s in &kept {
            serde_json::to_writer(&mut w, &SnapshotRecord::from(s))?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        postselection = Some(stats);
    }

    let r_sites: Vec<usize> = (0..n).filter(|&s| c0.is_r(s + 3)).collect();
    art.json(
        "summary.json",
        &json!({
            "model": cfg.model,
            "n_atoms": n,
            "dim": basis.len(),
            "init": init,
            "averaging_omega_t": [cfg.average_from, cfg.window.omega_t_end],
            "autocorrelator_mean": site_time_mean(&data.autocorrelator, 0..n, &mask),
            "autocorrelator_rydberg_mean": site_time_mean(&data.autocorrelator, r_sites.iter().copied(), &mask),
            "max_norm_error": data.norm_error,
            "fragment": table.as_ref().map(|t| fragment_summary(t, i0, &data.pbar)),
            "clean_fragment": table.as_ref().zip(clean.as_ref()).map(|(t, c)| fragment_summary(t, i0, &c.pbar)),
            "postselection": postselection,
        }),
    )?;
    Ok(())
}

pub fn ensemble(cfg: &RunConfig, art: &mut Artifact) -> Result<()> {
    let n = cfg.n_atoms();
    let n_c = cfg.sector;
    let p = cfg.params();
    if matches!(cfg.model, Model::Pxq | Model::Disordered) {
        return config_err("ensemble runs on the blockaded basis with lgt, ryd or eff2");
    }
    if cfg.shots == 0 {
        return config_err("ensemble needs shots > 0");
    }
    if let Some(k) = cfg.postselect.nc {
        if k != n_c {
            return config_err(format!("post-selection nc={k} differs from sector {n_c}"));
        }
    }
    let basis = blockaded(n)?;
    let table = discover_fragments(&basis)?;
    if table.in_sector(n_c).next().is_none() {
        return config_err(format!("a {n}-atom chain has no sector N_c={n_c}"));
    }
    let initials: Vec<BitConfig> = if cfg.initial_states.is_empty() {
        table
            .in_sector(n_c)
            .filter(|f| f.pattern <= f.pattern.reversed())
            .map(|f| representative(&basis, f))
            .collect()
    } else {
        cfg.initial_states
            .iter()
            .map(|s| pad(s).map_err(|e| CliError::Config(e.to_string())))
            .collect::<Result<_>>()?
    };
    let h = hamiltonian(cfg, &basis, &p)?.remove(0);
    let sampling = SamplingConfig {
        shots_per_time: cfg.shots,
        spam: cfg.spam_model(),
        prep_errors: cfg.prep_errors,
        seed: cfg.seed,
    };
    let post = Postselection {
        blockade: cfg.postselect.blockade,
        cluster_number: cfg.postselect.nc.is_some(),
    };
    let out = run_sector_protocol(&basis, &table, &h, n_c, &initials, &cfg.window, p.omega, &sampling, post)?;
    let exact = exact_window_distribution(&basis, &table, &h, n_c, &initials, &cfg.window, p.omega)?;
    let tables = AnalyticTables::new(n);
    let theory: Vec<_> = (1..=n_c).map(|k| tables.distribution(k, RightBoundary::Sector(n_c))).collect();

    let mut w = art.csv("distributions.csv")?;
    w.write_record(["k", "x_doubled", "x", "sublattice", "sampled", "infinite_shot", "theory"])?;
    for ((emp, inf), th) in out.distributions.iter().zip(&exact).zip(&theory) {
        let th_points: std::collections::BTreeMap<usize, f64> = th.points().into_iter().collect();
        let th_total: f64 = th_points.values().sum();
        let xs: BTreeSet<usize> = emp
            .weights
            .keys()
            .chain(inf.weights.keys())
            .chain(th_points.keys())
            .copied()
            .collect();
        for x in xs {
            w.write_record([
                emp.k.to_string(),
                x.to_string(),
                (x as f64 / 2.0).to_string(),
                sublattice(x).into(),
                emp.weights.get(&x).copied().unwrap_or(0.0).to_string(),
                inf.weights.get(&x).copied().unwrap_or(0.0).to_string(),
                (th_points.get(&x).copied().unwrap_or(0.0) / th_total).to_string(),
            ])?;
        }
    }
    w.flush()?;

    let tv: Vec<(f64, f64)> = out
        .distributions
        .iter()
        .zip(&exact)
        .zip(&theory)
        .map(|((e, i), t)| (total_variation(e, t), total_variation(i, t)))
        .collect();
    let mut w = art.csv("tv.csv")?;
    w.write_record(["k", "tv", "tv_infinite_shot"])?;
    for (k, (a, b)) in tv.iter().enumerate() {
        w.write_record([(k + 1).to_string(), a.to_string(), b.to_string()])?;
    }
    w.flush()?;

    let mut w = art.csv("fragments.csv")?;
    w.write_record(["pattern", "dim", "mirrored", "kept", "total", "rejected_blockade", "rejected_nc", "survival"])?;
    for e in &out.ensemble.entries {
        let labels = e.pattern.labels();
        let stats = (!e.mirrored)
            .then(|| out.stats.iter().find(|(l, _)| *l == labels))
            .flatten()
            .map(|(_, s)| s);
        let opt = |f: fn(&PostselectStats) -> String| stats.map(f).unwrap_or_default();
        w.write_record([
            labels.clone(),
            (e.weight as usize).to_string(),
            e.mirrored.to_string(),
            e.snapshots.len().to_string(),
            opt(|s| s.total.to_string()),
            opt(|s| s.rejected_blockade.to_string()),
            opt(|s| s.rejected_nc.to_string()),
            opt(|s| s.survival().to_string()),
        ])?;
    }
    w.flush()?;

    let mut w = art.csv("times.csv")?;
    w.write_record(["step", "t_us", "omega_t"])?;
    for (i, (t, x)) in cfg.window.times(p.omega).iter().zip(cfg.window.omega_times()).enumerate() {
        w.write_record([i.to_string(), t.to_string(), x.to_string()])?;
    }
    w.flush()?;

    let survival: Vec<f64> = out.stats.iter().map(|(_, s)| s.survival()).collect();
    art.json(
        "summary.json",
        &json!({
            "model": cfg.model,
            "n_atoms": n,
            "n_c": n_c,
            "probed_fragments": initials.len(),
            "fragments": out.ensemble.entries.len(),
            "snapshots_per_fragment": cfg.shots * cfg.window.n_steps,
            "tv": tv.iter().map(|t| t.0).collect::<Vec<_>>(),
            "tv_infinite_shot": tv.iter().map(|t| t.1).collect::<Vec<_>>(),
            "mean_survival": survival.iter().sum::<f64>() / survival.len() as f64,
        }),
    )?;
    Ok(())
}

pub fn scaling(cfg: &RunConfig, art: &mut Artifact) -> Result<()> {
    let results = cfg
        .scaling
        .iter()
        .map(|&k| scaling_exponent(&cfg.n_list, k))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut w = art.csv("widths.csv")?;
    w.write_record(["kind", "n", "sigma", "sigma_over_n"])?;
    for r in &results {
        for pt in &r.points {
            w.write_record([
                kind_name(r.which).to_string(),
                pt.n.to_string(),
                pt.sigma.to_string(),
                pt.sigma_over_n.to_string(),
            ])?;
        }
    }
    w.flush()?;

    let collapse = if cfg.collapse.is_empty() {
        None
    } else {
        let c = scaling_collapse(&cfg.collapse)?;
        let mut w = art.csv("collapse.csv")?;
        w.write_record(["n", "n_c", "k", "sublattice", "x_scaled", "weight_scaled"])?;
        for curve in &c.curves {
            for &(parity, x, y) in &curve.points {
                w.write_record([
                    curve.n.to_string(),
                    curve.n_c.to_string(),
                    curve.k.to_string(),
                    sublattice(parity).into(),
                    x.to_string(),
                    y.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Some(json!({ "metric": c.metric, "metric_by_parity": c.metric_by_parity }))
    };
    let peak = cfg.peak_n.map(peak_ratio).transpose()?;

    art.json(
        "summary.json",
        &json!({
            "exponents": results.iter().map(|r| json!({
                "kind": kind_name(r.which),
                "alpha": r.alpha,
                "stderr": r.stderr,
                "fit_range": r.fit_range,
            })).collect::<Vec<_>>(),
            "collapse": collapse,
            "peak": peak,
        }),
    )?;
    Ok(())
}

pub fn map(cfg: &RunConfig, art: &mut Artifact) -> Result<()> {
    let inputs: Vec<&String> = if cfg.configs.is_empty() {
        cfg.init.iter().collect()
    } else {
        cfg.configs.iter().collect()
    };
    if inputs.is_empty() {
        return config_err("map needs `configs` or --init");
    }
    let mut records = Vec::new();
    let mut w = art.csv("clusters.csv")?;
    w.write_record(["config", "k", "left", "right", "site_length", "doubled_center", "kind", "charge"])?;
    for s in inputs {
        let c = pad(s).map_err(|e| CliError::Config(e.to_string()))?;
        let d = decompose(&c).map_err(|e| CliError::Config(format!("{s}: {e}")))?;
        let pattern = sliom_pattern(&d, default_k_max(d.n_sites))?;
        let strings = electric_strings(&c);
        for cl in &d.clusters {
            w.write_record([
                s.clone(),
                cl.k.to_string(),
                cl.left_site.to_string(),
                cl.right_site.to_string(),
                cl.site_length.to_string(),
                cl.doubled_center.to_string(),
                serde_json::to_value(cl.kind)?.as_str().unwrap_or_default().to_string(),
                cl.net_charge.to_string(),
            ])?;
        }
        records.push(json!({
            "config": s,
            "padded": c.to_string(),
            "n_clusters": d.n_clusters(),
            "clusters": d.clusters.iter().map(|cl| json!({
                "k": cl.k, "left": cl.left_site, "right": cl.right_site, "charge": cl.net_charge,
            })).collect::<Vec<_>>(),
            "pattern": pattern.q,
            "labels": pattern.labels(),
            "electric": strings.bonds.iter().map(|b| match b { Link::Left => '<', Link::Right => '>' }).collect::<String>(),
            "charges": strings.charges(),
            "gauss_ok": gauss_check(&c),
        }));
    }
    w.flush()?;
    art.json("map.json", &records)?;
    Ok(())
}
