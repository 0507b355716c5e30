use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use primewalk::block_ensemble::{
    build_ensemble, normality_fit, predicted_variance, variance_regression, EnsembleSpec, GapPolicy,
};
use primewalk::characters::{enumerate_characters, DirichletCharacter};
use primewalk::error::{Error, Result};
use primewalk::kac::{kac_histogram, weyl_sum, FrequencyKind, FrequencySet};
use primewalk::lfunc;
use primewalk::manifest::{csv_file, fmt_float, RunManifest};
use primewalk::primes::{log_integral, required_limit, PrimeStore};
use primewalk::random_ensemble::{clt_experiment, sample_state};
use primewalk::residue_stats::{
    autocorrelation, frequencies, los_compare, markov_residual, spectral_density, transition_matrix,
    windowed_frequencies,
};
use primewalk::series::{b_series, scaling_exponent};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "primewalk", version, about = "prime residue-walk experiments", disable_help_subcommand = true)]
struct Cli {
    /// output CSV path
    #[arg(long, global = true, default_value = "out.csv")]
    out: PathBuf,
    /// cap the worker-thread count (output is identical for any value)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// also write a gnuplot script next to the CSV
    #[arg(long, global = true)]
    plot_script: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CharSel {
    /// modulus
    #[arg(long)]
    q: u64,
    /// character row (1-based label in enumeration order)
    #[arg(long)]
    chi: usize,
}

impl CharSel {
    fn resolve(&self) -> Result<DirichletCharacter> {
        let chars = enumerate_characters(self.q)?;
        chars
            .iter()
            .find(|c| c.label == Some(self.chi))
            .cloned()
            .ok_or_else(|| {
                Error::Domain(format!(
                    "no character row {} mod {} (rows 1..={})",
                    self.chi,
                    self.q,
                    chars.len()
                ))
            })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// list primes with index, and the logarithmic-integral comparison
    Primes {
        #[arg(long)]
        count: usize,
    },
    /// character table for a modulus
    Chars {
        #[arg(long)]
        q: u64,
    },
    /// cosine walk series B_N(t), or its scaling exponent
    Series {
        #[command(flatten)]
        sel: CharSel,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        n: usize,
        /// emit only every k-th prefix value
        #[arg(long, default_value_t = 1)]
        stride: usize,
        /// emit the fitted scaling exponent instead of the trace
        #[arg(long)]
        exponent: bool,
    },
    /// random-prime-state experiments
    Ensemble {
        #[command(subcommand)]
        cmd: EnsembleCmd,
    },
    /// L-function evaluation
    Lfunc {
        #[command(subcommand)]
        cmd: LfuncCmd,
    },
    /// angle/residue statistics
    Stats {
        #[command(subcommand)]
        cmd: StatsCmd,
    },
    /// block-variable ensembles and the variance regression
    Blocks {
        #[command(flatten)]
        sel: CharSel,
        #[arg(long, default_value_t = 100_000)]
        n1: usize,
        #[arg(long, default_value_t = 10_000_000)]
        n2: usize,
        /// block lengths start:stop:step
        #[arg(long, default_value = "1000:6000:250")]
        n_list: String,
        /// fixed:D or random:LO:HI
        #[arg(long, default_value = "fixed:800")]
        gap: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// also write per-N block files next to the summary
        #[arg(long)]
        per_block: bool,
    },
    /// cosine-sum normality and Weyl equidistribution demos
    Kac {
        #[command(subcommand)]
        cmd: KacCmd,
    },
    /// one-command reproductions of the reference tables and figures
    Repro {
        #[command(subcommand)]
        cmd: ReproCmd,
    },
}

#[derive(Subcommand)]
enum EnsembleCmd {
    /// normalized statistic over random states with a normal fit
    Clt {
        #[command(flatten)]
        sel: CharSel,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        states: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum LfuncCmd {
    /// |L(sigma + it)| along a t grid
    Scan {
        #[command(flatten)]
        sel: CharSel,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 25.0)]
        t1: f64,
        #[arg(long, default_value_t = 0.005)]
        step: f64,
        /// hurwitz | euler | euler-random
        #[arg(long, default_value = "hurwitz")]
        method: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// random-state offset bound
        #[arg(long, default_value_t = 2)]
        m: u64,
        /// product truncation length
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
    },
    /// functional-equation residual on a strip grid
    FeCheck {
        #[command(flatten)]
        sel: CharSel,
    },
    /// |product over n log n| along a t grid
    Chernoff {
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 30.0)]
        t1: f64,
        #[arg(long, default_value_t = 0.005)]
        step: f64,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum StatsCmd {
    /// per-angle frequencies over the first n primes
    Freq {
        #[command(flatten)]
        sel: CharSel,
        #[arg(long)]
        n: usize,
    },
    /// frequencies over the window [ell, ell + n)
    Window {
        #[command(flatten)]
        sel: CharSel,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        n: usize,
    },
    /// k-step transition matrix
    Trans {
        #[command(flatten)]
        sel: CharSel,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// deviation of the k-step matrix from the k-th power of the 1-step one
    Markov {
        #[command(flatten)]
        sel: CharSel,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// empirical vs predicted pair densities of prime residues
    Los {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// autocorrelation of cos(theta) over the first n primes
    Acf {
        #[command(flatten)]
        sel: CharSel,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        maxlag: usize,
    },
    /// spectral density of the autocorrelation
    Spectrum {
        #[command(flatten)]
        sel: CharSel,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1024)]
        maxlag: usize,
    },
}

#[derive(Subcommand)]
enum KacCmd {
    /// histogram of the normalized cosine sum at random t
    Hist {
        /// irrationals | log-integers | log-primes
        #[arg(long, default_value = "irrationals")]
        kind: String,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1e5)]
        t_width: f64,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// exponential-sum magnitudes along the sequence
    Weyl {
        /// golden | log-integers | log-primes
        #[arg(long, default_value = "log-integers")]
        kind: String,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: i64,
    },
}

#[derive(Subcommand)]
enum ReproCmd {
    /// order-6 character frequencies mod 7 vs sequence length
    Table2 {
        /// highest column as a power of five
        #[arg(long, default_value_t = 8)]
        max_pow: u32,
    },
    /// order-3 character frequencies mod 7 vs sequence length
    Table3 {
        #[arg(long, default_value_t = 8)]
        max_pow: u32,
    },
    /// windowed frequencies, blocks of 10^4 at starts 10^5..8x10^5
    Table4,
    /// one-step transition matrix at N = 5^9
    Matrix1,
    /// six-step transition matrix at N = 5^9
    Matrix6,
    /// block-variance slopes, modulus 5 protocol
    Table5 {
        #[arg(long, default_value_t = 10_000_000)]
        n2: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// block-variance slopes, modulus 7 protocol
    Table6 {
        #[arg(long, default_value_t = 10_000_000)]
        n2: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// |L| vs randomized product on the critical line, modulus 3
    FigLpdir {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// random-state normalized statistic histogram, modulus 3
    FigCltDir {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// normalized block histogram, modulus 7
    FigBlocks {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// cosine-sum histogram over independent frequencies
    FigKac {
        #[arg(long, default_value_t = 777)]
        seed: u64,
    },
}

fn parse_range(spec: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Domain(format!("bad range '{spec}', expected start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<usize> = parts
        .iter()
        .map(|p| p.parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    if nums[2] == 0 || nums[1] < nums[0] {
        return Err(bad());
    }
    Ok((nums[0]..=nums[1]).step_by(nums[2]).collect())
}

fn parse_gap(spec: &str) -> Result<GapPolicy> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["fixed", d] => Ok(GapPolicy::Fixed(
            d.parse().map_err(|_| Error::Domain(format!("bad gap '{spec}'")))?,
        )),
        ["random", lo, hi] => Ok(GapPolicy::Random {
            lo: lo.parse().map_err(|_| Error::Domain(format!("bad gap '{spec}'")))?,
            hi: hi.parse().map_err(|_| Error::Domain(format!("bad gap '{spec}'")))?,
        }),
        _ => Err(Error::Domain(format!("bad gap '{spec}', expected fixed:D or random:LO:HI"))),
    }
}

fn store_for(n: usize) -> Result<PrimeStore> {
    PrimeStore::sieve(required_limit(n))
}

fn write_plot(script: &Path, csv: &Path, ylabel: &str) -> Result<()> {
    let text = format!(
        "set datafile commentschars '#'\nset datafile separator ','\nset ylabel '{ylabel}'\nplot '{}' using 1:2 with lines title '{ylabel}'\n",
        csv.display()
    );
    std::fs::write(script, text).map_err(|e| Error::Resource(format!("cannot write plot script: {e}")))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    }
    let out = &cli.out;
    match cli.cmd {
        Cmd::Primes { count } => {
            let store = store_for(count)?;
            let m = RunManifest::new("primes").param("count", count);
            let mut w = csv_file(out, &m, &["n", "p", "li"])?;
            for (i, &p) in store.first_n(count)?.iter().enumerate() {
                w.row(&[
                    (i + 1).to_string(),
                    p.to_string(),
                    fmt_float(log_integral(p as f64)?),
                ])?;
            }
            w.finish()?;
        }
        Cmd::Chars { q } => {
            let chars = enumerate_characters(q)?;
            let m = RunManifest::new("chars").param("q", q);
            let mut w = csv_file(out, &m, &["label", "order", "parity", "conductor", "primitive", "values"])?;
            for c in &chars {
                let values: Vec<String> = (0..q)
                    .map(|r| match c.angle_fraction(r as i64) {
                        None => "0".to_string(),
                        Some((num, den)) => format!("e({num}/{den})"),
                    })
                    .collect();
                w.row(&[
                    c.label.unwrap_or(0).to_string(),
                    c.order().to_string(),
                    c.parity().to_string(),
                    c.conductor().to_string(),
                    c.is_primitive().to_string(),
                    values.join(";"),
                ])?;
            }
            w.finish()?;
        }
        Cmd::Series { sel, t, n, stride, exponent } => {
            let chi = sel.resolve()?;
            let store = store_for(n)?;
            let trace = b_series(&chi, t, n, &store)?;
            let m = RunManifest::new("series")
                .param("q", sel.q)
                .param("chi", sel.chi)
                .param("t", fmt_float(t))
                .param("n", n);
            if exponent {
                let (alpha, stderr) = scaling_exponent(&trace, (n / 10).max(100), n)?;
                let mut w = csv_file(out, &m.param("mode", "exponent"), &["n_lo", "n_hi", "alpha", "stderr"])?;
                w.row(&[
                    (n / 10).max(100).to_string(),
                    n.to_string(),
                    fmt_float(alpha),
                    fmt_float(stderr),
                ])?;
                w.finish()?;
            } else {
                let mut w = csv_file(out, &m.param("stride", stride), &["n", "B"])?;
                for i in (stride - 1..trace.values.len()).step_by(stride) {
                    w.row(&[(i + 1).to_string(), fmt_float(trace.values[i])])?;
                }
                w.finish()?;
            }
        }
        Cmd::Ensemble { cmd: EnsembleCmd::Clt { sel, t, m: m_max, n, states, seed } } => {
            let chi = sel.resolve()?;
            let store = store_for(n)?;
            let rep = clt_experiment(&chi, t, m_max, n, states, seed, &store)?;
            let man = RunManifest::new("ensemble clt")
                .param("q", sel.q)
                .param("chi", sel.chi)
                .param("t", fmt_float(t))
                .param("m", m_max)
                .param("n", n)
                .param("states", states)
                .param("mean", fmt_float(rep.mean))
                .param("std", fmt_float(rep.std))
                .seed(seed);
            let mut w = csv_file(out, &man, &["state", "statistic"])?;
            for (i, s) in rep.samples.iter().enumerate() {
                w.row(&[i.to_string(), fmt_float(*s)])?;
            }
            w.finish()?;
        }
        Cmd::Lfunc { cmd } => match cmd {
            LfuncCmd::Scan { sel, sigma, t0, t1, step, method, seed, m: m_max, n } => {
                let chi = sel.resolve()?;
                let grid = lfunc::TGrid::new(t0, t1, step)?;
                let man = RunManifest::new("lfunc scan")
                    .param("q", sel.q)
                    .param("chi", sel.chi)
                    .param("sigma", fmt_float(sigma))
                    .param("method", &method)
                    .seed(seed);
                let scan = match method.as_str() {
                    "hurwitz" => lfunc::scan_hurwitz(&chi, sigma, grid, lfunc::DEPTH_THRESHOLD)?,
                    "euler" => {
                        let store = store_for(n)?;
                        lfunc::scan_euler_product(&chi, sigma, grid, n, None, lfunc::DEPTH_THRESHOLD, &store)?
                    }
                    "euler-random" => {
                        let store = store_for(n)?;
                        let state = sample_state(sel.q, m_max, n, seed);
                        lfunc::scan_euler_product(&chi, sigma, grid, n, Some(&state), lfunc::DEPTH_THRESHOLD, &store)?
                    }
                    other => return Err(Error::Domain(format!("unknown method '{other}'"))),
                };
                let mut w = csv_file(out, &man, &["t", "absL"])?;
                for (i, v) in scan.values.iter().enumerate() {
                    w.row(&[fmt_float(grid.t(i)), fmt_float(*v)])?;
                }
                w.finish()?;
            }
            LfuncCmd::FeCheck { sel } => {
                let chi = sel.resolve()?;
                let man = RunManifest::new("lfunc fe-check").param("q", sel.q).param("chi", sel.chi);
                let mut w = csv_file(out, &man, &["sigma", "t", "residual"])?;
                for i in 0..4 {
                    for j in 0..5 {
                        let s = Complex64::new(0.2 + 0.2 * i as f64, 2.0 * j as f64 + 1.0);
                        w.row(&[
                            fmt_float(s.re),
                            fmt_float(s.im),
                            fmt_float(lfunc::functional_equation_residual(s, &chi)?),
                        ])?;
                    }
                }
                w.finish()?;
            }
            LfuncCmd::Chernoff { sigma, t0, t1, step, n } => {
                let grid = lfunc::TGrid::new(t0, t1, step)?;
                let scan = lfunc::scan_chernoff(sigma, grid, n, lfunc::DEPTH_THRESHOLD)?;
                let man = RunManifest::new("lfunc chernoff")
                    .param("sigma", fmt_float(sigma))
                    .param("n", n);
                let mut w = csv_file(out, &man, &["t", "absZ"])?;
                for (i, v) in scan.values.iter().enumerate() {
                    w.row(&[fmt_float(grid.t(i)), fmt_float(*v)])?;
                }
                w.finish()?;
            }
        },
        Cmd::Stats { cmd } => match cmd {
            StatsCmd::Freq { sel, n } => {
                let chi = sel.resolve()?;
                let store = store_for(n)?;
                let f = frequencies(&chi, n, &store)?;
                let man = RunManifest::new("stats freq").param("q", sel.q).param("chi", sel.chi).param("n", n);
                let mut w = csv_file(out, &man, &["angle", "frequency"])?;
                for (a, v) in f.iter().enumerate() {
                    w.row(&[(a + 1).to_string(), fmt_float(*v)])?;
                }
                w.finish()?;
            }
            StatsCmd::Window { sel, ell, n } => {
                let chi = sel.resolve()?;
                let store = store_for(ell + n)?;
                let f = windowed_frequencies(&chi, ell, n, &store)?;
                let man = RunManifest::new("stats window")
                    .param("q", sel.q)
                    .param("chi", sel.chi)
                    .param("ell", ell)
                    .param("n", n);
                let mut w = csv_file(out, &man, &["angle", "frequency"])?;
                for (a, v) in f.iter().enumerate() {
                    w.row(&[(a + 1).to_string(), fmt_float(*v)])?;
                }
                w.finish()?;
            }
            StatsCmd::Trans { sel, k, n } => {
                let chi = sel.resolve()?;
                let store = store_for(n)?;
                let t = transition_matrix(&chi, k, n, &store)?;
                let man = RunManifest::new("stats trans")
                    .param("q", sel.q)
                    .param("chi", sel.chi)
                    .param("k", k)
                    .param("n", n);
                let mut w = csv_file(out, &man, &["a", "b", "count", "prob"])?;
                for (i, &a) in t.labels.iter().enumerate() {
                    for (j, &b) in t.labels.iter().enumerate() {
                        w.row(&[
                            a.to_string(),
                            b.to_string(),
                            t.counts[i][j].to_string(),
                            fmt_float(t.probs[i][j]),
                        ])?;
                    }
                }
                w.finish()?;
            }
            StatsCmd::Markov { sel, k, n } => {
                let chi = sel.resolve()?;
                let store = store_for(n)?;
                let r = markov_residual(&chi, k, n, &store)?;
                let man = RunManifest::new("stats markov")
                    .param("q", sel.q)
                    .param("chi", sel.chi)
                    .param("k", k)
                    .param("n", n);
                let mut w = csv_file(out, &man, &["k", "residual"])?;
                w.row(&[k.to_string(), fmt_float(r)])?;
                w.finish()?;
            }
            StatsCmd::Los { q, k, n } => {
                let store = store_for(n)?;
                let cmp = los_compare(q, k, n, &store)?;
                let man = RunManifest::new("stats los").param("q", q).param("k", k).param("n", n);
                let mut w = csv_file(out, &man, &["a", "b", "empirical", "predicted", "band"])?;
                for (i, &a) in cmp.residues.iter().enumerate() {
                    for (j, &b) in cmp.residues.iter().enumerate() {
                        let predicted = if i == j {
                            cmp.predicted.diag
                        } else if k == 1 {
                            cmp.predicted.offdiag / 2.0 // symmetric sum split evenly
                        } else {
                            cmp.predicted.offdiag
                        };
                        w.row(&[
                            a.to_string(),
                            b.to_string(),
                            fmt_float(cmp.empirical[i][j]),
                            fmt_float(predicted),
                            fmt_float(cmp.predicted.band),
                        ])?;
                    }
                }
                w.finish()?;
            }
            StatsCmd::Acf { sel, n, maxlag } => {
                let chi = sel.resolve()?;
                let store = store_for(n)?;
                let lut = chi.cos_table();
                let series: Vec<f64> = store.first_n(n)?
                    .iter()
                    .map(|&p| lut[(p as u64 % sel.q) as usize])
                    .collect();
                let c = autocorrelation(&series, maxlag)?;
                let man = RunManifest::new("stats acf")
                    .param("q", sel.q)
                    .param("chi", sel.chi)
                    .param("n", n)
                    .param("maxlag", maxlag);
                let mut w = csv_file(out, &man, &["j", "C"])?;
                for (j, v) in c.iter().enumerate() {
                    w.row(&[j.to_string(), fmt_float(*v)])?;
                }
                w.finish()?;
            }
            StatsCmd::Spectrum { sel, n, maxlag } => {
                let chi = sel.resolve()?;
                let store = store_for(n)?;
                let lut = chi.cos_table();
                let series: Vec<f64> = store.first_n(n)?
                    .iter()
                    .map(|&p| lut[(p as u64 % sel.q) as usize])
                    .collect();
                let f = spectral_density(&autocorrelation(&series, maxlag)?);
                let man = RunManifest::new("stats spectrum")
                    .param("q", sel.q)
                    .param("chi", sel.chi)
                    .param("n", n)
                    .param("maxlag", maxlag);
                let mut w = csv_file(out, &man, &["k", "F"])?;
                for (k, v) in f.iter().enumerate() {
                    w.row(&[k.to_string(), fmt_float(*v)])?;
                }
                w.finish()?;
            }
        },
        Cmd::Blocks { sel, n1, n2, n_list, gap, seed, per_block } => {
            let chi = sel.resolve()?;
            let lengths = parse_range(&n_list)?;
            let gap = parse_gap(&gap)?;
            let store = store_for(n2)?;
            let template = EnsembleSpec { n1, n2, n: 0, gap, seed };
            let man = RunManifest::new("blocks")
                .param("q", sel.q)
                .param("chi", sel.chi)
                .param("n1", n1)
                .param("n2", n2)
                .param("n_list", &n_list)
                .seed(seed);
            let mut rows = Vec::new();
            for &n in &lengths {
                let spec = EnsembleSpec { n, ..template };
                let samples = build_ensemble(&chi, &spec, &store)?;
                let mean = samples.iter().map(|s| s.value).sum::<f64>() / samples.len() as f64;
                let var = samples.iter().map(|s| (s.value - mean) * (s.value - mean)).sum::<f64>()
                    / samples.len() as f64;
                rows.push((n, mean, var, predicted_variance(&chi, n, n1, &store)?));
                if per_block {
                    let path = out.with_extension(format!("n{n}.csv"));
                    let mut w = csv_file(&path, &man, &["ell", "C", "Ctilde"])?;
                    for s in &samples {
                        w.row(&[s.ell.to_string(), fmt_float(s.value), fmt_float(s.normalized)])?;
                    }
                    w.finish()?;
                }
            }
            let fit = variance_regression(&chi, &lengths, &template, &store)?;
            let man = man
                .param("slope", fmt_float(fit.slope))
                .param("intercept", fmt_float(fit.intercept))
                .param("stderr", fmt_float(fit.stderr));
            let mut w = csv_file(out, &man, &["N", "mean", "var", "predicted_var"])?;
            for (n, mean, var, pv) in rows {
                w.row(&[n.to_string(), fmt_float(mean), fmt_float(var), fmt_float(pv)])?;
            }
            w.finish()?;
        }
        Cmd::Kac { cmd } => match cmd {
            KacCmd::Hist { kind, n, t_width, samples, seed } => {
                let (kind, store) = match kind.as_str() {
                    "irrationals" => (FrequencyKind::IndependentIrrationals, None),
                    "log-integers" => (FrequencyKind::LogIntegers, None),
                    "log-primes" => (FrequencyKind::LogPrimes, Some(store_for(n)?)),
                    other => return Err(Error::Domain(format!("unknown kind '{other}'"))),
                };
                let freq = FrequencySet::build(kind, n, store.as_ref())?;
                let rep = kac_histogram(&freq, t_width, samples, seed)?;
                let man = RunManifest::new("kac hist")
                    .param("kind", format!("{kind:?}"))
                    .param("n", n)
                    .param("t_width", fmt_float(t_width))
                    .param("mean", fmt_float(rep.mean))
                    .param("std", fmt_float(rep.std))
                    .seed(seed);
                let mut w = csv_file(out, &man, &["sample", "F"])?;
                for (i, s) in rep.samples.iter().enumerate() {
                    w.row(&[i.to_string(), fmt_float(*s)])?;
                }
                w.finish()?;
            }
            KacCmd::Weyl { kind, n, m } => {
                let seq: Vec<f64> = match kind.as_str() {
                    "golden" => {
                        let golden = (1.0 + 5f64.sqrt()) / 2.0;
                        (1..=n).map(|k| k as f64 * golden).collect()
                    }
                    "log-integers" => (1..=n).map(|k| (k as f64).ln()).collect(),
                    "log-primes" => store_for(n)?
                        .first_n(n)?
                        .iter()
                        .map(|&p| (p as f64).ln())
                        .collect(),
                    other => return Err(Error::Domain(format!("unknown kind '{other}'"))),
                };
                let checkpoints: Vec<usize> =
                    (1..).map(|k| 1 << k).take_while(|&c| c <= n).chain([n]).collect();
                let trace = weyl_sum(&seq, m, &checkpoints)?;
                let man = RunManifest::new("kac weyl").param("kind", kind).param("n", n).param("m", m);
                let mut w = csv_file(out, &man, &["n", "magnitude"])?;
                for (cp, mag) in trace {
                    w.row(&[cp.to_string(), fmt_float(mag)])?;
                }
                w.finish()?;
            }
        },
        Cmd::Repro { cmd } => run_repro(cmd, out)?,
    }
    if let Some(script) = &cli.plot_script {
        write_plot(script, out, "value")?;
    }
    Ok(())
}

/// The canonical row labels of the two reference characters mod 7: the
/// order-6 character mapping 3 to e(1/6) and the order-3 character mapping
/// 3 to e(1/3).
fn reference_char(q: u64, order: u64, at3_num: i64, at3_den: u64) -> Result<DirichletCharacter> {
    let chars = enumerate_characters(q)?;
    chars
        .iter()
        .find(|c| c.order() == order && c.angle_fraction(3) == Some((at3_num, at3_den)))
        .cloned()
        .ok_or_else(|| Error::Domain("reference character not found".into()))
}

fn freq_table(chi: &DirichletCharacter, max_pow: u32, name: &str, out: &Path) -> Result<()> {
    let cols: Vec<usize> = (3..=max_pow).map(|k| 5usize.pow(k)).collect();
    let store = store_for(*cols.last().unwrap())?;
    let man = RunManifest::new(name).param("q", chi.modulus()).param("max_pow", max_pow);
    let header: Vec<String> = std::iter::once("angle".to_string())
        .chain(cols.iter().map(|n| format!("N{n}")))
        .collect();
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut w = csv_file(out, &man, &header_refs)?;
    let per_col: Vec<Vec<f64>> = cols
        .iter()
        .map(|&n| frequencies(chi, n, &store))
        .collect::<Result<_>>()?;
    for a in 0..chi.order() as usize {
        let mut row = vec![(a + 1).to_string()];
        row.extend(per_col.iter().map(|f| fmt_float(f[a])));
        w.row(&row)?;
    }
    w.finish()
}

fn blocks_summary(q: u64, n2: usize, seed: u64, name: &str, out: &Path) -> Result<()> {
    let chars = enumerate_characters(q)?;
    let store = store_for(n2)?;
    let lengths: Vec<usize> = (1000..=6000).step_by(250).collect();
    let template = EnsembleSpec {
        n1: 100_000.min(n2 / 10),
        n2,
        n: 0,
        gap: GapPolicy::Random { lo: 400, hi: 1200 },
        seed,
    };
    let man = RunManifest::new(name).param("q", q).param("n2", n2).seed(seed);
    let mut w = csv_file(out, &man, &["chi", "slope", "intercept", "stderr"])?;
    for chi in chars.iter().filter(|c| !c.is_principal()) {
        let fit = variance_regression(chi, &lengths, &template, &store)?;
        w.row(&[
            chi.label.unwrap_or(0).to_string(),
            fmt_float(fit.slope),
            fmt_float(fit.intercept),
            fmt_float(fit.stderr),
        ])?;
    }
    w.finish()
}

fn run_repro(cmd: ReproCmd, out: &Path) -> Result<()> {
    match cmd {
        ReproCmd::Table2 { max_pow } => {
            freq_table(&reference_char(7, 6, 1, 6)?, max_pow, "repro table2", out)?;
        }
        ReproCmd::Table3 { max_pow } => {
            freq_table(&reference_char(7, 3, 1, 3)?, max_pow, "repro table3", out)?;
        }
        ReproCmd::Table4 => {
            let chi = reference_char(7, 6, 1, 6)?;
            let store = store_for(810_000)?;
            let man = RunManifest::new("repro table4").param("q", 7).param("n", 10_000);
            let mut w = csv_file(out, &man, &["angle", "l1e5", "l2e5", "l3e5", "l4e5", "l5e5", "l6e5", "l7e5", "l8e5"])?;
            let cols: Vec<Vec<f64>> = (1..=8)
                .map(|k| windowed_frequencies(&chi, k * 100_000, 10_000, &store))
                .collect::<Result<_>>()?;
            for a in 0..6 {
                let mut row = vec![(a + 1).to_string()];
                row.extend(cols.iter().map(|f| fmt_float(f[a])));
                w.row(&row)?;
            }
            w.finish()?;
        }
        ReproCmd::Matrix1 | ReproCmd::Matrix6 => {
            let k = if matches!(cmd, ReproCmd::Matrix1) { 1 } else { 6 };
            let chi = reference_char(7, 6, 1, 6)?;
            let n = 5usize.pow(9);
            let store = store_for(n)?;
            let t = transition_matrix(&chi, k, n, &store)?;
            let man = RunManifest::new("repro matrix").param("q", 7).param("k", k).param("n", n);
            let mut w = csv_file(out, &man, &["a", "b", "prob"])?;
            for (i, &a) in t.labels.iter().enumerate() {
                for (j, &b) in t.labels.iter().enumerate() {
                    w.row(&[a.to_string(), b.to_string(), fmt_float(t.probs[i][j])])?;
                }
            }
            w.finish()?;
        }
        ReproCmd::Table5 { n2, seed } => blocks_summary(5, n2, seed, "repro table5", out)?,
        ReproCmd::Table6 { n2, seed } => blocks_summary(7, n2, seed, "repro table6", out)?,
        ReproCmd::FigLpdir { seed } => {
            let chars = enumerate_characters(3)?;
            let chi = chars
                .iter()
                .find(|c| !c.is_principal())
                .ok_or_else(|| Error::Domain("no non-principal character mod 3".into()))?;
            let n = 1_000_000;
            let store = store_for(n)?;
            let state = sample_state(3, 2, n, seed);
            let grid = lfunc::TGrid::new(0.0, 25.0, 0.005)?;
            let rep = lfunc::gs_zero_match(chi, &state, 0.5, grid, n, &store)?;
            let man = RunManifest::new("repro fig-lpdir")
                .param("q", 3)
                .param("n", n)
                .param("max_pair_distance", fmt_float(rep.max_distance))
                .seed(seed);
            let mut w = csv_file(out, &man, &["t", "absL", "absProduct"])?;
            for i in 0..grid.len() {
                w.row(&[
                    fmt_float(grid.t(i)),
                    fmt_float(rep.analytic.values[i]),
                    fmt_float(rep.product.values[i]),
                ])?;
            }
            w.finish()?;
        }
        ReproCmd::FigCltDir { seed } => {
            let chars = enumerate_characters(3)?;
            let chi = chars
                .iter()
                .find(|c| !c.is_principal())
                .ok_or_else(|| Error::Domain("no non-principal character mod 3".into()))?;
            let n = 10_000;
            let store = store_for(n)?;
            let rep = clt_experiment(chi, 100.0, 3, n, 20_000, seed, &store)?;
            let man = RunManifest::new("repro fig-clt-dir")
                .param("q", 3)
                .param("n", n)
                .param("mean", fmt_float(rep.mean))
                .param("std", fmt_float(rep.std))
                .seed(seed);
            let mut w = csv_file(out, &man, &["state", "statistic"])?;
            for (i, s) in rep.samples.iter().enumerate() {
                w.row(&[i.to_string(), fmt_float(*s)])?;
            }
            w.finish()?;
        }
        ReproCmd::FigBlocks { seed } => {
            let chi = reference_char(7, 6, 1, 6)?;
            let n = 6000;
            let blocks = 10_000usize;
            let n1 = 100_000;
            let n2 = n1 + blocks * (n + 100) + 1;
            let store = store_for(n2)?;
            let spec = EnsembleSpec { n1, n2, n, gap: GapPolicy::Fixed(100), seed };
            let samples = build_ensemble(&chi, &spec, &store)?;
            let normalized: Vec<f64> = samples
                .iter()
                .map(|s| Ok(s.value / predicted_variance(&chi, n, s.ell, &store)?.sqrt()))
                .collect::<Result<_>>()?;
            let (mu, sigma, ks) = normality_fit(&normalized)?;
            let man = RunManifest::new("repro fig-blocks")
                .param("q", 7)
                .param("n", n)
                .param("blocks", samples.len())
                .param("mean", fmt_float(mu))
                .param("std", fmt_float(sigma))
                .param("ks", fmt_float(ks))
                .seed(seed);
            let mut w = csv_file(out, &man, &["ell", "normalized"])?;
            for (s, v) in samples.iter().zip(&normalized) {
                w.row(&[s.ell.to_string(), fmt_float(*v)])?;
            }
            w.finish()?;
        }
        ReproCmd::FigKac { seed } => {
            let freq = FrequencySet::build(FrequencyKind::IndependentIrrationals, 1000, None)?;
            let rep = kac_histogram(&freq, 1e5, 20_000, seed)?;
            let man = RunManifest::new("repro fig-kac")
                .param("n", 1000)
                .param("mean", fmt_float(rep.mean))
                .param("std", fmt_float(rep.std))
                .seed(seed);
            let mut w = csv_file(out, &man, &["sample", "F"])?;
            for (i, s) in rep.samples.iter().enumerate() {
                w.row(&[i.to_string(), fmt_float(*s)])?;
            }
            w.finish()?;
        }
    }
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version paths exit 0; anything else is usage
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
