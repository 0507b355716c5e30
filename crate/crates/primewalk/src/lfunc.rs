//! Numerical L-functions: Hurwitz-zeta combination, direct series, truncated
//! Euler products (plain, randomized, and the n*log n variant), completed-form
//! functional-equation residuals, and critical-line scans with zero candidates.

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::primes::PrimeStore;
use crate::random_ensemble::RandomPrimeState;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

fn cpow(base: f64, s: Complex64) -> Complex64 {
    // base^s for real base > 0
    (s * base.ln()).exp()
}

/// Gamma via the Lanczos approximation (g = 7, 9 coefficients), reflection for
/// Re s < 1/2. Relative accuracy ~1e-13 over the arguments used here.
pub fn gamma(s: Complex64) -> Complex64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if s.re < 0.5 {
        // reflection: Gamma(s) = pi / (sin(pi s) Gamma(1 - s))
        return PI / ((PI * s).sin() * gamma(Complex64::new(1.0, 0.0) - s));
    }
    let z = s - 1.0;
    let mut x = Complex64::new(G[0], 0.0);
    for (i, &c) in G.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + 7.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Hurwitz zeta(s, a) for a in (0,1], s != 1, by Euler-Maclaurin summation
/// with Bernoulli corrections through B10. Good to ~1e-10 relative for
/// |Im s| <= 100, Re s >= -1.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("hurwitz_zeta needs a in (0,1], got {a}")));
    }
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Domain("hurwitz_zeta pole at s = 1".into()));
    }
    // B_{2j}/(2j)! for j = 1..5
    const COEFF: [f64; 5] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30_240.0,
        -1.0 / 1_209_600.0,
        1.0 / 47_900_160.0,
    ];
    let m_terms = 30 + (2.0 * s.im.abs()) as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..m_terms {
        sum += cpow(m as f64 + a, -s);
    }
    let w = m_terms as f64 + a;
    sum += cpow(w, 1.0 - s) / (s - 1.0);
    sum += 0.5 * cpow(w, -s);
    // j-th correction: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * w^{-s-2j+1}
    let mut rising = Complex64::new(1.0, 0.0);
    let mut k = 0usize;
    for (j, &c) in COEFF.iter().enumerate() {
        let factors = 2 * (j + 1) - 1;
        while k < factors {
            rising *= s + k as f64;
            k += 1;
        }
        sum += c * rising * cpow(w, -(s + (2 * (j + 1) - 1) as f64));
    }
    Ok(sum)
}

/// Truncated Dirichlet series with its a-priori tail bound.
pub struct SeriesSum {
    pub value: Complex64,
    /// tail bound terms^(1-sigma)/(sigma-1); infinite when sigma <= 1
    pub remainder: f64,
    /// true iff sigma > 1 (the bound is meaningful)
    pub convergent: bool,
}

/// Direct sum of chi(m)/m^s over m = 1..terms.
pub fn l_series(s: Complex64, chi: &DirichletCharacter, terms: u64) -> SeriesSum {
    let q = chi.modulus();
    let vals: Vec<Complex64> = (0..q).map(|r| chi.eval(r as i64).to_complex()).collect();
    let mut value = Complex64::new(0.0, 0.0);
    for m in 1..=terms {
        let c = vals[(m % q) as usize];
        if c != Complex64::new(0.0, 0.0) {
            value += c * cpow(m as f64, -s);
        }
    }
    let convergent = s.re > 1.0;
    let remainder = if convergent && terms > 0 {
        (terms as f64).powf(1.0 - s.re) / (s.re - 1.0)
    } else {
        f64::INFINITY
    };
    SeriesSum { value, remainder, convergent }
}

/// Digamma for x > 0: recurrence up to x >= 10, then the asymptotic series.
fn digamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    acc + x.ln() - 0.5 * inv
        - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)))
}

/// L(s, chi) = q^-s * sum_r chi(r) zeta(s, r/q). Valid for Re s > -1, s != 1
/// when chi is principal (simple pole, residue phi(q)/q). Non-principal
/// characters are entire; at s = 1 the per-term poles cancel and the value is
/// -(1/q) sum_r chi(r) psi(r/q).
pub fn l_hurwitz(s: Complex64, chi: &DirichletCharacter) -> Result<Complex64> {
    let q = chi.modulus();
    if s.re == 1.0 && s.im == 0.0 {
        if chi.is_principal() {
            let phi = crate::characters::totient(q);
            return Err(Error::Domain(format!(
                "pole at s = 1 for the principal character, residue {}/{} = {}",
                phi,
                q,
                phi as f64 / q as f64
            )));
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for r in 1..=q {
            let c = chi.eval(r as i64).to_complex();
            if c != Complex64::new(0.0, 0.0) {
                sum += c * digamma(r as f64 / q as f64);
            }
        }
        return Ok(-sum / q as f64);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for r in 1..=q {
        let c = chi.eval(r as i64).to_complex();
        if c != Complex64::new(0.0, 0.0) {
            sum += c * hurwitz_zeta(s, r as f64 / q as f64)?;
        }
    }
    Ok(cpow(q as f64, -s) * sum)
}

/// -log(1 - z), exact for large |z|, series for |z| < 1/8 (error < |z|^9).
fn neg_ln_1m(z: Complex64) -> Complex64 {
    if z.norm_sqr() > 0.015_625 {
        -(Complex64::new(1.0, 0.0) - z).ln()
    } else {
        // z + z^2/2 + ... + z^8/8
        let mut acc = Complex64::new(0.0, 0.0);
        let mut zp = z;
        for k in 1..=8 {
            acc += zp / k as f64;
            zp *= z;
        }
        acc
    }
}

/// Truncated Euler product over the first n primes; an optional random state
/// substitutes p' for p in the magnitude while the angle stays chi(p).
/// Computed as exp(-sum log(1 - chi(p) p^-s)).
pub fn euler_product(
    s: Complex64,
    chi: &DirichletCharacter,
    n: usize,
    state: Option<&RandomPrimeState>,
    store: &PrimeStore,
) -> Result<Complex64> {
    if let Some(st) = state {
        if st.q != chi.modulus() {
            return Err(Error::Domain(format!(
                "state modulus {} != character modulus {}",
                st.q,
                chi.modulus()
            )));
        }
        if st.offsets.len() < n {
            return Err(Error::Domain(format!(
                "state holds {} offsets, {} primes requested",
                st.offsets.len(),
                n
            )));
        }
    }
    let primes = store.first_n(n)?;
    let q = chi.modulus();
    let vals: Vec<Complex64> = (0..q).map(|r| chi.eval(r as i64).to_complex()).collect();
    let mut log_sum = Complex64::new(0.0, 0.0);
    for (i, &p) in primes.iter().enumerate() {
        let c = vals[(p as u64 % q) as usize];
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let pp = match state {
            Some(st) => st.shifted(p as u64, i + 1) as f64,
            None => p as f64,
        };
        let z = c * cpow(pp, -s);
        if (Complex64::new(1.0, 0.0) - z).norm() < 1e-12 {
            return Err(Error::Degenerate(format!("singular Euler factor at p = {pp}")));
        }
        log_sum += neg_ln_1m(z);
    }
    Ok(log_sum.exp())
}

/// Truncated product over n' = 2..=n of (1 - (n' log n')^-s)^-1.
pub fn chernoff_product(s: Complex64, n: u64) -> Result<Complex64> {
    if n < 2 {
        return Err(Error::Domain(format!("chernoff_product needs n >= 2, got {n}")));
    }
    let mut log_sum = Complex64::new(0.0, 0.0);
    for m in 2..=n {
        let base = m as f64 * (m as f64).ln();
        log_sum += neg_ln_1m(cpow(base, -s));
    }
    Ok(log_sum.exp())
}

/// Uniform t grid for line scans.
#[derive(Clone, Copy, Debug)]
pub struct TGrid {
    pub t0: f64,
    pub t1: f64,
    pub step: f64,
}

impl TGrid {
    pub fn new(t0: f64, t1: f64, step: f64) -> Result<TGrid> {
        if !(step > 0.0 && t1 > t0) {
            return Err(Error::Domain(format!("bad grid [{t0}, {t1}] step {step}")));
        }
        Ok(TGrid { t0, t1, step })
    }

    pub fn len(&self) -> usize {
        ((self.t1 - self.t0) / self.step).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.step
    }
}

/// A zero candidate: parabolically refined minimum location and sampled depth.
#[derive(Clone, Copy, Debug)]
pub struct Minimum {
    pub t: f64,
    pub value: f64,
}

pub struct LineScan {
    pub sigma: f64,
    pub grid: TGrid,
    pub values: Vec<f64>,
    /// same scan at half the truncation length, when the evaluator truncates
    pub half_values: Option<Vec<f64>>,
    pub minima: Vec<Minimum>,
}

/// Default dip depth below which a strict local minimum counts as a candidate.
pub const DEPTH_THRESHOLD: f64 = 0.05;

/// Stability filter: a dip only counts when the half-truncation value agrees
/// within this relative tolerance.
pub const STABILITY_REL: f64 = 0.25;

fn extract_minima(grid: &TGrid, values: &[f64], half: Option<&[f64]>, depth: f64) -> Vec<Minimum> {
    let mut out = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        if b < a && b < c && b < depth {
            if let Some(h) = half {
                // dip must persist between truncation lengths
                let rel = (h[i] - b).abs() / b.abs().max(h[i].abs()).max(1e-300);
                if rel > STABILITY_REL {
                    continue;
                }
            }
            let denom = c - 2.0 * b + a;
            let dt = if denom > 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            out.push(Minimum { t: grid.t(i) + dt * grid.step, value: b });
        }
    }
    out
}

/// Sample |evaluator(sigma + it)| on the grid and collect minima below `depth`.
pub fn scan_line<F>(sigma: f64, grid: TGrid, depth: f64, evaluator: F) -> LineScan
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let values: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| evaluator(Complex64::new(sigma, grid.t(i))).norm())
        .collect();
    let minima = extract_minima(&grid, &values, None, depth);
    LineScan { sigma, grid, values, half_values: None, minima }
}

/// |L(sigma + it)| via the Hurwitz combination on the grid.
pub fn scan_hurwitz(chi: &DirichletCharacter, sigma: f64, grid: TGrid, depth: f64) -> Result<LineScan> {
    if chi.is_principal() && sigma == 1.0 && grid.t0 <= 0.0 {
        return Err(Error::Domain("grid passes through the s = 1 pole".into()));
    }
    let values: Result<Vec<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|i| Ok(l_hurwitz(Complex64::new(sigma, grid.t(i)), chi)?.norm()))
        .collect();
    let values = values?;
    let minima = extract_minima(&grid, &values, None, depth);
    Ok(LineScan { sigma, grid, values, half_values: None, minima })
}

/// Shared fast kernel: log-magnitude scans of products prod (1 - z_k(t))^-1
/// with z_k(t) = c_k e^{-i t log b_k}, via per-term phase recurrence
/// z <- z * e^{-i step log b}. Exact log(1-z) for the first `exact` terms,
/// degree-8 series beyond (|z| < 1/8 there). Returns (full, half) magnitudes,
/// `half` being the product truncated after the first half of the terms.
fn product_scan(grid: TGrid, c: &[Complex64], log_b: &[f64], exact: usize) -> (Vec<f64>, Vec<f64>) {
    let n = c.len();
    let half_n = n / 2;
    let mut z: Vec<Complex64> = c
        .iter()
        .zip(log_b)
        .map(|(&ck, &lb)| ck * Complex64::new(0.0, -grid.t0 * lb).exp())
        .collect();
    let rot: Vec<Complex64> = log_b
        .iter()
        .map(|&lb| Complex64::new(0.0, -grid.step * lb).exp())
        .collect();
    let steps = grid.len();
    let mut full = Vec::with_capacity(steps);
    let mut half = Vec::with_capacity(steps);
    for i in 0..steps {
        if i > 0 {
            for (zk, rk) in z.iter_mut().zip(&rot) {
                *zk *= *rk;
            }
        }
        let mut log_re = 0.0f64;
        let mut half_log_re = 0.0f64;
        for (k, &zk) in z.iter().enumerate() {
            let term = if k < exact {
                -((Complex64::new(1.0, 0.0) - zk).ln().re)
            } else {
                // Re(z + z^2/2 + z^3/3), error O(|z|^4) per term
                let z2 = zk * zk;
                (zk + 0.5 * z2 + z2 * zk / 3.0).re
            };
            log_re += term;
            if k + 1 == half_n {
                half_log_re = log_re;
            }
        }
        full.push(log_re.exp());
        half.push(half_log_re.exp());
    }
    (full, half)
}

/// Fast |Euler product| scan along sigma + it, optionally over a random state.
/// The half-truncation curve feeds the stability filter for zero candidates.
pub fn scan_euler_product(
    chi: &DirichletCharacter,
    sigma: f64,
    grid: TGrid,
    n: usize,
    state: Option<&RandomPrimeState>,
    depth: f64,
    store: &PrimeStore,
) -> Result<LineScan> {
    if let Some(st) = state {
        if st.q != chi.modulus() {
            return Err(Error::Domain("state/character modulus mismatch".into()));
        }
        if st.offsets.len() < n {
            return Err(Error::Domain("state shorter than requested prime count".into()));
        }
    }
    let primes = store.first_n(n)?;
    let q = chi.modulus();
    let vals: Vec<Complex64> = (0..q).map(|r| chi.eval(r as i64).to_complex()).collect();
    let mut c = Vec::with_capacity(n);
    let mut log_b = Vec::with_capacity(n);
    for (i, &p) in primes.iter().enumerate() {
        let cv = vals[(p as u64 % q) as usize];
        if cv == Complex64::new(0.0, 0.0) {
            continue;
        }
        let pp = match state {
            Some(st) => st.shifted(p as u64, i + 1) as f64,
            None => p as f64,
        };
        c.push(cv * pp.powf(-sigma));
        log_b.push(pp.ln());
    }
    // |z| = p^-sigma: below 1/8 once p > 8^(1/sigma); 168 covers sigma >= 1/2
    let exact = c.iter().take_while(|ck| ck.norm_sqr() > 0.015_625).count().max(1);
    let (values, half_values) = product_scan(grid, &c, &log_b, exact);
    let minima = extract_minima(&grid, &values, Some(&half_values), depth);
    Ok(LineScan { sigma, grid, values, half_values: Some(half_values), minima })
}

/// Fast scan of the n*log n product along sigma + it.
pub fn scan_chernoff(sigma: f64, grid: TGrid, n: u64, depth: f64) -> Result<LineScan> {
    if n < 2 {
        return Err(Error::Domain(format!("chernoff scan needs n >= 2, got {n}")));
    }
    let mut c = Vec::with_capacity((n - 1) as usize);
    let mut log_b = Vec::with_capacity((n - 1) as usize);
    for m in 2..=n {
        let base = m as f64 * (m as f64).ln();
        c.push(Complex64::new(base.powf(-sigma), 0.0));
        log_b.push(base.ln());
    }
    let exact = c.iter().take_while(|ck| ck.norm_sqr() > 0.015_625).count().max(1);
    let (values, half_values) = product_scan(grid, &c, &log_b, exact);
    let minima = extract_minima(&grid, &values, Some(&half_values), depth);
    Ok(LineScan { sigma, grid, values, half_values: Some(half_values), minima })
}

/// Pairing of analytic-side zero candidates against randomized-product dips.
pub struct ZeroMatchReport {
    pub analytic: LineScan,
    pub product: LineScan,
    /// (analytic t*, product t*, |difference|)
    pub pairs: Vec<(f64, f64, f64)>,
    pub unpaired_analytic: usize,
    pub max_distance: f64,
}

/// Scan |L| (Hurwitz) and the randomized Euler product on the same grid; pair
/// each |L| minimum with the nearest product minimum. Product dips are kept
/// when below 0.6x the scan median (the truncated product does not reach 0).
pub fn gs_zero_match(
    chi: &DirichletCharacter,
    state: &RandomPrimeState,
    sigma: f64,
    grid: TGrid,
    n: usize,
    store: &PrimeStore,
) -> Result<ZeroMatchReport> {
    let analytic = scan_hurwitz(chi, sigma, grid, DEPTH_THRESHOLD)?;
    let mut product = scan_euler_product(chi, sigma, grid, n, Some(state), f64::INFINITY, store)?;
    let mut sorted = product.values.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    product.minima.retain(|m| m.value < 0.6 * median);
    let mut pairs = Vec::new();
    let mut unpaired = 0usize;
    let mut max_distance = 0.0f64;
    for am in &analytic.minima {
        match product
            .minima
            .iter()
            .min_by(|x, y| (x.t - am.t).abs().total_cmp(&(y.t - am.t).abs()))
        {
            Some(pm) => {
                let d = (pm.t - am.t).abs();
                max_distance = max_distance.max(d);
                pairs.push((am.t, pm.t, d));
            }
            None => unpaired += 1,
        }
    }
    Ok(ZeroMatchReport { analytic, product, pairs, unpaired_analytic: unpaired, max_distance })
}

/// Root number eps = G(chi) / (i^delta sqrt q), |eps| = 1 for primitive chi.
pub fn root_number(chi: &DirichletCharacter) -> Result<Complex64> {
    if !chi.is_primitive() {
        return Err(Error::Domain(format!(
            "root number needs a primitive character (conductor {} < modulus {})",
            chi.conductor(),
            chi.modulus()
        )));
    }
    let delta = chi.parity() as u32;
    let i_delta = Complex64::new(0.0, 1.0).powu(delta);
    Ok(chi.gauss_sum() / (i_delta * (chi.modulus() as f64).sqrt()))
}

/// Completed form Lambda(s) = (q/pi)^((s+delta)/2) Gamma((s+delta)/2) L(s,chi).
pub fn completed_l(s: Complex64, chi: &DirichletCharacter) -> Result<Complex64> {
    let delta = chi.parity() as f64;
    let half = (s + delta) / 2.0;
    Ok(cpow(chi.modulus() as f64 / PI, half) * gamma(half) * l_hurwitz(s, chi)?)
}

/// |Lambda(s, chi) - eps(chi) Lambda(1-s, conj chi)|; zero up to roundoff for
/// primitive characters.
pub fn functional_equation_residual(s: Complex64, chi: &DirichletCharacter) -> Result<f64> {
    let eps = root_number(chi)?;
    let lhs = completed_l(s, chi)?;
    let rhs = eps * completed_l(Complex64::new(1.0, 0.0) - s, &chi.conjugate())?;
    Ok((lhs - rhs).norm())
}

/// Expected count of critical-strip zeros with |Im| <= t: (t/pi) log(q t/(2 pi e)).
pub fn zero_count_estimate(q: u64, t: f64) -> f64 {
    (t / PI) * (q as f64 * t / (2.0 * PI * std::f64::consts::E)).ln()
}
