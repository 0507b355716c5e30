//! Dirichlet characters mod q with exact root-of-unity values: enumeration via
//! the unit-group decomposition, parity/order/primitivity, induction, Gauss sums.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Euler totient via the product over prime factors.
pub fn totient(q: u64) -> u64 {
    let mut n = q;
    let mut phi = q;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            phi -= phi / p;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

fn prime_power_factors(q: u64) -> Vec<(u64, u32)> {
    let mut n = q;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Exact value of a character: zero or e^{2 pi i num/den}, gcd-reduced, 0 <= num < den.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CharValue {
    Zero,
    Root { num: u64, den: u64 },
}

pub const ONE: CharValue = CharValue::Root { num: 0, den: 1 };

impl CharValue {
    pub fn root(num: u64, den: u64) -> CharValue {
        debug_assert!(den > 0);
        let num = num % den;
        let g = gcd(num, den);
        if num == 0 {
            ONE
        } else {
            CharValue::Root { num: num / g, den: den / g }
        }
    }

    pub fn mul(self, other: CharValue) -> CharValue {
        match (self, other) {
            (CharValue::Root { num: a, den: p }, CharValue::Root { num: b, den: q }) => {
                let den = lcm(p, q);
                CharValue::root(a * (den / p) + b * (den / q), den)
            }
            _ => CharValue::Zero,
        }
    }

    pub fn pow(self, k: u64) -> CharValue {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root { num, den } => CharValue::root(num % den * (k % den) % den, den),
        }
    }

    pub fn conj(self) -> CharValue {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root { num, den } => CharValue::root(den - num, den),
        }
    }

    /// Multiplicative order (1 for the value 1); None for Zero.
    pub fn order(self) -> Option<u64> {
        match self {
            CharValue::Zero => None,
            CharValue::Root { den, .. } => Some(den),
        }
    }

    /// Angle as an exact fraction of 2 pi, representative in (-1/2, 1/2]
    /// (so the angle itself lies in (-pi, pi]). None for Zero.
    pub fn angle_fraction(self) -> Option<(i64, u64)> {
        match self {
            CharValue::Zero => None,
            CharValue::Root { num, den } => {
                if 2 * num <= den {
                    Some((num as i64, den))
                } else {
                    Some((num as i64 - den as i64, den))
                }
            }
        }
    }

    /// Angle in radians in (-pi, pi]; None for Zero.
    pub fn angle(self) -> Option<f64> {
        self.angle_fraction().map(|(n, d)| 2.0 * PI * n as f64 / d as f64)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.angle() {
            None => Complex64::new(0.0, 0.0),
            Some(a) => Complex64::new(a.cos(), a.sin()),
        }
    }

    pub fn cos(self) -> f64 {
        self.angle().map_or(0.0, f64::cos)
    }

    pub fn is_real(self) -> bool {
        matches!(self, CharValue::Zero) || self.order().unwrap() <= 2
    }
}

/// A Dirichlet character mod q, stored as its full value row.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    q: u64,
    /// 1-based position in the canonical enumeration; None when constructed
    /// outside an enumeration (e.g. by induction).
    pub label: Option<usize>,
    values: Vec<CharValue>,
    order: u64,
    parity: u8,
    principal: bool,
    conductor: u64,
    /// Realized angle set, sorted ascending by angle in (-pi, pi].
    angles: Vec<CharValue>,
}

impl DirichletCharacter {
    fn from_values(q: u64, values: Vec<CharValue>) -> DirichletCharacter {
        let order = values
            .iter()
            .filter_map(|v| v.order())
            .fold(1, lcm);
        let parity = if q <= 2 {
            0
        } else {
            match values[(q - 1) as usize] {
                ONE => 0,
                _ => 1,
            }
        };
        let principal = values.iter().all(|v| matches!(v, CharValue::Zero) || *v == ONE);
        let mut angles: Vec<CharValue> = {
            let mut seen: Vec<CharValue> = Vec::new();
            for v in &values {
                if !matches!(v, CharValue::Zero) && !seen.contains(v) {
                    seen.push(*v);
                }
            }
            seen
        };
        angles.sort_by(|a, b| {
            let (an, ad) = a.angle_fraction().unwrap();
            let (bn, bd) = b.angle_fraction().unwrap();
            (an * bd as i64).cmp(&(bn * ad as i64))
        });
        let conductor = conductor_of(q, &values);
        DirichletCharacter { q, label: None, values, order, parity, principal, conductor, angles }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn values(&self) -> &[CharValue] {
        &self.values
    }

    /// chi(m) by table lookup; m is reduced mod q (any integer accepted).
    pub fn eval(&self, m: i64) -> CharValue {
        self.values[m.rem_euclid(self.q as i64) as usize]
    }

    /// Exact angle of chi(m) as a fraction of 2 pi in (-1/2, 1/2]; None on non-units.
    pub fn angle_fraction(&self, m: i64) -> Option<(i64, u64)> {
        self.eval(m).angle_fraction()
    }

    /// theta_m in (-pi, pi]; None on non-units.
    pub fn theta(&self, m: i64) -> Option<f64> {
        self.eval(m).angle()
    }

    /// Multiplicative order r = |Phi|.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Parity a: 0 if chi(-1) = 1 (even), 1 if chi(-1) = -1 (odd).
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_principal(&self) -> bool {
        self.principal
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.q
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// True when every value is real (order <= 2).
    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// Realized angles, sorted ascending — for full order r = phi(q) these are
    /// exactly the equally spaced alpha_1..alpha_r with alpha_k = pi(2k - r)/r.
    pub fn angle_set(&self) -> &[CharValue] {
        &self.angles
    }

    /// 1-based index of chi(m) in the sorted angle set; non-units map to the
    /// index of angle 0 (the residue-counting convention of the frequency
    /// tables, where the finitely many primes dividing q land in the zero
    /// bucket). Angle 0 is always realized (chi(1) = 1).
    pub fn angle_index(&self, m: i64) -> usize {
        let v = match self.eval(m) {
            CharValue::Zero => ONE,
            v => v,
        };
        1 + self.angles.iter().position(|a| *a == v).expect("value in angle set")
    }

    /// cos(theta_m) per residue class, with 0.0 on non-units — the walk weight
    /// table used by the series and block modules.
    pub fn cos_table(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.cos()).collect()
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        let mut chi = DirichletCharacter::from_values(self.q, self.values.iter().map(|v| v.conj()).collect());
        chi.label = None;
        chi
    }

    /// Gauss sum G(chi) = sum_{m=1}^{q} chi(m) e^{2 pi i m / q}.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.q as f64;
        (1..=self.q)
            .map(|m| {
                let phase = 2.0 * PI * m as f64 / q;
                self.values[(m % self.q) as usize].to_complex() * Complex64::new(phase.cos(), phase.sin())
            })
            .sum()
    }

    /// Character mod q_hat induced by `self`: chi_hat(m) = chi(m) on units of
    /// q_hat, zero elsewhere. Requires q | q_hat.
    pub fn induce(&self, q_hat: u64) -> Result<DirichletCharacter> {
        if q_hat == 0 || q_hat % self.q != 0 {
            return Err(Error::Domain(format!(
                "induce: {} does not divide {}",
                self.q, q_hat
            )));
        }
        let values = (0..q_hat)
            .map(|m| {
                if gcd(m, q_hat) == 1 {
                    self.values[(m % self.q) as usize]
                } else {
                    CharValue::Zero
                }
            })
            .collect();
        Ok(DirichletCharacter::from_values(q_hat, values))
    }
}

/// Smallest induced modulus d | q: chi(m) = 1 for every unit m = 1 (mod d).
fn conductor_of(q: u64, values: &[CharValue]) -> u64 {
    if q == 1 {
        return 1;
    }
    let mut divisors: Vec<u64> = (1..=q).filter(|d| q % d == 0).collect();
    divisors.sort();
    'outer: for &d in &divisors {
        for m in (1..q).filter(|&m| gcd(m, q) == 1 && m % d == 1 % d) {
            if values[m as usize] != ONE {
                continue 'outer;
            }
        }
        return d;
    }
    q
}

const ENUM_BOUND: u64 = 100_000;

/// Generators of (Z/qZ)* with their orders, plus a per-residue exponent map.
struct UnitGroup {
    orders: Vec<u64>,
    /// dlog[m] = exponent tuple of m on the generators; empty tuple slot for non-units.
    dlog: Vec<Option<Vec<u64>>>,
}

fn primitive_root(p: u64, pe: u64) -> u64 {
    // Smallest primitive root mod p, lifted to p^e if needed.
    let phi = p - 1;
    let factors = prime_power_factors(phi);
    let mut g = 2;
    loop {
        if factors.iter().all(|&(f, _)| pow_mod(g, phi / f, p) != 1) {
            break;
        }
        g += 1;
    }
    if pe == p {
        return g;
    }
    // g generates mod p^e unless g^(p-1) = 1 mod p^2.
    if pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

fn unit_group(q: u64) -> UnitGroup {
    // One cyclic factor per entry: (component modulus, order, dlog table).
    let mut factors: Vec<(u64, u64, Vec<u64>)> = Vec::new();
    let walk = |pe: u64, g: u64, d: u64| -> Vec<u64> {
        let mut table = vec![u64::MAX; pe as usize];
        let mut x = 1u64;
        for j in 0..d {
            table[x as usize] = j;
            x = x * g % pe;
        }
        table
    };
    for (p, e) in prime_power_factors(q) {
        let pe = p.pow(e);
        if p == 2 {
            match e {
                1 => {} // trivial unit group
                2 => factors.push((4, 2, walk(4, 3, 2))),
                _ => {
                    // (Z/2^e)* = {-1} x <5>: joint walk over (-1)^s 5^j.
                    let d5 = pe / 4;
                    let mut t_sign = vec![u64::MAX; pe as usize];
                    let mut t_five = vec![u64::MAX; pe as usize];
                    for s in 0..2u64 {
                        let mut x = if s == 0 { 1 } else { pe - 1 };
                        for j in 0..d5 {
                            t_sign[x as usize] = s;
                            t_five[x as usize] = j;
                            x = x * 5 % pe;
                        }
                    }
                    factors.push((pe, 2, t_sign));
                    factors.push((pe, d5, t_five));
                }
            }
        } else {
            let d = totient(pe);
            factors.push((pe, d, walk(pe, primitive_root(p, pe), d)));
        }
    }
    let orders: Vec<u64> = factors.iter().map(|f| f.1).collect();
    let dlog = (0..q)
        .map(|m| {
            if q == 1 {
                return Some(vec![]);
            }
            if gcd(m, q) != 1 {
                return None;
            }
            Some(
                factors
                    .iter()
                    .map(|&(pe, _, ref table)| {
                        let x = table[(m % pe) as usize];
                        debug_assert_ne!(x, u64::MAX);
                        x
                    })
                    .collect(),
            )
        })
        .collect();
    UnitGroup { orders, dlog }
}

/// All phi(q) Dirichlet characters mod q in canonical order: principal first,
/// then lexicographic by the value-row angle fractions.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    if q == 0 {
        return Err(Error::Domain("modulus 0".into()));
    }
    if q > ENUM_BOUND {
        return Err(Error::Resource(format!(
            "character enumeration bound is q <= {ENUM_BOUND}, got {q}"
        )));
    }
    if q == 1 {
        let mut chi = DirichletCharacter::from_values(1, vec![ONE]);
        chi.label = Some(1);
        return Ok(vec![chi]);
    }
    let group = unit_group(q);
    let phi = totient(q);
    // Exponent tuples c, odometer-style.
    let ngen = group.orders.len();
    let mut c = vec![0u64; ngen];
    let mut chars: Vec<DirichletCharacter> = Vec::with_capacity(phi as usize);
    loop {
        let values: Vec<CharValue> = (0..q)
            .map(|m| match &group.dlog[m as usize] {
                None => CharValue::Zero,
                Some(x) => {
                    // angle fraction = sum c_i x_i / d_i mod 1
                    let mut acc = ONE;
                    for i in 0..ngen {
                        acc = acc.mul(CharValue::root(c[i] * x[i] % group.orders[i], group.orders[i]));
                    }
                    acc
                }
            })
            .collect();
        chars.push(DirichletCharacter::from_values(q, values));
        // increment odometer
        let mut i = 0;
        loop {
            if i == ngen {
                debug_assert_eq!(chars.len(), phi as usize);
                // Canonical order: lexicographic by angle-fraction rows, with the
                // common denominator phi(q); Zero sorts last. The principal
                // character's row is minimal, so it lands first.
                chars.sort_by(|a, b| {
                    let key = |ch: &DirichletCharacter| -> Vec<u64> {
                        ch.values
                            .iter()
                            .map(|v| match v {
                                CharValue::Zero => u64::MAX,
                                CharValue::Root { num, den } => num * (phi / den),
                            })
                            .collect()
                    };
                    key(a).cmp(&key(b))
                });
                for (j, ch) in chars.iter_mut().enumerate() {
                    ch.label = Some(j + 1);
                }
                return Ok(chars);
            }
            c[i] += 1;
            if c[i] < group.orders[i] {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

/// Find the character with the given value row (how tests and repro commands
/// pin down a specific table row independent of labeling).
pub fn find_by_values<'a>(
    chars: &'a [DirichletCharacter],
    values: &[CharValue],
) -> Option<&'a DirichletCharacter> {
    chars.iter().find(|c| c.values() == values)
}

/// Convenience: the character mod q whose angle at each unit residue matches
/// the given (residue, angle numerator of 2pi, denominator) triples.
pub fn find_by_angles<'a>(
    chars: &'a [DirichletCharacter],
    angles: &[(u64, i64, u64)],
) -> Option<&'a DirichletCharacter> {
    chars.iter().find(|c| {
        angles.iter().all(|&(m, num, den)| {
            c.angle_fraction(m as i64)
                .map(|(n, d)| n * den as i64 == num * d as i64)
                .unwrap_or(false)
        })
    })
}
