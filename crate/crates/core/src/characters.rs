//! Dirichlet characters modulo k.
//!
//! The unit group (Z/k)^* is split by CRT into cyclic components: one per odd
//! prime power (generated by its smallest primitive root) and up to two for
//! the power of two (−1 and 5). A character index j ∈ 1..=φ(k) is read as a
//! mixed-radix tuple of exponents on those generators, least significant
//! component first, so j = 1 is always the principal character. For a prime
//! modulus q this is χ_j(g^a) = e^{2πi (j−1) a / (q−1)} with g the smallest
//! primitive root.
//!
//! Character values are kept as exact fractions of a full turn and only
//! turned into floating point when asked.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest modulus for which non-principal characters are built.
pub const MAX_MODULUS: u64 = 1_000_000;

/// A value e^{2πi num/den} on the unit circle, with 0 ≤ num < den.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0);
        let g = gcd(num % den, den);
        Phase {
            num: (num % den) / g,
            den: den / g,
        }
    }

    pub const ONE: Phase = Phase { num: 0, den: 1 };

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Angle in (−π, π].
    pub fn angle(&self) -> f64 {
        if 2 * self.num <= self.den {
            2.0 * PI * self.num as f64 / self.den as f64
        } else {
            -2.0 * PI * (self.den - self.num) as f64 / self.den as f64
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        // Quarter turns are exact.
        match (self.num, self.den) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            _ => Complex64::from_polar(1.0, self.angle()),
        }
    }

    pub fn mul(self, other: Phase) -> Phase {
        let den = lcm(self.den, other.den);
        let a = self.num * (den / self.den);
        let b = other.num * (den / other.den);
        Phase::new((a + b) % den, den)
    }

    pub fn pow(self, e: u64) -> Phase {
        Phase::new(((self.num as u128 * e as u128) % self.den as u128) as u64, self.den)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(2πi·{}/{})", self.num, self.den)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Prime factorization as (prime, exponent) pairs, ascending.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(k: u64) -> u64 {
    factorize(k)
        .into_iter()
        .fold(k, |acc, (p, _)| acc / p * (p - 1))
}

/// Smallest generator of the cyclic group (Z/m)^*, where m is an odd prime power.
fn smallest_primitive_root(m: u64, order: u64) -> u64 {
    let order_factors: Vec<u64> = factorize(order).into_iter().map(|(p, _)| p).collect();
    (2..m)
        .find(|&g| {
            gcd(g, m) == 1 && order_factors.iter().all(|&q| pow_mod(g, order / q, m) != 1)
        })
        .expect("odd prime powers have primitive roots")
}

/// One cyclic factor of the unit group, living on the prime-power part `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Component {
    modulus: u64,
    order: u64,
    /// Exponent of this component's generator in the character.
    exponent: u64,
    /// Discrete log table over residues mod `modulus`; `None` for non-units.
    dlog: Vec<Option<u64>>,
}

impl Component {
    fn cyclic(modulus: u64, generator: u64, order: u64, exponent: u64) -> Self {
        let mut dlog = vec![None; modulus as usize];
        let mut x = 1u64;
        for a in 0..order {
            dlog[x as usize] = Some(a);
            x = mul_mod(x, generator, modulus);
        }
        Component {
            modulus,
            order,
            exponent,
            dlog,
        }
    }

    /// 2^a with a ≥ 3: the ±1 part; log is 1 iff n ≡ 3 (mod 4).
    fn two_sign(modulus: u64, exponent: u64) -> Self {
        let dlog = (0..modulus)
            .map(|n| (n % 2 == 1).then_some(u64::from(n % 4 == 3)))
            .collect();
        Component {
            modulus,
            order: 2,
            exponent,
            dlog,
        }
    }

    /// 2^a with a ≥ 3: the ⟨5⟩ part, after normalizing n to ≡ 1 (mod 4).
    fn two_five(modulus: u64, exponent: u64) -> Self {
        let order = modulus / 4;
        let mut dlog = vec![None; modulus as usize];
        let mut x = 1u64;
        for a in 0..order {
            dlog[x as usize] = Some(a);
            dlog[(modulus - x) as usize] = Some(a);
            x = mul_mod(x, 5, modulus);
        }
        Component {
            modulus,
            order,
            exponent,
            dlog,
        }
    }

    fn phase(&self, n: u64) -> Option<Phase> {
        self.dlog[(n % self.modulus) as usize]
            .map(|a| Phase::new(mul_mod(a, self.exponent, self.order), self.order))
    }
}

/// χ_{k,j}: a Dirichlet character modulo k with index j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    index: u64,
    principal: bool,
    components: Vec<Component>,
}

/// Reference values of χ_{7,2} at n = 1..=7 as (num, den) turns; `None` is zero.
const CHI_7_2_REFERENCE: [Option<(u64, u64)>; 7] = [
    Some((0, 1)),
    Some((1, 3)),
    Some((1, 6)),
    Some((2, 3)),
    Some((5, 6)),
    Some((1, 2)),
    None,
];

impl DirichletCharacter {
    /// The character of modulus 1: χ(n) = 1 for every n, i.e. the ζ case.
    pub fn trivial() -> Self {
        DirichletCharacter {
            modulus: 1,
            index: 1,
            principal: true,
            components: Vec::new(),
        }
    }

    pub fn new(modulus: u64, index: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        let phi = euler_phi(modulus);
        if index == 0 || index > phi {
            return Err(Error::Domain(format!(
                "index {index} out of range 1..={phi} for modulus {modulus}"
            )));
        }
        if modulus == 1 {
            return Ok(Self::trivial());
        }
        if index == 1 {
            return Ok(DirichletCharacter {
                modulus,
                index,
                principal: true,
                components: Vec::new(),
            });
        }
        if modulus > MAX_MODULUS {
            return Err(Error::Capability(format!(
                "non-principal characters are built only for modulus ≤ {MAX_MODULUS}, got {modulus}"
            )));
        }

        // Mixed-radix digits of index − 1, least significant first.
        let mut rest = index - 1;
        let mut take = |order: u64| {
            let e = rest % order;
            rest /= order;
            e
        };
        let mut components = Vec::new();
        for (p, a) in factorize(modulus) {
            let pa = p.pow(a);
            if p == 2 {
                match a {
                    // Trivial unit group; kept so that even n map to zero.
                    1 => components.push(Component::cyclic(2, 1, 1, take(1))),
                    2 => components.push(Component::cyclic(4, 3, 2, take(2))),
                    _ => {
                        components.push(Component::two_sign(pa, take(2)));
                        components.push(Component::two_five(pa, take(pa / 4)));
                    }
                }
            } else {
                let order = pa / p * (p - 1);
                let g = smallest_primitive_root(pa, order);
                components.push(Component::cyclic(pa, g, order, take(order)));
            }
        }
        debug_assert_eq!(rest, 0);

        let chi = DirichletCharacter {
            modulus,
            index,
            principal: false,
            components,
        };
        if (modulus, index) == (7, 2) && !chi.matches_chi_7_2_table() {
            return Err(Error::Capability(
                "generator convention does not reproduce the χ_{7,2} table".into(),
            ));
        }
        Ok(chi)
    }

    fn matches_chi_7_2_table(&self) -> bool {
        CHI_7_2_REFERENCE
            .iter()
            .enumerate()
            .all(|(i, r)| self.phase(i as u64 + 1) == r.map(|(n, d)| Phase::new(n, d)))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_principal(&self) -> bool {
        self.principal
    }

    pub fn is_trivial(&self) -> bool {
        self.modulus == 1
    }

    /// χ(n) as an exact phase, or `None` when gcd(n, k) > 1.
    pub fn phase(&self, n: u64) -> Option<Phase> {
        if self.principal {
            return (gcd(n % self.modulus, self.modulus) == 1).then_some(Phase::ONE);
        }
        self.components
            .iter()
            .try_fold(Phase::ONE, |acc, c| c.phase(n).map(|p| acc.mul(p)))
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.phase(n).map_or(Complex64::new(0.0, 0.0), |p| p.to_complex())
    }

    /// Values at residues 0..k−1.
    pub fn value_table(&self) -> Vec<Complex64> {
        (0..self.modulus).map(|n| self.value(n)).collect()
    }
}

impl serde::Serialize for DirichletCharacter {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("DirichletCharacter", 3)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("index", &self.index)?;
        st.serialize_field("principal", &self.principal)?;
        st.end()
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ_{{{},{}}}", self.modulus, self.index)
    }
}

/// χ_{k,j}.
pub fn character(modulus: u64, index: u64) -> Result<DirichletCharacter> {
    DirichletCharacter::new(modulus, index)
}

/// θ with χ(p) = e^{iθ}, θ ∈ (−π, π]. Zero values report [`Error::TermOmitted`].
pub fn phase_theta(chi: &DirichletCharacter, p: u64) -> Result<f64> {
    chi.phase(p)
        .map(|ph| ph.angle())
        .ok_or(Error::TermOmitted(p))
}
