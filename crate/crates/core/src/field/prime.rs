use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ElementKind, Field, FieldConfig, FieldKind};
use crate::error::{Error, Result};

/// An element of 𝔽_p, stored as its least nonnegative residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fp {
    pub res: u64,
}

impl Fp {
    pub fn new(res: u64) -> Self {
        Fp { res }
    }
}

/// 𝔽_p together with the data needed for power classes: the smallest
/// primitive root `g`, the decomposition `p − 1 = 2^s · q`, and `g^q`, a
/// generator of the 2-Sylow subgroup of 𝔽_p^×.
#[derive(Clone, Debug)]
pub struct PrimeField {
    config: FieldConfig,
    p: u64,
    generator: u64,
    two_adicity: u32,
    odd_part: u64,
    sylow_gen: u64,
}

impl PrimeField {
    pub fn new(config: FieldConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self::from_validated(config))
    }

    pub(crate) fn from_validated(config: FieldConfig) -> Self {
        let p = config.p;
        let two_adicity = (p - 1).trailing_zeros();
        let odd_part = (p - 1) >> two_adicity;
        let generator = smallest_primitive_root(p);
        let sylow_gen = pow_mod(generator, odd_part, p);
        PrimeField { config, p, generator, two_adicity, odd_part, sylow_gen }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// The exponent `s` with `2^s ‖ p − 1`.
    pub fn two_adicity(&self) -> u32 {
        self.two_adicity
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    /// `a^e` for signed `e`; `a` must be a unit when `e < 0`.
    pub fn pow_signed(&self, a: u64, e: i64) -> u64 {
        let r = self.pow(a, e.unsigned_abs());
        if e < 0 {
            self.inverse(r)
        } else {
            r
        }
    }

    pub fn inverse(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    /// Euler's criterion: 1 for nonzero squares, −1 for non-squares, 0 for 0.
    pub fn legendre(&self, a: u64) -> i32 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Tonelli–Shanks. Returns `None` for non-residues.
    pub fn sqrt_mod(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let mut m = self.two_adicity;
        let q = self.odd_part;
        // Any non-residue works; g is one.
        let mut c = self.sylow_gen;
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// `log_g(a) mod 2^k`, computed bit by bit in the 2-Sylow subgroup.
    pub fn dlog_mod_2k(&self, a: u64, k: u32) -> u64 {
        assert!(k <= self.two_adicity, "2^{k} does not divide p - 1");
        let s = self.two_adicity;
        let h = self.pow(a % self.p, self.odd_part);
        let z_inv = self.inverse(self.sylow_gen);
        let mut j = 0u64;
        for i in 0..k {
            let probe = self.mul(h, self.pow(z_inv, j));
            if self.pow(probe, 1u64 << (s - 1 - i)) != 1 {
                j |= 1 << i;
            }
        }
        j
    }
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn smallest_primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut n = p - 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            factors.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

impl Field for PrimeField {
    type Elem = Fp;

    fn from_config(config: FieldConfig) -> Result<Self> {
        PrimeField::new(config)
    }

    fn config(&self) -> &FieldConfig {
        &self.config
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Fp
    }

    fn residue_field(&self) -> &PrimeField {
        self
    }

    fn zero(&self) -> Fp {
        Fp::new(0)
    }

    fn one(&self) -> Fp {
        Fp::new(1)
    }

    fn from_i64(&self, x: i64) -> Fp {
        Fp::new(self.reduce(x))
    }

    fn is_zero(&self, x: &Fp) -> bool {
        x.res == 0
    }

    fn add(&self, x: &Fp, y: &Fp) -> Result<Fp> {
        Ok(Fp::new(((x.res as u128 + y.res as u128) % self.p as u128) as u64))
    }

    fn neg(&self, x: &Fp) -> Fp {
        Fp::new((self.p - x.res) % self.p)
    }

    fn mul(&self, x: &Fp, y: &Fp) -> Fp {
        Fp::new(PrimeField::mul(self, x.res, y.res))
    }

    fn inv(&self, x: &Fp) -> Result<Fp> {
        if x.res == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Fp::new(self.inverse(x.res)))
    }

    fn same(&self, x: &Fp, y: &Fp) -> bool {
        x.res == y.res
    }

    fn valuation(&self, _x: &Fp) -> i64 {
        0
    }

    fn unit_residue(&self, x: &Fp) -> u64 {
        x.res
    }

    fn shift(&self, x: &Fp, _k: i64) -> Fp {
        *x
    }

    fn sqrt(&self, x: &Fp) -> Result<Fp> {
        if x.res == 0 {
            return Err(Error::DivisionByZero);
        }
        self.sqrt_mod(x.res).map(Fp::new).ok_or(Error::NotASquare)
    }

    fn solve_norm_equation(&self, e: &Fp, c: &Fp) -> Result<Option<(Fp, Fp)>> {
        if e.res == 0 || c.res == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(s) = self.sqrt_mod(e.res) {
            return split_norm_solution(self, &Fp::new(s), c).map(Some);
        }
        // F_{p^2}/F_p norms are onto, so some y gives a square c + e·y².
        for y in 0..self.p {
            let y = Fp::new(y);
            let rhs = Field::add(self, c, &Field::mul(self, e, &Field::mul(self, &y, &y)))?;
            if rhs.res == 0 {
                continue;
            }
            if let Some(x) = self.sqrt_mod(rhs.res) {
                return Ok(Some((Fp::new(x), y)));
            }
        }
        Ok(None)
    }

    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, _kind: ElementKind) -> Fp {
        Fp::new(rng.gen_range(1..self.p))
    }

    fn random_coefficient<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp {
        Fp::new(rng.gen_range(0..self.p))
    }

    fn coefficient_candidates(&self) -> Vec<Fp> {
        (0..self.p.min(64)).map(Fp::new).collect()
    }

    fn check_element(&self, x: &Fp) -> Result<()> {
        if x.res >= self.p {
            return Err(Error::InvalidInput(format!(
                "residue {} is not reduced mod {}",
                x.res, self.p
            )));
        }
        Ok(())
    }

    fn precision(&self) -> Option<u32> {
        None
    }

    fn doubled(&self) -> Option<Self> {
        None
    }

    fn lift(&self, x: &Fp) -> Fp {
        *x
    }
}

/// Solves `x² − s²y² = c` through `x = (t + c/t)/2`, `y = (t − c/t)/(2s)`,
/// trying small `t` until neither sum cancels to zero.
pub(crate) fn split_norm_solution<F: Field>(
    field: &F,
    s: &F::Elem,
    c: &F::Elem,
) -> Result<(F::Elem, F::Elem)> {
    let two_inv = field.inv(&field.from_i64(2))?;
    let mut last_err = Error::PrecisionExhausted;
    for t in 1..=8 {
        let t = field.from_i64(t);
        let ct = field.div(c, &t)?;
        let attempt = (|| {
            let x = field.mul(&field.add(&t, &ct)?, &two_inv);
            let y = field.div(&field.mul(&field.sub(&t, &ct)?, &two_inv), s)?;
            Ok::<_, Error>((x, y))
        })();
        match attempt {
            Ok((x, y)) if !field.is_zero(&x) && !field.is_zero(&y) => return Ok((x, y)),
            Ok(_) => last_err = Error::PrecisionExhausted,
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}
