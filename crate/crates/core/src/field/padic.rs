use std::borrow::Cow;
use std::sync::Arc;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::prime::split_norm_solution;
use super::{ElementKind, Field, FieldConfig, FieldKind, PrimeField};
use crate::error::{Error, Result};

/// An element of ℚ_p: either exact zero or `p^val · unit` where the unit is
/// known modulo `p^prec` and is coprime to `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PadicRepr", try_from = "PadicRepr")]
pub enum Padic {
    Zero,
    Nonzero { val: i64, unit: BigUint, prec: u32 },
}

impl Padic {
    pub fn val(&self) -> Option<i64> {
        match self {
            Padic::Zero => None,
            Padic::Nonzero { val, .. } => Some(*val),
        }
    }

    pub fn prec(&self) -> u32 {
        match self {
            Padic::Zero => 0,
            Padic::Nonzero { prec, .. } => *prec,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PadicRepr {
    val: i64,
    unit: String,
    prec: u32,
}

impl From<Padic> for PadicRepr {
    fn from(x: Padic) -> Self {
        match x {
            Padic::Zero => PadicRepr { val: 0, unit: "0".into(), prec: 0 },
            Padic::Nonzero { val, unit, prec } => {
                PadicRepr { val, unit: unit.to_str_radix(10), prec }
            }
        }
    }
}

impl TryFrom<PadicRepr> for Padic {
    type Error = String;

    fn try_from(r: PadicRepr) -> std::result::Result<Self, String> {
        let unit = BigUint::parse_bytes(r.unit.as_bytes(), 10)
            .ok_or_else(|| format!("unit {:?} is not a decimal integer", r.unit))?;
        if unit.is_zero() {
            return Ok(Padic::Zero);
        }
        if r.prec == 0 {
            return Err("nonzero p-adic element with precision 0".into());
        }
        Ok(Padic::Nonzero { val: r.val, unit, prec: r.prec })
    }
}

/// ℚ_p at a working precision of `N` p-adic digits.
#[derive(Clone, Debug)]
pub struct PadicField {
    config: FieldConfig,
    residue: PrimeField,
    p_big: BigUint,
    powers: Arc<Vec<BigUint>>,
}

impl PadicField {
    pub fn new(config: FieldConfig) -> Result<Self> {
        config.validate()?;
        let residue = PrimeField::from_validated(config);
        let p_big = BigUint::from(config.p);
        let mut powers = Vec::with_capacity(config.precision as usize + 1);
        powers.push(BigUint::one());
        for k in 0..config.precision as usize {
            let next = &powers[k] * &p_big;
            powers.push(next);
        }
        Ok(PadicField { config, residue, p_big, powers: Arc::new(powers) })
    }

    pub fn n(&self) -> u32 {
        self.config.precision
    }

    fn pow_p(&self, k: u32) -> Cow<'_, BigUint> {
        match self.powers.get(k as usize) {
            Some(x) => Cow::Borrowed(x),
            None => Cow::Owned(self.p_big.pow(k)),
        }
    }

    /// Inverse of a unit modulo `p^prec`, Hensel-lifted from its residue.
    fn unit_inverse(&self, unit: &BigUint, prec: u32) -> BigUint {
        let r = (unit % &self.p_big).to_u64().expect("residue fits in u64");
        let mut x = BigUint::from(self.residue.inverse(r));
        let mut k = 1u32;
        while k < prec {
            k = (2 * k).min(prec);
            let m = self.pow_p(k);
            let m = m.as_ref();
            let ux = (unit % m) * &x % m;
            x = x * ((m + 2u32 - ux) % m) % m;
        }
        x
    }

    /// `p^val · unit` at full working precision.
    pub fn element(&self, val: i64, unit: u64) -> Padic {
        self.from_parts(val, BigUint::from(unit))
    }

    /// `p^val · unit` at full working precision; `unit` must be coprime to p.
    pub fn from_parts(&self, val: i64, unit: BigUint) -> Padic {
        assert!(!(&unit % &self.p_big).is_zero(), "unit divisible by p");
        let n = self.n();
        Padic::Nonzero { val, unit: unit % self.pow_p(n).as_ref(), prec: n }
    }

    /// Strips factors of p from a nonzero residue `s` known mod `p^r`.
    fn normalize(&self, val: i64, mut s: BigUint, r: u32) -> Result<Padic> {
        if s.is_zero() {
            return Err(Error::PrecisionExhausted);
        }
        let mut t = 0u32;
        loop {
            let (q, rem) = s.div_rem(&self.p_big);
            if !rem.is_zero() {
                break;
            }
            s = q;
            t += 1;
        }
        debug_assert!(t < r);
        Ok(Padic::Nonzero { val: val + t as i64, unit: s, prec: r - t })
    }
}

impl Field for PadicField {
    type Elem = Padic;

    fn from_config(config: FieldConfig) -> Result<Self> {
        PadicField::new(config)
    }

    fn config(&self) -> &FieldConfig {
        &self.config
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Qp
    }

    fn residue_field(&self) -> &PrimeField {
        &self.residue
    }

    fn zero(&self) -> Padic {
        Padic::Zero
    }

    fn one(&self) -> Padic {
        self.element(0, 1)
    }

    fn from_i64(&self, x: i64) -> Padic {
        if x == 0 {
            return Padic::Zero;
        }
        let p = self.config.p as u128;
        let mut mag = x.unsigned_abs() as u128;
        let mut val = 0;
        while mag.is_multiple_of(p) {
            mag /= p;
            val += 1;
        }
        let u = self.from_parts(val, BigUint::from(mag));
        if x < 0 {
            self.neg(&u)
        } else {
            u
        }
    }

    fn is_zero(&self, x: &Padic) -> bool {
        matches!(x, Padic::Zero)
    }

    fn add(&self, x: &Padic, y: &Padic) -> Result<Padic> {
        let (
            Padic::Nonzero { val: v1, unit: u1, prec: k1 },
            Padic::Nonzero { val: v2, unit: u2, prec: k2 },
        ) = (x, y)
        else {
            return Ok(if self.is_zero(x) { y.clone() } else { x.clone() });
        };
        let ((va, ua, ka), (vb, ub, kb)) = if v1 <= v2 {
            ((*v1, u1, *k1), (*v2, u2, *k2))
        } else {
            ((*v2, u2, *k2), (*v1, u1, *k1))
        };
        let absolute = (va + ka as i64).min(vb + kb as i64);
        let r = (absolute - va) as u32;
        let modulus = self.pow_p(r);
        let shift = vb - va;
        let s = if shift >= r as i64 {
            ua % modulus.as_ref()
        } else {
            (ua + ub * self.pow_p(shift as u32).as_ref()) % modulus.as_ref()
        };
        self.normalize(va, s, r)
    }

    fn neg(&self, x: &Padic) -> Padic {
        match x {
            Padic::Zero => Padic::Zero,
            Padic::Nonzero { val, unit, prec } => Padic::Nonzero {
                val: *val,
                unit: self.pow_p(*prec).as_ref() - unit,
                prec: *prec,
            },
        }
    }

    fn mul(&self, x: &Padic, y: &Padic) -> Padic {
        match (x, y) {
            (
                Padic::Nonzero { val: v1, unit: u1, prec: k1 },
                Padic::Nonzero { val: v2, unit: u2, prec: k2 },
            ) => {
                let prec = (*k1).min(*k2);
                Padic::Nonzero {
                    val: v1 + v2,
                    unit: (u1 * u2) % self.pow_p(prec).as_ref(),
                    prec,
                }
            }
            _ => Padic::Zero,
        }
    }

    fn inv(&self, x: &Padic) -> Result<Padic> {
        match x {
            Padic::Zero => Err(Error::DivisionByZero),
            Padic::Nonzero { val, unit, prec } => {
                let unit = self.unit_inverse(unit, *prec);
                Ok(Padic::Nonzero { val: -val, unit, prec: *prec })
            }
        }
    }

    fn same(&self, x: &Padic, y: &Padic) -> bool {
        match (x, y) {
            (Padic::Zero, Padic::Zero) => true,
            (
                Padic::Nonzero { val: v1, unit: u1, prec: k1 },
                Padic::Nonzero { val: v2, unit: u2, prec: k2 },
            ) => {
                let m = self.pow_p((*k1).min(*k2));
                v1 == v2 && u1 % m.as_ref() == u2 % m.as_ref()
            }
            _ => false,
        }
    }

    fn valuation(&self, x: &Padic) -> i64 {
        x.val().expect("valuation of zero")
    }

    fn unit_residue(&self, x: &Padic) -> u64 {
        match x {
            Padic::Zero => panic!("residue of zero"),
            Padic::Nonzero { unit, .. } => (unit % &self.p_big).to_u64().unwrap(),
        }
    }

    fn shift(&self, x: &Padic, k: i64) -> Padic {
        match x {
            Padic::Zero => Padic::Zero,
            Padic::Nonzero { val, unit, prec } => {
                Padic::Nonzero { val: val + k, unit: unit.clone(), prec: *prec }
            }
        }
    }

    fn sqrt(&self, x: &Padic) -> Result<Padic> {
        let Padic::Nonzero { val, unit, prec } = x else {
            return Err(Error::DivisionByZero);
        };
        if val % 2 != 0 {
            return Err(Error::NotASquare);
        }
        let r0 = self
            .residue
            .sqrt_mod((unit % &self.p_big).to_u64().unwrap())
            .ok_or(Error::NotASquare)?;
        let modulus = self.pow_p(*prec);
        let m = modulus.as_ref();
        let half = (m + 1u32) / 2u32;
        // Newton on y² = u doubles the number of correct digits per round.
        let mut y = BigUint::from(r0);
        let mut correct = 1u32;
        while correct < *prec {
            let y_inv = self.unit_inverse(&y, *prec);
            y = ((&y + unit * y_inv) * &half) % m;
            correct *= 2;
        }
        if (&y * &y) % m != unit % m {
            return Err(Error::NotASquare);
        }
        Ok(Padic::Nonzero { val: val / 2, unit: y, prec: *prec })
    }

    fn solve_norm_equation(&self, e: &Padic, c: &Padic) -> Result<Option<(Padic, Padic)>> {
        if self.is_zero(e) || self.is_zero(c) {
            return Err(Error::DivisionByZero);
        }
        if self.is_square(e)? {
            return split_norm_solution(self, &self.sqrt(e)?, c).map(Some);
        }
        // e = e0·s², c = c0·r² with v(e0), v(c0) ∈ {0, 1}.
        let s = self.element(self.valuation(e).div_euclid(2), 1);
        let r = self.element(self.valuation(c).div_euclid(2), 1);
        let e0 = self.div(e, &self.square(&s))?;
        let c0 = self.div(c, &self.square(&r))?;
        let (ve, vc) = (self.valuation(&e0), self.valuation(&c0));
        let solution = if ve == 0 {
            // Unramified: exactly the elements of even valuation are norms.
            if vc != 0 {
                return Ok(None);
            }
            let mut found = None;
            for y in 0..self.config.p as i64 {
                let y = self.from_i64(y);
                let rhs = match self.add(&c0, &self.mul(&e0, &self.square(&y))) {
                    Ok(rhs) => rhs,
                    Err(Error::PrecisionExhausted) => continue,
                    Err(err) => return Err(err),
                };
                if self.is_square(&rhs)? {
                    found = Some((self.sqrt(&rhs)?, y));
                    break;
                }
            }
            found
        } else if vc == 0 {
            // Ramified: unit norms are exactly the unit squares.
            if self.is_square(&c0)? {
                Some((self.sqrt(&c0)?, Padic::Zero))
            } else {
                None
            }
        } else {
            // c0 = −e0·z² is the only other norm class of valuation 1.
            let z2 = self.div(&self.neg(&c0), &e0)?;
            if self.is_square(&z2)? {
                Some((Padic::Zero, self.sqrt(&z2)?))
            } else {
                None
            }
        };
        Ok(solution.map(|(x0, y0)| (self.mul(&r, &x0), self.mul(&self.div(&r, &s).unwrap(), &y0))))
    }

    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, kind: ElementKind) -> Padic {
        let val = match kind {
            ElementKind::Unit => 0,
            ElementKind::Any => rng.gen_range(-2..=2),
        };
        let n = self.n();
        let low = rng.gen_range(1..self.config.p);
        let high = rng.gen_biguint_below(self.pow_p(n - 1).as_ref());
        Padic::Nonzero { val, unit: high * &self.p_big + low, prec: n }
    }

    fn random_coefficient<R: Rng + ?Sized>(&self, rng: &mut R) -> Padic {
        if rng.gen_ratio(1, 8) {
            return Padic::Zero;
        }
        let mut x = self.random_element(rng, ElementKind::Unit);
        if let Padic::Nonzero { val, .. } = &mut x {
            *val = rng.gen_range(-1..=1);
        }
        x
    }

    fn coefficient_candidates(&self) -> Vec<Padic> {
        let mut out = vec![Padic::Zero];
        for k in 1..=24 {
            out.push(self.from_i64(k));
        }
        for k in 1..=8 {
            if k % self.config.p != 0 {
                out.push(self.element(1, k));
                out.push(self.element(-1, k));
            }
        }
        out
    }

    fn check_element(&self, x: &Padic) -> Result<()> {
        let Padic::Nonzero { unit, prec, .. } = x else {
            return Ok(());
        };
        if *prec == 0 || *prec > self.n() {
            return Err(Error::InvalidInput(format!(
                "precision {prec} outside [1, {}]",
                self.n()
            )));
        }
        if unit >= self.pow_p(*prec).as_ref() {
            return Err(Error::InvalidInput("unit not reduced mod p^prec".into()));
        }
        if (unit % &self.p_big).is_zero() {
            return Err(Error::InvalidInput("unit divisible by p".into()));
        }
        Ok(())
    }

    fn precision(&self) -> Option<u32> {
        Some(self.n())
    }

    fn doubled(&self) -> Option<Self> {
        let next = self.n().checked_mul(2)?;
        if next > FieldConfig::MAX_PRECISION {
            return None;
        }
        PadicField::new(FieldConfig { precision: next, ..self.config }).ok()
    }

    fn lift(&self, x: &Padic) -> Padic {
        match x {
            Padic::Zero => Padic::Zero,
            Padic::Nonzero { val, unit, .. } => {
                let n = self.n();
                Padic::Nonzero { val: *val, unit: unit % self.pow_p(n).as_ref(), prec: n }
            }
        }
    }
}
