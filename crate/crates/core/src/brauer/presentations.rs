use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::SymbolExpr;
use crate::error::{Error, Result};
use crate::field::Field;

/// `⟨ae, be, bf, abe, abf, ce, cf, de, df, cde, cdf, af⟩`, a 12-slot tuple
/// isometric to `⟨a, b, ab, c, d, cd⟩ ⊗ ⟨e, f⟩`.
pub fn pfister_tuple<F: Field>(field: &F, x: &[F::Elem; 6]) -> Result<Vec<F::Elem>> {
    if x.iter().any(|t| field.is_zero(t)) {
        return Err(Error::InvalidInput("presentation entries must be nonzero".into()));
    }
    let [a, b, c, d, e, f] = x;
    let m = |u: &F::Elem, v: &F::Elem| field.mul(u, v);
    let ab = m(a, b);
    let cd = m(c, d);
    Ok(vec![
        m(a, e),
        m(b, e),
        m(b, f),
        m(&ab, e),
        m(&ab, f),
        m(c, e),
        m(c, f),
        m(d, e),
        m(d, f),
        m(&cd, e),
        m(&cd, f),
        m(a, f),
    ])
}

/// `(a⁶b⁸c³d²e¹⁰f⁵, f/e)` of degree `2^{m−1}`, the class of
/// `C_m(ψ(pfister_tuple(a, …, f)))`.
pub fn pfister_symbol<F: Field>(field: &F, x: &[F::Elem; 6], m: u32) -> Result<SymbolExpr<F::Elem>> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let exps = [6, 8, 3, 2, 10, 5];
    let mut first = field.one();
    for (t, e) in x.iter().zip(exps) {
        first = field.mul(&first, &field.pow(t, e)?);
    }
    Ok(SymbolExpr { a: first, b: field.div(&x[5], &x[4])?, deg_log2: m - 1 })
}

/// `x + y√d` in the quadratic extension `F(√d)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "E: Serialize + DeserializeOwned")]
pub struct QuadExtElement<E> {
    pub x: E,
    pub y: E,
    pub d: E,
}

impl<E: Clone> QuadExtElement<E> {
    pub fn new<F: Field<Elem = E>>(field: &F, x: E, y: E, d: E) -> Result<Self> {
        if field.is_zero(&d) || field.is_square(&d)? {
            return Err(Error::InvalidInput("d must be a non-square".into()));
        }
        Ok(QuadExtElement { x, y, d })
    }

    pub fn trace<F: Field<Elem = E>>(&self, field: &F) -> E {
        field.mul(&field.from_i64(2), &self.x)
    }

    pub fn norm<F: Field<Elem = E>>(&self, field: &F) -> Result<E> {
        field.sub(&field.square(&self.x), &field.mul(&self.d, &field.square(&self.y)))
    }

    pub fn conj<F: Field<Elem = E>>(&self, field: &F) -> Self {
        QuadExtElement { x: self.x.clone(), y: field.neg(&self.y), d: self.d.clone() }
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Result<Self> {
        let xx = field.mul(&self.x, &other.x);
        let yy = field.mul(&field.mul(&self.y, &other.y), &self.d);
        let xy = field.mul(&self.x, &other.y);
        let yx = field.mul(&self.y, &other.x);
        Ok(QuadExtElement {
            x: field.add(&xx, &yy)?,
            y: field.add(&xy, &yx)?,
            d: self.d.clone(),
        })
    }
}

/// The 14-slot trace/norm tuple
/// `⟨T(u), N(u)/T(u), T(v), N(v)/T(v), T(uv), 1/(T(uv)N(uv)), T(w), T(w)N(w),
/// T(uw), T(uw)N(uw), T(vw), T(vw)N(vw), T(uvw), T(uvw)N(uvw)⟩`.
///
/// The first six slots multiply to `N(u)N(v)/N(uv) = 1`.
pub fn rost14_tuple<F: Field>(
    field: &F,
    u: &QuadExtElement<F::Elem>,
    v: &QuadExtElement<F::Elem>,
    w: &QuadExtElement<F::Elem>,
) -> Result<Vec<F::Elem>> {
    let uv = u.mul(field, v)?;
    let uw = u.mul(field, w)?;
    let vw = v.mul(field, w)?;
    let uvw = uv.mul(field, w)?;
    let tn = |z: &QuadExtElement<F::Elem>| -> Result<(F::Elem, F::Elem)> {
        let t = z.trace(field);
        let n = z.norm(field)?;
        if field.is_zero(&t) {
            return Err(Error::DegenerateTrace);
        }
        if field.is_zero(&n) {
            return Err(Error::InvalidInput("norm vanishes".into()));
        }
        Ok((t, n))
    };
    let (tu, nu) = tn(u)?;
    let (tv, nv) = tn(v)?;
    let (tuv, nuv) = tn(&uv)?;
    let mut out = vec![
        tu.clone(),
        field.div(&nu, &tu)?,
        tv.clone(),
        field.div(&nv, &tv)?,
        tuv.clone(),
        field.inv(&field.mul(&tuv, &nuv))?,
    ];
    for z in [w, &uw, &vw, &uvw] {
        let (t, n) = tn(z)?;
        out.push(t.clone());
        out.push(field.mul(&t, &n));
    }
    Ok(out)
}
