use super::poly::PolyRing;
use super::{Element, FieldCtx};
use crate::error::{Error, Result};

/// A fixed field homomorphism from a subfield model into a larger one.
///
/// The source modulus root is sent to the least (by index) of its roots in
/// the target, so the map is reproducible.
#[derive(Clone, Debug)]
pub struct Embedding {
    src_degree: usize,
    dst_degree: usize,
    /// Images of `1, x, …, x^(d_src - 1)`.
    powers: Vec<Element>,
}

impl Embedding {
    pub fn new(src: &FieldCtx, dst: &FieldCtx) -> Result<Self> {
        if src.p() != dst.p() || src.k() != dst.k() {
            return Err(Error::IncompatibleFields(format!(
                "F_({}^{}) and F_({}^{}) have different base fields",
                src.p(),
                src.k(),
                dst.p(),
                dst.k()
            )));
        }
        if dst.n() % src.n() != 0 {
            return Err(Error::IncompatibleFields(format!(
                "degree {} does not divide {}",
                src.n(),
                dst.n()
            )));
        }
        let ring = PolyRing::new(dst);
        let lifted = ring.from_prime_coeffs(src.modulus());
        let root = ring
            .roots_of_split(&lifted)
            .into_iter()
            .next()
            .ok_or(Error::RootNotFound)?;
        if !ring.eval(&lifted, &root).is_zero() {
            return Err(Error::RootNotFound);
        }
        let mut powers = Vec::with_capacity(src.degree());
        let mut cur = dst.one();
        for _ in 0..src.degree() {
            powers.push(cur.clone());
            cur = dst.mul(&cur, &root);
        }
        Ok(Embedding { src_degree: src.degree(), dst_degree: dst.degree(), powers })
    }

    pub fn apply(&self, dst: &FieldCtx, a: &Element) -> Element {
        debug_assert_eq!(a.coeffs().len(), self.src_degree);
        debug_assert_eq!(dst.degree(), self.dst_degree);
        a.coeffs()
            .iter()
            .zip(&self.powers)
            .filter(|(&c, _)| c != 0)
            .fold(dst.zero(), |acc, (&c, b)| dst.add(&acc, &dst.scale(c, b)))
    }

    /// Image of the source modulus root.
    pub fn root_image(&self) -> Option<&Element> {
        self.powers.get(1)
    }
}

/// One-shot embedding of `a` from `src` into `dst`. Loops should build an
/// [`Embedding`] once and reuse it.
pub fn embed(src: &FieldCtx, a: &Element, dst: &FieldCtx) -> Result<Element> {
    Ok(Embedding::new(src, dst)?.apply(dst, a))
}
