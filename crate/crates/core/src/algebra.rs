//! The weighted twisted group algebra of a phase-space lattice: twisted
//! convolution and involution, weighted norms, the trace, and the
//! representation on `ℓ²(G)` by time-frequency shifts.
//!
//! A lattice carries its own measure weight `w` and cocycle orientation
//! (plain for primary lattices, conjugated for adjoints). The convolution is
//! `(a₁ * a₂)(λ) = w Σ_{λ'} a₁(λ') a₂(λ−λ') c̃(λ', λ−λ')`, which for a
//! primary lattice (`w = 1`, `c̃ = c`) is the usual `c`-twisted convolution.
//! The algebra unit is `w^{-1} δ₀`.

use crate::phase::{apply_shift, Lattice};
use crate::weights::Weight;
use crate::{CMat, CVec, Error, Result, C64};
use num_traits::ToPrimitive;
use serde::Serialize;
use std::sync::Arc;

/// A finitely supported coefficient vector on a lattice, member of the
/// lattice's twisted group algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedElement {
    lattice: Arc<Lattice>,
    coeffs: Vec<C64>,
}

impl TwistedElement {
    pub fn zeros(lattice: Arc<Lattice>) -> Self {
        let n = lattice.len();
        Self {
            lattice,
            coeffs: vec![C64::new(0.0, 0.0); n],
        }
    }

    /// `δ` at the lattice element with the given index.
    pub fn delta(lattice: Arc<Lattice>, position: usize) -> Self {
        let mut e = Self::zeros(lattice);
        e.coeffs[position] = C64::new(1.0, 0.0);
        e
    }

    /// `δ₀`.
    pub fn delta0(lattice: Arc<Lattice>) -> Self {
        let z = lattice.zero_position();
        Self::delta(lattice, z)
    }

    /// The unit of the algebra, `w^{-1} δ₀`.
    pub fn unit(lattice: Arc<Lattice>) -> Self {
        let w = lattice.measure_weight().to_f64().expect("finite rational");
        let mut e = Self::delta0(lattice);
        e.coeffs[e.lattice.zero_position()] = C64::new(1.0 / w, 0.0);
        e
    }

    pub fn from_coeffs(lattice: Arc<Lattice>, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::DimensionMismatch {
                expected: lattice.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self { lattice, coeffs })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn measure_weight(&self) -> f64 {
        self.lattice
            .measure_weight()
            .to_f64()
            .expect("finite rational")
    }

    fn same_lattice(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice) || *self.lattice == *other.lattice
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            lattice: self.lattice.clone(),
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.same_lattice(other) {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self {
            lattice: self.lattice.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `ℓ²` norm squared with respect to the lattice measure: `w Σ |a(λ)|²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.measure_weight() * self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}

/// `(a₁ * a₂)(λ) = w Σ_{λ'} a₁(λ') a₂(λ−λ') c̃(λ', λ−λ')`.
pub fn twisted_convolve(a1: &TwistedElement, a2: &TwistedElement) -> Result<TwistedElement> {
    if !a1.same_lattice(a2) {
        return Err(Error::LatticeMismatch);
    }
    let lat = &a1.lattice;
    let n = lat.len();
    let w = a1.measure_weight();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for lp in 0..n {
        let c1 = a1.coeffs[lp];
        if c1 == C64::new(0.0, 0.0) {
            continue;
        }
        for rest in 0..n {
            // λ = λ' + rest, contribution a₁(λ') a₂(rest) c̃(λ', rest)
            let lam = lat.add_indices(lp, rest);
            out[lam] += c1 * a2.coeffs[rest] * lat.algebra_cocycle(lp, rest);
        }
    }
    for z in &mut out {
        *z *= w;
    }
    Ok(TwistedElement {
        lattice: a1.lattice.clone(),
        coeffs: out,
    })
}

/// `a*(λ) = c̃(λ, λ) conj(a(−λ))`; involutive.
pub fn twisted_involution(a: &TwistedElement) -> TwistedElement {
    let lat = &a.lattice;
    let n = lat.len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (lam, o) in out.iter_mut().enumerate() {
        let neg = lat.neg_index(lam);
        *o = lat.algebra_cocycle(lam, lam) * a.coeffs[neg].conj();
    }
    TwistedElement {
        lattice: a.lattice.clone(),
        coeffs: out,
    }
}

/// `‖a‖_{ℓ¹_v} = w Σ |a(λ)| v(λ)` for tabulated per-element weight values.
pub fn weighted_norm_values(a: &TwistedElement, values: &[f64]) -> f64 {
    a.measure_weight()
        * a.coeffs
            .iter()
            .zip(values)
            .map(|(z, &v)| z.norm() * v)
            .sum::<f64>()
}

/// `‖a‖_{ℓ¹_v}` against a phase-space weight.
pub fn weighted_norm(a: &TwistedElement, v: &Weight) -> f64 {
    weighted_norm_values(a, &v.on_lattice(a.lattice()))
}

/// The trace `a ↦ a(0)`.
pub fn trace(a: &TwistedElement) -> C64 {
    a.coeffs[a.lattice.zero_position()]
}

/// Unitary basis matrix behind [`represent`]: `π(λ)` for primary algebras,
/// its entrywise conjugate for conjugated (adjoint-lattice) algebras.
fn basis_apply(lat: &Lattice, k: usize, f: &CVec) -> CVec {
    let group = lat.group();
    let xi = lat.point(k);
    if !lat.is_conjugated() {
        apply_shift(group, xi, f)
    } else {
        // conj(π(ξ)) f = conj(π(ξ) conj(f))
        let fc = f.map(|z| z.conj());
        apply_shift(group, xi, &fc).map(|z| z.conj())
    }
}

/// Applies `represent(a)` to a vector without forming the matrix.
pub fn act(a: &TwistedElement, f: &CVec) -> CVec {
    let mut out = CVec::zeros(f.len());
    for k in 0..a.lattice.len() {
        if a.coeffs[k] != C64::new(0.0, 0.0) {
            out += basis_apply(&a.lattice, k, f) * a.coeffs[k];
        }
    }
    out * C64::new(a.measure_weight(), 0.0)
}

/// The representation `a ↦ w Σ a(λ) π̃(λ)` on `ℓ²(G)`, a faithful
/// *-homomorphism of the lattice's algebra (`π̃ = π`, or its conjugate for
/// adjoint lattices).
pub fn represent(a: &TwistedElement) -> CMat {
    let lat = &a.lattice;
    let group = lat.group();
    let n = group.order();
    let w = a.measure_weight();
    let mut m = CMat::zeros(n, n);
    for k in 0..lat.len() {
        let coeff = a.coeffs[k] * w;
        if coeff == C64::new(0.0, 0.0) {
            continue;
        }
        let xi = lat.point(k);
        for ti in 0..n {
            let t = group.from_index(ti);
            let src = group.index_of(&group.sub(&t, &xi.x));
            let ph = group.pairing_num(&xi.omega, &t) as i64;
            let val = group.root_of_unity(if lat.is_conjugated() { -ph } else { ph });
            m[(ti, src)] += coeff * val;
        }
    }
    m
}

/// Hilbert–Schmidt coefficient recovery: the element `b` with
/// `represent(b) = M`, assuming `M ∈ span{π̃(λ)}`. The basis matrices are
/// HS-orthogonal with norm² `|G|`.
pub fn project_to_lattice(lattice: &Arc<Lattice>, m: &CMat) -> TwistedElement {
    let group = lattice.group();
    let n = group.order();
    let w = lattice.measure_weight().to_f64().expect("finite rational");
    let mut coeffs = vec![C64::new(0.0, 0.0); lattice.len()];
    for (k, c) in coeffs.iter_mut().enumerate() {
        let xi = lattice.point(k);
        let mut acc = C64::new(0.0, 0.0);
        for ti in 0..n {
            let t = group.from_index(ti);
            let src = group.index_of(&group.sub(&t, &xi.x));
            let ph = group.pairing_num(&xi.omega, &t) as i64;
            let val = group.root_of_unity(if lattice.is_conjugated() { -ph } else { ph });
            // conj(basis[t, src]) · M[t, src]
            acc += val.conj() * m[(ti, src)];
        }
        *c = acc / C64::new(n as f64 * w, 0.0);
    }
    TwistedElement {
        lattice: lattice.clone(),
        coeffs,
    }
}

/// Outcome of inverting `rep(a)` and pulling the inverse back to lattice
/// coefficients.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralInverseReport {
    /// `‖b‖_{ℓ¹_v}` of the recovered inverse coefficients.
    pub inverse_l1v_norm: f64,
    /// `max |rep(b) rep(a) − I|`.
    pub residual: f64,
    /// `max |rep(b) − rep(a)^{-1}|`; nonzero would flag an inverse outside
    /// `span{π̃(λ)}`.
    pub span_residual: f64,
}

/// Numerically inverts `rep(a)`, projects the inverse back to coefficients,
/// and reports the weighted norm of the result together with the inversion
/// residuals.
pub fn spectral_inverse_check(a: &TwistedElement, v: &Weight) -> Result<SpectralInverseReport> {
    let m = represent(a);
    let inv = m.clone().try_inverse().ok_or(Error::NotInvertible)?;
    let b = project_to_lattice(&a.lattice, &inv);
    let span_residual = crate::max_abs(&(&represent(&b) - &inv));
    let residual = crate::max_abs(&(represent(&b) * &m - CMat::identity(m.nrows(), m.ncols())));
    Ok(SpectralInverseReport {
        inverse_l1v_norm: weighted_norm(&b, v),
        residual,
        span_residual,
    })
}
