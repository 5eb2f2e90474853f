//! The Heisenberg-module model: left/right module actions and inner products
//! over a lattice and its adjoint, the bimodule axioms as numeric checks,
//! module frames, and the bridge between module frames and Gabor frames.
//!
//! The measure convention is the load-bearing detail here. `right_inner` is
//! the bare coefficient table `(⟨π(λ°)g, f⟩)_{λ°}`, while every sum over `Λ°`
//! — the right action and the `Λ°`-algebra convolution — carries the weight
//! `s(Λ)^{-1}` stored on the adjoint lattice. With that placement the
//! compatibility `⟨f,g⟩·h = f·⟨g,h⟩` holds at machine precision, which
//! `bimodule_check` certifies.

use crate::algebra::{act, TwistedElement};
use crate::gabor::{frame_operator, hermitian_eigen};
use crate::lca::FiniteGroup;
use crate::phase::{apply_shift, apply_shift_adjoint, tf_shift, Lattice};
use crate::{inner, CMat, CVec, Error, Result, C64};
use num_traits::ToPrimitive;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

const MODULE_TOL: f64 = 1e-10;

/// A lattice together with its adjoint; the ambient context for all
/// Heisenberg-module operations.
#[derive(Debug, Clone)]
pub struct Bimodule {
    group: FiniteGroup,
    lattice: Arc<Lattice>,
    adjoint: Arc<Lattice>,
}

impl Bimodule {
    pub fn new(lattice: Lattice) -> Self {
        let group = lattice.group().clone();
        let adjoint = Arc::new(lattice.adjoint());
        Self {
            group,
            lattice: Arc::new(lattice),
            adjoint,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn adjoint_lattice(&self) -> &Arc<Lattice> {
        &self.adjoint
    }

    /// `s(Λ)`.
    pub fn size(&self) -> f64 {
        self.lattice.size().to_f64().expect("finite rational")
    }

    fn check_dim(&self, f: &CVec) -> Result<()> {
        if f.len() != self.group.order() {
            return Err(Error::DimensionMismatch {
                expected: self.group.order(),
                got: f.len(),
            });
        }
        Ok(())
    }

    /// `⟨f, g⟩_Λ = (⟨f, π(λ)g⟩)_{λ∈Λ}`, an element of the `Λ`-algebra.
    pub fn left_inner(&self, f: &CVec, g: &CVec) -> Result<TwistedElement> {
        self.check_dim(f)?;
        self.check_dim(g)?;
        let coeffs = self
            .lattice
            .elements()
            .iter()
            .map(|lam| inner(f, &apply_shift(&self.group, lam, g)))
            .collect();
        TwistedElement::from_coeffs(self.lattice.clone(), coeffs)
    }

    /// `⟨f, g⟩_{Λ°} = (⟨π(λ°)g, f⟩)_{λ°∈Λ°}`, an element of the
    /// `Λ°`-algebra (conjugated cocycle, `s(Λ)^{-1}`-weighted measure).
    pub fn right_inner(&self, f: &CVec, g: &CVec) -> Result<TwistedElement> {
        self.check_dim(f)?;
        self.check_dim(g)?;
        let coeffs = self
            .adjoint
            .elements()
            .iter()
            .map(|chi| inner(&apply_shift(&self.group, chi, g), f))
            .collect();
        TwistedElement::from_coeffs(self.adjoint.clone(), coeffs)
    }

    /// `a · f = Σ_λ a(λ) π(λ) f` for `a` in the `Λ`-algebra.
    pub fn left_action(&self, a: &TwistedElement, f: &CVec) -> Result<CVec> {
        self.check_dim(f)?;
        if **a.lattice() != *self.lattice {
            return Err(Error::SupportViolation);
        }
        Ok(act(a, f))
    }

    /// `f · b = s(Λ)^{-1} Σ_{λ°} b(λ°) π(λ°)* f` for `b` in the
    /// `Λ°`-algebra; the measure weight is the one stored on the adjoint
    /// lattice.
    pub fn right_action(&self, f: &CVec, b: &TwistedElement) -> Result<CVec> {
        self.check_dim(f)?;
        if **b.lattice() != *self.adjoint {
            return Err(Error::SupportViolation);
        }
        let w = b.measure_weight();
        let mut out = CVec::zeros(f.len());
        for (k, &c) in b.coeffs().iter().enumerate() {
            if c != C64::new(0.0, 0.0) {
                out += apply_shift_adjoint(&self.group, self.adjoint.point(k), f) * c;
            }
        }
        Ok(out * C64::new(w, 0.0))
    }

    /// `‖⟨f,g⟩·h − f·⟨g,h⟩‖₂` — the bimodule compatibility residual.
    pub fn bimodule_check(&self, f: &CVec, g: &CVec, h: &CVec) -> Result<f64> {
        let lhs = self.left_action(&self.left_inner(f, g)?, h)?;
        let rhs = self.right_action(f, &self.right_inner(g, h)?)?;
        Ok((lhs - rhs).norm())
    }

    /// The matrix of `f ↦ f · b` (right multiplication), used to invert
    /// elements of the `Λ°`-algebra.
    pub fn right_rep(&self, b: &TwistedElement) -> Result<CMat> {
        if **b.lattice() != *self.adjoint {
            return Err(Error::SupportViolation);
        }
        let n = self.group.order();
        let w = b.measure_weight();
        let mut m = CMat::zeros(n, n);
        for (k, &c) in b.coeffs().iter().enumerate() {
            if c != C64::new(0.0, 0.0) {
                m += tf_shift(&self.group, self.adjoint.point(k)).adjoint() * c;
            }
        }
        Ok(m * C64::new(w, 0.0))
    }

    /// Recovers `b` from its right-multiplication matrix by Hilbert–Schmidt
    /// pairing against the `π(χ)*` basis; also returns the residual of the
    /// matrix against the recovered span element.
    pub fn project_to_right_algebra(&self, m: &CMat) -> (TwistedElement, f64) {
        let n = self.group.order();
        let w = self
            .adjoint
            .measure_weight()
            .to_f64()
            .expect("finite rational");
        let coeffs: Vec<C64> = (0..self.adjoint.len())
            .map(|k| {
                // tr((π(χ)*)ᴴ M) = tr(π(χ) M)
                let pi = tf_shift(&self.group, self.adjoint.point(k));
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        acc += pi[(i, j)] * m[(j, i)];
                    }
                }
                acc / C64::new(n as f64 * w, 0.0)
            })
            .collect();
        let b = TwistedElement::from_coeffs(self.adjoint.clone(), coeffs).expect("length matches");
        let residual = crate::max_abs(&(self.right_rep(&b).expect("own lattice") - m));
        (b, residual)
    }
}

/// Two-route Parseval check: module-frame reconstruction against the Gabor
/// frame operator.
#[derive(Debug, Clone, Serialize)]
pub struct ModuleFrameReport {
    pub seed: u64,
    pub trials: usize,
    /// `max_f ‖Σ_j ⟨f,g_j⟩·g_j − f‖ / ‖f‖` over random `f`.
    pub module_recon_residual: f64,
    /// `‖S − I‖_op` of the Gabor frame operator.
    pub frame_op_residual: f64,
    pub module_verdict: bool,
    pub operator_verdict: bool,
    pub verdicts_agree: bool,
}

/// Checks whether `(g_j)` is a Parseval module frame along both routes.
pub fn module_frame_check(
    bimodule: &Bimodule,
    windows: &[CVec],
    trials: usize,
    seed: u64,
) -> Result<ModuleFrameReport> {
    let group = bimodule.group();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = group.order();
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let f = CVec::from_fn(n, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let fnorm = f.norm();
        let mut recon = CVec::zeros(n);
        for g in windows {
            recon += bimodule.left_action(&bimodule.left_inner(&f, g)?, g)?;
        }
        worst = worst.max((recon - &f).norm() / fnorm);
    }
    let s = frame_operator(group, windows, bimodule.lattice());
    let (vals, _) = hermitian_eigen(&s);
    let frame_op_residual = vals.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max);
    let module_verdict = worst <= MODULE_TOL;
    let operator_verdict = frame_op_residual <= MODULE_TOL;
    Ok(ModuleFrameReport {
        seed,
        trials,
        module_recon_residual: worst,
        frame_op_residual,
        module_verdict,
        operator_verdict,
        verdicts_agree: module_verdict == operator_verdict,
    })
}

/// Frame-operator-as-right-multiplier check and the two dual computations.
#[derive(Debug, Clone, Serialize)]
pub struct RightMultiplierReport {
    pub seed: u64,
    /// `max_f ‖S f − f · Σ_i ⟨g_i,g_i⟩_{Λ°}‖ / ‖f‖`.
    pub theta_residual: f64,
    /// `max_i ‖S^{-1} g_i − g_i · B^{-1}‖` for `B = Σ_i ⟨g_i,g_i⟩_{Λ°}`.
    pub dual_discrepancy: f64,
    /// Residual of `B^{-1}`'s matrix against `span{π(λ°)*}`.
    pub span_residual: f64,
    /// Coefficients of `B` minus the algebra unit, for Parseval families.
    pub unit_defect: f64,
}

/// Verifies that the frame operator acts as right multiplication by
/// `B = Σ_i ⟨g_i, g_i⟩_{Λ°}` and compares the canonical dual computed by a
/// matrix solve against right multiplication by `B^{-1}`.
pub fn frame_op_as_right_multiplier(
    bimodule: &Bimodule,
    windows: &[CVec],
    trials: usize,
    seed: u64,
) -> Result<RightMultiplierReport> {
    let group = bimodule.group();
    let n = group.order();
    let s = frame_operator(group, windows, bimodule.lattice());
    let (vals, _) = hermitian_eigen(&s);
    let lower = vals[0];
    let upper = *vals.last().expect("nonempty");
    if lower <= 1e-10_f64.max(1e-10 * upper) {
        return Err(Error::NotAFrame {
            lower,
            tol: 1e-10_f64.max(1e-10 * upper),
        });
    }

    let mut b = TwistedElement::zeros(bimodule.adjoint_lattice().clone());
    for g in windows {
        b = b.add(&bimodule.right_inner(g, g)?)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta_residual = 0.0f64;
    for _ in 0..trials {
        let f = CVec::from_fn(n, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let lhs = &s * &f;
        let rhs = bimodule.right_action(&f, &b)?;
        theta_residual = theta_residual.max((lhs - rhs).norm() / f.norm());
    }

    // invert B inside the Λ°-algebra via its right-multiplication matrix
    let m = bimodule.right_rep(&b)?;
    let m_inv = m.clone().try_inverse().ok_or(Error::NotInvertible)?;
    let (b_inv, span_residual) = bimodule.project_to_right_algebra(&m_inv);

    let lu = s.lu();
    let mut dual_discrepancy = 0.0f64;
    for g in windows {
        let by_solve = lu.solve(g).ok_or(Error::NotInvertible)?;
        let by_mult = bimodule.right_action(g, &b_inv)?;
        dual_discrepancy = dual_discrepancy.max((by_solve - by_mult).norm());
    }

    let unit = TwistedElement::unit(bimodule.adjoint_lattice().clone());
    let unit_defect = b.sub(&unit)?.max_abs();

    Ok(RightMultiplierReport {
        seed,
        theta_residual,
        dual_discrepancy,
        span_residual,
        unit_defect,
    })
}
