//! Gabor analysis on a finite abelian group: the short-time Fourier
//! transform, weighted Feichtinger-type norms, coefficient/synthesis
//! operators, (multiwindow) frame operators, frame bounds, canonical dual
//! and Parseval windows.
//!
//! Frame bounds come from an exact dense Hermitian eigensolve of the frame
//! operator; `S^{-1/2}` is taken through the same eigendecomposition with an
//! eigenvalue floor, and the canonical dual prefers a direct linear solve.
//! Phase-space sums carry the measure weight `1/|G|` so the Moyal identity
//! `Σ_ξ |V_g f(ξ)|² / |G| = ‖f‖² ‖g‖²` holds literally.

use crate::lca::FiniteGroup;
use crate::phase::{apply_shift, Lattice, PhasePoint};
use crate::weights::Weight;
use crate::{inner, CMat, CVec, Error, Result, C64};
use serde::Serialize;

/// Tolerances for declaring a frame: the lower bound must clear both.
const FRAME_ABS_TOL: f64 = 1e-10;
const FRAME_REL_TOL: f64 = 1e-10;

/// STFT values in phase-index order (`x` major, `ω` minor), together with
/// the window they were taken against.
#[derive(Debug, Clone)]
pub struct StftTable {
    group: FiniteGroup,
    values: Vec<C64>,
    window: CVec,
}

impl StftTable {
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn window(&self) -> &CVec {
        &self.window
    }

    pub fn at(&self, xi: &PhasePoint) -> C64 {
        self.values[crate::phase::pp_index(&self.group, xi)]
    }

    /// `Σ_ξ |V(ξ)|² / |G|`; equals `‖f‖²‖g‖²` by the Moyal identity.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.group.order() as f64
    }
}

/// `V_g f(ξ) = ⟨f, π(ξ) g⟩` over the whole phase space.
pub fn stft(group: &FiniteGroup, f: &CVec, g: &CVec) -> Result<StftTable> {
    let n = group.order();
    if f.len() != n || g.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.len().max(g.len()),
        });
    }
    let mut values = vec![C64::new(0.0, 0.0); n * n];
    let elements: Vec<_> = group.elements().collect();
    for xi_x in 0..n {
        let x = group.from_index(xi_x);
        // h_x(t) = f(t) conj(g(t − x)); V(x, ω) = Σ_t h_x(t) conj(⟨ω, t⟩)
        let h: Vec<C64> = (0..n)
            .map(|ti| {
                let src = group.index_of(&group.sub(&elements[ti], &x));
                f[ti] * g[src].conj()
            })
            .collect();
        for wi in 0..n {
            let w = &elements[wi];
            let mut acc = C64::new(0.0, 0.0);
            for (ti, ht) in h.iter().enumerate() {
                let ph = group.pairing_num(w, &elements[ti]);
                acc += ht * group.root_of_unity(-(ph as i64));
            }
            values[xi_x * n + wi] = acc;
        }
    }
    Ok(StftTable {
        group: group.clone(),
        values,
        window: g.clone(),
    })
}

/// `‖f‖_{M¹_v} = Σ_ξ |V_g f(ξ)| v(ξ) / |G|` for a nonzero reference window.
pub fn m1v_norm(group: &FiniteGroup, f: &CVec, g: &CVec, v: &Weight) -> Result<f64> {
    if g.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return Err(Error::ZeroWindow);
    }
    let table = stft(group, f, g)?;
    Ok(table
        .values()
        .iter()
        .enumerate()
        .map(|(i, z)| z.norm() * v.at_index(i))
        .sum::<f64>()
        / group.order() as f64)
}

/// Analysis coefficients `C_{g,Λ} f = (⟨f, π(λ)g⟩)_{λ∈Λ}`.
pub fn analysis(group: &FiniteGroup, lattice: &Lattice, g: &CVec, f: &CVec) -> Vec<C64> {
    lattice
        .elements()
        .iter()
        .map(|lam| inner(f, &apply_shift(group, lam, g)))
        .collect()
}

/// Synthesis `D_{g,Λ} c = Σ_λ c_λ π(λ) g`; the adjoint of [`analysis`].
pub fn synthesis(group: &FiniteGroup, lattice: &Lattice, g: &CVec, coeffs: &[C64]) -> CVec {
    let mut out = CVec::zeros(group.order());
    for (lam, &c) in lattice.elements().iter().zip(coeffs) {
        if c != C64::new(0.0, 0.0) {
            out += apply_shift(group, lam, g) * c;
        }
    }
    out
}

/// The multiwindow Gabor frame operator
/// `S = Σ_i Σ_{λ∈Λ} π(λ)g_i (π(λ)g_i)ᴴ`, Hermitian positive semidefinite.
pub fn frame_operator(group: &FiniteGroup, windows: &[CVec], lattice: &Lattice) -> CMat {
    let n = group.order();
    let mut s = CMat::zeros(n, n);
    for g in windows {
        for lam in lattice.elements() {
            let h = apply_shift(group, lam, g);
            s.gerc(C64::new(1.0, 0.0), &h, &h, C64::new(1.0, 0.0));
        }
    }
    s
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    // symmetrize against accumulation roundoff before the solve
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (vals, vecs)
}

/// Frame bounds and the Parseval residual of a window family on a lattice.
#[derive(Debug, Clone, Serialize)]
pub struct FrameReport {
    /// Smallest eigenvalue of `S`.
    pub lower: f64,
    /// Largest eigenvalue of `S`.
    pub upper: f64,
    /// `max |eig(S) − 1| = ‖S − I‖_op`.
    pub parseval_residual: f64,
    pub eig_method: &'static str,
    /// Lower bound clears the absolute and relative tolerances.
    pub is_frame: bool,
}

pub fn frame_bounds(group: &FiniteGroup, windows: &[CVec], lattice: &Lattice) -> FrameReport {
    let s = frame_operator(group, windows, lattice);
    let (vals, _) = hermitian_eigen(&s);
    report_from_eigs(&vals)
}

fn report_from_eigs(vals: &[f64]) -> FrameReport {
    let lower = *vals.first().expect("nonempty spectrum");
    let upper = *vals.last().expect("nonempty spectrum");
    FrameReport {
        lower,
        upper,
        parseval_residual: vals.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max),
        eig_method: "exact-hermitian",
        is_frame: lower > FRAME_ABS_TOL && lower > FRAME_REL_TOL * upper,
    }
}

/// Largest eigenvalue of `S` (the optimal Bessel bound).
pub fn bessel_bound(group: &FiniteGroup, windows: &[CVec], lattice: &Lattice) -> f64 {
    frame_bounds(group, windows, lattice).upper
}

fn ensure_frame(vals: &[f64]) -> Result<()> {
    let rep = report_from_eigs(vals);
    if !rep.is_frame {
        return Err(Error::NotAFrame {
            lower: rep.lower,
            tol: FRAME_ABS_TOL.max(FRAME_REL_TOL * rep.upper),
        });
    }
    Ok(())
}

/// Canonical dual windows `h_i = S^{-1} g_i`, computed by a direct solve.
pub fn canonical_dual(
    group: &FiniteGroup,
    windows: &[CVec],
    lattice: &Lattice,
) -> Result<Vec<CVec>> {
    let s = frame_operator(group, windows, lattice);
    let (vals, _) = hermitian_eigen(&s);
    ensure_frame(&vals)?;
    let lu = s.lu();
    windows
        .iter()
        .map(|g| lu.solve(g).ok_or(Error::NotInvertible))
        .collect()
}

/// Canonical Parseval windows `h_i = S^{-1/2} g_i` via the
/// eigendecomposition `S = U diag(λ) Uᴴ`.
pub fn parseval_window(
    group: &FiniteGroup,
    windows: &[CVec],
    lattice: &Lattice,
) -> Result<Vec<CVec>> {
    let s = frame_operator(group, windows, lattice);
    let (vals, vecs) = hermitian_eigen(&s);
    ensure_frame(&vals)?;
    let n = group.order();
    let inv_sqrt = CMat::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(1.0 / vals[i].sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let s_inv_sqrt = &vecs * inv_sqrt * vecs.adjoint();
    Ok(windows.iter().map(|g| &s_inv_sqrt * g).collect())
}
