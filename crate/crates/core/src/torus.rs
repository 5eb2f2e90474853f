//! Discretized-ℝ² phase space: a rectangular lattice `αZ × βZ` truncated to
//! a box, with the continuous Heisenberg cocycle `e^{−2πi ω₂ x₁}` carried as
//! an exact rational phase. This hosts the canonical Dirac operator of the
//! noncommutative 2-torus (derivation form) and its reconciliation with the
//! weight-built `|D|`, plus truncation-ladder norm profiles for coefficient
//! sequences.

use crate::spectral::{conv_matrix, DiracOperator, DiracShape, TruncationProfile, TwistedDomain};
use crate::weights::CompatibleFunction;
use crate::{CMat, Error, Result, C64};
use num_rational::Rational64;
use num_traits::ToPrimitive;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Points `(α m, β n)` with `|m| ≤ m_max`, `|n| ≤ n_max`, treated as
/// finitely supported coefficient sites of the lattice `αZ × βZ ⊂ ℝ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxLattice {
    alpha: Rational64,
    beta: Rational64,
    m_max: i64,
    n_max: i64,
}

impl BoxLattice {
    pub fn new(alpha: Rational64, beta: Rational64, m_max: i64, n_max: i64) -> Result<Self> {
        if alpha <= Rational64::from_integer(0) || beta <= Rational64::from_integer(0) {
            return Err(Error::Format("box lattice needs α, β > 0".into()));
        }
        if m_max < 0 || n_max < 0 {
            return Err(Error::Format("box extents must be nonnegative".into()));
        }
        Ok(Self {
            alpha,
            beta,
            m_max,
            n_max,
        })
    }

    /// The integer lattice `Z²` truncated to `[−r, r]²`.
    pub fn integer(r: i64) -> Result<Self> {
        Self::new(
            Rational64::from_integer(1),
            Rational64::from_integer(1),
            r,
            r,
        )
    }

    pub fn extents(&self) -> (i64, i64) {
        (self.m_max, self.n_max)
    }

    fn n_span(&self) -> i64 {
        2 * self.n_max + 1
    }

    pub fn index_of(&self, m: i64, n: i64) -> Option<usize> {
        if m.abs() > self.m_max || n.abs() > self.n_max {
            return None;
        }
        Some(((m + self.m_max) * self.n_span() + (n + self.n_max)) as usize)
    }

    pub fn mn_of(&self, idx: usize) -> (i64, i64) {
        let idx = idx as i64;
        (
            idx / self.n_span() - self.m_max,
            idx % self.n_span() - self.n_max,
        )
    }

    /// Real coordinates `(x, ω) = (α m, β n)`.
    pub fn coords(&self, idx: usize) -> (f64, f64) {
        let (m, n) = self.mn_of(idx);
        (
            self.alpha.to_f64().expect("finite") * m as f64,
            self.beta.to_f64().expect("finite") * n as f64,
        )
    }

    pub fn dist0_sq(&self, idx: usize) -> f64 {
        let (x, w) = self.coords(idx);
        x * x + w * w
    }

    pub fn add(&self, i: usize, j: usize) -> Option<usize> {
        let (mi, ni) = self.mn_of(i);
        let (mj, nj) = self.mn_of(j);
        self.index_of(mi + mj, ni + nj)
    }

    /// `(1 + x² + ω²)^{s/2}` per point.
    pub fn weight_values(&self, s: f64) -> Vec<f64> {
        (0..self.len())
            .map(|i| (1.0 + self.dist0_sq(i)).powf(s / 2.0))
            .collect()
    }

    /// `f((1 + x² + ω²)^{s/2})` per point.
    pub fn fv_values(&self, f: &CompatibleFunction, s: f64) -> Vec<f64> {
        self.weight_values(s)
            .into_iter()
            .map(|t| f.eval(t))
            .collect()
    }
}

impl TwistedDomain for BoxLattice {
    fn len(&self) -> usize {
        ((2 * self.m_max + 1) * self.n_span()) as usize
    }

    fn zero_index(&self) -> usize {
        self.index_of(0, 0).expect("0 in box")
    }

    fn sub(&self, i: usize, j: usize) -> Option<usize> {
        let (mi, ni) = self.mn_of(i);
        let (mj, nj) = self.mn_of(j);
        self.index_of(mi - mj, ni - nj)
    }

    fn cocycle(&self, i: usize, j: usize) -> C64 {
        // c(ξ_i, ξ_j) = e^{−2πi ω_j x_i}, phase reduced as an exact rational
        let (mi, _) = self.mn_of(i);
        let (_, nj) = self.mn_of(j);
        let phase = self.alpha * self.beta * Rational64::from_integer(mi * nj);
        let frac = phase - phase.floor();
        // quarter turns exactly; c carries a minus sign on the phase
        match (*frac.numer(), *frac.denom()) {
            (0, _) => C64::new(1.0, 0.0),
            (1, 2) => C64::new(-1.0, 0.0),
            (1, 4) => C64::new(0.0, -1.0),
            (3, 4) => C64::new(0.0, 1.0),
            _ => C64::from_polar(1.0, -std::f64::consts::TAU * frac.to_f64().expect("finite")),
        }
    }

    fn measure_weight(&self) -> f64 {
        1.0
    }
}

/// Diagonal multiplier of `∂₁ + i∂₂`: `m₁(λ) = 2πi x − 2π ω`.
pub fn derivation_plus(bx: &BoxLattice, idx: usize) -> C64 {
    let (x, w) = bx.coords(idx);
    C64::new(-std::f64::consts::TAU * w, std::f64::consts::TAU * x)
}

/// Diagonal multiplier of `−∂₁ + i∂₂`: `m₂(λ) = −2πi x − 2π ω = conj(m₁)`.
pub fn derivation_minus(bx: &BoxLattice, idx: usize) -> C64 {
    derivation_plus(bx, idx).conj()
}

/// Coefficientwise derivations `∂₁ a = (2πi x a(x,ω))`, `∂₂ a = (2πi ω a)`.
pub fn d1_coeffs(bx: &BoxLattice, a: &[C64]) -> Vec<C64> {
    (0..bx.len())
        .map(|i| {
            let (x, _) = bx.coords(i);
            a[i] * C64::new(0.0, std::f64::consts::TAU * x)
        })
        .collect()
}

pub fn d2_coeffs(bx: &BoxLattice, a: &[C64]) -> Vec<C64> {
    (0..bx.len())
        .map(|i| {
            let (_, w) = bx.coords(i);
            a[i] * C64::new(0.0, std::f64::consts::TAU * w)
        })
        .collect()
}

/// The canonical Dirac matrix `[[0, ∂₁ + i∂₂], [−∂₁ + i∂₂, 0]]` acting on
/// `ℓ²(box) ⊕ ℓ²(box)` as diagonal multipliers.
pub fn canonical_dirac_matrix(bx: &BoxLattice) -> CMat {
    let n = bx.len();
    let mut d = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        d[(i, n + i)] = derivation_plus(bx, i);
        d[(n + i, i)] = derivation_minus(bx, i);
    }
    d
}

/// `|D|` built from `f(v) = 2π(v² − 1)^{1/2}` of `v = (1 + x² + ω²)^{1/2}`,
/// certified over the box.
pub fn weight_built_absd(bx: &BoxLattice) -> Result<DiracOperator> {
    let fv = bx.fv_values(&CompatibleFunction::TorusSqrt, 1.0);
    let v = bx.weight_values(1.0);
    DiracOperator::from_values(bx, fv, v, DiracShape::Diag, |i, j| bx.add(i, j))
}

/// Reconciliation of the derivation-built Dirac operator with the
/// weight-built `|D|` on a truncation box.
#[derive(Debug, Clone, Serialize)]
pub struct NcTorusReport {
    pub seed: u64,
    /// `max_λ |(D²)[λ,λ] − 4π²(x² + ω²)|` (both components).
    pub d2_diag_residual: f64,
    /// Largest off-diagonal entry of `D²`.
    pub d2_offdiag_residual: f64,
    /// `max |  |D|_eig − |D|_weight |` entrywise on the `2n × 2n` matrices.
    pub absd_residual: f64,
    /// Two-path `[D, a]` agreement, largest entry difference.
    pub commutator_entry_residual: f64,
    /// Relative difference of the two-path operator norms of `[D, a]`.
    pub commutator_norm_rel_diff: f64,
}

pub fn nc_torus_reconcile(bx: &BoxLattice, seed: u64) -> Result<NcTorusReport> {
    let n = bx.len();
    let d = canonical_dirac_matrix(bx);
    let d2 = &d * &d;

    let mut d2_diag_residual = 0.0f64;
    let mut d2_offdiag_residual = 0.0f64;
    for i in 0..2 * n {
        for j in 0..2 * n {
            if i == j {
                let (x, w) = bx.coords(i % n);
                let tx = std::f64::consts::TAU * x;
                let tw = std::f64::consts::TAU * w;
                let expected = tw * tw + tx * tx;
                d2_diag_residual = d2_diag_residual.max((d2[(i, j)].re - expected).abs());
                d2_diag_residual = d2_diag_residual.max(d2[(i, j)].im.abs());
            } else {
                d2_offdiag_residual = d2_offdiag_residual.max(d2[(i, j)].norm());
            }
        }
    }

    // |D| two ways: eigendecomposition of the canonical D vs the
    // weight-built diagonal
    let (vals, vecs) = crate::gabor::hermitian_eigen(&d);
    let absd_eig = {
        let abs_diag = CMat::from_fn(2 * n, 2 * n, |i, j| {
            if i == j {
                C64::new(vals[i].abs(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &vecs * abs_diag * vecs.adjoint()
    };
    let absd_built = weight_built_absd(bx)?.matrix();
    let absd_residual = crate::max_abs(&(&absd_eig - &absd_built));

    // [D, a] two ways on a random coefficient vector
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let am = conv_matrix(bx, &a);
    let big_a = {
        let mut m = CMat::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&am);
        m.view_mut((n, n), (n, n)).copy_from(&am);
        m
    };
    let commutator = &d * &big_a - &big_a * &d;

    let dplus: Vec<C64> = (0..n).map(|i| a[i] * derivation_plus(bx, i)).collect();
    let dminus: Vec<C64> = (0..n).map(|i| a[i] * derivation_minus(bx, i)).collect();
    let block = {
        let mut m = CMat::zeros(2 * n, 2 * n);
        m.view_mut((0, n), (n, n))
            .copy_from(&conv_matrix(bx, &dplus));
        m.view_mut((n, 0), (n, n))
            .copy_from(&conv_matrix(bx, &dminus));
        m
    };
    let commutator_entry_residual = crate::max_abs(&(&commutator - &block));
    let n1 = crate::spectral::op_norm(&commutator);
    let n2 = crate::spectral::op_norm(&block);
    let commutator_norm_rel_diff = (n1 - n2).abs() / n1.max(n2).max(1e-300);

    Ok(NcTorusReport {
        seed,
        d2_diag_residual,
        d2_offdiag_residual,
        absd_residual,
        commutator_entry_residual,
        commutator_norm_rel_diff,
    })
}

/// Certifies a coefficient function on the largest box of a radius ladder
/// and attaches the cross-radius norm profile to the certificate.
pub fn qck_element_ladder<F>(
    alpha: Rational64,
    beta: Rational64,
    radii: &[i64],
    s: f64,
    f: &CompatibleFunction,
    eval: F,
    k: u32,
) -> Result<crate::spectral::QCkCertificate>
where
    F: Fn(f64, f64) -> C64,
{
    let profile = box_ladder_profile(alpha, beta, radii, s, &eval, k + 2)?;
    let largest = *radii
        .iter()
        .max()
        .ok_or_else(|| Error::Format("radius ladder must be nonempty".into()))?;
    let bx = BoxLattice::new(alpha, beta, largest, largest)?;
    let fv = bx.fv_values(f, s);
    let v = bx.weight_values(s);
    let dirac = DiracOperator::from_values(&bx, fv, v, DiracShape::OffDiag, |i, j| bx.add(i, j))?;
    let coeffs: Vec<C64> = (0..bx.len())
        .map(|i| {
            let (x, w) = bx.coords(i);
            eval(x, w)
        })
        .collect();
    let mut cert = crate::spectral::certify_on_domain(&bx, &dirac, &coeffs, k)?;
    cert.truncation_profile = Some(profile);
    Ok(cert)
}

/// Weighted-norm ladder of an explicit coefficient function over growing
/// boxes: `norms[j][r] = Σ_{box(R_r)} |a(x,ω)| v_s(x,ω)^j`.
pub fn box_ladder_profile<F>(
    alpha: Rational64,
    beta: Rational64,
    radii: &[i64],
    s: f64,
    eval: F,
    j_max: u32,
) -> Result<TruncationProfile>
where
    F: Fn(f64, f64) -> C64,
{
    let mut norms = vec![Vec::new(); j_max as usize + 1];
    for &r in radii {
        let bx = BoxLattice::new(alpha, beta, r, r)?;
        let v = bx.weight_values(s);
        for (j, row) in norms.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (i, vi) in v.iter().enumerate() {
                let (x, w) = bx.coords(i);
                acc += eval(x, w).norm() * vi.powi(j as i32);
            }
            row.push(acc);
        }
    }
    let last_ratio = norms
        .iter()
        .map(|seq| {
            if seq.len() < 2 {
                1.0
            } else {
                seq[seq.len() - 1] / seq[seq.len() - 2].max(1e-300)
            }
        })
        .collect();
    let diverged = norms
        .iter()
        .map(|seq| crate::spectral::profile_diverges(seq))
        .collect();
    Ok(TruncationProfile {
        radii: radii.iter().map(|&r| r as f64).collect(),
        norms,
        last_ratio,
        diverged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn box_indexing_roundtrip() {
        let bx = BoxLattice::new(Rational64::new(1, 1), Rational64::new(1, 2), 3, 5).unwrap();
        for i in 0..bx.len() {
            let (m, n) = bx.mn_of(i);
            assert_eq!(bx.index_of(m, n), Some(i));
        }
        assert_eq!(bx.index_of(4, 0), None);
        assert_eq!(bx.index_of(0, 6), None);
        let (x, w) = bx.coords(bx.index_of(2, -3).unwrap());
        assert_abs_diff_eq!(x, 2.0, epsilon = 0.0);
        assert_abs_diff_eq!(w, -1.5, epsilon = 0.0);
    }

    #[test]
    fn integer_lattice_cocycle_is_trivial() {
        let bx = BoxLattice::integer(2).unwrap();
        for i in 0..bx.len() {
            for j in 0..bx.len() {
                assert_eq!(bx.cocycle(i, j), C64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn half_step_cocycle_is_sign() {
        let bx = BoxLattice::new(Rational64::new(1, 1), Rational64::new(1, 2), 2, 2).unwrap();
        let i = bx.index_of(1, 0).unwrap();
        let j = bx.index_of(0, 1).unwrap();
        // e^{−2πi · (1/2)·1·1} = −1
        assert_eq!(bx.cocycle(i, j), C64::new(-1.0, 0.0));
        assert_eq!(bx.cocycle(j, i), C64::new(1.0, 0.0)); // ω_i = 0
    }

    #[test]
    fn derivations_on_delta() {
        let bx = BoxLattice::integer(2).unwrap();
        let mut a = vec![C64::new(0.0, 0.0); bx.len()];
        let idx = bx.index_of(1, 0).unwrap();
        a[idx] = C64::new(1.0, 0.0);
        let d1 = d1_coeffs(&bx, &a);
        let d2 = d2_coeffs(&bx, &a);
        // ∂₁ δ_{(1,0)} = 2πi δ_{(1,0)}, ∂₂ δ_{(1,0)} = 0
        for i in 0..bx.len() {
            if i == idx {
                assert!((d1[i] - C64::new(0.0, std::f64::consts::TAU)).norm() <= 1e-15);
            } else {
                assert_eq!(d1[i], C64::new(0.0, 0.0));
            }
            assert_eq!(d2[i], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn reconcile_on_integer_box() {
        let bx = BoxLattice::integer(2).unwrap();
        let rep = nc_torus_reconcile(&bx, 7).unwrap();
        assert_eq!(rep.d2_diag_residual, 0.0);
        assert_eq!(rep.d2_offdiag_residual, 0.0);
        assert!(rep.absd_residual <= 1e-10, "absd {}", rep.absd_residual);
        assert!(
            rep.commutator_entry_residual <= 1e-10,
            "comm {}",
            rep.commutator_entry_residual
        );
        assert!(rep.commutator_norm_rel_diff <= 1e-10);
    }

    #[test]
    fn reconcile_on_half_step_box() {
        let bx = BoxLattice::new(Rational64::new(1, 1), Rational64::new(1, 2), 2, 3).unwrap();
        let rep = nc_torus_reconcile(&bx, 11).unwrap();
        assert_eq!(rep.d2_diag_residual, 0.0);
        assert!(rep.absd_residual <= 1e-10);
        assert!(rep.commutator_entry_residual <= 1e-10);
    }

    #[test]
    fn element_ladder_attaches_profile() {
        use crate::weights::CompatibleFunction;
        let s = 3.0;
        let k = 1u32;
        let cert = qck_element_ladder(
            Rational64::from_integer(1),
            Rational64::from_integer(1),
            &[2, 4, 8],
            s,
            &CompatibleFunction::Identity,
            |x, w| C64::new((1.0 + x * x + w * w).powf(-(k as f64 + 2.0) * s / 2.0), 0.0),
            k,
        )
        .unwrap();
        assert!(cert.pass);
        let profile = cert.truncation_profile.as_ref().unwrap();
        // bounded through k+1, divergent at k+2
        assert!(!profile.diverged[(k + 1) as usize]);
        assert!(profile.diverged[(k + 2) as usize]);
    }

    #[test]
    fn ladder_profile_detects_designed_divergence() {
        // a(λ) = v(λ)^{−(k+2)} passes powers up to k+1 and diverges at k+2
        // (s = 3 makes the v^{−1} tail summable on Z²)
        let s = 3.0;
        let k = 2i32;
        let radii = [2, 4, 8, 16];
        let profile = box_ladder_profile(
            Rational64::from_integer(1),
            Rational64::from_integer(1),
            &radii,
            s,
            |x, w| C64::new((1.0 + x * x + w * w).powf(-(k as f64 + 2.0) * s / 2.0), 0.0),
            (k + 2) as u32,
        )
        .unwrap();
        for j in 0..=(k + 1) as usize {
            assert!(
                !profile.diverged[j],
                "power {j} should stay bounded: {:?}",
                profile.norms[j]
            );
        }
        assert!(
            profile.diverged[(k + 2) as usize],
            "power k+2 should diverge: {:?}",
            profile.norms[(k + 2) as usize]
        );
    }
}
