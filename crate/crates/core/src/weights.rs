//! Weights on phase space, verification of the weight axioms, spectral-triple
//! compatible functions `f`, and certified constants `C_dif`, `C_sm`, `C_gr`
//! on a lattice.
//!
//! All constants are sharp sups over the finite domain, with witnessing pairs
//! recorded; re-evaluating the defining ratio at a witness reproduces the
//! constant. Ratios `0/0` count as 0 (no constraint) and `x/0` as `+∞`
//! (incompatible).

use crate::lca::FiniteGroup;
use crate::lca::TorusMetric;
use crate::phase::{pp_dist0_sq, pp_from_index, Lattice, PhasePoint};
use crate::{Error, Result};
use serde::Serialize;

/// Closed-form weight families evaluated on a metric distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WeightForm {
    /// `v ≡ c` with `c ≥ 1`.
    Constant(f64),
    /// `v(ξ) = (1 + (d(ξ,0)/scale)²)^{s/2}`; `scale = 1` for lattice work,
    /// `scale = √N` when a group `Z_N` discretizes a unit-step model of ℝ.
    Polynomial { s: f64, scale: f64 },
}

impl WeightForm {
    /// Evaluates the weight from the squared metric distance, keeping
    /// integer `d²` values exact.
    pub fn eval_dist_sq(&self, d_sq: f64) -> f64 {
        match *self {
            WeightForm::Constant(c) => c,
            WeightForm::Polynomial { s, scale } => (1.0 + d_sq / (scale * scale)).powf(s / 2.0),
        }
    }
}

/// A weight tabulated over the full phase space of a finite group.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    group: FiniteGroup,
    form: Option<WeightForm>,
    table: Vec<f64>,
}

impl Weight {
    /// `v_s(ξ) = (1 + d(ξ,0)²)^{s/2}` with the wrap metric; `v_0 ≡ 1`.
    pub fn polynomial(group: &FiniteGroup, s: f64) -> Result<Self> {
        Self::polynomial_scaled(group, s, 1.0)
    }

    /// Polynomial weight with the metric measured in units of `scale`
    /// group points.
    pub fn polynomial_scaled(group: &FiniteGroup, s: f64, scale: f64) -> Result<Self> {
        if s < 0.0 || scale.is_nan() || scale <= 0.0 {
            return Err(Error::Format(
                "polynomial weight needs s >= 0, scale > 0".into(),
            ));
        }
        let form = WeightForm::Polynomial { s, scale };
        Ok(Self::from_form(group, form))
    }

    /// The constant weight `v ≡ c`, `c ≥ 1`.
    pub fn constant(group: &FiniteGroup, c: f64) -> Result<Self> {
        if c < 1.0 {
            return Err(Error::Format("a weight must satisfy v >= 1".into()));
        }
        Ok(Self::from_form(group, WeightForm::Constant(c)))
    }

    fn from_form(group: &FiniteGroup, form: WeightForm) -> Self {
        let metric = TorusMetric::new(group);
        let npp = group.order() * group.order();
        let table = (0..npp)
            .map(|i| {
                let xi = pp_from_index(group, i);
                form.eval_dist_sq(pp_dist0_sq(&metric, &xi) as f64)
            })
            .collect();
        Self {
            group: group.clone(),
            form: Some(form),
            table,
        }
    }

    /// Custom tabulated weight; every value must be ≥ 1.
    pub fn from_table(group: &FiniteGroup, table: Vec<f64>) -> Result<Self> {
        if table.len() != group.order() * group.order() {
            return Err(Error::DimensionMismatch {
                expected: group.order() * group.order(),
                got: table.len(),
            });
        }
        if table.iter().any(|&v| v.is_nan() || v < 1.0) {
            return Err(Error::Format("a weight must satisfy v >= 1".into()));
        }
        Ok(Self {
            group: group.clone(),
            form: None,
            table,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn form(&self) -> Option<WeightForm> {
        self.form
    }

    pub fn at_index(&self, phase_index: usize) -> f64 {
        self.table[phase_index]
    }

    pub fn at_point(&self, xi: &PhasePoint) -> f64 {
        self.table[crate::phase::pp_index(&self.group, xi)]
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Restriction of the weight to a lattice, in element order.
    pub fn on_lattice(&self, lattice: &Lattice) -> Vec<f64> {
        lattice
            .elements()
            .iter()
            .map(|p| self.at_point(p))
            .collect()
    }

    /// `v^j` restricted to a lattice.
    pub fn pow_on_lattice(&self, lattice: &Lattice, j: i32) -> Vec<f64> {
        lattice
            .elements()
            .iter()
            .map(|p| self.at_point(p).powi(j))
            .collect()
    }
}

/// Outcome of exhaustively checking the weight axioms over phase space.
#[derive(Debug, Clone, Serialize)]
pub struct WeightReport {
    /// `v(ξ+χ) ≤ v(ξ)v(χ)` for every pair.
    pub submult_ok: bool,
    /// `sup v(ξ+χ) / (v(ξ)v(χ))`; ≤ 1 iff submultiplicative.
    pub submult_sup_ratio: f64,
    /// Phase indices of the pair realizing the sup.
    pub submult_witness: (usize, usize),
    /// `v(ξ) = v(−ξ)` for every point.
    pub radial_ok: bool,
    /// Polynomial growth holds trivially on a finite domain with the
    /// witnessing pair `(D, s) = (max v, 0)`.
    pub growth_constant: f64,
    /// Smallest valid `C_v` with `|v(χ+ξ) − v(χ)| ≤ C_v v(ξ)`.
    pub commutator_c_v: f64,
    pub cv_witness: (usize, usize),
}

/// Exhaustive axiom check over all `|G|⁴` phase-space pairs; quadratic in the
/// phase-space size, intended for desk-scale groups.
pub fn verify_weight(v: &Weight) -> WeightReport {
    let group = &v.group;
    let n = group.order();
    let npp = n * n;
    let idx_add = |a: usize, b: usize| {
        let pa = pp_from_index(group, a);
        let pb = pp_from_index(group, b);
        crate::phase::pp_index(group, &crate::phase::pp_add(group, &pa, &pb))
    };

    let mut radial_ok = true;
    for i in 0..npp {
        let xi = pp_from_index(group, i);
        let ni = crate::phase::pp_index(group, &crate::phase::pp_neg(group, &xi));
        if v.table[i] != v.table[ni] {
            radial_ok = false;
            break;
        }
    }

    let mut submult_sup = 0.0f64;
    let mut submult_wit = (0, 0);
    let mut cv_sup = 0.0f64;
    let mut cv_wit = (0, 0);
    for chi in 0..npp {
        for xi in 0..npp {
            let sum = idx_add(chi, xi);
            let r = v.table[sum] / (v.table[chi] * v.table[xi]);
            if r > submult_sup {
                submult_sup = r;
                submult_wit = (chi, xi);
            }
            let d = (v.table[sum] - v.table[chi]).abs() / v.table[xi];
            if d > cv_sup {
                cv_sup = d;
                cv_wit = (chi, xi);
            }
        }
    }

    WeightReport {
        submult_ok: submult_sup <= 1.0,
        submult_sup_ratio: submult_sup,
        submult_witness: submult_wit,
        radial_ok,
        growth_constant: v.table.iter().cloned().fold(0.0, f64::max),
        commutator_c_v: cv_sup,
        cv_witness: cv_wit,
    }
}

/// Spectral-triple compatible functions `f: [0,∞) → [0,∞)` applied to a
/// weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CompatibleFunction {
    /// `f(t) = t`; compatible whenever the weight is commutator bounded.
    Identity,
    /// `f ≡ c ≥ 0`; compatible for every weight and lattice.
    Constant(f64),
    /// `f(t) = 2π (t² − 1)^{1/2}`, which turns `v = (1 + x² + ω²)^{1/2}`
    /// into `2π (x² + ω²)^{1/2}`.
    TorusSqrt,
}

impl CompatibleFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            CompatibleFunction::Identity => t,
            CompatibleFunction::Constant(c) => c,
            CompatibleFunction::TorusSqrt => std::f64::consts::TAU * (t * t - 1.0).max(0.0).sqrt(),
        }
    }

    /// `f(v)` on a lattice, in element order.
    pub fn on_lattice(&self, v: &Weight, lattice: &Lattice) -> Vec<f64> {
        v.on_lattice(lattice)
            .into_iter()
            .map(|t| self.eval(t))
            .collect()
    }
}

/// Certified constants of a compatible function on a concrete finite domain.
#[derive(Debug, Clone, Serialize)]
pub struct CompatibilityCertificate {
    /// `sup |f(v)(λ+μ) − f(v)(λ)| / f(v)(μ)`.
    pub c_dif: f64,
    /// `sup f(v)(λ+μ) / (f(v)(λ) f(v)(μ))` over pairs where neither factor
    /// vanishes; zeros of `f(v)` make the inequality unconstraining and are
    /// counted in [`CompatibilityCertificate::sm_excluded_pairs`].
    pub c_sm: f64,
    /// `sup f(v)(λ) / v(λ)`.
    pub c_gr: f64,
    /// Number of points in the scanned domain.
    pub domain_points: usize,
    /// Witness pair `(λ, μ)` for `c_dif`, as element indices.
    pub dif_witness: (usize, usize),
    pub sm_witness: (usize, usize),
    pub gr_witness: usize,
    /// Pairs skipped in the `c_sm` sup because `f(v)` vanished on a factor
    /// while the sum did not.
    pub sm_excluded_pairs: usize,
}

impl CompatibilityCertificate {
    /// All three constants finite.
    pub fn is_compatible(&self) -> bool {
        self.c_dif.is_finite() && self.c_sm.is_finite() && self.c_gr.is_finite()
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// Sharp-constant scan over any finite domain given by tabulated values and
/// a partial addition on indices. Pairs whose sum leaves the domain are
/// skipped, which is the truncation semantics used for box lattices.
pub fn stc_scan<F>(fv: &[f64], v: &[f64], add: F) -> CompatibilityCertificate
where
    F: Fn(usize, usize) -> Option<usize>,
{
    let n = fv.len();
    let mut c_dif = 0.0f64;
    let mut dif_wit = (0, 0);
    let mut c_sm = 0.0f64;
    let mut sm_wit = (0, 0);
    let mut sm_excluded = 0usize;
    for lam in 0..n {
        for mu in 0..n {
            let Some(sum) = add(lam, mu) else { continue };
            let rd = ratio((fv[sum] - fv[lam]).abs(), fv[mu]);
            if rd > c_dif {
                c_dif = rd;
                dif_wit = (lam, mu);
            }
            if fv[lam] == 0.0 || fv[mu] == 0.0 {
                if fv[sum] != 0.0 {
                    sm_excluded += 1;
                }
            } else {
                let rs = ratio(fv[sum], fv[lam] * fv[mu]);
                if rs > c_sm {
                    c_sm = rs;
                    sm_wit = (lam, mu);
                }
            }
        }
    }
    let mut c_gr = 0.0f64;
    let mut gr_wit = 0;
    for lam in 0..n {
        let r = ratio(fv[lam], v[lam]);
        if r > c_gr {
            c_gr = r;
            gr_wit = lam;
        }
    }
    CompatibilityCertificate {
        c_dif,
        c_sm,
        c_gr,
        domain_points: n,
        dif_witness: dif_wit,
        sm_witness: sm_wit,
        gr_witness: gr_wit,
        sm_excluded_pairs: sm_excluded,
    }
}

/// Certifies `f` for `v` on a lattice; infinite constants are reported in
/// the certificate, not thrown.
pub fn stc_constants(
    f: &CompatibleFunction,
    v: &Weight,
    lattice: &Lattice,
) -> CompatibilityCertificate {
    let fv = f.on_lattice(v, lattice);
    let vt = v.on_lattice(lattice);
    stc_scan(&fv, &vt, |i, j| Some(lattice.add_indices(i, j)))
}

/// Re-checks the three inequalities with the certified constants over the
/// whole domain; returns the number of violations (0 for a sound
/// certificate).
pub fn recheck_certificate<F>(
    cert: &CompatibilityCertificate,
    fv: &[f64],
    v: &[f64],
    add: F,
) -> usize
where
    F: Fn(usize, usize) -> Option<usize>,
{
    // tiny relative slack: the sup was computed through the same division,
    // so re-multiplication can round the other way
    let slack = 1.0 + 1e-12;
    let mut violations = 0;
    for lam in 0..fv.len() {
        if fv[lam] > cert.c_gr * v[lam] * slack {
            violations += 1;
        }
        for mu in 0..fv.len() {
            let Some(sum) = add(lam, mu) else { continue };
            if (fv[sum] - fv[lam]).abs() > cert.c_dif * fv[mu] * slack {
                violations += 1;
            }
            if fv[lam] != 0.0 && fv[mu] != 0.0 && fv[sum] > cert.c_sm * fv[lam] * fv[mu] * slack {
                violations += 1;
            }
        }
    }
    violations
}
