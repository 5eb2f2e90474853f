//! Finite abelian groups `Z_{N1} × … × Z_{Nd}`, their characters, measures,
//! and the wrap-around (torus) metric.
//!
//! The dual group is identified with the group itself through the pairing
//! `⟨ω, x⟩ = exp(2πi Σ_j ω_j x_j / N_j)`. Haar measure is counting measure on
//! the group and `1/|G|` on the dual, so the Plancherel identity
//! `Σ_ω |f̂(ω)|²/|G| = Σ_t |f(t)|²` holds exactly. All character phases are
//! reduced to an exact rational multiple of 2π before touching floating
//! point, which makes phase-triviality tests (used by adjoint lattices)
//! integer comparisons.

use crate::{CVec, Error, Result, C64};
use num_integer::Integer;
use num_rational::Rational64;

/// A finite abelian group given as a product of cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    moduli: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
    /// lcm of the moduli; common denominator of all character phases.
    phase_lcm: u64,
}

/// An element of a [`FiniteGroup`], stored as reduced residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coords: Vec<u64>,
}

/// A character of the group, identified with a frequency vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    pub freq: GroupElement,
}

/// The fixed Haar-measure pair: counting on `G`, `1/|G|` on the dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measure {
    pub group_weight: Rational64,
    pub dual_weight: Rational64,
}

impl FiniteGroup {
    /// Builds `Z_{N1} × … × Z_{Nd}`. Every modulus must be ≥ 1.
    pub fn new(moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() || moduli.contains(&0) {
            return Err(Error::InvalidWindow(
                "group moduli must be nonempty and positive".into(),
            ));
        }
        let order = moduli.iter().product();
        let mut strides = vec![1u64; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        let phase_lcm = moduli.iter().fold(1u64, |l, &n| l.lcm(&n));
        Ok(Self {
            moduli: moduli.to_vec(),
            strides,
            order,
            phase_lcm,
        })
    }

    /// Shorthand for the cyclic group `Z_N`.
    pub fn cyclic(n: u64) -> Self {
        Self::new(&[n]).expect("n >= 1")
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn measure(&self) -> Measure {
        Measure {
            group_weight: Rational64::from_integer(1),
            dual_weight: Rational64::new(1, self.order as i64),
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.moduli.len()],
        }
    }

    /// Builds an element from arbitrary integers, reducing mod the moduli.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.moduli.len() {
            return Err(Error::ModuliMismatch);
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        })
    }

    /// Lexicographic index of an element (first coordinate most significant).
    pub fn index_of(&self, a: &GroupElement) -> usize {
        a.coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c * s)
            .sum::<u64>() as usize
    }

    /// Inverse of [`FiniteGroup::index_of`].
    pub fn from_index(&self, mut idx: usize) -> GroupElement {
        let mut coords = vec![0u64; self.moduli.len()];
        for (i, &s) in self.strides.iter().enumerate() {
            coords[i] = (idx / s as usize) as u64;
            idx %= s as usize;
        }
        GroupElement { coords }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.from_index(i))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.moduli)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.moduli)
                .map(|((&x, &y), &n)| (x + n - y) % n)
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        }
    }

    /// Common denominator of all character phases (lcm of the moduli).
    pub fn phase_lcm(&self) -> u64 {
        self.phase_lcm
    }

    /// Exact numerator of the pairing phase: `⟨ω, x⟩ = e^{2πi k / L}` with
    /// `L = phase_lcm` and `k` the value returned here, already reduced
    /// mod `L`.
    pub fn pairing_num(&self, omega: &GroupElement, x: &GroupElement) -> u64 {
        let l = self.phase_lcm;
        let mut acc = 0u64;
        for ((&w, &t), &n) in omega.coords.iter().zip(&x.coords).zip(&self.moduli) {
            // ω_j x_j / N_j = ω_j x_j (L/N_j) / L; reduce factors mod N first
            // to keep the u128 product small.
            let prod = ((w as u128 * t as u128) % n as u128) as u64;
            acc = (acc + prod * (l / n)) % l;
        }
        acc
    }

    /// `e^{2πi k / L}` for the group's phase denominator `L`.
    pub fn root_of_unity(&self, num: i64) -> C64 {
        let l = self.phase_lcm as i64;
        let k = num.rem_euclid(l);
        if k == 0 {
            return C64::new(1.0, 0.0);
        }
        let angle = std::f64::consts::TAU * (k as f64) / (l as f64);
        C64::from_polar(1.0, angle)
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

/// `⟨ω, x⟩ = exp(2πi Σ_j ω_j x_j / N_j)`; unit modulus.
pub fn character_eval(group: &FiniteGroup, omega: &Character, x: &GroupElement) -> Result<C64> {
    if omega.freq.coords.len() != x.coords.len() || x.coords.len() != group.rank() {
        return Err(Error::ModuliMismatch);
    }
    Ok(group.root_of_unity(group.pairing_num(&omega.freq, x) as i64))
}

/// Unnormalized Fourier transform `f̂(ω) = Σ_t f(t) conj(⟨ω, t⟩)`.
///
/// Direct `O(|G|²)` evaluation; it doubles as the oracle for everything
/// downstream, so no fast path is taken.
pub fn fourier(group: &FiniteGroup, f: &CVec) -> Result<CVec> {
    let n = group.order();
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.len(),
        });
    }
    let elements: Vec<GroupElement> = group.elements().collect();
    let mut out = CVec::zeros(n);
    for (wi, w) in elements.iter().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (ti, t) in elements.iter().enumerate() {
            let ph = group.pairing_num(w, t);
            acc += f[ti] * group.root_of_unity(-(ph as i64));
        }
        out[wi] = acc;
    }
    Ok(out)
}

/// `| Σ_ω |f̂(ω)|²/|G| − Σ_t |f(t)|² |` — the Plancherel residual.
pub fn plancherel_check(group: &FiniteGroup, f: &CVec) -> Result<f64> {
    let fhat = fourier(group, f)?;
    let lhs: f64 = fhat.iter().map(|z| z.norm_sqr()).sum::<f64>() / group.order() as f64;
    let rhs: f64 = f.iter().map(|z| z.norm_sqr()).sum();
    Ok((lhs - rhs).abs())
}

/// Translation-invariant wrap metric `d(x, 0) = (Σ_j min(x_j, N_j − x_j)²)^{1/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusMetric {
    moduli: Vec<u64>,
}

impl TorusMetric {
    pub fn new(group: &FiniteGroup) -> Self {
        Self {
            moduli: group.moduli().to_vec(),
        }
    }

    /// Per-coordinate wrap distance to zero.
    pub fn wrap_abs(&self, coord: u64, modulus: u64) -> u64 {
        coord.min(modulus - coord % modulus)
    }

    /// Exact integer `d(x, 0)²`.
    pub fn dist0_sq(&self, x: &GroupElement) -> u64 {
        x.coords()
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &n)| {
                let w = c.min(n - c % n) % n;
                w * w
            })
            .sum()
    }

    pub fn dist0(&self, x: &GroupElement) -> f64 {
        (self.dist0_sq(x) as f64).sqrt()
    }

    /// `d(x, y) = d(x − y, 0)`; translation invariance is built in.
    pub fn dist(&self, group: &FiniteGroup, x: &GroupElement, y: &GroupElement) -> f64 {
        self.dist0(&group.sub(x, y))
    }
}

/// Named windows on the real line, sampled onto `Z_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// `g(t) = 2^{1/4} e^{−π t²}`.
    Gaussian,
    /// Centered cardinal B-spline `B_n`, support `[−n/2, n/2]`; `B_2` is the
    /// hat function.
    BSpline(u32),
}

/// Evaluates the centered cardinal B-spline `B_n` at `t`.
pub fn bspline_eval(n: u32, t: f64) -> f64 {
    match n {
        0 => 0.0,
        1 => {
            let a = t.abs();
            if a < 0.5 {
                1.0
            } else if a == 0.5 {
                0.5
            } else {
                0.0
            }
        }
        _ => {
            // divided-difference form: B_n(t) = Σ_k (−1)^k C(n,k) (t + n/2 − k)_+^{n−1} / (n−1)!
            let mut acc = 0.0;
            let mut binom = 1.0f64;
            for k in 0..=n {
                let u = t + n as f64 / 2.0 - k as f64;
                if u > 0.0 {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    acc += sign * binom * u.powi(n as i32 - 1);
                }
                binom = binom * (n - k) as f64 / (k + 1) as f64;
            }
            let fact: f64 = (1..n).map(|j| j as f64).product();
            acc / fact
        }
    }
}

fn window_eval(kind: WindowKind, t: f64) -> Result<f64> {
    match kind {
        WindowKind::Gaussian => Ok(2f64.powf(0.25) * (-std::f64::consts::PI * t * t).exp()),
        WindowKind::BSpline(0) => Err(Error::InvalidWindow("bspline order must be >= 1".into())),
        WindowKind::BSpline(n) => Ok(bspline_eval(n, t)),
    }
}

/// Samples a named ℝ-window onto `Z_N` at the points `(j − N/2)/scale`,
/// periodizes the samples, rotates the center sample to index 0, and
/// normalizes in ℓ². Replica pairs `±m` are accumulated together so even
/// windows stay exactly symmetric under the wrap metric.
pub fn discretize_window(kind: WindowKind, group: &FiniteGroup, scale: f64) -> Result<CVec> {
    if group.rank() != 1 {
        return Err(Error::InvalidWindow(
            "window discretization needs a rank-1 group".into(),
        ));
    }
    if scale.is_nan() || scale <= 0.0 {
        return Err(Error::InvalidWindow("scale must be positive".into()));
    }
    let n = group.order();
    let period = n as f64 / scale;
    let radius = match kind {
        WindowKind::Gaussian => {
            // e^{−π t²} underflows past |t| ≈ 27
            (30.0 / period).ceil() as i64 + 1
        }
        WindowKind::BSpline(k) => ((k as f64 / 2.0) / period).ceil() as i64 + 1,
    };
    let mut samples = vec![0.0f64; n];
    for (j, s) in samples.iter_mut().enumerate() {
        let t = (j as f64 - n as f64 / 2.0) / scale;
        let mut acc = window_eval(kind, t)?;
        for m in 1..=radius {
            acc += window_eval(kind, t + m as f64 * period)?
                + window_eval(kind, t - m as f64 * period)?;
        }
        *s = acc;
    }
    // center sample (t = 0 for even N) moves to index 0
    let shift = n / 2;
    let norm: f64 = samples.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidWindow("window sampled to zero".into()));
    }
    Ok(CVec::from_fn(n, |i, _| {
        C64::new(samples[(i + shift) % n] / norm, 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn character_on_z4() {
        let g = FiniteGroup::cyclic(4);
        let omega = Character {
            freq: g.element(&[1]).unwrap(),
        };
        let x = g.element(&[1]).unwrap();
        let v = character_eval(&g, &omega, &x).unwrap();
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 1.0, epsilon = 1e-15);

        // ω = (2), x = (2): a full turn
        let omega2 = Character {
            freq: g.element(&[2]).unwrap(),
        };
        let x2 = g.element(&[2]).unwrap();
        let v2 = character_eval(&g, &omega2, &x2).unwrap();
        assert_abs_diff_eq!(v2.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v2.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn identity_character_is_one() {
        let g = FiniteGroup::new(&[3, 5]).unwrap();
        let omega = Character { freq: g.zero() };
        for x in g.elements() {
            let v = character_eval(&g, &omega, &x).unwrap();
            assert_eq!(v, C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn character_bilinearity() {
        let g = FiniteGroup::new(&[4, 6]).unwrap();
        for wi in [0usize, 5, 11, 17] {
            let w = Character {
                freq: g.from_index(wi),
            };
            for xi in [1usize, 7, 13] {
                for yi in [2usize, 9, 20] {
                    let x = g.from_index(xi);
                    let y = g.from_index(yi);
                    let lhs = character_eval(&g, &w, &g.add(&x, &y)).unwrap();
                    let rhs =
                        character_eval(&g, &w, &x).unwrap() * character_eval(&g, &w, &y).unwrap();
                    assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn plancherel_delta_and_zero() {
        let g = FiniteGroup::cyclic(4);
        let mut delta = CVec::zeros(4);
        delta[0] = C64::new(1.0, 0.0);
        assert!(plancherel_check(&g, &delta).unwrap() <= 1e-14);
        let zero = CVec::zeros(4);
        assert_eq!(plancherel_check(&g, &zero).unwrap(), 0.0);
    }

    #[test]
    fn plancherel_random_vectors() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [4u64, 6, 8, 9, 12] {
            let g = FiniteGroup::cyclic(n);
            for _ in 0..100 {
                let f = CVec::from_fn(g.order(), |_, _| {
                    C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                let nrm: f64 = f.iter().map(|z| z.norm_sqr()).sum();
                assert!(plancherel_check(&g, &f).unwrap() <= 1e-12 * nrm.max(1.0));
            }
        }
    }

    #[test]
    fn metric_symmetry_and_translation_invariance() {
        let g = FiniteGroup::new(&[6, 9]).unwrap();
        let m = TorusMetric::new(&g);
        for i in 0..g.order() {
            let x = g.from_index(i);
            assert_eq!(m.dist0_sq(&x), m.dist0_sq(&g.neg(&x)));
        }
        let x = g.element(&[2, 3]).unwrap();
        let y = g.element(&[5, 1]).unwrap();
        let z = g.element(&[4, 7]).unwrap();
        assert_eq!(
            m.dist(&g, &g.add(&x, &z), &g.add(&y, &z)),
            m.dist(&g, &x, &y)
        );
    }

    #[test]
    fn gaussian_window_symmetric_normalized() {
        let g = FiniteGroup::cyclic(12);
        let w = discretize_window(WindowKind::Gaussian, &g, 12f64.sqrt()).unwrap();
        let nrm: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(nrm, 1.0, epsilon = 1e-12);
        for j in 0..12 {
            assert!(w[j].re > 0.0);
            assert_eq!(w[j].im, 0.0);
            assert_eq!(w[j], w[(12 - j) % 12]); // exact even symmetry
        }
        // peak at 0
        for j in 1..12 {
            assert!(w[0].re >= w[j].re);
        }
    }

    #[test]
    fn bspline2_is_hat() {
        // oracle: B2 = box * box, i.e. the hat 1 − |t| on [−1, 1]
        for &t in &[-0.9f64, -0.5, -0.1, 0.0, 0.3, 0.7, 0.99, 1.2] {
            let expected = (1.0 - t.abs()).max(0.0);
            assert_abs_diff_eq!(bspline_eval(2, t), expected, epsilon = 1e-14);
        }
        let g = FiniteGroup::cyclic(12);
        let w = discretize_window(WindowKind::BSpline(2), &g, 12f64.sqrt()).unwrap();
        for j in 0..12 {
            assert!(w[j].re >= 0.0);
            assert_eq!(w[j].im, 0.0);
        }
    }

    #[test]
    fn bspline_consecutive_convolution_oracle() {
        // B_{n+1}(t) = ∫_{−1/2}^{1/2} B_n(t − s) ds, checked by fine midpoint sums
        for n in 1..=3u32 {
            for &t in &[-1.3, -0.4, 0.0, 0.2, 0.8, 1.6] {
                let steps = 20_000;
                let h = 1.0 / steps as f64;
                let mut acc = 0.0;
                for i in 0..steps {
                    let s = -0.5 + (i as f64 + 0.5) * h;
                    acc += bspline_eval(n, t - s) * h;
                }
                assert_abs_diff_eq!(bspline_eval(n + 1, t), acc, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn coarse_sampling_gaussian_concentrates() {
        // sample points are (j − N/2)/scale, so shrinking the scale spreads
        // them out and piles the mass onto the center sample
        let n = 16u64;
        let g = FiniteGroup::cyclic(n);
        let w = discretize_window(WindowKind::Gaussian, &g, (n as f64).sqrt() / 4.0).unwrap();
        let total: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        assert!(w[0].norm_sqr() >= 0.9 * total);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g2 = FiniteGroup::new(&[4, 4]).unwrap();
        assert!(discretize_window(WindowKind::Gaussian, &g2, 2.0).is_err());
        let g = FiniteGroup::cyclic(8);
        assert!(discretize_window(WindowKind::Gaussian, &g, 0.0).is_err());
        assert!(discretize_window(WindowKind::BSpline(0), &g, 2.0).is_err());
        let omega = Character {
            freq: g.element(&[1]).unwrap(),
        };
        let x2 = g2.element(&[1, 1]).unwrap();
        assert!(character_eval(&g, &omega, &x2).is_err());
    }
}
