//! Exact arithmetic on `Z[1/p]` (rationals with p-power denominators), the
//! p-adic absolute value and fractional part, solenoid lattices
//! `ψ_α(Z[1/p]) = {(αq, q)}` in `ℝ × ℚ_p`, characters of `ℝ × ℚ_p`, and the
//! tensor-window reduction that identifies the surviving block of a solenoid
//! Gabor Gram with a discretized-ℝ Gram.
//!
//! Every `ℚ_p`-side quantity lives in `Z[1/p]` and is manipulated as exact
//! integers: no floating p-adic digits anywhere.

use crate::gabor::{frame_bounds, stft};
use crate::lca::{discretize_window, FiniteGroup, WindowKind};
use crate::phase::{heisenberg_cocycle_num, pp_neg, pp_sub, Lattice, PhasePoint};
use crate::{inner, Error, Result, C64};
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

/// `num · p^exp` with `p ∤ num` (canonical form; `num = 0` forces `exp = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicRational {
    p: u64,
    num: i64,
    exp: i32,
}

impl PAdicRational {
    pub fn new(p: u64, num: i64, exp: i32) -> Self {
        assert!(p >= 2, "p must be at least 2");
        let mut num = num as i128;
        let mut exp = exp;
        if num == 0 {
            return Self { p, num: 0, exp: 0 };
        }
        while num % p as i128 == 0 {
            num /= p as i128;
            exp += 1;
        }
        Self {
            p,
            num: i64::try_from(num).expect("p-adic numerator overflow"),
            exp,
        }
    }

    pub fn zero(p: u64) -> Self {
        Self { p, num: 0, exp: 0 }
    }

    pub fn from_integer(p: u64, n: i64) -> Self {
        Self::new(p, n, 0)
    }

    /// Accepts any rational whose denominator is a power of `p`.
    pub fn from_rational(p: u64, r: Rational64) -> Result<Self> {
        let mut den = *r.denom();
        let mut exp = 0;
        while den % p as i64 == 0 {
            den /= p as i64;
            exp -= 1;
        }
        if den != 1 && den != -1 {
            return Err(Error::Format(format!(
                "{r} is not in Z[1/{p}]: denominator has a factor prime to {p}"
            )));
        }
        Ok(Self::new(p, r.numer() * den.signum(), exp))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_rational(&self) -> Rational64 {
        let pw = (self.p as i64)
            .checked_pow(self.exp.unsigned_abs())
            .expect("p-power overflow");
        if self.exp >= 0 {
            Rational64::from_integer(self.num.checked_mul(pw).expect("overflow"))
        } else {
            Rational64::new(self.num, pw)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let e = self.exp.min(other.exp);
        let lift = |x: &Self| -> i128 { (x.num as i128) * (x.p as i128).pow((x.exp - e) as u32) };
        let sum = lift(self) + lift(other);
        if sum == 0 {
            return Self::zero(self.p);
        }
        let mut num = sum;
        let mut exp = e;
        while num % self.p as i128 == 0 {
            num /= self.p as i128;
            exp += 1;
        }
        Self {
            p: self.p,
            num: i64::try_from(num).expect("p-adic numerator overflow"),
            exp,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            p: self.p,
            num: -self.num,
            exp: self.exp,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let num = (self.num as i128) * (other.num as i128);
        Self {
            p: self.p,
            num: i64::try_from(num).expect("p-adic numerator overflow"),
            exp: self.exp + other.exp,
        }
    }

    /// Member of `Z_p`, i.e. `|x|_p ≤ 1`.
    pub fn is_p_integer(&self) -> bool {
        self.is_zero() || self.exp >= 0
    }
}

/// `|x|_p = p^{−k}` for `x = num·p^k`; `|0|_p = 0`.
pub fn padic_abs(x: &PAdicRational) -> Rational64 {
    if x.is_zero() {
        return Rational64::zero();
    }
    let pw = (x.p as i64)
        .checked_pow(x.exp.unsigned_abs())
        .expect("p-power overflow");
    if x.exp >= 0 {
        Rational64::new(1, pw)
    } else {
        Rational64::from_integer(pw)
    }
}

/// `|x + y|_p ≤ max(|x|_p, |y|_p)`, exactly.
pub fn ultrametric_check(x: &PAdicRational, y: &PAdicRational) -> bool {
    padic_abs(&x.add(y)) <= padic_abs(x).max(padic_abs(y))
}

/// The quotient map `Z[1/p] → Z[1/p]/Z` as a rational in `[0, 1)`.
pub fn frac_part(x: &PAdicRational) -> Rational64 {
    if x.exp >= 0 || x.is_zero() {
        return Rational64::zero();
    }
    let k = (-x.exp) as u32;
    let pk = (x.p as i64).checked_pow(k).expect("p-power overflow");
    Rational64::new(x.num.rem_euclid(pk), pk)
}

/// The character of `ℝ × ℚ_p` attached to `y = (y_∞, y_p)`, evaluated at
/// `x`: `e^{2πi (x_∞ y_∞ − {x_p y_p}_p)}`.
pub fn solenoid_character(y_inf: f64, y_p: &PAdicRational, x_inf: f64, x_p: &PAdicRational) -> C64 {
    let frac = frac_part(&x_p.mul(y_p)).to_f64().expect("finite");
    C64::from_polar(1.0, std::f64::consts::TAU * (x_inf * y_inf - frac))
}

/// A point `ψ_α(q) = (αq, q)` of the solenoid lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolenoidLatticePoint {
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational64,
    #[serde(serialize_with = "ser_q")]
    pub q: PAdicRational,
}

fn ser_rational<S: serde::Serializer>(
    r: &Rational64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_q<S: serde::Serializer>(q: &PAdicRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_rational().to_string())
}

impl SolenoidLatticePoint {
    pub fn new(alpha: Rational64, q: PAdicRational) -> Self {
        Self { alpha, q }
    }

    /// The archimedean coordinate `αq`.
    pub fn real_coord(&self) -> Rational64 {
        self.alpha * self.q.to_rational()
    }
}

/// All `q = a/p^k` with `0 ≤ k ≤ height` and `|a| ≤ bound·p^k`, in canonical
/// form, ordered by value. The count is `2·bound·p^height + 1`.
pub fn enumerate_lattice(p: u64, height: u32, bound: i64) -> Vec<PAdicRational> {
    let mut points = Vec::new();
    for k in 0..=height {
        let pk = (p as i64).checked_pow(k).expect("p-power overflow");
        let amax = bound.checked_mul(pk).expect("bound overflow");
        for a in -amax..=amax {
            if k > 0 && a % p as i64 == 0 {
                continue; // canonical form: already counted at lower k
            }
            points.push(PAdicRational::new(p, a, -(k as i32)));
        }
    }
    points.sort_by_key(|q| q.to_rational());
    points
}

/// Outcome of tiling checks against the fundamental domain
/// `B_α = [0, |α|) × Z_p`.
#[derive(Debug, Clone, Serialize)]
pub struct FundamentalDomainReport {
    pub samples: usize,
    /// Samples with exactly one lattice point `q` such that
    /// `(t, x) − ψ_α(q) ∈ B_α`.
    pub unique_hits: usize,
    /// Samples where no enumerated `q` worked (enumeration too short).
    pub unresolved: usize,
    /// Samples with more than one `q` — must stay 0.
    pub violations: usize,
    #[serde(serialize_with = "ser_rational")]
    pub size: Rational64,
}

/// Verifies existence and uniqueness of the `B_α`-representative over a grid
/// of sample points `(t, x)` with `t` rational and `x` in the truncated
/// `Z[1/p]`. `s(ψ_α(Z[1/p])) = |α|` is recorded as the certified size.
pub fn fundamental_domain_check(
    alpha: Rational64,
    p: u64,
    height: u32,
    bound: i64,
) -> Result<FundamentalDomainReport> {
    if alpha.is_zero() {
        return Err(Error::Format("α must be nonzero".into()));
    }
    let abs_alpha = alpha.abs();
    let xs = enumerate_lattice(p, height, bound);
    // t-grid: quarter-|α| steps over [−2|α|, 2|α|)
    let ts: Vec<Rational64> = (-8..8).map(|k| abs_alpha * Rational64::new(k, 4)).collect();
    // candidates must reach q = x + n with |n| ≤ t-range/|α| + |x| slack
    let q_bound = bound + 4;
    let qs = enumerate_lattice(p, height, q_bound);

    let mut unique_hits = 0;
    let mut unresolved = 0;
    let mut violations = 0;
    for x in &xs {
        for t in &ts {
            let mut hits = 0;
            for q in &qs {
                // p-adic leg: x − q ∈ Z_p
                if !x.sub(q).is_p_integer() {
                    continue;
                }
                // real leg: t − αq ∈ [0, |α|)
                let r = *t - alpha * q.to_rational();
                if r >= Rational64::zero() && r < abs_alpha {
                    hits += 1;
                }
            }
            match hits {
                0 => unresolved += 1,
                1 => unique_hits += 1,
                _ => violations += 1,
            }
        }
    }
    Ok(FundamentalDomainReport {
        samples: xs.len() * ts.len(),
        unique_hits,
        unresolved,
        violations,
        size: abs_alpha,
    })
}

/// The exact `L²(ℚ_p)` factor
/// `⟨π_p(q,r) 1_{Z_p}, π_p(q',r') 1_{Z_p}⟩ =
///  [q−q' ∈ Z_p] [r−r' ∈ Z_p] e^{−2πi {(r−r') q}_p}`.
pub fn padic_gram_factor(
    q: &PAdicRational,
    r: &PAdicRational,
    q2: &PAdicRational,
    r2: &PAdicRational,
) -> C64 {
    let dq = q.sub(q2);
    let dr = r.sub(r2);
    if !dq.is_p_integer() || !dr.is_p_integer() {
        return C64::new(0.0, 0.0);
    }
    let frac = frac_part(&dr.mul(q));
    // quarter turns exactly; the phase carries a minus sign
    match (*frac.numer(), *frac.denom()) {
        (0, _) => C64::new(1.0, 0.0),
        (1, 2) => C64::new(-1.0, 0.0),
        (1, 4) => C64::new(0.0, -1.0),
        (3, 4) => C64::new(0.0, 1.0),
        _ => C64::from_polar(1.0, -std::f64::consts::TAU * frac.to_f64().expect("finite")),
    }
}

/// Two-route comparison of the truncated solenoid Gabor Gram for
/// `g = g^{(ℝ)} ⊗ 1_{Z_p}` against the discretized-ℝ Gram.
#[derive(Debug, Clone, Serialize)]
pub struct TensorReductionReport {
    pub lattice_points: usize,
    /// Pairs killed by the `Z_p` indicator; their entries are exactly 0.
    pub vanishing_pairs: usize,
    /// Vanishing-pattern mismatches against exact integrality — must be 0.
    pub vanishing_violations: usize,
    pub surviving_pairs: usize,
    /// Surviving pairs with all of `q, q', r, r'` integers.
    pub height0_pairs: usize,
    /// `max |Gram_factorized − Gram_direct|` over the height-0 block, where
    /// the direct route assembles finite-group shifts and the factorized
    /// route goes through the ambiguity table with exact cocycle phases.
    pub block_discrepancy: f64,
    /// Same two-route comparison over every surviving pair, including the
    /// exact p-adic phase.
    pub full_discrepancy: f64,
    /// Lower frame bound of the discretized-ℝ Gabor system.
    pub frame_lower: f64,
    pub frame_is_frame: bool,
}

/// Builds the solenoid Gram data for the lattice
/// `{(αq, q, βr, r) : q, r ∈ Z[1/p] truncated}` with `g = g^{(ℝ)} ⊗ 1_{Z_p}`
/// and checks it entrywise against the discretized-ℝ model on `Z_{L²}`
/// (sample spacing `1/L`).
#[allow(clippy::too_many_arguments)]
pub fn tensor_reduction_check(
    kind: WindowKind,
    p: u64,
    alpha: Rational64,
    beta: Rational64,
    height: u32,
    bound: i64,
    l: u64,
) -> Result<TensorReductionReport> {
    let n = l * l;
    let group = FiniteGroup::cyclic(n);
    let scale = l as f64;
    let window = discretize_window(kind, &group, scale)?;

    let qs = enumerate_lattice(p, height, bound);
    let shift_of = |coef: Rational64, q: &PAdicRational| -> Result<i64> {
        let samples = coef * q.to_rational() * Rational64::from_integer(l as i64);
        if !samples.is_integer() {
            return Err(Error::Format(format!(
                "shift {samples} is not a whole number of samples; raise L"
            )));
        }
        Ok(samples.to_integer())
    };

    // phase points of the discretized model for every (q, r)
    let mut points = Vec::new();
    for q in &qs {
        for r in &qs {
            let xq = shift_of(alpha, q)?;
            let wr = shift_of(beta, r)?;
            points.push((
                *q,
                *r,
                PhasePoint::new(group.element(&[xq])?, group.element(&[wr])?),
            ));
        }
    }

    // ambiguity table of the discretized window (factorized route)
    let table = stft(&group, &window, &window)?;
    let amb = |nu: &PhasePoint| table.at(nu).conj(); // ⟨π(ν)g, g⟩

    let mut vanishing_pairs = 0usize;
    let mut vanishing_violations = 0usize;
    let mut surviving = 0usize;
    let mut height0 = 0usize;
    let mut block_disc = 0.0f64;
    let mut full_disc = 0.0f64;

    for (q, r, xi) in &points {
        for (q2, r2, xi2) in &points {
            let pfac = padic_gram_factor(q, r, q2, r2);
            let dq = q.sub(q2);
            let dr = r.sub(r2);
            let survives = dq.is_p_integer() && dr.is_p_integer();
            if pfac == C64::new(0.0, 0.0) {
                vanishing_pairs += 1;
                if survives {
                    vanishing_violations += 1; // indicator disagrees with |·|_p
                }
                continue;
            }
            if !survives {
                vanishing_violations += 1;
            }
            surviving += 1;

            // factorized route: exact cocycle phases times the ambiguity value
            // ⟨π(ξ)g, π(ξ')g⟩ = c(ξ',ξ') c(−ξ',ξ) ⟨π(ξ−ξ')g, g⟩
            let c1 = heisenberg_cocycle_num(&group, xi2, xi2);
            let c2 = heisenberg_cocycle_num(&group, &pp_neg(&group, xi2), xi);
            let phase = group.root_of_unity(c1 + c2);
            let factorized = pfac * phase * amb(&pp_sub(&group, xi, xi2));

            // direct route: assemble both shifted windows
            let left = crate::phase::apply_shift(&group, xi, &window);
            let right = crate::phase::apply_shift(&group, xi2, &window);
            let direct = pfac * inner(&left, &right);

            let diff = (factorized - direct).norm();
            full_disc = full_disc.max(diff);

            let all_integer =
                q.is_p_integer() && q2.is_p_integer() && r.is_p_integer() && r2.is_p_integer();
            if all_integer {
                height0 += 1;
                block_disc = block_disc.max(diff);
            }
        }
    }

    // the ℝ-side Gabor system over the integer sublattice (αm, βn)
    let a_step = (alpha * Rational64::from_integer(l as i64)).to_integer();
    let b_step = (beta * Rational64::from_integer(l as i64)).to_integer();
    let lattice = Lattice::rectangular(&group, a_step, b_step)?;
    let frame = frame_bounds(&group, std::slice::from_ref(&window), &lattice);

    Ok(TensorReductionReport {
        lattice_points: points.len(),
        vanishing_pairs,
        vanishing_violations,
        surviving_pairs: surviving,
        height0_pairs: height0,
        block_discrepancy: block_disc,
        full_discrepancy: full_disc,
        frame_lower: frame.lower,
        frame_is_frame: frame.is_frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CVec;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rand_padic(p: u64, rng: &mut impl Rng) -> PAdicRational {
        PAdicRational::new(p, rng.random_range(-200..200), rng.random_range(-4..4))
    }

    #[test]
    fn abs_values() {
        let x = PAdicRational::from_integer(2, 12);
        assert_eq!(padic_abs(&x), Rational64::new(1, 4)); // 12 = 4·3
        let y = PAdicRational::from_rational(2, Rational64::new(3, 4)).unwrap();
        assert_eq!(padic_abs(&y), Rational64::from_integer(4));
        assert_eq!(padic_abs(&PAdicRational::zero(2)), Rational64::zero());
        assert!(PAdicRational::from_rational(2, Rational64::new(1, 3)).is_err());
    }

    #[test]
    fn ultrametric_and_multiplicativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &p in &[2u64, 3, 5] {
            for _ in 0..400 {
                let x = rand_padic(p, &mut rng);
                let y = rand_padic(p, &mut rng);
                assert!(ultrametric_check(&x, &y));
                assert_eq!(padic_abs(&x.mul(&y)), padic_abs(&x) * padic_abs(&y));
            }
        }
        // strict drop: |3 + 5|₂ = 1/8 < 1
        let a = PAdicRational::from_integer(2, 3);
        let b = PAdicRational::from_integer(2, 5);
        assert_eq!(padic_abs(&a.add(&b)), Rational64::new(1, 8));
    }

    #[test]
    fn frac_part_values_and_homomorphism() {
        let p = 2;
        let x = PAdicRational::from_rational(p, Rational64::new(3, 4)).unwrap();
        assert_eq!(frac_part(&x), Rational64::new(3, 4));
        let y = PAdicRational::from_rational(p, Rational64::new(5, 2)).unwrap();
        assert_eq!(frac_part(&y), Rational64::new(1, 2));
        assert_eq!(
            frac_part(&PAdicRational::from_integer(p, 9)),
            Rational64::zero()
        );

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let a = rand_padic(p, &mut rng);
            let b = rand_padic(p, &mut rng);
            let lhs = frac_part(&a.add(&b));
            let sum = frac_part(&a) + frac_part(&b);
            let rhs = sum - sum.floor();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn character_values_and_bilinearity() {
        let p = 2;
        let half = PAdicRational::from_rational(p, Rational64::new(1, 2)).unwrap();
        let zero = PAdicRational::zero(p);
        let c = solenoid_character(0.0, &half, 0.0, &half);
        assert!((c - C64::new(0.0, -1.0)).norm() <= 1e-15); // e^{−2πi/4}
        assert_eq!(
            solenoid_character(0.0, &zero, 1.7, &zero),
            C64::new(1.0, 0.0)
        );

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let y = rand_padic(p, &mut rng);
            let x1 = rand_padic(p, &mut rng);
            let x2 = rand_padic(p, &mut rng);
            let yi = rng.random::<f64>() - 0.5;
            let a1 = rng.random::<f64>() - 0.5;
            let a2 = rng.random::<f64>() - 0.5;
            let lhs = solenoid_character(yi, &y, a1 + a2, &x1.add(&x2));
            let rhs = solenoid_character(yi, &y, a1, &x1) * solenoid_character(yi, &y, a2, &x2);
            assert!((lhs - rhs).norm() <= 1e-12);
            assert!((lhs.norm() - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn lattice_enumeration_counts() {
        for &(p, h, b) in &[(2u64, 0u32, 3i64), (2, 1, 3), (2, 2, 2), (3, 2, 1)] {
            let pts = enumerate_lattice(p, h, b);
            let expect = 2 * b * (p as i64).pow(h) + 1;
            assert_eq!(pts.len() as i64, expect, "p={p} h={h} b={b}");
            // canonical dedup: all values distinct
            let mut vals: Vec<Rational64> = pts.iter().map(|q| q.to_rational()).collect();
            vals.dedup();
            assert_eq!(vals.len(), pts.len());
        }
        // height 0 is the integer range
        let ints = enumerate_lattice(2, 0, 3);
        let vals: Vec<i64> = ints.iter().map(|q| q.to_rational().to_integer()).collect();
        assert_eq!(vals, vec![-3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn psi_is_a_homomorphism() {
        let alpha = Rational64::new(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let q1 = rand_padic(2, &mut rng);
            let q2 = rand_padic(2, &mut rng);
            let p1 = SolenoidLatticePoint::new(alpha, q1);
            let p2 = SolenoidLatticePoint::new(alpha, q2);
            let sum = SolenoidLatticePoint::new(alpha, q1.add(&q2));
            assert_eq!(p1.real_coord() + p2.real_coord(), sum.real_coord());
        }
    }

    #[test]
    fn fundamental_domain_unique_representatives() {
        for &alpha in &[
            Rational64::from_integer(1),
            Rational64::from_integer(2),
            Rational64::new(1, 2),
        ] {
            for height in 0..=2u32 {
                let rep = fundamental_domain_check(alpha, 2, height, 2).unwrap();
                assert_eq!(rep.violations, 0, "α={alpha} h={height}");
                assert_eq!(rep.unresolved, 0, "α={alpha} h={height}");
                assert_eq!(rep.unique_hits, rep.samples);
                assert_eq!(rep.size, alpha.abs());
            }
        }
        assert!(fundamental_domain_check(Rational64::zero(), 2, 1, 1).is_err());
    }

    #[test]
    fn padic_gram_factor_structure() {
        let p = 2;
        let half = PAdicRational::from_rational(p, Rational64::new(1, 2)).unwrap();
        let one = PAdicRational::from_integer(p, 1);
        let zero = PAdicRational::zero(p);
        // q − q' = 1/2 ∉ Z₂ kills the entry
        assert_eq!(
            padic_gram_factor(&half, &zero, &zero, &zero),
            C64::new(0.0, 0.0)
        );
        // integer differences survive with a frac-part phase
        let f = padic_gram_factor(&half, &one, &half, &zero);
        // {(1−0)·(1/2)}₂ = 1/2 → e^{−πi} = −1
        assert_eq!(f, C64::new(-1.0, 0.0));
        assert_eq!(
            padic_gram_factor(&one, &one, &zero, &zero),
            C64::new(1.0, 0.0)
        );
    }

    #[test]
    fn tensor_reduction_height0_and_height1() {
        // height 0: everything survives and the block matches
        let rep = tensor_reduction_check(
            WindowKind::Gaussian,
            2,
            Rational64::from_integer(1),
            Rational64::new(1, 2),
            0,
            1,
            6,
        )
        .unwrap();
        assert_eq!(rep.vanishing_pairs, 0);
        assert_eq!(rep.vanishing_violations, 0);
        assert_eq!(rep.height0_pairs, rep.surviving_pairs);
        assert!(rep.block_discrepancy <= 1e-10, "{}", rep.block_discrepancy);

        // height 1 introduces genuinely vanishing pairs
        let rep1 = tensor_reduction_check(
            WindowKind::Gaussian,
            2,
            Rational64::from_integer(1),
            Rational64::new(1, 2),
            1,
            1,
            8,
        )
        .unwrap();
        assert!(rep1.vanishing_pairs > 0);
        assert_eq!(rep1.vanishing_violations, 0);
        assert!(rep1.surviving_pairs > rep1.height0_pairs);
        assert!(rep1.block_discrepancy <= 1e-10);
        assert!(rep1.full_discrepancy <= 1e-10);
        assert!(rep1.frame_is_frame);
        assert!(rep1.frame_lower > 0.0);
    }

    #[test]
    fn zero_window_gram_vanishes() {
        // the zero window wipes every Gram entry on both routes
        let group = FiniteGroup::cyclic(16);
        let zero = CVec::zeros(16);
        let table = stft(&group, &zero, &zero).unwrap();
        assert!(table.values().iter().all(|z| *z == C64::new(0.0, 0.0)));
    }
}
