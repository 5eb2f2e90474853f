//! Phase space `G × Ĝ`: time-frequency shifts `π(ξ) = M_ω T_x`, the
//! Heisenberg and symplectic cocycles, lattices (subgroups) with their size
//! `s(Λ)`, and the adjoint lattice `Λ°`.
//!
//! Cocycle phases are carried as exact integer numerators over the group's
//! common phase denominator, so symplectic orthogonality — and with it the
//! adjoint lattice — is decided by integer arithmetic, not by floating-point
//! comparisons against 1.

use crate::lca::{FiniteGroup, GroupElement, TorusMetric};
use crate::{CMat, CVec, Error, Result, C64};
use num_rational::Rational64;

/// A point `ξ = (x, ω)` of phase space; `ω` is a frequency vector for the
/// standard pairing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhasePoint {
    pub x: GroupElement,
    pub omega: GroupElement,
}

impl PhasePoint {
    pub fn new(x: GroupElement, omega: GroupElement) -> Self {
        Self { x, omega }
    }
}

/// Componentwise group operations on phase space.
pub fn pp_add(group: &FiniteGroup, a: &PhasePoint, b: &PhasePoint) -> PhasePoint {
    PhasePoint {
        x: group.add(&a.x, &b.x),
        omega: group.add(&a.omega, &b.omega),
    }
}

pub fn pp_sub(group: &FiniteGroup, a: &PhasePoint, b: &PhasePoint) -> PhasePoint {
    PhasePoint {
        x: group.sub(&a.x, &b.x),
        omega: group.sub(&a.omega, &b.omega),
    }
}

pub fn pp_neg(group: &FiniteGroup, a: &PhasePoint) -> PhasePoint {
    PhasePoint {
        x: group.neg(&a.x),
        omega: group.neg(&a.omega),
    }
}

pub fn pp_zero(group: &FiniteGroup) -> PhasePoint {
    PhasePoint {
        x: group.zero(),
        omega: group.zero(),
    }
}

/// Lexicographic index into the `|G|²` phase points (`x` major, `ω` minor).
pub fn pp_index(group: &FiniteGroup, xi: &PhasePoint) -> usize {
    group.index_of(&xi.x) * group.order() + group.index_of(&xi.omega)
}

pub fn pp_from_index(group: &FiniteGroup, idx: usize) -> PhasePoint {
    let n = group.order();
    PhasePoint {
        x: group.from_index(idx / n),
        omega: group.from_index(idx % n),
    }
}

/// Squared wrap distance of `ξ` to the origin, combining both legs.
pub fn pp_dist0_sq(metric: &TorusMetric, xi: &PhasePoint) -> u64 {
    metric.dist0_sq(&xi.x) + metric.dist0_sq(&xi.omega)
}

/// Exact numerator (mod the phase lcm) of the Heisenberg cocycle
/// `c(ξ₁, ξ₂) = conj(ω₂(x₁))`.
pub fn heisenberg_cocycle_num(group: &FiniteGroup, xi1: &PhasePoint, xi2: &PhasePoint) -> i64 {
    -(group.pairing_num(&xi2.omega, &xi1.x) as i64)
}

/// `c(ξ₁, ξ₂) = conj(ω₂(x₁))`; unit modulus.
pub fn heisenberg_cocycle(group: &FiniteGroup, xi1: &PhasePoint, xi2: &PhasePoint) -> C64 {
    group.root_of_unity(heisenberg_cocycle_num(group, xi1, xi2))
}

/// Exact numerator of the symplectic cocycle
/// `c_s(ξ₁, ξ₂) = conj(ω₂(x₁)) ω₁(x₂)`.
pub fn symplectic_cocycle_num(group: &FiniteGroup, xi1: &PhasePoint, xi2: &PhasePoint) -> i64 {
    group.pairing_num(&xi1.omega, &xi2.x) as i64 - group.pairing_num(&xi2.omega, &xi1.x) as i64
}

/// `c_s(ξ₁, ξ₂) = conj(ω₂(x₁)) ω₁(x₂)`; `c_s(ξ, ξ) = 1`.
pub fn symplectic_cocycle(group: &FiniteGroup, xi1: &PhasePoint, xi2: &PhasePoint) -> C64 {
    group.root_of_unity(symplectic_cocycle_num(group, xi1, xi2))
}

/// Whether `c_s(ξ₁, ξ₂) = 1` exactly.
pub fn symplectically_orthogonal(group: &FiniteGroup, xi1: &PhasePoint, xi2: &PhasePoint) -> bool {
    symplectic_cocycle_num(group, xi1, xi2).rem_euclid(group.phase_lcm() as i64) == 0
}

/// Applies `π(ξ) = M_ω T_x` to a vector: `(π(ξ)f)(t) = ⟨ω, t⟩ f(t − x)`.
pub fn apply_shift(group: &FiniteGroup, xi: &PhasePoint, f: &CVec) -> CVec {
    let n = group.order();
    let mut out = CVec::zeros(n);
    for ti in 0..n {
        let t = group.from_index(ti);
        let src = group.index_of(&group.sub(&t, &xi.x));
        let ph = group.pairing_num(&xi.omega, &t);
        out[ti] = group.root_of_unity(ph as i64) * f[src];
    }
    out
}

/// Applies `π(ξ)*`: `(π(ξ)* f)(t) = conj(⟨ω, t + x⟩) f(t + x)`.
pub fn apply_shift_adjoint(group: &FiniteGroup, xi: &PhasePoint, f: &CVec) -> CVec {
    let n = group.order();
    let mut out = CVec::zeros(n);
    for ti in 0..n {
        let t = group.from_index(ti);
        let tx = group.add(&t, &xi.x);
        let ph = group.pairing_num(&xi.omega, &tx);
        out[ti] = group.root_of_unity(-(ph as i64)) * f[group.index_of(&tx)];
    }
    out
}

/// The dense unitary matrix of `π(ξ)` on `ℓ²(G)`.
pub fn tf_shift(group: &FiniteGroup, xi: &PhasePoint) -> CMat {
    let n = group.order();
    let mut m = CMat::zeros(n, n);
    for ti in 0..n {
        let t = group.from_index(ti);
        let src = group.index_of(&group.sub(&t, &xi.x));
        let ph = group.pairing_num(&xi.omega, &t);
        m[(ti, src)] = group.root_of_unity(ph as i64);
    }
    m
}

/// Max matrix residual of the three composition identities
/// `π(ξ₁)π(ξ₂) = c(ξ₁,ξ₂) π(ξ₁+ξ₂)`,
/// `π(ξ₁)π(ξ₂) = c_s(ξ₁,ξ₂) π(ξ₂)π(ξ₁)`,
/// `π(ξ₁)* = c(ξ₁,ξ₁) π(−ξ₁)`.
pub fn cocycle_identities_check(group: &FiniteGroup, xi1: &PhasePoint, xi2: &PhasePoint) -> f64 {
    let p1 = tf_shift(group, xi1);
    let p2 = tf_shift(group, xi2);
    let p12 = &p1 * &p2;

    let c = heisenberg_cocycle(group, xi1, xi2);
    let r1 = crate::max_abs(&(&p12 - tf_shift(group, &pp_add(group, xi1, xi2)) * c));

    let cs = symplectic_cocycle(group, xi1, xi2);
    let r2 = crate::max_abs(&(&p12 - (&p2 * &p1) * cs));

    let c11 = heisenberg_cocycle(group, xi1, xi1);
    let r3 = crate::max_abs(&(p1.adjoint() - tf_shift(group, &pp_neg(group, xi1)) * c11));

    r1.max(r2).max(r3)
}

/// A lattice (subgroup) in phase space, stored as an explicit element set.
///
/// The lattice carries its own measure: counting measure for primary
/// lattices, and counting scaled by `s(Λ)^{-1}` for adjoint lattices. It also
/// remembers whether its twisted algebra uses the conjugated cocycle, which
/// is the case for adjoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    group: FiniteGroup,
    elements: Vec<PhasePoint>,
    generators: Vec<PhasePoint>,
    /// dense phase-index → element-index table (`u32::MAX` = not a member)
    lookup: Vec<u32>,
    measure_weight: Rational64,
    conjugated: bool,
}

impl Lattice {
    /// Subgroup generated by the given phase points (always contains 0).
    pub fn from_generators(group: &FiniteGroup, generators: &[PhasePoint]) -> Self {
        let npp = group.order() * group.order();
        let mut member = vec![false; npp];
        member[pp_index(group, &pp_zero(group))] = true;
        let mut queue = vec![pp_zero(group)];
        let mut head = 0;
        while head < queue.len() {
            let cur = queue[head].clone();
            head += 1;
            for g in generators {
                let nxt = pp_add(group, &cur, g);
                let idx = pp_index(group, &nxt);
                if !member[idx] {
                    member[idx] = true;
                    queue.push(nxt);
                }
            }
        }
        let mut elements: Vec<PhasePoint> = (0..npp)
            .filter(|&i| member[i])
            .map(|i| pp_from_index(group, i))
            .collect();
        elements.sort_by_key(|p| pp_index(group, p));
        Self::assemble(
            group.clone(),
            elements,
            generators.to_vec(),
            Rational64::from_integer(1),
            false,
        )
    }

    /// Validates an explicit element set as a subgroup.
    pub fn from_elements(group: &FiniteGroup, elements: &[PhasePoint]) -> Result<Self> {
        let lat = Self::from_generators(group, elements);
        if lat.len() != elements.len() {
            return Err(Error::NotASubgroup);
        }
        Ok(lat)
    }

    /// The rectangular lattice generated by `(a, 0)` and `(0, b)` on a
    /// rank-1 group.
    pub fn rectangular(group: &FiniteGroup, a: i64, b: i64) -> Result<Self> {
        if group.rank() != 1 {
            return Err(Error::ModuliMismatch);
        }
        let gx = PhasePoint::new(group.element(&[a])?, group.zero());
        let gw = PhasePoint::new(group.zero(), group.element(&[b])?);
        Ok(Self::from_generators(group, &[gx, gw]))
    }

    /// The full phase space as a lattice.
    pub fn full(group: &FiniteGroup) -> Self {
        let mut gens = Vec::new();
        for k in 0..group.rank() {
            let mut c = vec![0i64; group.rank()];
            c[k] = 1;
            let e = group.element(&c).expect("rank matches");
            gens.push(PhasePoint::new(e.clone(), group.zero()));
            gens.push(PhasePoint::new(group.zero(), e));
        }
        Self::from_generators(group, &gens)
    }

    /// The trivial lattice `{0}`.
    pub fn trivial(group: &FiniteGroup) -> Self {
        Self::from_generators(group, &[])
    }

    fn assemble(
        group: FiniteGroup,
        elements: Vec<PhasePoint>,
        generators: Vec<PhasePoint>,
        measure_weight: Rational64,
        conjugated: bool,
    ) -> Self {
        let npp = group.order() * group.order();
        let mut lookup = vec![u32::MAX; npp];
        for (k, p) in elements.iter().enumerate() {
            lookup[pp_index(&group, p)] = k as u32;
        }
        Self {
            group,
            elements,
            generators,
            lookup,
            measure_weight,
            conjugated,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a subgroup always contains 0
    }

    pub fn elements(&self) -> &[PhasePoint] {
        &self.elements
    }

    pub fn generators(&self) -> &[PhasePoint] {
        &self.generators
    }

    pub fn point(&self, k: usize) -> &PhasePoint {
        &self.elements[k]
    }

    /// Element index of a phase point, if it lies in the lattice.
    pub fn position(&self, p: &PhasePoint) -> Option<usize> {
        let v = self.lookup[pp_index(&self.group, p)];
        (v != u32::MAX).then_some(v as usize)
    }

    pub fn zero_position(&self) -> usize {
        self.position(&pp_zero(&self.group)).expect("0 ∈ Λ")
    }

    /// Element index of `λ_i + λ_j` (lattices are closed, so this never
    /// fails).
    pub fn add_indices(&self, i: usize, j: usize) -> usize {
        self.position(&pp_add(&self.group, &self.elements[i], &self.elements[j]))
            .expect("lattice closed under +")
    }

    /// Element index of `λ_i − λ_j`.
    pub fn sub_indices(&self, i: usize, j: usize) -> usize {
        self.position(&pp_sub(&self.group, &self.elements[i], &self.elements[j]))
            .expect("lattice closed under −")
    }

    pub fn neg_index(&self, i: usize) -> usize {
        self.position(&pp_neg(&self.group, &self.elements[i]))
            .expect("lattice closed under −")
    }

    /// The cocycle of this lattice's twisted algebra: the Heisenberg cocycle,
    /// conjugated on adjoint lattices.
    pub fn algebra_cocycle(&self, i: usize, j: usize) -> C64 {
        let num = heisenberg_cocycle_num(&self.group, &self.elements[i], &self.elements[j]);
        self.group
            .root_of_unity(if self.conjugated { -num } else { num })
    }

    /// Per-point mass of the measure carried by this lattice.
    pub fn measure_weight(&self) -> Rational64 {
        self.measure_weight
    }

    pub fn is_conjugated(&self) -> bool {
        self.conjugated
    }

    /// `s(Λ)` — total phase-space mass `|G|` divided by the lattice mass.
    pub fn size(&self) -> Rational64 {
        Rational64::from_integer(self.group.order() as i64)
            / (Rational64::from_integer(self.len() as i64) * self.measure_weight)
    }

    /// The adjoint lattice `Λ° = {χ : c_s(χ, λ) = 1 ∀λ ∈ Λ}`, carrying the
    /// induced measure `s(Λ)^{-1}·counting` and the conjugated cocycle.
    ///
    /// Orthogonality against the generators suffices since `c_s` is
    /// bilinear in the exact integer phases.
    pub fn adjoint(&self) -> Lattice {
        let group = &self.group;
        let gens: &[PhasePoint] = if self.generators.is_empty() {
            &self.elements
        } else {
            &self.generators
        };
        let npp = group.order() * group.order();
        let mut elements = Vec::new();
        for i in 0..npp {
            let chi = pp_from_index(group, i);
            if gens
                .iter()
                .all(|lam| symplectically_orthogonal(group, &chi, lam))
            {
                elements.push(chi);
            }
        }
        let weight = self.size().recip();
        let gens_out = elements.clone();
        Self::assemble(group.clone(), elements, gens_out, weight, !self.conjugated)
    }

    /// Lattice spec strings: `rect:a,b` or `gen:(x1,w1);(x2,w2)` where each
    /// coordinate list is space-separated for higher-rank groups.
    pub fn parse(group: &FiniteGroup, spec: &str) -> Result<Self> {
        if let Some(rest) = spec.strip_prefix("rect:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Format(format!("bad rect lattice spec: {spec}")));
            }
            let a: i64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad rect lattice spec: {spec}")))?;
            let b: i64 = parts[1]
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad rect lattice spec: {spec}")))?;
            return Self::rectangular(group, a, b);
        }
        if let Some(rest) = spec.strip_prefix("gen:") {
            let mut gens = Vec::new();
            for item in rest.split(';') {
                let item = item.trim();
                let inner = item
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| Error::Format(format!("bad generator: {item}")))?;
                let halves: Vec<&str> = inner.split(',').collect();
                if halves.len() != 2 {
                    return Err(Error::Format(format!("bad generator: {item}")));
                }
                let coords = |s: &str| -> Result<GroupElement> {
                    let v: std::result::Result<Vec<i64>, _> =
                        s.split_whitespace().map(|t| t.parse::<i64>()).collect();
                    group.element(&v.map_err(|_| Error::Format(format!("bad generator: {item}")))?)
                };
                gens.push(PhasePoint::new(coords(halves[0])?, coords(halves[1])?));
            }
            return Ok(Self::from_generators(group, &gens));
        }
        Err(Error::Format(format!("unknown lattice spec: {spec}")))
    }
}

/// `s(Λ)` as a standalone operation.
pub fn lattice_size(lattice: &Lattice) -> Rational64 {
    lattice.size()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;

    fn z4() -> FiniteGroup {
        FiniteGroup::cyclic(4)
    }

    fn pt(g: &FiniteGroup, x: i64, w: i64) -> PhasePoint {
        PhasePoint::new(g.element(&[x]).unwrap(), g.element(&[w]).unwrap())
    }

    #[test]
    fn pure_time_shift_moves_delta() {
        let g = z4();
        let mut delta = CVec::zeros(4);
        delta[0] = C64::new(1.0, 0.0);
        let shifted = apply_shift(&g, &pt(&g, 1, 0), &delta);
        assert_eq!(shifted[1], C64::new(1.0, 0.0));
        assert_eq!(shifted[0], C64::new(0.0, 0.0));
    }

    #[test]
    fn pure_modulation() {
        let g = z4();
        let ones = CVec::from_element(4, C64::new(1.0, 0.0));
        let m = apply_shift(&g, &pt(&g, 0, 1), &ones);
        let expect = [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ];
        for (a, b) in m.iter().zip(expect.iter()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn shifts_are_unitary() {
        let g = FiniteGroup::cyclic(6);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let xi = pt(&g, rng.random_range(0..6), rng.random_range(0..6));
            let m = tf_shift(&g, &xi);
            let res = crate::max_abs(&(&m * m.adjoint() - CMat::identity(6, 6)));
            assert!(res <= 1e-12);
        }
    }

    #[test]
    fn cocycle_values_on_z4() {
        let g = z4();
        let c = heisenberg_cocycle(&g, &pt(&g, 1, 0), &pt(&g, 0, 1));
        assert_abs_diff_eq!((c - C64::new(0.0, -1.0)).norm(), 0.0, epsilon = 1e-15);
        let c0 = heisenberg_cocycle(&g, &pt(&g, 3, 2), &pp_zero(&g));
        assert_eq!(c0, C64::new(1.0, 0.0));
        let c1 = heisenberg_cocycle(&g, &pt(&g, 2, 0), &pt(&g, 0, 2));
        assert_eq!(c1, C64::new(1.0, 0.0)); // conj(e^{2πi·4/4})
        let cs = symplectic_cocycle(&g, &pt(&g, 1, 0), &pt(&g, 0, 1));
        assert_abs_diff_eq!((cs - C64::new(0.0, -1.0)).norm(), 0.0, epsilon = 1e-15);
        let xi = pt(&g, 3, 1);
        assert_eq!(symplectic_cocycle(&g, &xi, &xi), C64::new(1.0, 0.0));
    }

    #[test]
    fn cocycle_conjugation_symmetries() {
        let g = FiniteGroup::cyclic(8);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x1 = pt(&g, rng.random_range(0..8), rng.random_range(0..8));
            let x2 = pt(&g, rng.random_range(0..8), rng.random_range(0..8));
            let c = heisenberg_cocycle(&g, &x1, &x2);
            let a = heisenberg_cocycle(&g, &pp_neg(&g, &x1), &x2);
            let b = heisenberg_cocycle(&g, &x1, &pp_neg(&g, &x2));
            assert!((c.conj() - a).norm() <= 1e-14);
            assert!((c.conj() - b).norm() <= 1e-14);
            assert_abs_diff_eq!(c.norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn composition_identities_small_and_random() {
        let g = z4();
        assert_eq!(
            cocycle_identities_check(&g, &pp_zero(&g), &pp_zero(&g)),
            0.0
        );
        assert!(cocycle_identities_check(&g, &pt(&g, 1, 1), &pt(&g, 2, 3)) <= 1e-12);
        let g8 = FiniteGroup::cyclic(8);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let x1 = pt(&g8, rng.random_range(0..8), rng.random_range(0..8));
            let x2 = pt(&g8, rng.random_range(0..8), rng.random_range(0..8));
            assert!(cocycle_identities_check(&g8, &x1, &x2) <= 1e-12);
        }
    }

    #[test]
    fn adjoint_of_two_two_is_self() {
        let g = z4();
        let lat = Lattice::rectangular(&g, 2, 2).unwrap();
        assert_eq!(lat.len(), 4);
        assert_eq!(lat.size(), Rational64::from_integer(1));
        let adj = lat.adjoint();
        assert_eq!(adj.elements(), lat.elements());
        assert_eq!(lat.len() * adj.len(), 16); // |Λ|·|Λ°| = |G|²
        assert!(adj.is_conjugated());
        assert_eq!(adj.measure_weight(), Rational64::from_integer(1));
    }

    #[test]
    fn adjoint_extremes() {
        let g = z4();
        let full = Lattice::full(&g);
        assert_eq!(full.len(), 16);
        assert_eq!(full.size(), Rational64::new(1, 4));
        let adj = full.adjoint();
        assert_eq!(adj.len(), 1);
        let triv = Lattice::trivial(&g);
        assert_eq!(triv.size(), Rational64::from_integer(4));
        assert_eq!(triv.adjoint().len(), 16);
    }

    #[test]
    fn double_adjoint_restores_lattice_and_measure() {
        for n in [4u64, 6, 8, 9, 12] {
            let g = FiniteGroup::cyclic(n);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(n);
            for _ in 0..10 {
                let g1 = pt(
                    &g,
                    rng.random_range(0..n as i64),
                    rng.random_range(0..n as i64),
                );
                let g2 = pt(
                    &g,
                    rng.random_range(0..n as i64),
                    rng.random_range(0..n as i64),
                );
                let lat = Lattice::from_generators(&g, &[g1, g2]);
                let back = lat.adjoint().adjoint();
                assert_eq!(back.elements(), lat.elements());
                assert_eq!(back.measure_weight(), Rational64::from_integer(1));
                assert!(!back.is_conjugated());
            }
        }
    }

    #[test]
    fn adjoint_shifts_commute() {
        let g = FiniteGroup::cyclic(6);
        let lat = Lattice::rectangular(&g, 2, 3).unwrap();
        let adj = lat.adjoint();
        for lam in lat.elements() {
            for chi in adj.elements() {
                let a = tf_shift(&g, lam);
                let b = tf_shift(&g, chi);
                assert!(crate::max_abs(&(&a * &b - &b * &a)) <= 1e-12);
            }
        }
    }

    #[test]
    fn from_elements_rejects_non_subgroup() {
        let g = z4();
        let bad = vec![pp_zero(&g), pt(&g, 1, 0)];
        assert!(Lattice::from_elements(&g, &bad).is_err());
        let good = vec![pp_zero(&g), pt(&g, 2, 0)];
        assert!(Lattice::from_elements(&g, &good).is_ok());
    }

    #[test]
    fn parse_lattice_specs() {
        let g = FiniteGroup::cyclic(12);
        let r = Lattice::parse(&g, "rect:2,2").unwrap();
        assert_eq!(r.len(), 36);
        let gn = Lattice::parse(&g, "gen:(2,0);(0,2)").unwrap();
        assert_eq!(gn.elements(), r.elements());
        assert!(Lattice::parse(&g, "oops").is_err());
    }
}
