//! The geometric engine: cyclic ℓ-subgroups of a supersingular curve over
//! `F_{p²}` as kernel polynomials, codomain j-invariants by Vélu's formulas,
//! and the neighborhoods and graphs they assemble into.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::arith::is_prime_u64;
use crate::ec::{curve_from_j, Curve, EcError};
use crate::ff::{ExtensionField, Field, Fp2, QuadraticField};
use crate::poly::{Poly, PolyRing};
use crate::report::{Engine, Neighbor, NeighborhoodReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsogenyError {
    #[error("ℓ = {0} is not prime")]
    NotPrime(u64),
    #[error("ℓ must differ from the characteristic {0}")]
    EllEqualsP(u64),
    #[error("curve is not supersingular")]
    NotSupersingular,
    #[error("codomain j-invariant does not lie in F_p²")]
    Coercion,
    #[error("found {found} cyclic subgroups, expected {expected}")]
    SubgroupCount { found: usize, expected: usize },
    #[error(transparent)]
    Curve(#[from] EcError),
}

/// One cyclic ℓ-subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelDatum {
    /// `K = F_{p²}[x]/(host)` is where the kernel's x-coordinates live.
    pub host: Poly<Fp2>,
    /// Monic kernel polynomial over `K`, ascending coefficients.
    pub kernel: Vec<Vec<Fp2>>,
    /// Product of the Frobenius conjugates of `kernel`; lies over `F_{p²}`.
    pub rational_closure: Poly<Fp2>,
    /// Number of conjugate subgroups sharing `rational_closure`.
    pub orbit_size: usize,
    pub codomain_j: Fp2,
}

impl KernelDatum {
    /// The kernel polynomial itself when it is defined over `F_{p²}`.
    pub fn kernel_over_base(&self) -> Option<Poly<Fp2>> {
        (self.orbit_size == 1).then(|| self.rational_closure.clone())
    }
}

/// Codomain of the isogeny with kernel polynomial `h`, from the power sums
/// of its roots. Returns the codomain curve and its j-invariant, both over
/// `h`'s field.
pub fn velu_codomain<F: Field>(
    curve: &Curve<F>,
    h: &Poly<F::Elem>,
    ell: u64,
) -> Result<(Curve<F>, F::Elem), IsogenyError> {
    let f = curve.field();
    let d = h.degree().expect("kernel polynomial is nonzero");
    let c = h.coeffs();
    let coef = |k: usize| {
        if k <= d && d - k < c.len() {
            c[d - k].clone()
        } else {
            f.zero()
        }
    };
    // elementary symmetric functions of the roots
    let e1 = f.neg(&coef(1));
    let e2 = if d >= 2 { coef(2) } else { f.zero() };
    let e3 = if d >= 3 { f.neg(&coef(3)) } else { f.zero() };
    let s1 = e1.clone();
    let s2 = f.sub(&f.square(&e1), &f.mul(&f.from_i64(2), &e2));
    let s3 = {
        let t = f.mul(&f.square(&e1), &e1);
        let t = f.sub(&t, &f.mul(&f.from_i64(3), &f.mul(&e1, &e2)));
        f.add(&t, &f.mul(&f.from_i64(3), &e3))
    };
    let (a, b) = (curve.a(), curve.b());
    let dd = f.from_i64(d as i64);
    let (v, w) = if ell == 2 {
        (
            f.add(&f.mul(&f.from_i64(3), &s2), &f.mul(a, &dd)),
            f.add(&f.mul(&f.from_i64(3), &s3), &f.mul(a, &s1)),
        )
    } else {
        let v = f.add(&f.mul(&f.from_i64(6), &s2), &f.mul(&f.from_i64(2), &f.mul(a, &dd)));
        let w = f.add(
            &f.add(&f.mul(&f.from_i64(10), &s3), &f.mul(&f.from_i64(6), &f.mul(a, &s1))),
            &f.mul(&f.from_i64(4), &f.mul(b, &dd)),
        );
        (v, w)
    };
    let a2 = f.sub(a, &f.mul(&f.from_i64(5), &v));
    let b2 = f.sub(b, &f.mul(&f.from_i64(7), &w));
    let image = Curve::new(f.clone(), a2, b2)?;
    let j = image.j_invariant();
    Ok((image, j))
}

fn check_inputs(curve: &Curve<QuadraticField>, ell: u64, seed: u64) -> Result<(), IsogenyError> {
    if !is_prime_u64(ell) {
        return Err(IsogenyError::NotPrime(ell));
    }
    let p = curve.field().p();
    if ell == p {
        return Err(IsogenyError::EllEqualsP(p));
    }
    if !curve.trace_classify_sampled(seed)?.is_supersingular() {
        return Err(IsogenyError::NotSupersingular);
    }
    Ok(())
}

/// All `ℓ + 1` cyclic ℓ-subgroups of a supersingular curve.
///
/// The ℓ-division polynomial (the 2-division cubic for `ℓ = 2`) is factored
/// over `F_{p²}`. For each irreducible factor not yet accounted for, its root
/// `x̄` in `K = F_{p²}[x]/(factor)` is the x-coordinate of a point of order ℓ;
/// the x-coordinates of its multiples give that subgroup's kernel
/// polynomial. Frobenius conjugates of the kernel polynomial are distinct
/// subgroups with the same codomain j, and together cover every factor they
/// divide.
pub fn enumerate_kernels(
    curve: &Curve<QuadraticField>,
    ell: u64,
    seed: u64,
) -> Result<Vec<KernelDatum>, IsogenyError> {
    check_inputs(curve, ell, seed)?;
    let fq = *curve.field();
    let ring = PolyRing::new(&fq);
    let psi = if ell == 2 {
        curve.rhs_poly()
    } else {
        curve.division_polynomial(ell as usize)
    };
    let factors: Vec<Poly<Fp2>> = ring
        .factor(&psi, seed)
        .into_iter()
        .map(|(g, m)| {
            debug_assert_eq!(m, 1);
            g
        })
        .collect();
    let mut used = vec![false; factors.len()];
    let kmax = ((ell as usize) - 1).div_euclid(2).max(1);
    let mut out = Vec::new();

    for idx in 0..factors.len() {
        if used[idx] {
            continue;
        }
        let host = factors[idx].clone();
        let k = ExtensionField::new_unchecked(fq, host.clone());
        let rk = PolyRing::new(&k);
        let ck = curve.base_change(k.clone(), |c| k.embed(c));
        let xs = ck.multiples_x(&k.generator(), kmax);
        let h = xs
            .iter()
            .fold(rk.one(), |acc, x| rk.mul(&acc, &rk.linear(x)));
        let (_, jk) = velu_codomain(&ck, &h, ell)?;
        let codomain_j = k.to_base(&jk).ok_or(IsogenyError::Coercion)?;

        let conj = |g: &Poly<Vec<Fp2>>| {
            rk.from_coeffs(g.coeffs().iter().map(|c| k.frobenius(c)).collect())
        };
        let mut orbit = vec![h.clone()];
        loop {
            let next = conj(orbit.last().unwrap());
            if next == h {
                break;
            }
            orbit.push(next);
        }
        let closure_k = orbit.iter().fold(rk.one(), |acc, g| rk.mul(&acc, g));
        let closure = ring.from_coeffs(
            closure_k
                .coeffs()
                .iter()
                .map(|c| k.to_base(c).ok_or(IsogenyError::Coercion))
                .collect::<Result<_, _>>()?,
        );
        for (i, g) in factors.iter().enumerate() {
            if ring.divides(g, &closure) {
                used[i] = true;
            }
        }
        let r = orbit.len();
        for g in orbit {
            out.push(KernelDatum {
                host: host.clone(),
                kernel: g.into_coeffs(),
                rational_closure: closure.clone(),
                orbit_size: r,
                codomain_j,
            });
        }
    }
    let expected = ell as usize + 1;
    if out.len() != expected {
        return Err(IsogenyError::SubgroupCount {
            found: out.len(),
            expected,
        });
    }
    Ok(out)
}

/// Codomain j-invariants around one vertex, aggregated by multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub p: u64,
    pub ell: u64,
    pub source: Fp2,
    pub loops: usize,
    /// Distinct neighbors other than `source`, in canonical order.
    pub neighbors: Vec<(Fp2, usize)>,
}

impl Neighborhood {
    pub fn multiplicity_of(&self, j: &Fp2) -> usize {
        if *j == self.source {
            return self.loops;
        }
        self.neighbors
            .iter()
            .find(|(n, _)| n == j)
            .map_or(0, |(_, m)| *m)
    }

    pub fn report(&self, field: &QuadraticField) -> NeighborhoodReport {
        let neighbors = self
            .neighbors
            .iter()
            .map(|(j, m)| Neighbor {
                j: field.format(j),
                multiplicity: *m,
                in_prime_field: field.is_in_prime_field(j),
            })
            .collect();
        NeighborhoodReport::new(
            self.p,
            self.ell,
            field.format(&self.source),
            self.loops,
            neighbors,
            Engine::Geometric,
        )
    }
}

/// The ℓ-isogeny neighborhood of the vertex `j`. Loops are codomains equal
/// to `j` itself and are not counted as neighbors.
pub fn neighborhood(
    field: &QuadraticField,
    j: &Fp2,
    ell: u64,
    seed: u64,
) -> Result<Neighborhood, IsogenyError> {
    let curve = curve_from_j(field, j);
    let kernels = enumerate_kernels(&curve, ell, seed)?;
    let mut counts: BTreeMap<Fp2, usize> = BTreeMap::new();
    for kd in &kernels {
        *counts.entry(kd.codomain_j).or_default() += 1;
    }
    let loops = counts.remove(j).unwrap_or(0);
    Ok(Neighborhood {
        p: field.p(),
        ell,
        source: *j,
        loops,
        neighbors: counts.into_iter().collect(),
    })
}

/// `|Aut(E)|` for a curve with invariant `j` in characteristic `p > 3`.
pub fn automorphism_count(field: &QuadraticField, j: &Fp2) -> usize {
    if field.is_zero(j) {
        6
    } else if *j == field.from_i64(1728) {
        4
    } else {
        2
    }
}

/// A breadth-first portion of the supersingular ℓ-isogeny graph.
#[derive(Debug, Clone)]
pub struct Graph {
    pub p: u64,
    pub ell: u64,
    /// Vertices in discovery order.
    pub vertices: Vec<Fp2>,
    pub neighborhoods: BTreeMap<Fp2, Neighborhood>,
    /// True when the vertex budget stopped the search early.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: Fp2,
    pub to: Fp2,
    pub multiplicity: usize,
}

/// An edge whose two directed multiplicities are inconsistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryViolation {
    pub a: Fp2,
    pub b: Fp2,
    pub forward: usize,
    pub backward: usize,
}

impl Graph {
    pub fn loops(&self, j: &Fp2) -> usize {
        self.neighborhoods.get(j).map_or(0, |n| n.loops)
    }

    /// One edge per unordered pair of distinct vertices, oriented from the
    /// vertex discovered first and carrying that side's multiplicity.
    pub fn edges(&self) -> Vec<Edge> {
        let order: BTreeMap<Fp2, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, i))
            .collect();
        let mut out = Vec::new();
        for v in &self.vertices {
            let Some(nb) = self.neighborhoods.get(v) else { continue };
            for (w, m) in &nb.neighbors {
                match order.get(w) {
                    Some(&iw) if iw > order[v] => out.push(Edge {
                        from: *v,
                        to: *w,
                        multiplicity: *m,
                    }),
                    _ => {}
                }
            }
        }
        out
    }

    /// Checks `m(a→b)·|Aut(b)| = m(b→a)·|Aut(a)|` on every edge between two
    /// expanded vertices. Away from `j = 0, 1728` this is plain symmetry.
    pub fn symmetry_violations(&self, field: &QuadraticField) -> Vec<SymmetryViolation> {
        let mut out = Vec::new();
        for (a, na) in &self.neighborhoods {
            for (b, m) in &na.neighbors {
                if b <= a {
                    continue;
                }
                let Some(nb) = self.neighborhoods.get(b) else { continue };
                let back = nb.multiplicity_of(a);
                let lhs = m * automorphism_count(field, b);
                let rhs = back * automorphism_count(field, a);
                if lhs != rhs {
                    out.push(SymmetryViolation {
                        a: *a,
                        b: *b,
                        forward: *m,
                        backward: back,
                    });
                }
            }
        }
        out
    }
}

/// Breadth-first closure of [`neighborhood`] from `start`, expanding at most
/// `max_vertices` vertices.
pub fn bfs_graph(
    field: &QuadraticField,
    start: &Fp2,
    ell: u64,
    max_vertices: usize,
    seed: u64,
) -> Result<Graph, IsogenyError> {
    let mut g = Graph {
        p: field.p(),
        ell,
        vertices: vec![*start],
        neighborhoods: BTreeMap::new(),
        truncated: false,
    };
    let mut queue = VecDeque::from([*start]);
    while let Some(v) = queue.pop_front() {
        let nb = neighborhood(field, &v, ell, seed)?;
        for (w, _) in &nb.neighbors {
            if g.vertices.contains(w) {
                continue;
            }
            if g.vertices.len() >= max_vertices {
                g.truncated = true;
                continue;
            }
            g.vertices.push(*w);
            queue.push_back(*w);
        }
        g.neighborhoods.insert(v, nb);
    }
    Ok(g)
}

/// Number of supersingular j-invariants in characteristic `p > 3`.
pub fn supersingular_count(p: u64) -> usize {
    let extra = match p % 12 {
        1 => 0,
        5 | 7 => 1,
        11 => 2,
        _ => panic!("p must be a prime > 3"),
    };
    (p / 12) as usize + extra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_quadratic_context;

    fn fq(p: u64) -> QuadraticField {
        make_quadratic_context(p).unwrap()
    }

    fn nb(p: u64, j: i64, ell: u64) -> Neighborhood {
        let f = fq(p);
        neighborhood(&f, &f.from_i64(j), ell, 0).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let f = fq(7);
        let e = curve_from_j(&f, &f.from_i64(1728));
        let ks = enumerate_kernels(&e, 2, 0).unwrap();
        assert_eq!(ks.len(), 3);
        assert!(ks.iter().all(|k| k.codomain_j == f.from_i64(1728)));

        let f = fq(5);
        let e = curve_from_j(&f, &f.zero());
        let ks = enumerate_kernels(&e, 3, 0).unwrap();
        assert_eq!(ks.len(), 4);
        assert!(ks.iter().all(|k| k.codomain_j == f.zero()));

        let f = fq(103);
        let e = curve_from_j(&f, &f.from_i64(1728));
        let ks = enumerate_kernels(&e, 5, 0).unwrap();
        assert_eq!(ks.len(), 6);
        let mut counts: BTreeMap<Fp2, usize> = BTreeMap::new();
        for k in &ks {
            *counts.entry(k.codomain_j).or_default() += 1;
        }
        assert_eq!(counts.len(), 3);
        assert!(counts.values().all(|&m| m == 2));
        assert_eq!(counts[&f.from_i64(1728)], 2);
    }

    #[test]
    fn kernel_errors() {
        let f = fq(7);
        let e = curve_from_j(&f, &f.from_i64(1728));
        assert_eq!(enumerate_kernels(&e, 7, 0).unwrap_err(), IsogenyError::EllEqualsP(7));
        assert_eq!(enumerate_kernels(&e, 9, 0).unwrap_err(), IsogenyError::NotPrime(9));
        let f = fq(13);
        let e = curve_from_j(&f, &f.from_i64(1728));
        assert_eq!(enumerate_kernels(&e, 3, 0).unwrap_err(), IsogenyError::NotSupersingular);
    }

    #[test]
    fn kernels_partition_division_polynomial() {
        for (p, j, ell) in [(103u64, 1728i64, 5u64), (103, 1728, 7), (47, 0, 5), (83, 1728, 13), (101, 0, 11)] {
            let f = fq(p);
            let e = curve_from_j(&f, &f.from_i64(j));
            let ring = PolyRing::new(&f);
            let ks = enumerate_kernels(&e, ell, 0).unwrap();
            let mut closures: Vec<Poly<Fp2>> = Vec::new();
            for k in &ks {
                assert_eq!(k.kernel.len(), (ell as usize - 1) / 2 + 1);
                if !closures.contains(&k.rational_closure) {
                    closures.push(k.rational_closure.clone());
                }
            }
            for (i, a) in closures.iter().enumerate() {
                for b in &closures[i + 1..] {
                    assert!(ring.is_one(&ring.gcd(a, b)));
                }
            }
            let prod = closures.iter().fold(ring.one(), |acc, c| ring.mul(&acc, c));
            assert_eq!(prod, ring.monic(&e.division_polynomial(ell as usize)));
        }
    }

    #[test]
    fn velu_on_two_torsion_point() {
        let f = fq(7);
        let e = curve_from_j(&f, &f.from_i64(1728));
        let ring = PolyRing::new(&f);
        let (_, j) = velu_codomain(&e, &ring.x(), 2).unwrap();
        assert_eq!(f.frobenius_p(&f.frobenius_p(&j)), j);
        assert_eq!(j, f.from_i64(1728));
    }

    #[test]
    fn small_characteristic_cases() {
        assert_eq!((nb(7, 1728, 2).loops, nb(7, 1728, 2).neighbors.len()), (3, 0));
        assert_eq!(nb(5, 0, 2).loops, 3);
        assert_eq!(nb(5, 0, 3).loops, 4);
        // −1 ≡ 1728 mod 7, so all four 3-isogenies are loops
        let n = nb(7, 1728, 3);
        assert_eq!((n.loops, n.neighbors.len()), (4, 0));
        // 1 ≡ 1728 mod 11: two loops and a double edge to j = 0
        let n = nb(11, 1728, 3);
        assert_eq!(n.loops, 2);
        assert_eq!(n.neighbors, vec![(fq(11).zero(), 2)]);
        for p in [11u64, 19, 23, 31, 43] {
            let n = nb(p, 1728, 2);
            assert_eq!(n.loops, 1, "p={p}");
            assert_eq!(n.neighbors.iter().map(|x| x.1).collect::<Vec<_>>(), vec![2]);
        }
    }

    #[test]
    fn report_for_103_5() {
        let f = fq(103);
        let r = nb(103, 1728, 5).report(&f);
        r.validate().unwrap();
        assert_eq!((r.loops, r.distinct_count, r.fp_count), (2, 2, 0));
        assert!(r.neighbors.iter().all(|n| n.multiplicity == 2));
    }

    #[test]
    fn bfs_examples() {
        let f = fq(7);
        let g = bfs_graph(&f, &f.from_i64(1728), 2, 100, 0).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.loops(&f.from_i64(1728)), 3);

        let f = fq(11);
        let g = bfs_graph(&f, &f.from_i64(1728), 3, 100, 0).unwrap();
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.loops(&f.from_i64(1728)), 2);
        // j = 0 has three automorphism pairs to 1728's two
        assert_eq!(g.neighborhoods[&f.zero()].multiplicity_of(&f.from_i64(1728)), 3);
        assert!(g.symmetry_violations(&f).is_empty());

        let f = fq(23);
        let g = bfs_graph(&f, &f.zero(), 3, 100, 0).unwrap();
        assert!(g.vertices.len() <= supersingular_count(23));
    }

    #[test]
    fn bfs_finds_every_supersingular_vertex() {
        for (p, ell) in [(47u64, 2u64), (103, 3), (167, 2), (59, 5), (131, 3)] {
            let f = fq(p);
            let start = if p % 4 == 3 { f.from_i64(1728) } else { f.zero() };
            let g = bfs_graph(&f, &start, ell, 1000, 0).unwrap();
            assert!(!g.truncated);
            assert_eq!(g.vertices.len(), supersingular_count(p), "p={p}");
            for nb in g.neighborhoods.values() {
                nb.report(&f).validate().unwrap();
                assert!(nb.neighbors.iter().all(|(j, _)| f.frobenius_p(&f.frobenius_p(j)) == *j));
            }
            assert!(g.symmetry_violations(&f).is_empty());
            for e in g.edges() {
                let special = |j: &Fp2| automorphism_count(&f, j) > 2;
                if !special(&e.from) && !special(&e.to) {
                    let back = g.neighborhoods[&e.to].multiplicity_of(&e.from);
                    assert_eq!(back, e.multiplicity);
                }
            }
        }
    }

    #[test]
    fn bfs_budget_truncates() {
        let f = fq(311);
        let g = bfs_graph(&f, &f.from_i64(1728), 2, 5, 0).unwrap();
        assert!(g.truncated);
        assert_eq!(g.vertices.len(), 5);
    }

    #[test]
    fn seed_does_not_change_result() {
        let f = fq(311);
        let j = f.from_i64(1728);
        let a = neighborhood(&f, &j, 7, 0).unwrap();
        let b = neighborhood(&f, &j, 7, 99).unwrap();
        assert_eq!(a, b);
    }
}
