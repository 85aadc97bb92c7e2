//! Zero-testing modulo the relation ideal, degree by degree.
//!
//! Everything is exact. Over the integers, ideal membership in a fixed
//! degree means integer solvability of a small linear system, decided with a
//! Hermite-style column echelon form built from extended gcds; over `Z/p` it
//! is ordinary Gaussian elimination. Degrees above the presentation's top
//! degree are zero by definition and never touch the linear algebra.
//!
//! The reduced echelon data for a degree is memoized, since cup-length
//! search re-tests many products in the same degree.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::algebra::{AlgebraError, Ambient, Coefficients, Element, Monomial, Presentation};

/// All monomials of one total degree, in the global monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
}

impl GradedBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.monomials.binary_search(m).ok()
    }
}

/// Enumerates the monomial basis of the ambient algebra in degree `d`,
/// respecting the exponent conventions. Sorted ascending in the monomial
/// order by construction.
pub fn graded_basis(ambient: &Ambient, d: u32) -> GradedBasis {
    let gens = ambient.generators();
    let mut monomials = Vec::new();
    let mut exps = vec![0u32; gens.len()];
    fn rec(
        ambient: &Ambient,
        idx: usize,
        remaining: u64,
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        let gens = ambient.generators();
        if idx == gens.len() {
            if remaining == 0 {
                out.push(Monomial::from_exponents(exps.clone()));
            }
            return;
        }
        let deg = gens[idx].degree as u64;
        let mut cap = remaining / deg;
        if let Some(m) = ambient.max_exponent(idx) {
            cap = cap.min(m as u64);
        }
        for e in 0..=cap {
            exps[idx] = e as u32;
            rec(ambient, idx + 1, remaining - e * deg, exps, out);
        }
        exps[idx] = 0;
    }
    rec(ambient, 0, d as u64, &mut exps, &mut monomials);
    debug_assert!(monomials.windows(2).all(|w| w[0] < w[1]));
    GradedBasis { degree: d, monomials }
}

/// The degree-`d` slice of the relation ideal: one coordinate vector per
/// nonzero product `monomial * relation` landing in degree `d`.
#[derive(Clone, Debug)]
pub struct IdealSlice {
    pub degree: u32,
    pub vectors: Vec<Vec<BigInt>>,
}

pub fn ideal_slice(presentation: &Presentation, d: u32) -> IdealSlice {
    let ambient = presentation.ambient();
    let basis = graded_basis(ambient, d);
    let mut vectors = Vec::new();
    for relation in presentation.relations() {
        if relation.is_zero() {
            continue;
        }
        let e = relation
            .homogeneous_degree()
            .expect("presentation relations are homogeneous");
        if e > d as u64 {
            continue;
        }
        let cofactor_degree = (d as u64 - e) as u32;
        for m in &graded_basis(ambient, cofactor_degree).monomials {
            let cofactor = Element::from_terms(
                ambient,
                vec![(BigInt::from(1), m.clone())],
            );
            // Uncapped: the coordinates live in degree d regardless of the
            // presentation's truncation degree.
            let product = cofactor
                .mul_uncapped(relation)
                .expect("same ambient");
            if product.is_zero() {
                continue;
            }
            vectors.push(coordinates(&product, &basis));
        }
    }
    IdealSlice { degree: d, vectors }
}

fn coordinates(x: &Element, basis: &GradedBasis) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); basis.len()];
    for (c, m) in x.terms() {
        let i = basis
            .position(m)
            .expect("homogeneous element lies in its graded basis");
        v[i] = c.clone();
    }
    v
}

/// Zero-testing context for one presentation, with per-degree memoization.
/// Queries are pure; the memo table has computed-once semantics, so a
/// `Quotient` can be shared behind an `Arc` across threads.
pub struct Quotient {
    presentation: Presentation,
    cache: Mutex<HashMap<u32, Arc<DegreeData>>>,
}

struct DegreeData {
    basis: GradedBasis,
    solver: Solver,
}

enum Solver {
    Integer(IntEchelon),
    Prime(PrimeEchelon),
}

impl Quotient {
    pub fn new(presentation: Presentation) -> Self {
        Quotient { presentation, cache: Mutex::new(HashMap::new()) }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// True iff `x` is zero in the quotient. Mixed elements are tested per
    /// homogeneous piece; pieces above the top degree are zero by definition.
    pub fn is_zero(&self, x: &Element) -> Result<bool, AlgebraError> {
        if !(Arc::ptr_eq(self.presentation.ambient(), x.ambient())
            || self.presentation.ambient() == x.ambient())
        {
            return Err(AlgebraError::AmbientMismatch);
        }
        if x.is_zero() {
            return Ok(true);
        }
        let top = self.presentation.top_degree() as u64;
        for (d, piece) in x.homogeneous_components() {
            if d > top {
                continue;
            }
            if !self.piece_is_zero(d as u32, &piece)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn piece_is_zero(&self, d: u32, piece: &Element) -> Result<bool, AlgebraError> {
        let data = self.degree_data(d);
        let v = coordinates(piece, &data.basis);
        Ok(match &data.solver {
            Solver::Integer(ech) => ech.contains(&v),
            Solver::Prime(ech) => ech.contains(&v),
        })
    }

    fn degree_data(&self, d: u32) -> Arc<DegreeData> {
        let mut cache = self.cache.lock().expect("quotient cache poisoned");
        if let Some(data) = cache.get(&d) {
            return Arc::clone(data);
        }
        let basis = graded_basis(self.presentation.ambient(), d);
        let slice = ideal_slice(&self.presentation, d);
        let solver = match self.presentation.coefficients() {
            Coefficients::Integers => Solver::Integer(IntEchelon::new(basis.len(), slice.vectors)),
            Coefficients::ModPrime(p) => {
                let rows = slice
                    .vectors
                    .iter()
                    .map(|v| v.iter().map(|c| to_mod(c, p)).collect())
                    .collect();
                Solver::Prime(PrimeEchelon::new(basis.len(), rows, p))
            }
        };
        let data = Arc::new(DegreeData { basis, solver });
        cache.insert(d, Arc::clone(&data));
        data
    }
}

/// Convenience one-shot form of [`Quotient::is_zero`].
pub fn is_zero_in_quotient(presentation: &Presentation, x: &Element) -> Result<bool, AlgebraError> {
    Quotient::new(presentation.clone()).is_zero(x)
}

fn to_mod(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    u64::try_from(r).expect("residue fits in u64")
}

/// Column echelon form over the integers. Columns are combined with
/// extended-gcd (unimodular) operations, so their integer span is preserved;
/// membership is decided by forward substitution with divisibility checks.
struct IntEchelon {
    dim: usize,
    columns: Vec<Vec<BigInt>>,
    pivot_rows: Vec<usize>,
}

impl IntEchelon {
    fn new(dim: usize, vectors: Vec<Vec<BigInt>>) -> Self {
        let mut work: Vec<Vec<BigInt>> = vectors;
        let mut columns = Vec::new();
        let mut pivot_rows = Vec::new();
        for row in 0..dim {
            loop {
                let nonzero: Vec<usize> = work
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c[row].is_zero())
                    .map(|(i, _)| i)
                    .collect();
                match nonzero.len() {
                    0 => break,
                    1 => {
                        let mut col = work.swap_remove(nonzero[0]);
                        if col[row].is_negative() {
                            for x in col.iter_mut() {
                                *x = -std::mem::take(x);
                            }
                        }
                        columns.push(col);
                        pivot_rows.push(row);
                        break;
                    }
                    _ => {
                        let (i, j) = (nonzero[0], nonzero[1]);
                        let a = work[i][row].clone();
                        let b = work[j][row].clone();
                        let ext = a.extended_gcd(&b);
                        let (g, x, y) = (ext.gcd, ext.x, ext.y);
                        let ac = a / &g;
                        let bc = b / &g;
                        for r in 0..dim {
                            let u = work[i][r].clone();
                            let v = work[j][r].clone();
                            work[i][r] = &x * &u + &y * &v;
                            work[j][r] = &ac * &v - &bc * &u;
                        }
                        debug_assert_eq!(work[i][row], g);
                        debug_assert!(work[j][row].is_zero());
                    }
                }
            }
        }
        // Whatever remains is the zero column.
        debug_assert!(work.iter().all(|c| c.iter().all(|x| x.is_zero())));
        IntEchelon { dim, columns, pivot_rows }
    }

    fn contains(&self, v: &[BigInt]) -> bool {
        let mut residual = v.to_vec();
        let mut k = 0;
        for row in 0..self.dim {
            if k < self.columns.len() && self.pivot_rows[k] == row {
                let pivot = &self.columns[k][row];
                let (q, r) = residual[row].div_rem(pivot);
                if !r.is_zero() {
                    return false;
                }
                if !q.is_zero() {
                    for i in row..self.dim {
                        let delta = &q * &self.columns[k][i];
                        residual[i] -= delta;
                    }
                }
                k += 1;
            } else if !residual[row].is_zero() {
                return false;
            }
        }
        true
    }
}

/// Reduced row echelon form over `Z/p`.
struct PrimeEchelon {
    p: u64,
    rows: Vec<Vec<u64>>,
    pivot_cols: Vec<usize>,
}

impl PrimeEchelon {
    fn new(dim: usize, vectors: Vec<Vec<u64>>, p: u64) -> Self {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut pivot_cols: Vec<usize> = Vec::new();
        for mut v in vectors {
            reduce_row(&mut v, &rows, &pivot_cols, p);
            if let Some(col) = v.iter().position(|&x| x != 0) {
                let inv = inv_mod(v[col], p);
                for x in v.iter_mut() {
                    *x = mul_mod(*x, inv, p);
                }
                // Clear this column from earlier rows to keep rows reduced.
                for i in 0..rows.len() {
                    let c = rows[i][col];
                    if c != 0 {
                        for k in 0..dim {
                            let sub = mul_mod(c, v[k], p);
                            rows[i][k] = sub_mod(rows[i][k], sub, p);
                        }
                    }
                }
                let at = pivot_cols.partition_point(|&pc| pc < col);
                rows.insert(at, v);
                pivot_cols.insert(at, col);
            }
        }
        PrimeEchelon { p, rows, pivot_cols }
    }

    fn contains(&self, v: &[BigInt]) -> bool {
        let mut w: Vec<u64> = v.iter().map(|c| to_mod(c, self.p)).collect();
        reduce_row(&mut w, &self.rows, &self.pivot_cols, self.p);
        w.iter().all(|&x| x == 0)
    }
}

fn reduce_row(v: &mut [u64], rows: &[Vec<u64>], pivot_cols: &[usize], p: u64) {
    for (row, &col) in rows.iter().zip(pivot_cols) {
        let c = v[col];
        if c != 0 {
            for k in 0..v.len() {
                let sub = mul_mod(c, row[k], p);
                v[k] = sub_mod(v[k], sub, p);
            }
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: p is prime, a nonzero mod p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Coefficients, Generator};
    use num_traits::One;

    fn sphere(m: u32) -> Presentation {
        let amb = Ambient::new(
            Coefficients::Integers,
            vec![Generator::new("a", m)],
            m,
        )
        .unwrap();
        let a = Element::generator(&amb, 0).unwrap();
        let sq = a.mul_uncapped(&a).unwrap();
        Presentation::new(amb, vec![sq], true).unwrap()
    }

    fn rp(m: u32) -> Presentation {
        let amb = Ambient::new(
            Coefficients::mod_prime(2).unwrap(),
            vec![Generator::new("g", 1)],
            m,
        )
        .unwrap();
        let g = Element::generator(&amb, 0).unwrap();
        let mut rel = Element::one(&amb);
        for _ in 0..=m {
            rel = rel.mul_uncapped(&g).unwrap();
        }
        Presentation::new(amb, vec![rel], true).unwrap()
    }

    fn conf_r2_3() -> Presentation {
        let amb = Ambient::new(
            Coefficients::Integers,
            vec![
                Generator::new("a12", 1),
                Generator::new("a13", 1),
                Generator::new("a23", 1),
            ],
            2,
        )
        .unwrap();
        let rel = |i: usize| {
            let g = Element::generator(&amb, i).unwrap();
            g.mul_uncapped(&g).unwrap()
        };
        let relations = vec![rel(0), rel(1), rel(2)];
        let arnold = parse_element_in_test("a12*a23 - a12*a13 - a13*a23", &amb);
        let mut relations = relations;
        relations.push(arnold);
        Presentation::new(amb, relations, true).unwrap()
    }

    fn parse_element_in_test(text: &str, amb: &Arc<Ambient>) -> Element {
        crate::algebra::parse_element_in(text, amb).unwrap()
    }

    #[test]
    fn sphere_basis_in_top_degree() {
        let p = sphere(4);
        let basis = graded_basis(p.ambient(), 4);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis.monomials[0].exponents(), &[1]);
    }

    #[test]
    fn square_free_pairs_in_degree_two() {
        let p = conf_r2_3();
        let basis = graded_basis(p.ambient(), 2);
        let rendered: Vec<String> = basis
            .monomials
            .iter()
            .map(|m| p.ambient().render_monomial(m))
            .collect();
        assert_eq!(rendered, vec!["a13*a23", "a12*a23", "a12*a13"]);
    }

    #[test]
    fn rp3_degree_two_basis() {
        let p = rp(3);
        let basis = graded_basis(p.ambient(), 2);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis.monomials[0].exponents(), &[2]);
    }

    #[test]
    fn sphere_slice_in_degree_two_m() {
        // Even m: the ambient square is a real monomial and the slice in
        // degree 2m is exactly its coordinate vector.
        let p = sphere(2);
        let slice = ideal_slice(&p, 4);
        assert_eq!(slice.vectors.len(), 1);
        assert_eq!(slice.vectors[0], vec![BigInt::one()]);
        // Odd m: the square is already zero in the exterior ambient.
        let p = sphere(3);
        let slice = ideal_slice(&p, 6);
        assert!(slice.vectors.is_empty());
    }

    #[test]
    fn torus_slice_is_empty_in_degree_two() {
        // a, b odd over Z: the relations a^2, b^2, a*b + b*a all normalize to
        // zero in the exterior ambient, so H^2 is spanned by a*b alone.
        let amb = Ambient::new(
            Coefficients::Integers,
            vec![Generator::new("a", 1), Generator::new("b", 1)],
            2,
        )
        .unwrap();
        let a = Element::generator(&amb, 0).unwrap();
        let b = Element::generator(&amb, 1).unwrap();
        let relations = vec![
            a.mul_uncapped(&a).unwrap(),
            b.mul_uncapped(&b).unwrap(),
            a.mul_uncapped(&b).unwrap().add(&b.mul_uncapped(&a).unwrap()).unwrap(),
        ];
        assert!(relations.iter().all(|r| r.is_zero()));
        let p = Presentation::new(amb, relations, true).unwrap();
        let slice = ideal_slice(&p, 2);
        assert!(slice.vectors.is_empty());
        let q = Quotient::new(p.clone());
        let ab = a.mul(&b).unwrap();
        assert!(!q.is_zero(&ab).unwrap());
    }

    #[test]
    fn arnold_multiple_lands_on_the_triple_monomial() {
        // In the ambient on a12, a13, a23 the degree-3 slice contains
        // +-a12*a13*a23, coming from cofactor * Arnold products.
        let p = conf_r2_3();
        let slice = ideal_slice(&p, 3);
        assert!(!slice.vectors.is_empty());
        for v in &slice.vectors {
            assert_eq!(v.len(), 1);
            assert_eq!(v[0].abs(), BigInt::one());
        }
    }

    #[test]
    fn sphere_square_is_zero_in_quotient() {
        for m in 1..=4 {
            let p = sphere(m);
            let a = Element::generator(p.ambient(), 0).unwrap();
            let q = Quotient::new(p);
            let sq = a.mul_uncapped(&a).unwrap();
            assert!(q.is_zero(&sq).unwrap(), "m = {m}");
            assert!(!q.is_zero(&a).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn arnold_reduction_in_conf_r2_3() {
        let p = conf_r2_3();
        let q = Quotient::new(p.clone());
        let amb = p.ambient();
        let a12 = Element::generator(amb, 0).unwrap();
        let a13 = Element::generator(amb, 1).unwrap();
        let a23 = Element::generator(amb, 2).unwrap();
        assert!(!q.is_zero(&a12.mul(&a23).unwrap()).unwrap());
        assert!(!q.is_zero(&a12.mul(&a13).unwrap()).unwrap());
        let triple = a12.mul_uncapped(&a23).unwrap().mul_uncapped(&a13).unwrap();
        assert!(q.is_zero(&triple).unwrap());
    }

    #[test]
    fn projective_space_powers() {
        let p = rp(3);
        let q = Quotient::new(p.clone());
        let g = Element::generator(p.ambient(), 0).unwrap();
        let mut cube = Element::one(p.ambient());
        for _ in 0..3 {
            cube = cube.mul_uncapped(&g).unwrap();
        }
        assert!(!q.is_zero(&cube).unwrap());
        let fourth = cube.mul_uncapped(&g).unwrap();
        assert!(q.is_zero(&fourth).unwrap());
    }

    #[test]
    fn declared_relations_and_their_multiples_test_zero() {
        let p = conf_r2_3();
        let q = Quotient::new(p.clone());
        for r in p.relations() {
            assert!(q.is_zero(r).unwrap());
            for idx in 0..3 {
                let g = Element::generator(p.ambient(), idx).unwrap();
                let prod = g.mul_uncapped(r).unwrap();
                assert!(q.is_zero(&prod).unwrap());
            }
        }
    }

    #[test]
    fn ideal_is_closed_under_addition() {
        let p = conf_r2_3();
        let q = Quotient::new(p.clone());
        let amb = p.ambient();
        let r = &p.relations()[3];
        let x = Element::generator(amb, 1).unwrap().mul_uncapped(r).unwrap();
        let y = Element::generator(amb, 2).unwrap().mul_uncapped(r).unwrap();
        assert!(q.is_zero(&x).unwrap());
        assert!(q.is_zero(&y).unwrap());
        assert!(q.is_zero(&x.add(&y).unwrap()).unwrap());
    }

    #[test]
    fn integer_membership_requires_integer_solvability() {
        // Span {2e1}: e1 is a rational but not an integral combination.
        let ech = IntEchelon::new(1, vec![vec![BigInt::from(2)]]);
        assert!(ech.contains(&[BigInt::from(4)]));
        assert!(!ech.contains(&[BigInt::from(3)]));
        assert!(ech.contains(&[BigInt::zero()]));
    }

    #[test]
    fn mixed_elements_are_tested_per_piece() {
        let p = sphere(2);
        let amb = p.ambient();
        let a = Element::generator(amb, 0).unwrap();
        let sq = a.mul_uncapped(&a).unwrap();
        let mixed = a.add(&sq).unwrap();
        let q = Quotient::new(p);
        assert!(!q.is_zero(&mixed).unwrap());
        assert!(q.is_zero(&sq).unwrap());
    }
}
