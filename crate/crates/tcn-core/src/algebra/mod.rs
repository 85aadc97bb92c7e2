//! Exact arithmetic in free graded-commutative algebras over `Z` or `Z/p`.
//!
//! The ambient object depends on the characteristic:
//!
//! * characteristic 0 (or any odd prime): polynomial algebra on the
//!   even-degree generators tensor the exterior algebra on the odd-degree
//!   ones, so odd squares are identically zero;
//! * characteristic 2: a plain commutative polynomial algebra, so odd powers
//!   survive (as they must for `Z/2[g]/(g^(m+1))`).
//!
//! Coefficients are arbitrary-precision integers; in the modular case the
//! canonical representative lies in `0..p`. All values are immutable after
//! construction and every operation is a pure function, so everything can be
//! shared freely across threads.

mod parse;

pub use parse::{is_valid_name, parse_element, parse_element_in};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {0} out of range")]
    GeneratorIndex(usize),
    #[error("exponent {exp} on odd-degree generator `{name}` needs characteristic 2")]
    OddExponent { name: String, exp: u32 },
    #[error("elements belong to different presentations")]
    AmbientMismatch,
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("generator `{0}` must have degree >= 1")]
    DegreeZeroGenerator(String),
    #[error("relation `{0}` is not homogeneous")]
    InhomogeneousRelation(String),
}

/// The coefficient ring: the integers, or the field `Z/p` for a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    ModPrime(u64),
}

impl Coefficients {
    /// Modular coefficients; rejects composite (and unit) moduli.
    pub fn mod_prime(p: u64) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::CompositeModulus(p));
        }
        Ok(Coefficients::ModPrime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Coefficients::Integers => 0,
            Coefficients::ModPrime(p) => *p,
        }
    }

    pub fn char_two(&self) -> bool {
        self.characteristic() == 2
    }

    /// Canonical representative: identity over `Z`, value in `0..p` mod `p`.
    pub fn reduce(&self, c: BigInt) -> BigInt {
        match self {
            Coefficients::Integers => c,
            Coefficients::ModPrime(p) => c.mod_floor(&BigInt::from(*p)),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::ModPrime(p) => write!(f, "Z/{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A named generator of a fixed positive degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator { name: name.into(), degree }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// The free graded-commutative algebra underneath a presentation: the
/// coefficient ring, the ordered generators, and the degree cap above which
/// everything is declared zero.
#[derive(Debug, PartialEq, Eq)]
pub struct Ambient {
    coefficients: Coefficients,
    generators: Vec<Generator>,
    top_degree: u32,
}

impl Ambient {
    pub fn new(
        coefficients: Coefficients,
        generators: Vec<Generator>,
        top_degree: u32,
    ) -> Result<Arc<Self>, AlgebraError> {
        if let Coefficients::ModPrime(p) = coefficients {
            if !is_prime(p) {
                return Err(AlgebraError::CompositeModulus(p));
            }
        }
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(AlgebraError::DegreeZeroGenerator(g.name.clone()));
            }
            if !is_valid_name(&g.name) {
                return Err(AlgebraError::InvalidName(g.name.clone()));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Arc::new(Ambient { coefficients, generators, top_degree }))
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Largest exponent a generator may carry: 1 for odd generators outside
    /// characteristic 2, unbounded otherwise.
    pub fn max_exponent(&self, idx: usize) -> Option<u32> {
        if !self.coefficients.char_two() && self.generators[idx].is_odd() {
            Some(1)
        } else {
            None
        }
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.generators[i].name.clone()),
                _ => parts.push(format!("{}^{}", self.generators[i].name, e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Exponent vector over a fixed generator order. The derived `Ord` is the
/// lexicographic order used for canonical forms everywhere.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn unit(ngens: usize) -> Self {
        Monomial { exps: vec![0; ngens] }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, ambient: &Ambient) -> u64 {
        self.exps
            .iter()
            .zip(ambient.generators())
            .map(|(&e, g)| e as u64 * g.degree as u64)
            .sum()
    }

    /// The word of generator indices, each repeated by its exponent, in
    /// canonical (ascending index) order.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            w.extend(std::iter::repeat(i).take(e as usize));
        }
        w
    }
}

/// Sorts a word of generator indices into canonical order, multiplying the
/// coefficient by the Koszul sign `(-1)^(deg a * deg b)` for every adjacent
/// transposition (no sign in characteristic 2). Under the exterior
/// convention a repeated odd generator yields coefficient zero.
pub fn normalize_word(
    ambient: &Ambient,
    word: &[usize],
    coeff: BigInt,
) -> Result<(BigInt, Monomial), AlgebraError> {
    let gens = ambient.generators();
    for &g in word {
        if g >= gens.len() {
            return Err(AlgebraError::GeneratorIndex(g));
        }
    }
    let char_two = ambient.coefficients().char_two();
    let mut negate = false;
    let mut sorted: Vec<usize> = Vec::with_capacity(word.len());
    for &g in word {
        let mut pos = sorted.len();
        while pos > 0 && sorted[pos - 1] > g {
            pos -= 1;
        }
        if !char_two && gens[g].is_odd() {
            let odd_crossings =
                sorted[pos..].iter().filter(|&&h| gens[h].is_odd()).count();
            if odd_crossings % 2 == 1 {
                negate = !negate;
            }
        }
        sorted.insert(pos, g);
    }
    let mut exps = vec![0u32; gens.len()];
    for &g in &sorted {
        exps[g] += 1;
    }
    if !char_two {
        for (i, &e) in exps.iter().enumerate() {
            if e > 1 && gens[i].is_odd() {
                return Ok((BigInt::zero(), Monomial::unit(gens.len())));
            }
        }
    }
    let signed = if negate { -coeff } else { coeff };
    let reduced = ambient.coefficients().reduce(signed);
    if reduced.is_zero() {
        return Ok((BigInt::zero(), Monomial::unit(gens.len())));
    }
    Ok((reduced, Monomial::from_exponents(exps)))
}

/// A canonical element: nonzero coefficients on distinct monomials, sorted by
/// the monomial order. Carries a handle to its ambient algebra.
#[derive(Clone)]
pub struct Element {
    ambient: Arc<Ambient>,
    terms: Vec<(BigInt, Monomial)>,
}

impl Element {
    pub fn zero(ambient: &Arc<Ambient>) -> Self {
        Element { ambient: Arc::clone(ambient), terms: Vec::new() }
    }

    pub fn one(ambient: &Arc<Ambient>) -> Self {
        Element::from_terms(
            ambient,
            vec![(BigInt::one(), Monomial::unit(ambient.generators().len()))],
        )
    }

    pub fn generator(ambient: &Arc<Ambient>, idx: usize) -> Result<Self, AlgebraError> {
        if idx >= ambient.generators().len() {
            return Err(AlgebraError::GeneratorIndex(idx));
        }
        let mut exps = vec![0u32; ambient.generators().len()];
        exps[idx] = 1;
        Ok(Element::from_terms(
            ambient,
            vec![(BigInt::one(), Monomial::from_exponents(exps))],
        ))
    }

    /// Canonicalizes an arbitrary list of terms: collects duplicates, reduces
    /// coefficients, drops zeros and ambient-zero monomials, sorts.
    pub fn from_terms(ambient: &Arc<Ambient>, terms: Vec<(BigInt, Monomial)>) -> Self {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        let char_two = ambient.coefficients().char_two();
        'terms: for (c, m) in terms {
            debug_assert_eq!(m.exponents().len(), ambient.generators().len());
            if !char_two {
                for (i, &e) in m.exponents().iter().enumerate() {
                    if e > 1 && ambient.generators()[i].is_odd() {
                        continue 'terms;
                    }
                }
            }
            let entry = acc.entry(m).or_insert_with(BigInt::zero);
            *entry += c;
        }
        let mut out = Vec::with_capacity(acc.len());
        for (m, c) in acc {
            let c = ambient.coefficients().reduce(c);
            if !c.is_zero() {
                out.push((c, m));
            }
        }
        Element { ambient: Arc::clone(ambient), terms: out }
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn terms(&self) -> &[(BigInt, Monomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, other: &Element) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient {
            Ok(())
        } else {
            Err(AlgebraError::AmbientMismatch)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Element::from_terms(&self.ambient, terms))
    }

    pub fn sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        let terms = self.terms.iter().map(|(c, m)| (-c.clone(), m.clone())).collect();
        Element::from_terms(&self.ambient, terms)
    }

    pub fn scale(&self, c: &BigInt) -> Element {
        let terms = self.terms.iter().map(|(k, m)| (c * k, m.clone())).collect();
        Element::from_terms(&self.ambient, terms)
    }

    /// Cup product. Monomials whose total degree exceeds the ambient's top
    /// degree are dropped eagerly.
    pub fn mul(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.mul_impl(other, Some(self.ambient.top_degree() as u64))
    }

    /// Product in the free algebra with no top-degree cap. Used when building
    /// ideal slices, where the product's coordinates are taken in a degree
    /// that may exceed the cap.
    pub fn mul_uncapped(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.mul_impl(other, None)
    }

    fn mul_impl(&self, other: &Element, cap: Option<u64>) -> Result<Element, AlgebraError> {
        self.check_same(other)?;
        let amb = &self.ambient;
        let mut acc: Vec<(BigInt, Monomial)> = Vec::new();
        for (ca, ma) in &self.terms {
            let wa = ma.word();
            for (cb, mb) in &other.terms {
                let mut word = wa.clone();
                word.extend(mb.word());
                let (c, m) = normalize_word(amb, &word, ca * cb)?;
                if c.is_zero() {
                    continue;
                }
                if let Some(cap) = cap {
                    if m.degree(amb) > cap {
                        continue;
                    }
                }
                acc.push((c, m));
            }
        }
        Ok(Element::from_terms(amb, acc))
    }

    pub fn pow(&self, e: u32) -> Result<Element, AlgebraError> {
        let mut out = Element::one(&self.ambient);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `Some(d)` when every term has total degree `d`. The zero element is
    /// homogeneous of degree 0.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut degrees = self.terms.iter().map(|(_, m)| m.degree(&self.ambient));
        match degrees.next() {
            None => Some(0),
            Some(d) => {
                if degrees.all(|e| e == d) {
                    Some(d)
                } else {
                    None
                }
            }
        }
    }

    /// Splits into homogeneous pieces, keyed by total degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u64, Element> {
        let mut by_degree: BTreeMap<u64, Vec<(BigInt, Monomial)>> = BTreeMap::new();
        for (c, m) in &self.terms {
            by_degree
                .entry(m.degree(&self.ambient))
                .or_default()
                .push((c.clone(), m.clone()));
        }
        by_degree
            .into_iter()
            .map(|(d, terms)| (d, Element::from_terms(&self.ambient, terms)))
            .collect()
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient)
            && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl fmt::Display for Element {
    /// The inverse of the element grammar: `parse_element` of the output is
    /// the identity on canonical elements.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, m)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", self.ambient.render_monomial(m))?;
            } else {
                write!(f, "{}*{}", mag, self.ambient.render_monomial(m))?;
            }
        }
        Ok(())
    }
}

/// A finitely presented graded-commutative algebra: ambient free algebra,
/// relation ideal generators, and the Künneth-safety marker used by the
/// tensor-power machinery.
///
/// Relations must be homogeneous. They may have degree above the top degree
/// cap (the catalog's truncation relations such as `g^(m+1)` over a top
/// degree of `m` do); those are trivially satisfied and contribute nothing to
/// any ideal slice at degrees that matter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    ambient: Arc<Ambient>,
    relations: Vec<Element>,
    kunneth_safe: bool,
}

impl Presentation {
    pub fn new(
        ambient: Arc<Ambient>,
        relations: Vec<Element>,
        kunneth_safe: bool,
    ) -> Result<Self, AlgebraError> {
        for r in &relations {
            if !(Arc::ptr_eq(&ambient, r.ambient()) || ambient == *r.ambient()) {
                return Err(AlgebraError::AmbientMismatch);
            }
            if r.homogeneous_degree().is_none() {
                return Err(AlgebraError::InhomogeneousRelation(r.to_string()));
            }
        }
        Ok(Presentation { ambient, relations, kunneth_safe })
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn coefficients(&self) -> Coefficients {
        self.ambient.coefficients()
    }

    pub fn generators(&self) -> &[Generator] {
        self.ambient.generators()
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    pub fn top_degree(&self) -> u32 {
        self.ambient.top_degree()
    }

    pub fn kunneth_safe(&self) -> bool {
        self.kunneth_safe
    }
}

/// Total order on monomials used for sorting outside of `BTreeMap` contexts.
pub fn monomial_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.cmp(b)
}
