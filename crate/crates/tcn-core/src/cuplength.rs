//! Cup-length and nilpotency index of a presented quotient.
//!
//! The cup-length is computed over generator products only; any nonzero
//! k-fold product of positive-degree classes expands into a nonzero monomial
//! with at least k generator factors, so this reduction is exact. The search
//! is a depth-first enumeration of generator multisets in non-decreasing
//! index order, pruning every extension of a zero product, which also makes
//! the reported witness the lexicographically least one of maximal length.
//!
//! For Cartesian powers there is a factorized fast path: over a Künneth-safe
//! presentation a tensor product of nonzero classes taken from free graded
//! pieces is nonzero, so the cup-length of the n-th power is n times the
//! base cup-length.

use thiserror::Error;

use crate::algebra::{Element, Presentation};
use crate::kunneth::{KunnethError, TensorPower};
use crate::quotient::Quotient;

#[derive(Debug, Error)]
pub enum CupLengthError {
    #[error("factorized mode requires a Künneth-safe presentation")]
    NotKunnethSafe,
    #[error("power must be >= 1, got {0}")]
    BadPower(u32),
    #[error(transparent)]
    Kunneth(#[from] KunnethError),
}

/// How a power computation was carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerMode {
    Direct,
    Factorized,
}

impl std::fmt::Display for PowerMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PowerMode::Direct => write!(f, "direct"),
            PowerMode::Factorized => write!(f, "factorized"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupLengthResult {
    /// Longest nonzero product of positive-degree classes.
    pub cup_length: u32,
    /// Always `cup_length + 1`.
    pub nil_index: u32,
    /// Generator indices (into the searched presentation) whose product is
    /// nonzero; empty when the cup-length is 0. In direct mode this is the
    /// lexicographically least witness of maximal length.
    pub witness: Vec<usize>,
    pub mode: PowerMode,
}

impl CupLengthResult {
    fn new(cup_length: u32, witness: Vec<usize>, mode: PowerMode) -> Self {
        CupLengthResult { cup_length, nil_index: cup_length + 1, witness, mode }
    }
}

/// Cup-length of the quotient presented by `p`.
pub fn cup_length(p: &Presentation) -> CupLengthResult {
    let quotient = Quotient::new(p.clone());
    let ambient = p.ambient();
    let ngens = p.generators().len();
    let generators: Vec<Element> = (0..ngens)
        .map(|i| Element::generator(ambient, i).expect("index in range"))
        .collect();
    let mut best: Vec<usize> = Vec::new();
    let mut chain: Vec<usize> = Vec::new();
    let one = Element::one(ambient);
    dfs(&quotient, &generators, 0, &one, &mut chain, &mut best);
    CupLengthResult::new(best.len() as u32, best, PowerMode::Direct)
}

fn dfs(
    quotient: &Quotient,
    generators: &[Element],
    start: usize,
    current: &Element,
    chain: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    for g in start..generators.len() {
        let next = current.mul(&generators[g]).expect("same ambient");
        if next.is_zero() {
            continue;
        }
        if quotient.is_zero(&next).expect("same ambient") {
            continue;
        }
        chain.push(g);
        if chain.len() > best.len() {
            *best = chain.clone();
        }
        dfs(quotient, generators, g, &next, chain, best);
        chain.pop();
    }
}

/// Cup-length of the `n`-th tensor power, either by searching the power
/// presentation (`Direct`) or as `n * cup_length(p)` (`Factorized`; requires
/// the Künneth-safety flag).
pub fn cup_length_power(
    p: &Presentation,
    n: u32,
    mode: PowerMode,
) -> Result<CupLengthResult, CupLengthError> {
    if n < 1 {
        return Err(CupLengthError::BadPower(n));
    }
    if n == 1 {
        let mut r = cup_length(p);
        r.mode = mode;
        return Ok(r);
    }
    match mode {
        PowerMode::Direct => {
            let power = TensorPower::new(p, n)?;
            Ok(cup_length(power.presentation()))
        }
        PowerMode::Factorized => {
            if !p.kunneth_safe() {
                return Err(CupLengthError::NotKunnethSafe);
            }
            let base = cup_length(p);
            let g = p.generators().len();
            let witness: Vec<usize> = (0..n as usize)
                .flat_map(|i| base.witness.iter().map(move |&w| w + i * g))
                .collect();
            Ok(CupLengthResult::new(n * base.cup_length, witness, PowerMode::Factorized))
        }
    }
}

/// `nil` of the `n`-th power: a valid lower bound for `cat(X^n)`. Uses the
/// factorized path when the presentation is Künneth-safe, otherwise the
/// direct search (which itself needs the flag for n >= 2).
pub fn nil_lower_bound(p: &Presentation, n: u32) -> Result<u32, CupLengthError> {
    let mode = if p.kunneth_safe() { PowerMode::Factorized } else { PowerMode::Direct };
    Ok(cup_length_power(p, n, mode)?.nil_index)
}
