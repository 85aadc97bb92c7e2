//! Bound facts and fixpoint propagation.
//!
//! `seed_facts` turns the cup-length lower bound and the
//! dimension/connectivity and product upper bounds into interval statements
//! about `cat(X^j)`; `propagate` then runs the comparison rules
//!
//! ```text
//! tc_j = cat(X^j)        ltc_j = tc_j        LTC_j = TC_j
//! tc_j <= tc_(j+1)       TC_j <= tc_j        tc_(j-1) <= TC_j   (j >= 2)
//! ```
//!
//! as interval tightenings until nothing changes. Intervals are integer and
//! only shrink, so the fixpoint is reached in finitely many rounds; every
//! tightening records the chain of rule tags that produced it.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::SpaceEntry;
use crate::cuplength::{nil_lower_bound, CupLengthError};

/// A quantity attached to one fixed space. `Cat(j)` is `cat(X^j)`; the rest
/// are the based/loop/free topological complexities. `TC` and `LTC` are only
/// defined for indices >= 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantity {
    Cat(u32),
    Tc(u32),
    Ltc(u32),
    TC(u32),
    LTC(u32),
}

impl Quantity {
    pub fn index(&self) -> u32 {
        match self {
            Quantity::Cat(j)
            | Quantity::Tc(j)
            | Quantity::Ltc(j)
            | Quantity::TC(j)
            | Quantity::LTC(j) => *j,
        }
    }

    /// Kind name used in JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Quantity::Cat(_) => "cat_power",
            Quantity::Tc(_) => "tc",
            Quantity::Ltc(_) => "ltc",
            Quantity::TC(_) => "TC",
            Quantity::LTC(_) => "LTC",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Cat(j) => write!(f, "cat(X^{j})"),
            Quantity::Tc(j) => write!(f, "tc_{j}"),
            Quantity::Ltc(j) => write!(f, "ltc_{j}"),
            Quantity::TC(j) => write!(f, "TC_{j}"),
            Quantity::LTC(j) => write!(f, "LTC_{j}"),
        }
    }
}

/// An upper endpoint; `Infinite` renders as `inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Upper {
    Finite(u64),
    Infinite,
}

impl Serialize for Upper {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Upper::Finite(v) => s.serialize_u64(*v),
            Upper::Infinite => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Upper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Upper::Finite(v) => write!(f, "{v}"),
            Upper::Infinite => write!(f, "inf"),
        }
    }
}

/// Rule tag plus a human-readable statement of the rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub tag: &'static str,
    pub citation: &'static str,
}

/// One seeded inequality: `lower <= quantity <= upper`.
#[derive(Clone, Debug)]
pub struct BoundFact {
    pub quantity: Quantity,
    pub lower: u64,
    pub upper: Upper,
    pub provenance: Provenance,
}

const NIL: Provenance = Provenance {
    tag: "nil",
    citation: "cup-length bound: nil(X^j) <= cat(X^j)",
};
const DIM_CONN: Provenance = Provenance {
    tag: "dim/conn",
    citation: "an (r-1)-connected complex has cat <= dim/r + 1, applied to X^j",
};
const CAT_PRODUCT: Provenance = Provenance {
    tag: "cat-product",
    citation: "cat(X^j) <= j*(cat(X) - 1) + 1",
};
const TRIVIAL: Provenance = Provenance {
    tag: "trivial",
    citation: "every sectional-category quantity is >= 1",
};
const TC_EQ_CAT: &str = "tc=cat";
const LTC_EQ_TC: &str = "ltc=tc";
const BIG_LTC_EQ_TC: &str = "LTC=TC";
const MONOTONE: &str = "tc-monotone";
const TC_LE_TC: &str = "TC<=tc";
const TC_LE_NEXT: &str = "tc<=TC'";

/// Seeds the interval facts for `cat(X^j)`, `j = 1..=n_max`, from the
/// catalog entry: the nilpotency lower bound, the dimension/connectivity
/// upper bound `floor(j*dim/r) + 1`, and the product upper bound driven by
/// the best seeded upper bound for `cat(X)`.
pub fn seed_facts(entry: &SpaceEntry, n_max: u32) -> Result<Vec<BoundFact>, CupLengthError> {
    assert!(n_max >= 1, "n_max must be >= 1");
    let dim = entry.dimension as u64;
    let r = entry.connectivity as u64;
    let mut facts = Vec::new();
    let cat1_upper = dim / r + 1;
    for j in 1..=n_max {
        let nil = nil_lower_bound(&entry.presentation, j)? as u64;
        facts.push(BoundFact {
            quantity: Quantity::Cat(j),
            lower: nil,
            upper: Upper::Infinite,
            provenance: NIL,
        });
        facts.push(BoundFact {
            quantity: Quantity::Cat(j),
            lower: 1,
            upper: Upper::Finite(j as u64 * dim / r + 1),
            provenance: DIM_CONN,
        });
        facts.push(BoundFact {
            quantity: Quantity::Cat(j),
            lower: 1,
            upper: Upper::Finite(j as u64 * (cat1_upper - 1) + 1),
            provenance: CAT_PRODUCT,
        });
        facts.push(BoundFact {
            quantity: Quantity::Cat(j),
            lower: 1,
            upper: Upper::Infinite,
            provenance: TRIVIAL,
        });
    }
    Ok(facts)
}

/// A propagated interval with the rule-tag chains that produced each
/// endpoint.
#[derive(Clone, Debug, Serialize)]
pub struct Interval {
    pub lower: u64,
    pub upper: Upper,
    pub lower_chain: Vec<&'static str>,
    pub upper_chain: Vec<&'static str>,
}

impl Interval {
    pub fn resolved(&self) -> bool {
        self.upper == Upper::Finite(self.lower)
    }
}

/// Best-known intervals for every quantity after propagation to fixpoint.
#[derive(Clone, Debug)]
pub struct IntervalTable {
    pub space: String,
    pub n_max: u32,
    intervals: BTreeMap<Quantity, Interval>,
}

impl IntervalTable {
    pub fn get(&self, q: Quantity) -> Option<&Interval> {
        self.intervals.get(&q)
    }

    /// All intervals in the fixed quantity order.
    pub fn rows(&self) -> impl Iterator<Item = (Quantity, &Interval)> {
        self.intervals.iter().map(|(q, i)| (*q, i))
    }

    /// The quantities at one index, in report order
    /// (`cat`, `tc`, `ltc`, `TC`, `LTC`).
    pub fn at_index(&self, j: u32) -> Vec<(Quantity, &Interval)> {
        [
            Quantity::Cat(j),
            Quantity::Tc(j),
            Quantity::Ltc(j),
            Quantity::TC(j),
            Quantity::LTC(j),
        ]
        .into_iter()
        .filter_map(|q| self.intervals.get(&q).map(|i| (q, i)))
        .collect()
    }
}

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error(
        "contradictory bounds for {quantity} of {space}: lower {lower} via {lower_chain:?} \
         exceeds upper {upper} via {upper_chain:?}"
    )]
    Contradiction {
        space: String,
        quantity: String,
        lower: u64,
        upper: u64,
        lower_chain: Vec<&'static str>,
        upper_chain: Vec<&'static str>,
    },
    #[error(transparent)]
    CupLength(#[from] CupLengthError),
}

/// Runs the comparison rules over the seeded facts until no interval
/// tightens. A resulting empty interval is a catalog or engine bug and is
/// reported with both provenance chains.
pub fn propagate(
    space: &str,
    facts: &[BoundFact],
    n_max: u32,
) -> Result<IntervalTable, BoundsError> {
    assert!(n_max >= 1, "n_max must be >= 1");
    let mut intervals: BTreeMap<Quantity, Interval> = BTreeMap::new();
    for j in 1..=n_max {
        for q in [Quantity::Cat(j), Quantity::Tc(j), Quantity::Ltc(j)] {
            intervals.insert(q, free_interval());
        }
        if j >= 2 {
            intervals.insert(Quantity::TC(j), free_interval());
            intervals.insert(Quantity::LTC(j), free_interval());
        }
    }
    let mut table = Table { space: space.to_string(), intervals };
    for fact in facts {
        debug_assert!(fact.lower >= 1 && Upper::Finite(fact.lower) <= fact.upper);
        if table.intervals.contains_key(&fact.quantity) {
            table.raise_lower(fact.quantity, fact.lower, vec![fact.provenance.tag])?;
            if let Upper::Finite(u) = fact.upper {
                table.cut_upper(fact.quantity, u, vec![fact.provenance.tag])?;
            }
        }
    }
    loop {
        let mut changed = false;
        for j in 1..=n_max {
            changed |= table.equate(Quantity::Tc(j), Quantity::Cat(j), TC_EQ_CAT)?;
            changed |= table.equate(Quantity::Ltc(j), Quantity::Tc(j), LTC_EQ_TC)?;
            if j >= 2 {
                changed |= table.equate(Quantity::LTC(j), Quantity::TC(j), BIG_LTC_EQ_TC)?;
                changed |= table.le(Quantity::TC(j), Quantity::Tc(j), TC_LE_TC)?;
                changed |= table.le(Quantity::Tc(j - 1), Quantity::TC(j), TC_LE_NEXT)?;
            }
            if j < n_max {
                changed |= table.le(Quantity::Tc(j), Quantity::Tc(j + 1), MONOTONE)?;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(IntervalTable { space: table.space, n_max, intervals: table.intervals })
}

fn free_interval() -> Interval {
    Interval {
        lower: 1,
        upper: Upper::Infinite,
        lower_chain: vec![TRIVIAL.tag],
        upper_chain: Vec::new(),
    }
}

struct Table {
    space: String,
    intervals: BTreeMap<Quantity, Interval>,
}

impl Table {
    fn raise_lower(
        &mut self,
        q: Quantity,
        lower: u64,
        chain: Vec<&'static str>,
    ) -> Result<bool, BoundsError> {
        let iv = self.intervals.get_mut(&q).expect("quantity initialized");
        if lower <= iv.lower {
            return Ok(false);
        }
        iv.lower = lower;
        iv.lower_chain = chain;
        self.check(q)?;
        Ok(true)
    }

    fn cut_upper(
        &mut self,
        q: Quantity,
        upper: u64,
        chain: Vec<&'static str>,
    ) -> Result<bool, BoundsError> {
        let iv = self.intervals.get_mut(&q).expect("quantity initialized");
        if Upper::Finite(upper) >= iv.upper {
            return Ok(false);
        }
        iv.upper = Upper::Finite(upper);
        iv.upper_chain = chain;
        self.check(q)?;
        Ok(true)
    }

    /// `a <= b`: b inherits a's lower bound, a inherits b's upper bound.
    fn le(&mut self, a: Quantity, b: Quantity, tag: &'static str) -> Result<bool, BoundsError> {
        let (a_lower, a_lchain) = {
            let ia = &self.intervals[&a];
            (ia.lower, ia.lower_chain.clone())
        };
        let mut changed = self.raise_lower(b, a_lower, extend(&a_lchain, tag))?;
        let (b_upper, b_uchain) = {
            let ib = &self.intervals[&b];
            (ib.upper, ib.upper_chain.clone())
        };
        if let Upper::Finite(u) = b_upper {
            changed |= self.cut_upper(a, u, extend(&b_uchain, tag))?;
        }
        Ok(changed)
    }

    fn equate(&mut self, a: Quantity, b: Quantity, tag: &'static str) -> Result<bool, BoundsError> {
        let mut changed = self.le(a, b, tag)?;
        changed |= self.le(b, a, tag)?;
        Ok(changed)
    }

    fn check(&self, q: Quantity) -> Result<(), BoundsError> {
        let iv = &self.intervals[&q];
        if let Upper::Finite(u) = iv.upper {
            if iv.lower > u {
                return Err(BoundsError::Contradiction {
                    space: self.space.clone(),
                    quantity: q.to_string(),
                    lower: iv.lower,
                    upper: u,
                    lower_chain: iv.lower_chain.clone(),
                    upper_chain: iv.upper_chain.clone(),
                });
            }
        }
        Ok(())
    }
}

fn extend(chain: &[&'static str], tag: &'static str) -> Vec<&'static str> {
    let mut out = chain.to_vec();
    out.push(tag);
    out
}

/// Convenience: seed and propagate for one catalog entry.
pub fn intervals_for(entry: &SpaceEntry, n_max: u32) -> Result<IntervalTable, BoundsError> {
    let facts = seed_facts(entry, n_max)?;
    propagate(&entry.designator(), &facts, n_max)
}

/// One cell of the reproduction table.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub space: String,
    pub n: u32,
    pub lower: u64,
    pub upper: Upper,
    pub resolved: bool,
    pub expected: u64,
    pub matches: bool,
}

/// The `tc_n` reproduction table over a parameter grid. A cell matches when
/// its interval is resolved and equal to the family's closed form;
/// mismatches are report content, not errors.
pub fn tc_table(entries: &[SpaceEntry], n_max: u32) -> Result<Vec<TableRow>, BoundsError> {
    let per_space: Vec<Vec<TableRow>> = entries
        .par_iter()
        .map(|entry| {
            let table = intervals_for(entry, n_max)?;
            let mut rows = Vec::with_capacity(n_max as usize);
            for n in 1..=n_max {
                let iv = table.get(Quantity::Tc(n)).expect("tc seeded for all n");
                let expected = entry.closed_form_tc(n);
                let resolved = iv.resolved();
                rows.push(TableRow {
                    space: entry.designator(),
                    n,
                    lower: iv.lower,
                    upper: iv.upper,
                    resolved,
                    expected,
                    matches: resolved && iv.lower == expected,
                });
            }
            Ok(rows)
        })
        .collect::<Result<_, BoundsError>>()?;
    Ok(per_space.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{space, Family};

    #[test]
    fn sphere_seeds_meet_at_the_closed_form() {
        let e = space(Family::Sphere { m: 2 }).unwrap();
        let facts = seed_facts(&e, 3).unwrap();
        let nil3 = facts
            .iter()
            .find(|f| f.quantity == Quantity::Cat(3) && f.provenance.tag == "nil")
            .unwrap();
        assert_eq!(nil3.lower, 4);
        let w3 = facts
            .iter()
            .find(|f| f.quantity == Quantity::Cat(3) && f.provenance.tag == "dim/conn")
            .unwrap();
        assert_eq!(w3.upper, Upper::Finite(4));
    }

    #[test]
    fn projective_space_seeds() {
        let e = space(Family::RealProjective { m: 3 }).unwrap();
        let facts = seed_facts(&e, 2).unwrap();
        let nil = facts
            .iter()
            .find(|f| f.quantity == Quantity::Cat(2) && f.provenance.tag == "nil")
            .unwrap();
        assert_eq!(nil.lower, 7);
        let w = facts
            .iter()
            .find(|f| f.quantity == Quantity::Cat(2) && f.provenance.tag == "dim/conn")
            .unwrap();
        assert_eq!(w.upper, Upper::Finite(7));
    }

    #[test]
    fn sphere_tc_and_big_tc_intervals() {
        let e = space(Family::Sphere { m: 4 }).unwrap();
        let table = intervals_for(&e, 3).unwrap();
        let tc3 = table.get(Quantity::Tc(3)).unwrap();
        assert_eq!((tc3.lower, tc3.upper), (4, Upper::Finite(4)));
        let big3 = table.get(Quantity::TC(3)).unwrap();
        assert_eq!((big3.lower, big3.upper), (3, Upper::Finite(4)));
        let ltc = table.get(Quantity::Ltc(3)).unwrap();
        assert_eq!((ltc.lower, ltc.upper), (tc3.lower, tc3.upper));
        let big_l = table.get(Quantity::LTC(3)).unwrap();
        assert_eq!((big_l.lower, big_l.upper), (big3.lower, big3.upper));
    }

    #[test]
    fn provenance_chains_are_recorded() {
        let e = space(Family::Sphere { m: 2 }).unwrap();
        let table = intervals_for(&e, 2).unwrap();
        let tc2 = table.get(Quantity::Tc(2)).unwrap();
        assert_eq!(tc2.lower_chain, vec!["nil", "tc=cat"]);
        assert_eq!(tc2.upper_chain, vec!["dim/conn", "tc=cat"]);
        let big2 = table.get(Quantity::TC(2)).unwrap();
        assert_eq!(big2.lower_chain, vec!["nil", "tc=cat", "tc<=TC'"]);
    }

    #[test]
    fn no_facts_yields_free_intervals() {
        let table = propagate("nowhere", &[], 2).unwrap();
        for (_, iv) in table.rows() {
            assert_eq!(iv.lower, 1);
            assert_eq!(iv.upper, Upper::Infinite);
        }
    }

    #[test]
    fn propagation_is_idempotent() {
        let e = space(Family::ConfigurationSpace { m: 3, k: 4 }).unwrap();
        let facts = seed_facts(&e, 4).unwrap();
        let once = propagate(&e.designator(), &facts, 4).unwrap();
        let twice = propagate(&e.designator(), &facts, 4).unwrap();
        for ((qa, ia), (qb, ib)) in once.rows().zip(twice.rows()) {
            assert_eq!(qa, qb);
            assert_eq!((ia.lower, ia.upper), (ib.lower, ib.upper));
            assert_eq!(ia.lower_chain, ib.lower_chain);
        }
    }

    #[test]
    fn contradictions_carry_both_chains() {
        let bogus = vec![
            BoundFact {
                quantity: Quantity::Cat(1),
                lower: 5,
                upper: Upper::Infinite,
                provenance: Provenance { tag: "nil", citation: "" },
            },
            BoundFact {
                quantity: Quantity::Cat(1),
                lower: 1,
                upper: Upper::Finite(3),
                provenance: Provenance { tag: "dim/conn", citation: "" },
            },
        ];
        match propagate("bogus", &bogus, 1) {
            Err(BoundsError::Contradiction { lower, upper, lower_chain, upper_chain, .. }) => {
                assert_eq!((lower, upper), (5, 3));
                assert_eq!(lower_chain, vec!["nil"]);
                assert_eq!(upper_chain, vec!["dim/conn"]);
            }
            other => panic!("expected contradiction, got {other:?}"),
        }
    }

    #[test]
    fn table_rows_match_closed_forms() {
        let entries = vec![
            space(Family::Sphere { m: 1 }).unwrap(),
            space(Family::ConfigurationSpace { m: 3, k: 3 }).unwrap(),
            space(Family::ComplexProjective { m: 2 }).unwrap(),
        ];
        let rows = tc_table(&entries, 2).unwrap();
        assert_eq!(rows.len(), 6);
        for row in &rows {
            assert!(row.resolved, "{} n={}", row.space, row.n);
            assert!(row.matches, "{} n={}", row.space, row.n);
        }
        let conf = rows.iter().find(|r| r.space == "conf:3:3" && r.n == 2).unwrap();
        assert_eq!(conf.lower, 5);
        let cp = rows.iter().find(|r| r.space == "cp:2" && r.n == 2).unwrap();
        assert_eq!(cp.lower, 5);
    }
}
