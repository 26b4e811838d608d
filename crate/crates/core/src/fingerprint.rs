//! Isomorphism invariants: abelianization and homomorphism counts into the
//! catalog, optionally bundled with peripheral data of a characteristic
//! filling.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::filling::FillingResult;
use crate::finite::catalog;
use crate::homs::count_homs_in;
use crate::par;
use crate::presentation::Presentation;
use crate::snf::{smith_normal_form, IntegerMatrix};

/// Relator-by-generator exponent sum matrix.
pub fn relation_matrix(p: &Presentation) -> IntegerMatrix {
    let n = p.num_generators();
    let rows: Vec<Vec<i64>> = p.relators().iter().map(|r| r.exponent_sums(n)).collect();
    if rows.is_empty() {
        return IntegerMatrix::zeros(0, n);
    }
    IntegerMatrix::from_rows(&rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".into()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

pub fn abelianization(p: &Presentation) -> Abelianization {
    let diag = smith_normal_form(&relation_matrix(p));
    let rank = diag.iter().filter(|d| **d != BigInt::from(0)).count();
    Abelianization {
        free_rank: p.num_generators() - rank,
        torsion: diag.into_iter().filter(|d| *d > BigInt::one()).collect(),
    }
}

fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_u64() {
            Some(u) => seq.serialize_element(&u)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// One hom-count entry. A budget-exceeded entry is never compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomCount {
    Count(u64),
    BudgetExceeded,
}

impl HomCount {
    pub fn known(self) -> Option<u64> {
        match self {
            HomCount::Count(c) => Some(c),
            HomCount::BudgetExceeded => None,
        }
    }
}

impl fmt::Display for HomCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomCount::Count(c) => write!(f, "{c}"),
            HomCount::BudgetExceeded => f.write_str("BUDGET_EXCEEDED"),
        }
    }
}

impl Serialize for HomCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HomCount::Count(c) => s.serialize_u64(*c),
            HomCount::BudgetExceeded => s.serialize_str("BUDGET_EXCEEDED"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion_factors: Vec<BigInt>,
    /// Keyed by catalog group name.
    pub hom_counts: BTreeMap<String, HomCount>,
}

/// A field on which two fingerprints provably differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Difference {
    pub field: String,
    pub left: String,
    pub right: String,
}

fn list<T: fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl Fingerprint {
    /// First disagreement among completed entries: free rank, torsion, then
    /// hom counts in key order. Entries over budget on either side are
    /// skipped.
    pub fn first_difference(&self, other: &Fingerprint) -> Option<Difference> {
        if self.free_rank != other.free_rank {
            return Some(Difference {
                field: "free_rank".into(),
                left: self.free_rank.to_string(),
                right: other.free_rank.to_string(),
            });
        }
        if self.torsion_factors != other.torsion_factors {
            return Some(Difference {
                field: "torsion_factors".into(),
                left: list(&self.torsion_factors),
                right: list(&other.torsion_factors),
            });
        }
        for (name, a) in &self.hom_counts {
            let Some(b) = other.hom_counts.get(name) else {
                continue;
            };
            if let (Some(x), Some(y)) = (a.known(), b.known()) {
                if x != y {
                    return Some(Difference {
                        field: format!("hom_counts.{name}"),
                        left: x.to_string(),
                        right: y.to_string(),
                    });
                }
            }
        }
        None
    }

    pub fn abelianization(&self) -> Abelianization {
        Abelianization {
            free_rank: self.free_rank,
            torsion: self.torsion_factors.clone(),
        }
    }
}

/// Abelianization plus `|Hom(p, T)|` for every catalog group `T`, each count
/// under its own node budget.
pub fn fingerprint(p: &Presentation, budgets: &Budgets) -> Fingerprint {
    let ab = abelianization(p);
    let groups = catalog();
    let counts = par::map_ordered(budgets.exec, groups, |t| {
        // inner searches stay serial; the catalog is the parallel axis here
        match count_homs_in(p, t.as_ref(), budgets.hom_node_budget, crate::budget::ExecMode::Serial) {
            Ok(c) => HomCount::Count(c),
            Err(_) => HomCount::BudgetExceeded,
        }
    });
    Fingerprint {
        free_rank: ab.free_rank,
        torsion_factors: ab.torsion,
        hom_counts: groups
            .iter()
            .map(|t| crate::finite::FiniteGroup::name(t.as_ref()).to_string())
            .zip(counts)
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedFingerprint {
    pub peripheral_count: usize,
    pub peripheral_orders: Vec<u64>,
    pub base: Fingerprint,
}

impl MarkedFingerprint {
    /// Peripheral count, then peripheral orders, then the base fingerprint.
    pub fn first_difference(&self, other: &MarkedFingerprint) -> Option<Difference> {
        if self.peripheral_count != other.peripheral_count {
            return Some(Difference {
                field: "peripheral_count".into(),
                left: self.peripheral_count.to_string(),
                right: other.peripheral_count.to_string(),
            });
        }
        if self.peripheral_orders != other.peripheral_orders {
            return Some(Difference {
                field: "peripheral_orders".into(),
                left: list(&self.peripheral_orders),
                right: list(&other.peripheral_orders),
            });
        }
        self.base.first_difference(&other.base)
    }
}

pub fn marked_fingerprint(f: &FillingResult, budgets: &Budgets) -> Result<MarkedFingerprint> {
    let orders = f.peripheral_orders.clone().ok_or(Error::MissingPeripheralOrders)?;
    Ok(MarkedFingerprint {
        peripheral_count: f.peripheral_count(),
        peripheral_orders: orders,
        base: fingerprint(&f.quotient, budgets),
    })
}
