//! Verification of residue theorems and reciprocity laws, with reports.

mod curve;
mod hilbert;
mod surface;

use serde::Serialize;
use serde_json::{json, Value};

use crate::field::{Elem, GaloisField};

pub use curve::{residue_at_place, verify_residue_theorem_curve};
pub use hilbert::{conic_local_solvability, hilbert_symbol, product_formula_check, QPlace};
pub use surface::{verify_residue_relations_surface, verify_symbol_reciprocity, SurfaceMode};

/// How local contributions combine into the aggregate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fold {
    /// Sum in `F_q`; neutral element 0.
    Sum,
    /// Product in `F_q^*` or `{±1}`; neutral element 1.
    Product,
    /// Independent checks; passes when every check passes.
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Contribution {
    pub flag: String,
    pub value: String,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub off_support: bool,
    #[serde(skip)]
    raw: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub relation: String,
    pub inputs: Value,
    pub contributions: Vec<Contribution>,
    pub aggregate: String,
    pub pass: bool,
    pub precision: Value,
    pub fold: Fold,
    #[serde(skip)]
    field: Option<GaloisField>,
}

impl VerificationReport {
    /// Sum or product of `F_q` values; off-support entries must be neutral.
    pub(crate) fn over_field(
        relation: &str,
        inputs: Value,
        field: &GaloisField,
        fold: Fold,
        entries: Vec<(String, Elem, bool)>,
        precision: Value,
    ) -> Self {
        let contributions = entries
            .into_iter()
            .map(|(flag, v, off)| Contribution { flag, value: field.format_elem(v), off_support: off, raw: v.0 as i64 })
            .collect();
        let mut r = VerificationReport {
            relation: relation.into(),
            inputs,
            contributions,
            aggregate: String::new(),
            pass: false,
            precision,
            fold,
            field: Some(field.clone()),
        };
        r.aggregate = r.recompute_aggregate().expect("field fold");
        let neutral = field.format_elem(if fold == Fold::Sum { Elem::ZERO } else { Elem::ONE });
        r.pass = r.aggregate == neutral && r.contributions.iter().filter(|c| c.off_support).all(|c| c.value == neutral);
        r
    }

    /// Product of signs `±1`.
    pub(crate) fn signs(relation: &str, inputs: Value, entries: Vec<(String, i8)>) -> Self {
        let contributions = entries
            .into_iter()
            .map(|(flag, s)| Contribution { flag, value: s.to_string(), off_support: false, raw: s as i64 })
            .collect();
        let mut r = VerificationReport {
            relation: relation.into(),
            inputs,
            contributions,
            aggregate: String::new(),
            pass: false,
            precision: Value::Null,
            fold: Fold::Product,
            field: None,
        };
        r.aggregate = r.recompute_aggregate().expect("sign fold");
        r.pass = r.aggregate == "1";
        r
    }

    /// Named checks, each with a displayed value and a verdict.
    pub(crate) fn checks(relation: &str, inputs: Value, entries: Vec<(String, String, bool)>, precision: Value) -> Self {
        let passed = entries.iter().filter(|e| e.2).count();
        let total = entries.len();
        let contributions = entries
            .into_iter()
            .map(|(flag, value, ok)| Contribution { flag, value, off_support: false, raw: ok as i64 })
            .collect();
        VerificationReport {
            relation: relation.into(),
            inputs,
            contributions,
            aggregate: format!("{passed}/{total}"),
            pass: passed == total,
            precision,
            fold: Fold::All,
            field: None,
        }
    }

    /// Checks that did not pass, for reports built from named checks.
    pub fn failed_checks(&self) -> Vec<&Contribution> {
        match self.fold {
            Fold::All => self.contributions.iter().filter(|c| c.raw != 1).collect(),
            _ => Vec::new(),
        }
    }

    /// The aggregate recomputed from the listed contributions.
    pub fn recompute_aggregate(&self) -> Option<String> {
        match (self.fold, &self.field) {
            (Fold::Sum, Some(k)) => {
                let s = self.contributions.iter().filter(|c| !c.off_support).fold(Elem::ZERO, |a, c| k.add(a, Elem(c.raw as u32)));
                Some(k.format_elem(s))
            }
            (Fold::Product, Some(k)) => {
                let s = self.contributions.iter().filter(|c| !c.off_support).fold(Elem::ONE, |a, c| k.mul(a, Elem(c.raw as u32)));
                Some(k.format_elem(s))
            }
            (Fold::Product, None) => Some(self.contributions.iter().map(|c| c.raw).product::<i64>().to_string()),
            (Fold::All, _) => {
                let n = self.contributions.iter().filter(|c| c.raw == 1).count();
                Some(format!("{n}/{}", self.contributions.len()))
            }
            (Fold::Sum, None) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or_else(|e| json!({ "error": e.to_string() }))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}: {}\n", self.relation, if self.pass { "PASS" } else { "FAIL" });
        for c in &self.contributions {
            let tag = if c.off_support { " (off-support)" } else { "" };
            s.push_str(&format!("  {} -> {}{}\n", c.flag, c.value, tag));
        }
        s.push_str(&format!("  aggregate: {}\n", self.aggregate));
        s
    }
}
