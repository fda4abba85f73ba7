//! Wiles-formula bookkeeping: `δ = Σ_{q<∞} (dim t_q − dim H⁰(G_q, Ad⁰ρ̄)) − 1`.
//!
//! The global `H⁰` terms vanish because `ρ̄` is absolutely irreducible and the
//! infinite place contributes `−1` (`p` odd).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyp::{char_points, is_ramified, HypothesisReport};
use crate::localdef::{tangent_dims, LocalCondition, LocalRep, PlaceTag};
use crate::scenario::{Prime, Scenario};

pub fn wiles_delta(rows: &[LocalCondition]) -> Result<i64> {
    let mut sum = 0;
    for r in rows {
        if r.tangent_dim < 0 || r.h0_dim < 0 {
            return Err(Error::NegativeDim(format!(
                "{}: ({}, {})",
                r.label, r.tangent_dim, r.h0_dim
            )));
        }
        sum += r.tangent_dim - r.h0_dim;
    }
    Ok(sum - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WilesLedger {
    pub rows: Vec<LocalCondition>,
    pub delta: i64,
}

impl WilesLedger {
    pub fn new(rows: Vec<LocalCondition>) -> Result<Self> {
        let delta = wiles_delta(&rows)?;
        Ok(WilesLedger { rows, delta })
    }

    pub fn with_row(&self, row: LocalCondition) -> Result<Self> {
        let mut rows = self.rows.clone();
        rows.push(row);
        Self::new(rows)
    }

    /// `dim H¹_{t^⊥}(Ad⁰(1)) = dim H¹_t(Ad⁰) − δ`, from a Selmer dimension.
    pub fn dual_selmer_dim(&self, selmer_dim: i64) -> i64 {
        selmer_dim - self.delta
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("ledger serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: WilesLedger = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        let delta = wiles_delta(&j.rows)?;
        if delta != j.delta {
            return Err(Error::Schema(format!("delta {} does not match rows ({delta})", j.delta)));
        }
        Ok(j)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&format!(
                "{:<10} {:<26} t = {:<3} h0 = {:<3} contributes {}\n",
                r.label,
                r.tag.to_string(),
                r.tangent_dim,
                r.h0_dim,
                r.tangent_dim - r.h0_dim
            ));
        }
        out.push_str(&format!("{:<10} {:<26} contributes -1\n", "infinity", ""));
        out.push_str(&format!("delta = {}\n", self.delta));
        out
    }
}

/// Whether appending `aux` leaves `δ` unchanged.
pub fn delta_invariance_check(base: &WilesLedger, aux: &LocalCondition) -> Result<bool> {
    Ok(base.with_row(aux.clone())?.delta == base.delta)
}

/// The recursive dual-Selmer reduction: each Ramakrishna place drops the
/// dual-Selmer dimension by one while keeping `δ`.
#[derive(Clone, Debug)]
pub struct DualSelmerTracker {
    pub ledger: WilesLedger,
    pub dual_selmer_dim: u64,
    pub history: Vec<u64>,
}

impl DualSelmerTracker {
    pub fn new(ledger: WilesLedger, dual_selmer_dim: u64) -> Self {
        DualSelmerTracker { ledger, dual_selmer_dim, history: vec![dual_selmer_dim] }
    }

    pub fn is_trivial(&self) -> bool {
        self.dual_selmer_dim == 0
    }

    pub fn add_ramakrishna_row(&mut self, row: LocalCondition) -> Result<u64> {
        if row.tag != PlaceTag::RamakrishnaAux || row.tangent_dim != row.h0_dim {
            return Err(Error::HypothesisViolated(format!(
                "{}: not an auxiliary row with dim t = dim H0",
                row.label
            )));
        }
        if self.is_trivial() {
            return Err(Error::HypothesisViolated("dual Selmer group already trivial".into()));
        }
        let next = self.ledger.with_row(row)?;
        debug_assert_eq!(next.delta, self.ledger.delta);
        self.ledger = next;
        self.dual_selmer_dim -= 1;
        self.history.push(self.dual_selmer_dim);
        Ok(self.dual_selmer_dim)
    }
}

/// The local condition carried by a place of the scenario.
pub fn place_tag(s: &Scenario, pl: &crate::scenario::Place, cap: usize) -> Result<Option<PlaceTag>> {
    if let Some(t) = pl.tag {
        return Ok(Some(t));
    }
    Ok(match pl.prime {
        Prime::Infinity => None,
        Prime::P => Some(PlaceTag::AtP),
        Prime::Finite(_) if !is_ramified(s, pl) => Some(PlaceTag::UnramifiedAux),
        Prime::Finite(_) => {
            let k = s.ring.residue_field();
            let gens: Vec<_> = pl.inertia.iter().map(|&i| k.mat_reduce_from(&s.element(i).matrix)).collect();
            let order = crate::grp::close(&gens, k.mat_identity(), |x, y| k.mat_mul(x, y), cap)?.len();
            Some(if (order as u64).is_multiple_of(s.ring.p()) {
                PlaceTag::RamifiedPrimeToPWild
            } else {
                PlaceTag::RamifiedPrimeToPTame
            })
        }
    })
}

/// Rows for every finite place of the scenario.
pub fn scenario_rows(s: &Scenario, cap: usize) -> Result<Vec<LocalCondition>> {
    let mut rows = Vec::new();
    for pl in &s.places {
        let Some(tag) = place_tag(s, pl, cap)? else { continue };
        let rep = LocalRep {
            ring: s.ring.clone(),
            images: pl.generators().iter().map(|&i| s.element(i).matrix).collect(),
            weight: Some(s.weight),
            characters: char_points(s, pl),
            // p | #ρ̄(I_q) rules out semi-simplicity of ρ̄ at a wild place
            semisimple_trivial_chi: false,
        };
        rows.push(tangent_dims(&pl.label, tag, &rep)?);
    }
    Ok(rows)
}

/// Builds the ledger of a target-A scenario and asserts `δ = 0`.
pub fn theorem_a_ledger(s: &Scenario, report: &HypothesisReport, cap: usize) -> Result<WilesLedger> {
    if !report.absolutely_irreducible {
        return Err(Error::NotAbsolutelyIrreducible(format!(
            "{}: residual image does not contain SL2(k)",
            s.name
        )));
    }
    let ledger = WilesLedger::new(scenario_rows(s, cap)?)?;
    if ledger.delta != 0 {
        let rows = ledger
            .rows
            .iter()
            .map(|r| format!("{} ({}, {})", r.label, r.tangent_dim, r.h0_dim))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(Error::DeltaNonZero { delta: ledger.delta, rows });
    }
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::check_hypotheses;
    use crate::templates::{mutations, theorem_a_p5, theorem_b_p5, with_ramakrishna_place};

    fn row(label: &str, tag: PlaceTag, t: i64, h: i64) -> LocalCondition {
        LocalCondition { label: label.into(), tag, tangent_dim: t, h0_dim: h }
    }

    #[test]
    fn delta_examples() {
        let p = row("p", PlaceTag::AtP, 2, 1);
        let q1 = row("q1", PlaceTag::RamifiedPrimeToPTame, 1, 1);
        let q2 = row("q2", PlaceTag::RamifiedPrimeToPWild, 1, 1);
        assert_eq!(wiles_delta(&[p.clone(), q1.clone()]).unwrap(), 0);
        assert_eq!(wiles_delta(&[]).unwrap(), -1);
        assert_eq!(wiles_delta(&[p, q1, q2]).unwrap(), 0);
        assert!(matches!(
            wiles_delta(&[row("bad", PlaceTag::AtP, -1, 0)]),
            Err(Error::NegativeDim(_))
        ));
    }

    #[test]
    fn invariance_under_auxiliary_rows() {
        let base = WilesLedger::new(vec![row("p", PlaceTag::AtP, 2, 1)]).unwrap();
        assert!(delta_invariance_check(&base, &row("q0", PlaceTag::RamakrishnaAux, 1, 1)).unwrap());
        assert!(!delta_invariance_check(&base, &row("q0", PlaceTag::RamakrishnaAux, 2, 1)).unwrap());
        assert!(delta_invariance_check(&base, &row("q0", PlaceTag::UnramifiedAux, 0, 0)).unwrap());
    }

    #[test]
    fn dual_selmer_reaches_zero_after_exactly_d_steps() {
        let base = WilesLedger::new(vec![row("p", PlaceTag::AtP, 2, 1)]).unwrap();
        let mut t = DualSelmerTracker::new(base, 3);
        for (i, q) in ["q1", "q2", "q3"].iter().enumerate() {
            assert_eq!(t.add_ramakrishna_row(row(q, PlaceTag::RamakrishnaAux, 1, 1)).unwrap(), 2 - i as u64);
        }
        assert!(t.is_trivial());
        assert_eq!(t.history, [3, 2, 1, 0]);
        assert_eq!(t.ledger.delta, 0);
        assert!(t.add_ramakrishna_row(row("q4", PlaceTag::RamakrishnaAux, 1, 1)).is_err());
    }

    #[test]
    fn theorem_a_template_has_delta_zero() {
        for j in [theorem_a_p5(), theorem_b_p5()] {
            let s = Scenario::from_json(&j).unwrap();
            let rep = check_hypotheses(&s, 1_000_000).unwrap();
            let l = theorem_a_ledger(&s, &rep, 1_000_000).unwrap();
            assert_eq!(l.delta, 0, "{}", l.to_text());
        }
        let s = Scenario::from_json(&theorem_a_p5()).unwrap();
        let rep = check_hypotheses(&s, 1_000_000).unwrap();
        let l = theorem_a_ledger(&s, &rep, 1_000_000).unwrap();
        let dims: Vec<_> = l.rows.iter().map(|r| (r.label.as_str(), r.tag, r.tangent_dim, r.h0_dim)).collect();
        assert_eq!(
            dims,
            [
                ("p", PlaceTag::AtP, 1, 0),
                ("11", PlaceTag::RamifiedPrimeToPWild, 1, 1),
                ("7", PlaceTag::RamifiedPrimeToPTame, 1, 1),
                ("31", PlaceTag::UnramifiedAux, 1, 1),
            ]
        );
    }

    #[test]
    fn ramakrishna_place_keeps_delta() {
        let j = with_ramakrishna_place(theorem_a_p5(), 101, [1, 1, 0, 1], 101);
        let s = Scenario::from_json(&j).unwrap();
        let rep = check_hypotheses(&s, 1_000_000).unwrap();
        let l = theorem_a_ledger(&s, &rep, 1_000_000).unwrap();
        assert_eq!(l.rows.last().unwrap().tag, PlaceTag::RamakrishnaAux);
        assert_eq!(l.delta, 0);
    }

    #[test]
    fn distinguishedness_failure_propagates() {
        let m = mutations().into_iter().find(|m| m.name == "c3_violation").unwrap();
        let s = Scenario::from_json(&m.scenario).unwrap();
        let rep = check_hypotheses(&s, 1_000_000).unwrap();
        assert!(matches!(
            theorem_a_ledger(&s, &rep, 1_000_000),
            Err(Error::DistinguishednessViolated(_))
        ));
        let m = mutations().into_iter().find(|m| m.name == "c2_reducible").unwrap();
        let s = Scenario::from_json(&m.scenario).unwrap();
        let rep = check_hypotheses(&s, 1_000_000).unwrap();
        assert!(matches!(
            theorem_a_ledger(&s, &rep, 1_000_000),
            Err(Error::NotAbsolutelyIrreducible(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let l = WilesLedger::new(vec![row("p", PlaceTag::AtP, 2, 1), row("7", PlaceTag::RamifiedPrimeToPTame, 1, 1)])
            .unwrap();
        let s = l.to_json_string();
        assert_eq!(WilesLedger::from_json_str(&s).unwrap(), l);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["delta"], 0);
        assert_eq!(v.as_object().unwrap().len(), 2);
    }
}
