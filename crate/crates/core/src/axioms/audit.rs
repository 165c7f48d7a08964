//! Cross-checks between the three axiom bundles and the two routes to
//! the dominant minuscule heap property.

use serde::Serialize;

use super::{holds, Property};
use crate::poset::ColoredPoset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    /// EC, NA, AC and ICE2.
    pub coloring_bundle: bool,
    /// G1, G2 and G5.
    pub chain_bundle: bool,
    /// S1 and S2.
    pub stembridge_bundle: bool,
    pub na: bool,
    /// With NA: whether S3 and S4 together imply UCB1 on this poset.
    /// `None` when NA fails.
    pub s3_s4_give_ucb1: Option<bool>,
    /// With NA: whether UCB1 and AC together imply S3 and S4.
    pub ucb1_ac_give_s3_s4: Option<bool>,
    pub d_complete: bool,
    pub dominant_minuscule_heap: bool,
    pub discrepancies: Vec<String>,
}

impl AuditReport {
    pub fn consistent(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

pub fn equivalence_audit(p: &ColoredPoset) -> AuditReport {
    let h = |q: Property| holds(p, q).expect("finite-decidable property");
    let (ec, na, ac, ice2) = (h(Property::EC), h(Property::NA), h(Property::AC), h(Property::ICE2));
    let (g1, g2, g5) = (h(Property::G1), h(Property::G2), h(Property::G5));
    let (s1, s2, s3, s4) = (h(Property::S1), h(Property::S2), h(Property::S3), h(Property::S4));
    let ucb1 = h(Property::UCB(1));

    let coloring_bundle = ec && na && ac && ice2;
    let chain_bundle = g1 && g2 && g5;
    let stembridge_bundle = s1 && s2;
    let d_complete = coloring_bundle && ucb1;
    let dominant_minuscule_heap = stembridge_bundle && s3 && s4;

    let mut discrepancies = Vec::new();
    if coloring_bundle != chain_bundle {
        discrepancies.push(format!("EC/NA/AC/ICE2 = {coloring_bundle} but G1/G2/G5 = {chain_bundle}"));
    }
    if coloring_bundle != stembridge_bundle {
        discrepancies.push(format!("EC/NA/AC/ICE2 = {coloring_bundle} but S1/S2 = {stembridge_bundle}"));
    }
    let s3_s4_give_ucb1 = na.then_some(!(s3 && s4) || ucb1);
    let ucb1_ac_give_s3_s4 = na.then_some(!(ucb1 && ac) || (s3 && s4));
    if s3_s4_give_ucb1 == Some(false) {
        discrepancies.push("NA, S3 and S4 hold but UCB1 fails".into());
    }
    if ucb1_ac_give_s3_s4 == Some(false) {
        discrepancies.push("NA, UCB1 and AC hold but S3 or S4 fails".into());
    }
    if d_complete != dominant_minuscule_heap {
        discrepancies.push(format!(
            "d-complete = {d_complete} but dominant minuscule heap = {dominant_minuscule_heap}"
        ));
    }
    AuditReport {
        coloring_bundle,
        chain_bundle,
        stembridge_bundle,
        na,
        s3_s4_give_ucb1,
        ucb1_ac_give_s3_s4,
        d_complete,
        dominant_minuscule_heap,
        discrepancies,
    }
}
