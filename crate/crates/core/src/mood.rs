//! The six MOOD system-level metrics.
//!
//! Every metric is a ratio of two feature counts summed over all classes.
//! A zero denominator yields an undefined [`MetricValue`] carrying the
//! reason, never a silent zero.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::model::{ClassModel, ClassTallies, Hierarchy, ModelError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricValue {
    pub value: Option<f64>,
    pub numerator: usize,
    pub denominator: usize,
    pub undefined_reason: Option<String>,
}

impl MetricValue {
    pub fn ratio(numerator: usize, denominator: usize, reason: &str) -> Self {
        if denominator == 0 {
            MetricValue {
                value: None,
                numerator,
                denominator,
                undefined_reason: Some(reason.to_owned()),
            }
        } else {
            MetricValue {
                value: Some(numerator as f64 / denominator as f64),
                numerator,
                denominator,
                undefined_reason: None,
            }
        }
    }

    pub fn is_defined(&self) -> bool {
        self.value.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoodReport {
    pub mhf: MetricValue,
    pub ahf: MetricValue,
    pub mif: MetricValue,
    pub aif: MetricValue,
    pub pf: MetricValue,
    pub cf: MetricValue,
    pub tc: usize,
}

impl MoodReport {
    /// `(key, metric)` pairs in report order.
    pub fn metrics(&self) -> [(&'static str, &MetricValue); 6] {
        [
            ("mhf", &self.mhf),
            ("ahf", &self.ahf),
            ("mif", &self.mif),
            ("aif", &self.aif),
            ("pf", &self.pf),
            ("cf", &self.cf),
        ]
    }
}

fn sum_by(tallies: &[ClassTallies], f: impl Fn(&ClassTallies) -> usize) -> usize {
    tallies.iter().map(f).sum()
}

/// Method Hiding Factor: hidden over defined methods.
pub fn mhf(model: &ClassModel) -> MetricValue {
    let hidden = model
        .classes()
        .iter()
        .flat_map(|c| &c.methods)
        .filter(|m| m.visibility == crate::model::Visibility::Hidden)
        .count();
    let defined = model.classes().iter().map(|c| c.methods.len()).sum();
    MetricValue::ratio(hidden, defined, "no defined methods")
}

/// Attribute Hiding Factor: hidden over defined attributes.
pub fn ahf(model: &ClassModel) -> MetricValue {
    let hidden = model
        .classes()
        .iter()
        .flat_map(|c| &c.attributes)
        .filter(|a| a.visibility == crate::model::Visibility::Hidden)
        .count();
    let defined = model.classes().iter().map(|c| c.attributes.len()).sum();
    MetricValue::ratio(hidden, defined, "no defined attributes")
}

fn mif_from(tallies: &[ClassTallies]) -> MetricValue {
    MetricValue::ratio(
        sum_by(tallies, |t| t.m_i),
        sum_by(tallies, |t| t.m_a),
        "no available methods",
    )
}

fn aif_from(tallies: &[ClassTallies]) -> MetricValue {
    MetricValue::ratio(
        sum_by(tallies, |t| t.a_i),
        sum_by(tallies, |t| t.a_a),
        "no available attributes",
    )
}

fn pf_from(tallies: &[ClassTallies]) -> MetricValue {
    MetricValue::ratio(
        sum_by(tallies, |t| t.m_o),
        sum_by(tallies, |t| t.m_n * t.dc),
        "no new methods in classes with descendants",
    )
}

/// Method Inheritance Factor: inherited over available (defined + inherited).
pub fn mif(model: &ClassModel) -> Result<MetricValue, ModelError> {
    Ok(mif_from(&Hierarchy::build(model)?.tallies()))
}

/// Attribute Inheritance Factor: inherited over available attributes.
pub fn aif(model: &ClassModel) -> Result<MetricValue, ModelError> {
    Ok(aif_from(&Hierarchy::build(model)?.tallies()))
}

/// Polymorphism Factor: overrides over Σ new methods × descendants.
pub fn pf(model: &ClassModel) -> Result<MetricValue, ModelError> {
    Ok(pf_from(&Hierarchy::build(model)?.tallies()))
}

fn cf_with(model: &ClassModel, h: &Hierarchy<'_>) -> MetricValue {
    let tc = model.len();
    let mut couplings = 0;
    for (i, c) in model.classes().iter().enumerate() {
        // uses is a set; ancestors are inheritance, not coupling
        let targets: BTreeSet<usize> = c
            .uses
            .iter()
            .filter_map(|u| h.position(u))
            .filter(|&j| j != i && !h.is_strict_ancestor(j, i))
            .collect();
        couplings += targets.len();
    }
    MetricValue::ratio(couplings, tc * tc.saturating_sub(1), "TC < 2")
}

/// Coupling Factor: client relations not due to inheritance over TC² − TC.
pub fn cf(model: &ClassModel) -> Result<MetricValue, ModelError> {
    Ok(cf_with(model, &Hierarchy::build(model)?))
}

/// All six metrics in one pass over the hierarchy.
pub fn compute_all(model: &ClassModel) -> Result<MoodReport, ModelError> {
    let h = Hierarchy::build(model)?;
    let tallies = h.tallies();
    Ok(MoodReport {
        mhf: mhf(model),
        ahf: ahf(model),
        mif: mif_from(&tallies),
        aif: aif_from(&tallies),
        pf: pf_from(&tallies),
        cf: cf_with(model, &h),
        tc: model.len(),
    })
}
