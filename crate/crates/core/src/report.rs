//! One-shot summary of every bound for a framework.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use serde::{Serialize, Serializer};

use crate::embed::enumerate_framework;
use crate::graph::{check_laman, classify, Framework, HennebergClass};
use crate::mixed::{build_system, mv_for_graph, EnumOptions, Form, MVResult, Method, MvOptions};
use crate::poly::{bezout, constants_for, witness_check};
use crate::Error;

/// Serializes as a JSON number when it fits in `u64`, otherwise as a decimal string.
pub fn serialize_biguint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(v) {
        Ok(x) => s.serialize_u64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

fn serialize_opt_biguint<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => serialize_biguint(x, s),
        None => s.serialize_none(),
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `binom(2n - 4, n - 2)`.
pub fn borcea_streinu_bound(n: usize) -> BigUint {
    if n < 2 {
        return BigUint::from(1u32);
    }
    let m = n as u64 - 2;
    binomial(2 * m, m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MvSummary {
    #[serde(serialize_with = "serialize_biguint")]
    pub value: BigUint,
    pub method: Method,
    pub seed: u64,
}

impl MvSummary {
    fn from_result(r: &MVResult) -> Self {
        let value =
            r.integer().and_then(|v: BigInt| v.to_biguint()).expect("lattice polytopes give a nonnegative integer");
        Self { value, method: r.method, seed: r.lifting_seed }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    pub seed: u64,
    pub enumeration: EnumOptions,
    /// Embed with the tight recipe lengths instead of the given ones.
    pub tight: bool,
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub n: usize,
    pub edges: usize,
    pub laman: bool,
    pub class: Option<HennebergClass>,
    #[serde(serialize_with = "serialize_opt_biguint")]
    pub bezout_soe: Option<BigUint>,
    #[serde(serialize_with = "serialize_opt_biguint")]
    pub bezout_subsoe: Option<BigUint>,
    pub mv_soe: Option<MvSummary>,
    pub mv_subsoe: Option<MvSummary>,
    #[serde(serialize_with = "serialize_biguint")]
    pub borcea_streinu_bound: BigUint,
    pub embedding_count: Option<u64>,
    pub embedding_lengths: Option<&'static str>,
    pub witness_degenerate: Option<bool>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<&'static str, f64>>,
}

impl Report {
    pub fn build(f: &Framework, opts: &ReportOptions) -> Result<Self, Error> {
        let g = f.graph();
        let n = g.n();
        let laman = check_laman(g).laman;
        let mut timings = BTreeMap::new();
        let mut report = Report {
            n,
            edges: g.edge_count(),
            laman,
            class: None,
            bezout_soe: None,
            bezout_subsoe: None,
            mv_soe: None,
            mv_subsoe: None,
            borcea_streinu_bound: borcea_streinu_bound(n),
            embedding_count: None,
            embedding_lengths: None,
            witness_degenerate: None,
            notes: Vec::new(),
            timings_ms: None,
        };
        if !laman || n < 3 {
            return Ok(report);
        }
        let class = classify(g)?;
        report.class = Some(class);
        let mv_opts = MvOptions { enumeration: opts.enumeration.clone(), direct: false };
        for form in [Form::SoE, Form::SubSoE] {
            let start = Instant::now();
            let sys = build_system(f, form)?;
            let mv = MvSummary::from_result(&mv_for_graph(f, form, opts.seed, &mv_opts)?);
            let b = bezout(&sys);
            match form {
                Form::SoE => {
                    report.bezout_soe = Some(b);
                    report.mv_soe = Some(mv);
                    timings.insert("mv_soe", start.elapsed().as_secs_f64() * 1e3);
                }
                Form::SubSoE => {
                    report.bezout_subsoe = Some(b);
                    report.mv_subsoe = Some(mv);
                    timings.insert("mv_subsoe", start.elapsed().as_secs_f64() * 1e3);
                }
            }
        }
        report.witness_degenerate = Some(witness_check(f, &constants_for(f)?)?);
        report.notes.push("no degeneracy witness is computed for the substituted system".into());
        if class == HennebergClass::HennebergI {
            let start = Instant::now();
            let (_, embeddings) = enumerate_framework(f, opts.tight)?;
            report.embedding_count = Some(embeddings.len() as u64);
            report.embedding_lengths = Some(if opts.tight { "tight" } else { "given" });
            timings.insert("embed", start.elapsed().as_secs_f64() * 1e3);
        }
        if opts.timings {
            report.timings_ms = Some(timings);
        }
        report.validate().map_err(Error::Report)?;
        Ok(report)
    }

    pub fn validate(&self) -> Result<(), String> {
        if let (Some(mv), Some(b)) = (&self.mv_soe, &self.bezout_soe) {
            if &mv.value > b {
                return Err(format!("mv_soe {} exceeds bezout_soe {b}", mv.value));
            }
        }
        if let (Some(mv), Some(b)) = (&self.mv_subsoe, &self.bezout_subsoe) {
            if &mv.value > b {
                return Err(format!("mv_subsoe {} exceeds bezout_subsoe {b}", mv.value));
            }
        }
        if self.class == Some(HennebergClass::HennebergI) && self.embedding_lengths == Some("tight") {
            let want = 1u64 << (self.n - 2);
            if self.embedding_count != Some(want) {
                return Err(format!("tight embedding count {:?} differs from {want}", self.embedding_count));
            }
        }
        if self.laman && self.edges + 3 != 2 * self.n {
            return Err("laman graph with the wrong edge count".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{k33, triangle};
    use crate::io::default_lengths;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(borcea_streinu_bound(6), BigUint::from(70u32));
        assert_eq!(borcea_streinu_bound(3), BigUint::from(2u32));
    }

    #[test]
    fn triangle_report() {
        let g = triangle();
        let f = Framework::new(g.clone(), default_lengths(&g)).unwrap();
        let r = Report::build(&f, &ReportOptions { tight: true, ..Default::default() }).unwrap();
        assert_eq!(r.mv_soe.as_ref().unwrap().value, BigUint::from(4u32));
        assert_eq!(r.mv_subsoe.as_ref().unwrap().value, BigUint::from(2u32));
        assert_eq!(r.embedding_count, Some(2));
        assert_eq!(r.witness_degenerate, Some(true));
        assert!(r.timings_ms.is_none());
    }

    #[test]
    fn k33_report_has_no_embeddings() {
        let g = k33();
        let f = Framework::new(g.clone(), default_lengths(&g)).unwrap();
        let r = Report::build(&f, &ReportOptions::default()).unwrap();
        assert_eq!(r.class, Some(HennebergClass::HennebergII));
        assert_eq!(r.embedding_count, None);
        assert_eq!(r.bezout_subsoe, Some(BigUint::from(1u32) << 14));
    }

    #[test]
    fn validation_catches_bad_counts() {
        let mut r = Report::build(
            &Framework::new(triangle(), default_lengths(&triangle())).unwrap(),
            &ReportOptions { tight: true, ..Default::default() },
        )
        .unwrap();
        r.embedding_count = Some(1);
        assert!(r.validate().is_err());
    }
}
