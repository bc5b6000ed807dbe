//! The analysis report: schema structs, the certificate replay codec,
//! and the pipeline that fills a report from a bound.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use wordent_core::bounds::{
    check_conditions, e0_bounds, parse_rational, rational_to_text, BoundSpec,
    ConditionOutcome, ConditionsReport, E0Bounds, E0Kind, E0LowerMethod,
    EnvelopeCert, GrowthRate,
};
use wordent_core::certified::{rational_to_f64, Enclosure};
use wordent_core::engine::{
    enumerate_slice, enumerate_slice_rooted, ew_bracket_sliced, merge_rooted,
    Certificate, EntropyBracket, Slice,
};
use wordent_core::error::Result as CoreResult;
use wordent_core::fractal::dimension_report;
use wordent_core::{Error, Rational};

use crate::settings::Settings;
use crate::{CmdError, CmdResult, EXIT_BUDGET, EXIT_OK, REPORT_SCHEMA, TOOL_NAME, TOOL_VERSION};

/// Fan-out depth of the sharded slice enumeration.
const SHARD_DEPTH: usize = 2;

#[derive(Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool: ToolJson,
    /// `"complete"` or `"budget-exceeded"`.
    pub status: String,
    pub spec: SpecJson,
    pub budgets: BudgetsJson,
    pub conditions: Option<ConditionsJson>,
    pub e0: Option<E0Json>,
    pub ew: Option<EwJson>,
    /// Certified `E_W / E_0` bracket, when both sides are certified.
    pub ratio: Option<IntervalJson>,
    pub dimension: Option<DimensionJson>,
    pub slice: Option<SliceJson>,
    pub certificate: Option<CertificateJson>,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ToolJson {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpecJson {
    /// The bound exactly as given on the command line.
    pub text: String,
    pub q: u32,
    pub description: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BudgetsJson {
    pub max_n: usize,
    pub memory_cap: usize,
    pub witness_n: u64,
    pub finite_start: u64,
    pub finite_cap: u64,
    pub screen_horizon: u64,
    pub subset_cap: u64,
    pub max_removals: usize,
    pub max_rows: u64,
    pub keep_leaves: u64,
    pub tol: String,
    pub condition_horizon: u64,
    pub e0_window: u64,
    pub threads: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OutcomeJson {
    /// `"pass"`, `"fail"`, or `"skipped"`.
    pub status: String,
    pub fail_n: Option<u64>,
    pub fail_m: Option<u64>,
    pub reason: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConditionsJson {
    pub horizon: u64,
    pub cstar_i: OutcomeJson,
    pub cstar_ii: OutcomeJson,
    pub cassaigne: OutcomeJson,
    pub envelope: OutcomeJson,
    pub e0_used: Option<String>,
    pub all_pass: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct E0Json {
    pub lower: Option<f64>,
    pub upper: f64,
    pub lower_exact: Option<String>,
    pub upper_exact: String,
    pub lower_certified: bool,
    pub upper_certified: bool,
    pub lower_method: Option<String>,
    pub analytic: Option<String>,
    pub fekete_argmin: u64,
    pub fekete_window: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EwJson {
    pub lower: f64,
    pub upper: f64,
    pub lower_exact: String,
    pub upper_exact: String,
    pub certified: bool,
    pub upper_witness_n: usize,
    pub upper_witness_count: u64,
    pub search_notes: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct IntervalJson {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DimensionJson {
    pub q: u32,
    pub lower: f64,
    pub upper: f64,
    pub lower_exact: String,
    pub upper_exact: String,
    pub certified: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SliceJson {
    pub requested: usize,
    pub completed: usize,
    pub counts: Vec<u64>,
    pub truncated: bool,
    pub rows_expanded: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub alphabet: u32,
    pub memory: usize,
    pub vertices: Vec<Vec<u8>>,
    pub adjacency: Vec<Vec<u32>>,
    pub finite_horizon: u64,
    pub witness_n: u64,
    /// Decimal string (counts overflow every fixed-width integer).
    pub witness_count: String,
    pub envelope: EnvelopeJson,
    pub entropy: EnclosureJson,
    pub tol: String,
    pub transcript: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EnvelopeJson {
    pub c: String,
    pub rate: RateJson,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RateJson {
    /// `"root"` for `base^{1/root}`, `"exp"` for `e^t`.
    pub kind: String,
    pub base: Option<String>,
    pub root: Option<u32>,
    pub t: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EnclosureJson {
    pub lo: String,
    pub hi: String,
}

fn outcome_json(outcome: &ConditionOutcome) -> OutcomeJson {
    match outcome {
        ConditionOutcome::Pass => OutcomeJson {
            status: "pass".into(),
            fail_n: None,
            fail_m: None,
            reason: None,
        },
        ConditionOutcome::FailAt { n, m } => OutcomeJson {
            status: "fail".into(),
            fail_n: Some(*n),
            fail_m: *m,
            reason: None,
        },
        ConditionOutcome::Skipped(why) => OutcomeJson {
            status: "skipped".into(),
            fail_n: None,
            fail_m: None,
            reason: Some(why.clone()),
        },
    }
}

fn conditions_json(report: &ConditionsReport) -> ConditionsJson {
    ConditionsJson {
        horizon: report.horizon,
        cstar_i: outcome_json(&report.cstar_i),
        cstar_ii: outcome_json(&report.cstar_ii),
        cassaigne: outcome_json(&report.cassaigne),
        envelope: outcome_json(&report.envelope),
        e0_used: report.e0_used.clone(),
        all_pass: report.cstar_i.passed()
            && report.cstar_ii.passed()
            && report.cassaigne.passed()
            && report.envelope.passed(),
    }
}

fn e0_kind_text(kind: &E0Kind) -> String {
    match kind {
        E0Kind::LnRationalRoot { base, root } => {
            if *root == 1 {
                format!("log({})", rational_to_text(base))
            } else {
                format!("log({})/{root}", rational_to_text(base))
            }
        }
        E0Kind::ExactValue(v) => rational_to_text(v),
        E0Kind::LnRecurrenceRoot { weights } => {
            let ws: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
            format!("log of the dominant root of weights [{}]", ws.join(", "))
        }
    }
}

fn e0_json(e0: &E0Bounds) -> E0Json {
    E0Json {
        lower: e0.best_lo.as_ref().map(rational_to_f64),
        upper: rational_to_f64(&e0.best_hi),
        lower_exact: e0.best_lo.as_ref().map(rational_to_text),
        upper_exact: rational_to_text(&e0.best_hi),
        lower_certified: e0.best_lo.is_some(),
        upper_certified: e0.best_hi_certified,
        lower_method: e0.lower.as_ref().map(|l| match l.method {
            E0LowerMethod::SyntacticEnvelope => String::from("syntactic envelope"),
            E0LowerMethod::DominantRoot => String::from("dominant recurrence root"),
        }),
        analytic: e0.analytic.as_ref().map(|a| e0_kind_text(&a.kind)),
        fekete_argmin: e0.upper.argmin,
        fekete_window: e0.upper.window,
    }
}

fn enclosure_json(e: &Enclosure) -> EnclosureJson {
    EnclosureJson {
        lo: rational_to_text(&e.lo()),
        hi: rational_to_text(&e.hi()),
    }
}

fn enclosure_from_json(e: &EnclosureJson) -> CmdResult<Enclosure> {
    let lo = parse_rational(&e.lo)?;
    let hi = parse_rational(&e.hi)?;
    if lo > hi {
        return Err(CmdError::failed("enclosure with lo > hi in report"));
    }
    Ok(Enclosure::new(lo, hi))
}

/// Serializes a certificate into its replay blob.
pub fn certificate_json(cert: &Certificate) -> CertificateJson {
    let rate = match &cert.envelope.rate {
        GrowthRate::RationalRoot { base, root } => RateJson {
            kind: "root".into(),
            base: Some(rational_to_text(base)),
            root: Some(*root),
            t: None,
        },
        GrowthRate::ExpRational { t } => RateJson {
            kind: "exp".into(),
            base: None,
            root: None,
            t: Some(rational_to_text(t)),
        },
    };
    CertificateJson {
        alphabet: cert.alphabet,
        memory: cert.memory,
        vertices: cert.vertices.clone(),
        adjacency: cert.adjacency.clone(),
        finite_horizon: cert.finite_horizon,
        witness_n: cert.witness_n,
        witness_count: cert.witness_count.to_str_radix(10),
        envelope: EnvelopeJson {
            c: rational_to_text(&cert.envelope.c),
            rate,
        },
        entropy: enclosure_json(&cert.entropy),
        tol: rational_to_text(&cert.tol),
        transcript: cert.transcript.clone(),
    }
}

/// Rebuilds a certificate from its replay blob.
pub fn certificate_from_json(j: &CertificateJson) -> CmdResult<Certificate> {
    let rate = match j.envelope.rate.kind.as_str() {
        "root" => GrowthRate::RationalRoot {
            base: parse_rational(
                j.envelope.rate.base.as_deref().ok_or_else(|| {
                    CmdError::failed("root rate without a base in report")
                })?,
            )?,
            root: j.envelope.rate.root.ok_or_else(|| {
                CmdError::failed("root rate without a root in report")
            })?,
        },
        "exp" => GrowthRate::ExpRational {
            t: parse_rational(j.envelope.rate.t.as_deref().ok_or_else(|| {
                CmdError::failed("exp rate without an exponent in report")
            })?)?,
        },
        other => {
            return Err(CmdError::failed(format!(
                "unknown envelope rate kind {other:?} in report"
            )))
        }
    };
    let witness_count = BigUint::parse_bytes(j.witness_count.as_bytes(), 10)
        .ok_or_else(|| CmdError::failed("bad witness count in report"))?;
    Ok(Certificate {
        alphabet: j.alphabet,
        memory: j.memory,
        vertices: j.vertices.clone(),
        adjacency: j.adjacency.clone(),
        finite_horizon: j.finite_horizon,
        witness_n: j.witness_n,
        witness_count,
        envelope: EnvelopeCert { c: parse_rational(&j.envelope.c)?, rate },
        entropy: enclosure_from_json(&j.entropy)?,
        tol: parse_rational(&j.tol)?,
        transcript: j.transcript.clone(),
    })
}

/// Enumerates the slice, sharded by depth-two rows across `threads`
/// workers and merged in row order so the result is byte-identical to
/// the single-threaded enumeration.
pub fn enumerate_for(spec: &BoundSpec, st: &Settings) -> CoreResult<Slice> {
    let opts = &st.certify;
    if st.threads <= 1 || opts.max_n <= SHARD_DEPTH {
        return enumerate_slice(spec, opts.max_n, &opts.budget);
    }
    let base = enumerate_slice(spec, SHARD_DEPTH, &opts.budget)?;
    let rows: Vec<Vec<u8>> = match base.leaf_rows() {
        Some(iter) => iter.map(<[u8]>::to_vec).collect(),
        None => return enumerate_slice(spec, opts.max_n, &opts.budget),
    };
    if rows.is_empty() {
        return enumerate_slice(spec, opts.max_n, &opts.budget);
    }
    let workers = st.threads.min(rows.len());
    let mut slots: Vec<Option<CoreResult<Slice>>> = Vec::new();
    slots.resize_with(rows.len(), || None);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for worker in 0..workers {
            let rows = &rows;
            handles.push(scope.spawn(move || {
                let mut done = Vec::new();
                let mut idx = worker;
                while idx < rows.len() {
                    done.push((
                        idx,
                        enumerate_slice_rooted(spec, opts.max_n, &opts.budget, &rows[idx]),
                    ));
                    idx += workers;
                }
                done
            }));
        }
        for handle in handles {
            for (idx, part) in handle.join().expect("enumeration worker panicked") {
                slots[idx] = Some(part);
            }
        }
    });
    let mut parts = Vec::with_capacity(slots.len());
    for slot in slots {
        parts.push(slot.expect("all shards assigned")?);
    }
    merge_rooted(&base, &parts)
}

fn slice_json(slice: &Slice) -> SliceJson {
    SliceJson {
        requested: slice.requested(),
        completed: slice.completed(),
        counts: slice.counts().to_vec(),
        truncated: slice.truncated(),
        rows_expanded: slice.rows_expanded(),
    }
}

fn budgets_json(st: &Settings) -> BudgetsJson {
    BudgetsJson {
        max_n: st.certify.max_n,
        memory_cap: st.certify.memory_cap,
        witness_n: st.certify.witness_n,
        finite_start: st.certify.finite_start,
        finite_cap: st.certify.finite_cap,
        screen_horizon: st.certify.screen_horizon,
        subset_cap: st.certify.subset_cap,
        max_removals: st.certify.max_removals,
        max_rows: st.certify.budget.max_rows,
        keep_leaves: st.certify.budget.keep_leaves,
        tol: rational_to_text(&st.certify.tol),
        condition_horizon: st.condition_horizon,
        e0_window: st.e0_window,
        threads: st.threads,
    }
}

/// Certified `E_W / E_0` from the bracket's lower enclosure and the
/// best two-sided growth-constant enclosure, when both exist.
fn ratio_json(bracket: &EntropyBracket, e0: &E0Bounds) -> Option<IntervalJson> {
    if !bracket.certified {
        return None;
    }
    let (e_lo, e_hi) = match &e0.analytic {
        Some(a) => (a.value.lo(), a.value.hi()),
        None => (e0.best_lo.clone()?, e0.best_hi.clone()),
    };
    let zero = Rational::new(0.into(), 1.into());
    if e_lo <= zero {
        return None;
    }
    let lower = bracket.lower.lo() / &e_hi;
    let upper = bracket.lower.hi() / &e_lo;
    Some(IntervalJson {
        lower: rational_to_f64(&lower),
        upper: rational_to_f64(&upper),
    })
}

/// Runs the full pipeline and returns the report plus the exit code
/// (`0` complete, `2` when a budget cut it short).
pub fn run_analysis(
    spec: &BoundSpec,
    spec_text: &str,
    st: &Settings,
) -> CmdResult<(Report, i32)> {
    let mut notes = Vec::new();
    let mut budget_hit = false;

    let conditions = check_conditions(spec, st.condition_horizon)?;

    let e0 = match e0_bounds(spec, st.e0_window, &st.certify.tol) {
        Ok(e0) => Some(e0),
        Err(Error::Budget(msg)) => {
            budget_hit = true;
            notes.push(format!("growth constant skipped: {msg}"));
            None
        }
        Err(e) => return Err(e.into()),
    };

    let bracket = match enumerate_for(spec, st)
        .and_then(|slice| ew_bracket_sliced(spec, slice, &st.certify))
    {
        Ok(bracket) => Some(bracket),
        Err(Error::Budget(msg)) => {
            budget_hit = true;
            notes.push(format!("entropy bracket skipped: {msg}"));
            None
        }
        Err(e) => return Err(e.into()),
    };

    let mut ew = None;
    let mut ratio = None;
    let mut dimension = None;
    let mut slice = None;
    let mut certificate = None;
    if let Some(bracket) = &bracket {
        ew = Some(EwJson {
            lower: bracket.lower.lo_f64(),
            upper: bracket.upper.value.hi_f64(),
            lower_exact: rational_to_text(&bracket.lower.lo()),
            upper_exact: rational_to_text(&bracket.upper.value.hi()),
            certified: bracket.certified,
            upper_witness_n: bracket.upper.witness_n,
            upper_witness_count: bracket.upper.witness_count,
            search_notes: bracket.notes.clone(),
        });
        if let Some(e0) = &e0 {
            ratio = ratio_json(bracket, e0);
        }
        match dimension_report(bracket, &st.certify.tol) {
            Ok(dim) => {
                dimension = Some(DimensionJson {
                    q: dim.q,
                    lower: dim.dim_lower.lo_f64(),
                    upper: dim.dim_upper.hi_f64(),
                    lower_exact: rational_to_text(&dim.dim_lower.lo()),
                    upper_exact: rational_to_text(&dim.dim_upper.hi()),
                    certified: dim.certified,
                    notes: dim.notes.clone(),
                });
            }
            Err(Error::Budget(msg)) => {
                budget_hit = true;
                notes.push(format!("dimension skipped: {msg}"));
            }
            Err(e) => return Err(e.into()),
        }
        slice = Some(slice_json(&bracket.slice));
        certificate = bracket.certificate.as_deref().map(certificate_json);
    }

    let status = if budget_hit { "budget-exceeded" } else { "complete" };
    let report = Report {
        schema: REPORT_SCHEMA.into(),
        tool: ToolJson { name: TOOL_NAME.into(), version: TOOL_VERSION.into() },
        status: status.into(),
        spec: SpecJson {
            text: spec_text.into(),
            q: spec.alphabet_size(),
            description: spec.describe(),
        },
        budgets: budgets_json(st),
        conditions: Some(conditions_json(&conditions)),
        e0: e0.as_ref().map(e0_json),
        ew,
        ratio,
        dimension,
        slice,
        certificate,
        notes,
    };
    Ok((report, if budget_hit { EXIT_BUDGET } else { EXIT_OK }))
}

/// Pretty JSON bytes with a trailing newline (the hashed artifact).
pub fn report_bytes(report: &Report) -> CmdResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(report)
        .map_err(|e| CmdError::usage(format!("serialize report: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Parses report bytes.
pub fn report_from_bytes(bytes: &[u8]) -> CmdResult<Report> {
    serde_json::from_slice(bytes)
        .map_err(|e| CmdError::usage(format!("parse report: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use wordent_core::bounds::parse_bound;
    use wordent_core::engine::{ew_bracket, verify_certificate};

    #[test]
    fn sharded_enumeration_matches_single_threaded() {
        let spec = parse_bound("preset:golden").unwrap();
        let st_one = Settings::default();
        let mut st_four = Settings::default();
        st_four.threads = 4;
        let a = enumerate_for(&spec, &st_one).unwrap();
        let b = enumerate_for(&spec, &st_four).unwrap();
        assert_eq!(a.counts(), b.counts());
        let ra: Vec<&[u8]> = a.leaf_rows().unwrap().collect();
        let rb: Vec<&[u8]> = b.leaf_rows().unwrap().collect();
        assert_eq!(ra, rb);
    }

    #[test]
    fn certificate_blob_roundtrips_and_verifies() {
        let spec = parse_bound("preset:golden").unwrap();
        let bracket = ew_bracket(&spec, &Settings::default().certify).unwrap();
        let cert = bracket.certificate.unwrap();
        let blob = certificate_json(&cert);
        let text = serde_json::to_string(&blob).unwrap();
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        let rebuilt = certificate_from_json(&back).unwrap();
        assert_eq!(rebuilt, *cert);
        verify_certificate(&spec, &rebuilt).unwrap();
    }

    #[test]
    fn golden_report_is_complete_and_certified() {
        let spec = parse_bound("preset:golden").unwrap();
        let (report, exit) = run_analysis(&spec, "preset:golden", &Settings::default()).unwrap();
        assert_eq!(exit, EXIT_OK);
        assert_eq!(report.status, "complete");
        let ew = report.ew.as_ref().unwrap();
        assert!(ew.certified);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((ew.lower - phi.ln()).abs() < 1e-9);
        let ratio = report.ratio.as_ref().unwrap();
        assert!((ratio.lower - 0.876036937).abs() < 1e-5);
        assert!(report.certificate.is_some());
        let bytes = report_bytes(&report).unwrap();
        let again = report_from_bytes(&bytes).unwrap();
        assert_eq!(report_bytes(&again).unwrap(), bytes);
    }

    #[test]
    fn tiny_row_budget_yields_a_partial_report() {
        let spec = parse_bound("preset:golden").unwrap();
        let mut st = Settings::default();
        st.certify.budget.max_rows = 2;
        let (report, exit) = run_analysis(&spec, "preset:golden", &st).unwrap();
        // The slice aborts at depth 1, too shallow for any bracket.
        assert_eq!(exit, EXIT_BUDGET);
        assert_eq!(report.status, "budget-exceeded");
        assert!(report.conditions.is_some());
        assert!(report.ew.is_none());
    }
}
