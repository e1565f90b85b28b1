//! Embedded reference problems and the tables they must produce.

use std::fmt;

use crate::{run, Problem};

#[derive(Debug, Clone, PartialEq)]
pub enum Check {
    /// Mass printed for one element.
    Mass(&'static str, f64),
    /// Combined mass of several rows.
    SumOf(&'static [&'static str], f64),
    Total(f64),
    /// The rule must fail with a message containing this text.
    Fails(&'static str),
}

#[derive(Debug, Clone)]
pub struct GoldenCase {
    pub name: &'static str,
    pub file: &'static str,
    pub text: String,
    pub rule: &'static str,
    pub params: Vec<(String, String)>,
    pub tolerance: f64,
    pub checks: Vec<Check>,
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Delta {
    pub what: String,
    pub got: Option<f64>,
    pub want: f64,
}

#[derive(Debug, Clone)]
pub struct CaseReport {
    pub name: &'static str,
    pub failures: Vec<Delta>,
    pub error: Option<String>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.error.is_none()
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "PASS {}", self.name);
        }
        write!(f, "FAIL {}", self.name)?;
        if let Some(e) = &self.error {
            write!(f, ": {e}")?;
        }
        for d in &self.failures {
            match d.got {
                Some(g) => write!(f, "\n    {}: got {g:.6}, want {:.6}, delta {:.3e}", d.what, d.want, (g - d.want).abs())?,
                None => write!(f, "\n    {}: missing, want {:.6}", d.what, d.want)?,
            }
        }
        Ok(())
    }
}

macro_rules! golden {
    ($name:literal, $file:literal, $rule:literal, $tol:expr, [$($check:expr),* $(,)?]) => {
        golden!($name, $file, $rule, [], $tol, [$($check),*])
    };
    ($name:literal, $file:literal, $rule:literal, [$(($k:literal, $v:literal)),*], $tol:expr, [$($check:expr),* $(,)?]) => {
        GoldenCase {
            name: $name,
            file: $file,
            text: include_str!(concat!("../golden/", $file)).to_string(),
            rule: $rule,
            params: vec![$(($k.to_string(), $v.to_string())),*],
            tolerance: $tol,
            checks: vec![$($check),*],
        }
    };
}

/// Values given to the full printed precision.
const EXACT: f64 = 1e-12;
/// Values printed with three decimals.
const THREE: f64 = 5e-4;
const SIX: f64 = 1e-6;

pub fn cases() -> Vec<GoldenCase> {
    use Check::*;
    const UFT_BASE: [(&str, f64); 3] = [("A", 0.24), ("B", 0.42), ("A|B", 0.06)];
    let base = |extra: Check| {
        let mut v: Vec<Check> = UFT_BASE.iter().map(|(e, m)| Mass(e, *m)).collect();
        v.push(extra);
        v.push(Total(1.0));
        v
    };
    let mut out = vec![
        golden!("zadeh", "zadeh.fuse", "dempster", EXACT, [Mass("C", 1.0), Total(1.0)]),
        golden!("total conflict", "total_conflict.fuse", "dempster", EXACT, [Fails("total conflict: k12=1")]),
        golden!(
            "murphy",
            "murphy.fuse",
            "murphy",
            EXACT,
            [Mass("A", 0.15), Mass("B", 0.35), Mass("C", 0.35), Mass("A|B", 0.15)]
        ),
        golden!(
            "dsmh hybrid model",
            "dsmh_hybrid.fuse",
            "dsmh",
            EXACT,
            [
                Mass("A", 0.20),
                Mass("B", 0.08),
                Mass("C", 0.06),
                Mass("A&B", 0.28),
                Mass("A|C", 0.22),
                Mass("B|C", 0.16),
            ]
        ),
        // Pinned-partial: the A versus A|B split is not checked.
        golden!(
            "dubois-prade after constraint (pinned-partial)",
            "incompleteness.fuse",
            "dubois-prade",
            EXACT,
            [Mass("B", 0.48), Total(0.88), SumOf(&["A", "A|B"], 0.40)]
        ),
        golden!("wao degenerate", "degenerate.fuse", "wao", THREE, [Mass("A", 0.149), Mass("C", 0.421), Total(0.570)]),
        golden!("pcr1 degenerate", "degenerate.fuse", "pcr1", THREE, [Mass("A", 0.278), Mass("C", 0.722), Total(1.0)]),
        golden!("minc-a", "minc.fuse", "minc-a", SIX, [Mass("A", 0.819277), Mass("B|C", 0.132530), Mass("A|B|C", 0.048193)]),
        golden!("pcr4", "minc.fuse", "pcr4", SIX, [Mass("A", 0.826329), Mass("B|C", 0.133671), Mass("A|B|C", 0.04)]),
        golden!("consensus", "consensus.fuse", "consensus", EXACT, [Mass("A", 0.3), Mass("B", 0.7), Total(1.0)]),
        golden!("x-average", "xavg.fuse", "xavg", EXACT, [Mass("[1.5,4]", 0.46), Mass("[2,5]", 0.42), Mass("[1,3]", 0.12)]),
        golden!(
            "discounted source",
            "discount.fuse",
            "conjunctive",
            THREE,
            [Mass("A", 0.32), Mass("B", 0.32), Mass("A|B", 0.16), Mass("A|B|C|D", 0.20)]
        ),
    ];
    out.extend([
        golden!("pcr5 first example", "pcr5_first.fuse", "pcr5", THREE, [
            Mass("A", 0.54), Mass("B", 0.18), Mass("A|B", 0.28), Total(1.0)
        ]),
        golden!("pcr2 first example", "pcr5_first.fuse", "pcr2", THREE, [
            Mass("A", 0.54), Mass("B", 0.18), Mass("A|B", 0.28)
        ]),
        golden!("pcr3 first example", "pcr5_first.fuse", "pcr3", THREE, [
            Mass("A", 0.54), Mass("B", 0.18), Mass("A|B", 0.28)
        ]),
        golden!("pcr5 second example", "pcr5_second.fuse", "pcr5", THREE, [
            Mass("A", 0.62), Mass("B", 0.18), Mass("A|B", 0.20), Total(1.0)
        ]),
        golden!("pcr5 third example", "pcr5_third.fuse", "pcr5", THREE, [
            Mass("A", 0.584), Mass("B", 0.366), Mass("A|B", 0.050), Total(1.0)
        ]),
    ]);
    out.extend([
        golden!("uft all reliable", "uft_reliable.fuse", "conjunctive", THREE, [Mass("A&B", 0.28)]),
        golden!("uft 1.1.2 split", "uft_split.fuse", "uft", THREE, [
            Mass("A", 0.356), Mass("B", 0.584), Mass("A|B", 0.060), Total(1.0)
        ]),
        golden!("uft 1.2.2 union", "uft_union.fuse", "uft", THREE, [
            Mass("A", 0.24), Mass("B", 0.42), Mass("A|B", 0.34), Total(1.0)
        ]),
        golden!("uft 1.2.6 left right", "uft_left_right.fuse", "uft", THREE, [
            Mass("A", 0.52), Mass("B", 0.42), Mass("A|B", 0.06), Total(1.0)
        ]),
        golden!("uft 1.2.7 both wrong", "uft_both_wrong.fuse", "uft", THREE, [
            Mass("A", 0.24), Mass("B", 0.42), Mass("A|B", 0.06), Mass("C", 0.14), Mass("D", 0.14)
        ]),
        golden!("uft 2 at least one", "uft_at_least_one.fuse", "uft", THREE, [
            Mass("A", 0.08), Mass("B", 0.20), Mass("A|B", 0.72)
        ]),
        golden!("uft 3 discounted", "uft_discounted.fuse", "uft", THREE, [
            Mass("A", 0.232), Mass("B", 0.436), Mass("A|B", 0.108), Mass("A&B", 0.224)
        ]),
    ]);
    let mut ignorance = golden!("uft 1.2.5.1 total ignorance", "uft_ignorance.fuse", "uft", THREE, []);
    ignorance.checks = base(Mass("A|B|C|D", 0.28));
    let mut open = golden!("uft 1.2.5.2 open world", "uft_open_world.fuse", "uft", THREE, []);
    open.checks = base(Mass("∅", 0.28));
    out.extend([ignorance, open]);
    out
}

pub fn check_case(case: &GoldenCase) -> CaseReport {
    let mut report = CaseReport {
        name: case.name,
        failures: Vec::new(),
        error: None,
    };
    let problem = match Problem::parse(&case.text) {
        Ok(p) => p,
        Err(e) => {
            report.error = Some(format!("{}: {e}", case.file));
            return report;
        }
    };
    let result = run(&problem, case.rule, &case.params);
    if let [Check::Fails(text)] = case.checks.as_slice() {
        match result {
            Err(e) if e.to_string().contains(text) => {}
            Err(e) => report.error = Some(format!("expected `{text}`, got `{e}`")),
            Ok(_) => report.error = Some(format!("expected `{text}`, but the rule succeeded")),
        }
        return report;
    }
    let table = match result {
        Ok(t) => t,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    for check in &case.checks {
        let (what, got, want) = match check {
            Check::Mass(e, v) => (format!("m({e})"), table.mass(e), *v),
            Check::SumOf(es, v) => (
                format!("m({})", es.join(") + m(")),
                Some(es.iter().filter_map(|e| table.mass(e)).sum()),
                *v,
            ),
            Check::Total(v) => ("sum".to_string(), Some(table.sum), *v),
            Check::Fails(_) => continue,
        };
        if got.is_none_or(|g| (g - want).abs() > case.tolerance) {
            report.failures.push(Delta { what, got, want });
        }
    }
    report
}

/// Runs every case; cases are independent.
pub fn verify(cases: &[GoldenCase]) -> Vec<CaseReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = cases.iter().map(|c| s.spawn(move || check_case(c))).collect();
        handles.into_iter().map(|h| h.join().expect("golden case panicked")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_suite_passes() {
        let reports = verify(&cases());
        let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.to_string()).collect();
        assert!(failed.is_empty(), "{}", failed.join("\n"));
    }

    #[test]
    fn a_perturbed_mass_is_caught() {
        let mut all = cases();
        let case = all.iter_mut().find(|c| c.name == "murphy").unwrap();
        case.text = case.text.replace("C=0.4", "C=0.401");
        case.text = case.text.replace("A|B=0.2", "A|B=0.199");
        let report = check_case(case);
        assert!(!report.passed());
        let shown = report.to_string();
        assert!(shown.contains("m(C)") && shown.contains("delta"), "{shown}");
    }

    #[test]
    fn golden_files_round_trip() {
        for case in cases() {
            let p = Problem::parse(&case.text).unwrap();
            assert_eq!(Problem::parse(&p.to_string()).unwrap(), p, "{}", case.file);
        }
    }
}
