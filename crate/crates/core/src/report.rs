//! Analyzer reports. JSON output uses a fixed key order and rounds every
//! float to 12 significant digits so identical inputs give identical bytes.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::qsim::ComputationSpec;
use crate::tidy::{
    check_reversibility, check_tidy_condition, classify, erasure_cost, reversibility_violation, EnergyAccount,
    PairResidual, TidyClassification, TidyDecision, TidyProcedure,
};

/// Rounds to 12 significant digits; `-0.0` becomes `0.0`.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn c12(z: Complex64) -> [f64; 2] {
    [sig12(z.re), sig12(z.im)]
}

/// Everything the analyzer reports about one spec.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub tolerance: f64,
    pub classification: TidyClassification,
    pub reversible: bool,
    pub violation: Option<PairResidual>,
    pub decision: TidyDecision,
    pub energy: EnergyAccount,
}

pub fn analyze(spec: &ComputationSpec, tol: f64) -> Analysis {
    let classification = classify(spec, tol);
    let violation = reversibility_violation(&check_reversibility(spec, tol), tol);
    let decision = check_tidy_condition(spec, tol);
    let energy = erasure_cost(spec, decision.possible);
    Analysis {
        tolerance: tol,
        reversible: violation.is_none(),
        classification,
        violation,
        decision,
        energy,
    }
}

#[derive(Serialize)]
struct PairJson {
    pair: [usize; 2],
    in_overlap: [f64; 2],
    out_overlap: [f64; 2],
    aux_overlap: [f64; 2],
    reversible_residual: [f64; 2],
    tidy_residual: [f64; 2],
    reversible_residual_abs: f64,
    tidy_residual_abs: f64,
}

impl From<&PairResidual> for PairJson {
    fn from(p: &PairResidual) -> Self {
        Self {
            pair: [p.i, p.j],
            in_overlap: c12(p.in_overlap),
            out_overlap: c12(p.out_overlap),
            aux_overlap: c12(p.aux_overlap),
            reversible_residual: c12(p.reversible_residual),
            tidy_residual: c12(p.tidy_residual),
            reversible_residual_abs: sig12(p.reversible_residual.norm()),
            tidy_residual_abs: sig12(p.tidy_residual.norm()),
        }
    }
}

#[derive(Serialize)]
struct EnergyJson {
    erased_bits: f64,
    #[serde(rename = "landauer_cost_kTln2")]
    landauer_cost: f64,
    branch_entropy_bits: Vec<f64>,
}

impl From<&EnergyAccount> for EnergyJson {
    fn from(e: &EnergyAccount) -> Self {
        Self {
            erased_bits: sig12(e.erased_bits),
            landauer_cost: sig12(e.landauer_cost),
            branch_entropy_bits: e.branch_entropy_bound.iter().map(|&h| sig12(h)).collect(),
        }
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    classification: &'a str,
    reversible: bool,
    tidy_possible: bool,
    certificate: Option<PairJson>,
    energy: EnergyJson,
    pairs: Vec<PairJson>,
}

impl Analysis {
    /// 0 when a tidier exists, 2 when none can exist, 1 when the branches
    /// admit no unitary at all.
    pub fn exit_code(&self) -> i32 {
        if !self.decision.possible {
            2
        } else if !self.reversible {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let report = ReportJson {
            classification: self.classification.label.label(),
            reversible: self.reversible,
            tidy_possible: self.decision.possible,
            certificate: self.decision.certificate.as_ref().map(PairJson::from),
            energy: EnergyJson::from(&self.energy),
            pairs: self.classification.pair_data.iter().map(PairJson::from).collect(),
        };
        serde_json::to_string_pretty(&report).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let fmt_c = |z: Complex64| format!("{:+.9}{:+.9}i", z.re, z.im);
        writeln!(s, "classification: {}", self.classification.label).unwrap();
        writeln!(s, "tolerance:      {:e}", self.tolerance).unwrap();
        match &self.violation {
            None => writeln!(s, "reversible:     yes").unwrap(),
            Some(p) => writeln!(
                s,
                "reversible:     NO (pair ({}, {}) residual {})",
                p.i,
                p.j,
                fmt_c(p.reversible_residual)
            )
            .unwrap(),
        }
        match (&self.decision.certificate, self.decision.procedure) {
            (Some(c), _) => writeln!(
                s,
                "tidy possible:  NO (pair ({}, {}): |<i|j>(1 - <O(i)|O(j)>)| = {:.12})",
                c.i,
                c.j,
                c.tidy_residual.norm()
            )
            .unwrap(),
            (None, Some(kind)) => writeln!(s, "tidy possible:  yes ({} procedure)", kind.label()).unwrap(),
            (None, None) => writeln!(s, "tidy possible:  yes").unwrap(),
        }
        writeln!(
            s,
            "energy:         {} bits erased, {} kT ln2",
            self.energy.erased_bits, self.energy.landauer_cost
        )
        .unwrap();
        for p in &self.classification.pair_data {
            writeln!(
                s,
                "  pair ({}, {}): <i|j> = {}  <O|O> = {}  <A|A> = {}  reversible {:.3e}  tidy {:.3e}",
                p.i,
                p.j,
                fmt_c(p.in_overlap),
                fmt_c(p.out_overlap),
                fmt_c(p.aux_overlap),
                p.reversible_residual.norm(),
                p.tidy_residual.norm()
            )
            .unwrap();
        }
        s
    }
}

#[derive(Serialize)]
struct RegisterJson {
    name: &'static str,
    dim: usize,
}

#[derive(Serialize)]
struct StepJson<'a> {
    label: &'a str,
    targets: &'a [usize],
    dim: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct ProcedureJson<'a> {
    kind: &'a str,
    registers: Vec<RegisterJson>,
    steps: Vec<StepJson<'a>>,
    fidelities: Vec<f64>,
}

/// Procedure file: registers, row-major step matrices, per-branch fidelities.
pub fn procedure_to_json(proc: &TidyProcedure, fidelities: &[f64]) -> String {
    let doc = ProcedureJson {
        kind: proc.kind.label(),
        registers: proc
            .registers
            .iter()
            .map(|r| RegisterJson {
                name: r.role.name(),
                dim: r.dim,
            })
            .collect(),
        steps: proc
            .steps
            .iter()
            .map(|st| {
                let d = st.unitary.dim();
                StepJson {
                    label: &st.label,
                    targets: &st.targets,
                    dim: d,
                    matrix: (0..d)
                        .map(|r| (0..d).map(|c| c12(st.unitary.entry(r, c))).collect())
                        .collect(),
                }
            })
            .collect(),
        fidelities: fidelities.iter().map(|&f| sig12(f)).collect(),
    };
    serde_json::to_string(&doc).expect("procedure serializes")
}
