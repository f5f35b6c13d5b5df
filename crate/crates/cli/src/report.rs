use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use teleport_core::bounds::{Bits, BoundsReport, CccBound, ConcentrationBounds};
use teleport_core::phases::Strategy;
use teleport_core::sim::{SimulationTrace, SweepReport};
use teleport_core::{Construction, InputQudit, PhaseMatrix, Protocol, C64};

use crate::error::CliError;
use crate::problem::{Probability, ProblemSpec};

/// Tables with more outcomes than this are summarized unless asked for.
pub const TABLE_ELISION_THRESHOLD: usize = 64;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ReportDoc {
    pub tool_version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<PhasesDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ProtocolDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concentration: Option<ConcentrationDoc>,
    pub tolerances: Tolerances,
}

impl ReportDoc {
    pub fn new(command: &str, problem: Option<ProblemSpec>) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_owned(),
            command: command.to_owned(),
            problem,
            phases: None,
            protocol: None,
            simulation: None,
            bounds: None,
            concentration: None,
            tolerances: Tolerances::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Parse(format!("{path}: {}", e.into_inner()))
        })
    }

    /// Pretty JSON with every float written to 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, ReportFormatter::default());
        self.serialize(&mut ser).expect("report serializes");
        out.push(b'\n');
        String::from_utf8(out).expect("JSON is UTF-8")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Tolerances {
    pub conditions: f64,
    pub fidelity: f64,
    pub probability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            conditions: teleport_core::protocol::CONDITION_TOLERANCE,
            fidelity: teleport_core::sim::FIDELITY_TOLERANCE,
            probability: teleport_core::sim::PROBABILITY_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PhasesDoc {
    pub strategy: String,
    pub residual: f64,
    pub rows: Vec<Vec<f64>>,
}

impl PhasesDoc {
    pub fn new(phases: &PhaseMatrix, strategy: Strategy, residual: f64) -> Self {
        let strategy = match strategy {
            Strategy::QubitTriangle => "qubit-triangle",
            Strategy::Partition => "partition",
            Strategy::Numerical => "numerical",
        };
        Self {
            strategy: strategy.to_owned(),
            residual,
            rows: phases.rows(),
        }
    }
}

/// `[re, im]`
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProtocolDoc {
    pub d: usize,
    pub n: usize,
    pub outcomes: usize,
    pub construction: String,
    pub orthonormality_residual: f64,
    pub unitarity_residual: f64,
    pub bob_unitarity_residual: f64,
    pub classical_bits: f64,
    pub table_elided: bool,
    /// `table[j][m][k] = V^(j)_mk`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<Vec<ComplexPair>>>>,
}

pub fn construction_name(c: Construction) -> &'static str {
    match c {
        Construction::GeneralFormula => "general",
        Construction::D2Formula => "d2",
        Construction::Explicit => "explicit",
    }
}

impl ProtocolDoc {
    pub fn new(protocol: &Protocol, emit_table: bool) -> Self {
        let report = protocol.conditions();
        let table = &protocol.table;
        let elided = table.outcomes() > TABLE_ELISION_THRESHOLD && !emit_table;
        let coeffs = (!elided).then(|| {
            (0..table.outcomes())
                .map(|j| {
                    (0..table.d())
                        .map(|m| (0..table.n()).map(|k| pair(table.get(j, m, k))).collect())
                        .collect()
                })
                .collect()
        });
        Self {
            d: protocol.d(),
            n: protocol.n(),
            outcomes: protocol.outcomes(),
            construction: construction_name(table.construction()).to_owned(),
            orthonormality_residual: report.orthonormality,
            unitarity_residual: report.unitarity,
            bob_unitarity_residual: protocol.unitaries.max_unitarity_residual(),
            classical_bits: protocol.classical_bits(),
            table_elided: elided,
            table: coeffs,
        }
    }

    /// Flattened `(j, m, k)` coefficients, checking the declared shape.
    pub fn coefficients(&self) -> Result<Option<Vec<C64>>, CliError> {
        let Some(table) = &self.table else { return Ok(None) };
        let shape_err = || {
            CliError::Parse(format!(
                "protocol.table: expected {} x {} x {} entries",
                self.outcomes, self.d, self.n
            ))
        };
        if self.outcomes != self.d * self.n || table.len() != self.outcomes {
            return Err(shape_err());
        }
        let mut out = Vec::with_capacity(self.outcomes * self.d * self.n);
        for row in table {
            if row.len() != self.d || row.iter().any(|r| r.len() != self.n) {
                return Err(shape_err());
            }
            out.extend(row.iter().flatten().map(|[re, im]| C64::new(*re, *im)));
        }
        Ok(Some(out))
    }
}

pub fn pair(z: C64) -> ComplexPair {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SimulationDoc {
    pub trials: usize,
    pub seed: u64,
    pub min_fidelity: f64,
    pub max_fidelity_deviation: f64,
    pub max_probability_deviation: f64,
    pub max_completeness_deviation: f64,
    pub max_residual_schmidt: usize,
    pub classical_bits: f64,
    /// One traced run, outcome by outcome.
    pub reference: ReferenceRun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ReferenceRun {
    pub input_state: Vec<ComplexPair>,
    pub min_fidelity: f64,
    pub probabilities: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub residual_schmidt: Vec<usize>,
}

impl SimulationDoc {
    pub fn new(sweep: &SweepReport, input: &InputQudit, trace: &SimulationTrace) -> Self {
        Self {
            trials: sweep.trials,
            seed: sweep.seed,
            min_fidelity: sweep.min_fidelity.min(trace.min_fidelity),
            max_fidelity_deviation: sweep.max_fidelity_deviation,
            max_probability_deviation: sweep.max_probability_deviation,
            max_completeness_deviation: sweep.max_completeness_deviation,
            max_residual_schmidt: sweep.max_residual_schmidt.max(trace.max_residual_schmidt()),
            classical_bits: trace.classical_bits,
            reference: ReferenceRun {
                input_state: input.amps().iter().map(|z| pair(*z)).collect(),
                min_fidelity: trace.min_fidelity,
                probabilities: trace.probabilities(),
                fidelities: trace.outcomes.iter().map(|o| o.fidelity).collect(),
                residual_schmidt: trace.outcomes.iter().map(|o| o.residual_schmidt).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BitsDoc {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<String>,
}

impl From<&Bits> for BitsDoc {
    fn from(b: &Bits) -> Self {
        Self {
            value: b.value,
            symbolic: b.symbolic(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CccDoc {
    pub bits: BitsDoc,
    pub assumption: String,
    pub tight: bool,
}

impl From<&CccBound> for CccDoc {
    fn from(c: &CccBound) -> Self {
        Self {
            bits: (&c.bits).into(),
            assumption: c.assumption.tag().to_owned(),
            tight: c.is_tight(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BoundsDoc {
    pub d: usize,
    pub n: usize,
    pub et: BitsDoc,
    pub esch: BitsDoc,
    pub feasible: bool,
    pub ccc_zero_residual: CccDoc,
    pub ccc_with_residual: CccDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concentrate_and_teleport: Option<BitsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locc_bound: Option<BitsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_cap: Option<BitsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_cap_integer: Option<BitsDoc>,
}

impl From<&BoundsReport> for BoundsDoc {
    fn from(r: &BoundsReport) -> Self {
        Self {
            d: r.d,
            n: r.n,
            et: (&r.et).into(),
            esch: (&r.esch).into(),
            feasible: r.teleport_feasible,
            ccc_zero_residual: (&r.ccc_zero_residual).into(),
            ccc_with_residual: (&r.ccc_with_residual).into(),
            concentrate_and_teleport: r.concentrate_and_teleport.as_ref().map(Into::into),
            locc_bound: r.locc_bound.as_ref().map(Into::into),
            residual_cap: r.residual_cap.as_ref().map(Into::into),
            residual_cap_integer: r.residual_cap_integer.as_ref().map(Into::into),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ConcentrationDoc {
    pub spectrum: Vec<Probability>,
    pub copies: usize,
    pub bells: usize,
    pub et: BitsDoc,
    pub esch: BitsDoc,
    pub feasible: bool,
    pub max_bells: usize,
    pub c1_lower_bound: BitsDoc,
    pub c1_minimum: BitsDoc,
    pub c2: BitsDoc,
}

impl ConcentrationDoc {
    pub fn new(spectrum: Vec<Probability>, et: &Bits, esch: &Bits, c: &ConcentrationBounds) -> Self {
        Self {
            spectrum,
            copies: c.copies,
            bells: c.bells,
            et: et.into(),
            esch: esch.into(),
            feasible: c.feasible,
            max_bells: c.max_bells,
            c1_lower_bound: (&c.c1_lower_bound).into(),
            c1_minimum: (&c.c1_minimum).into(),
            c2: (&c.c2).into(),
        }
    }
}

/// Pretty printer that writes floats as `{:.16e}`, enough digits to
/// round-trip every `f64`.
#[derive(Default)]
struct ReportFormatter {
    pretty: PrettyFormatter<'static>,
}

impl Formatter for ReportFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value.into())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(w)
    }
}
