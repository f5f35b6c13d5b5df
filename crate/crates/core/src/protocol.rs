//! Protocol synthesis: the coefficient table `V^(j)_mk`, Alice's projective
//! measurement `|M^(j)⟩ = Σ_{m,k} V^(j)_mk |m⟩₁|k⟩₂` and Bob's corrections
//! `û^(j)|m⟩ = √s Σ_k conj(V^(j)_mk) √p_k |k⟩`.
//!
//! Indices are 0-based in storage; the closed-form constructions evaluate
//! their formulas at `j + 1`, `m + 1`, `k + 1`.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{root_of_unity, ComplexMat, ComplexVec, C64};
use crate::phases::{self, check_feasible, NumericalSearch, PhaseMatrix, Strategy, RESIDUAL_TOLERANCE};
use crate::spectrum::SchmidtSpectrum;

/// Tolerance on both defining conditions of a coefficient table.
pub const CONDITION_TOLERANCE: f64 = 1e-10;

/// Largest deviation from orthonormality accepted for the columns of `û^(j)`
/// fixed by the table, and the cut-off for dependent completion seeds.
pub const COLUMN_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// `V^(j)_mk = s^{-1/2} e^{iθ_mk} e^{ij(2πm/s + 2πk/n)}`.
    GeneralFormula,
    /// The two-block qubit construction built on `e_{j,k}` and `θ_k`.
    D2Formula,
    /// Coefficients supplied from outside, e.g. read back from a report.
    Explicit,
}

/// `s = n·d` rows of `d·n` coefficients; row `j` holds `V^(j)_mk` at
/// offset `m·n + k`, which is also the amplitude of `|m⟩₁|k⟩₂` in `|M^(j)⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolTable {
    d: usize,
    n: usize,
    construction: Construction,
    coeffs: Vec<C64>,
}

impl ProtocolTable {
    pub fn explicit(d: usize, n: usize, coeffs: Vec<C64>) -> Result<Self> {
        let s = d * n;
        if coeffs.len() != s * s {
            return Err(Error::DimensionMismatch {
                what: "protocol table",
                expected: s * s,
                found: coeffs.len(),
            });
        }
        Ok(Self {
            d,
            n,
            construction: Construction::Explicit,
            coeffs,
        })
    }

    fn from_fn(d: usize, n: usize, construction: Construction, f: impl Fn(usize, usize, usize) -> C64) -> Self {
        let s = d * n;
        let mut coeffs = Vec::with_capacity(s * s);
        for j in 0..s {
            for m in 0..d {
                for k in 0..n {
                    coeffs.push(f(j, m, k));
                }
            }
        }
        Self {
            d,
            n,
            construction,
            coeffs,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of measurement outcomes `s = n·d`.
    pub fn outcomes(&self) -> usize {
        self.d * self.n
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn get(&self, j: usize, m: usize, k: usize) -> C64 {
        self.coeffs[j * self.outcomes() + m * self.n + k]
    }

    pub fn set(&mut self, j: usize, m: usize, k: usize, value: C64) {
        let s = self.outcomes();
        self.coeffs[j * s + m * self.n + k] = value;
        self.construction = Construction::Explicit;
    }

    pub fn row(&self, j: usize) -> &[C64] {
        let s = self.outcomes();
        &self.coeffs[j * s..(j + 1) * s]
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }
}

fn check_phases(spectrum: &SchmidtSpectrum, d: usize, phases: &PhaseMatrix) -> Result<()> {
    if phases.d() != d {
        return Err(Error::DimensionMismatch {
            what: "phase matrix rows",
            expected: d,
            found: phases.d(),
        });
    }
    if phases.n() != spectrum.len() {
        return Err(Error::DimensionMismatch {
            what: "phase matrix columns",
            expected: spectrum.len(),
            found: phases.n(),
        });
    }
    let residual = phases.residual(spectrum);
    if residual.is_nan() || residual >= RESIDUAL_TOLERANCE {
        return Err(Error::InvalidPhases { residual });
    }
    Ok(())
}

/// The general construction
/// `V^(j)_mk = s^{-1/2} exp(iθ_mk) exp[ij(2πm/s + 2πk/n)]`.
pub fn synthesize_general(spectrum: &SchmidtSpectrum, d: usize, phases: &PhaseMatrix) -> Result<ProtocolTable> {
    if d < 2 {
        return Err(Error::InvalidDimension { d });
    }
    check_feasible(spectrum, d)?;
    check_phases(spectrum, d, phases)?;
    let n = spectrum.len();
    let s = n * d;
    let amp = 1.0 / Float::sqrt(s as f64);
    Ok(ProtocolTable::from_fn(d, n, Construction::GeneralFormula, |j, m, k| {
        // j(m/s + k/n) = j(m + k·d)/s, reduced as an integer.
        let turns = ((j + 1) * ((m + 1) + (k + 1) * d)) % s;
        root_of_unity(turns as f64, s as f64) * C64::from_polar(amp, phases.get(m, k))
    }))
}

/// The qubit construction. With `e_{j,k} = exp(2πi·jk/n)` and
/// `θ_k = θ_1k − θ_0k`:
/// for `j ≤ n`, `V_1k = e_{j,k}/√s` and `V_2k = e_{j,k} e^{iθ_k}/√s`;
/// for `j > n`, `V_1k = −e_{j,k} e^{−iθ_k}/√s` and `V_2k = e_{j,k}/√s`.
pub fn synthesize_d2(spectrum: &SchmidtSpectrum, thetas: &PhaseMatrix) -> Result<ProtocolTable> {
    check_feasible(spectrum, 2)?;
    check_phases(spectrum, 2, thetas)?;
    let n = spectrum.len();
    let amp = 1.0 / Float::sqrt((2 * n) as f64);
    Ok(ProtocolTable::from_fn(2, n, Construction::D2Formula, |j, m, k| {
        let e = root_of_unity((((j + 1) * (k + 1)) % n) as f64, n as f64) * amp;
        let theta = thetas.get(1, k) - thetas.get(0, k);
        match (j < n, m) {
            (true, 0) => e,
            (true, _) => e * C64::from_polar(1.0, theta),
            (false, 0) => -e * C64::from_polar(1.0, -theta),
            (false, _) => e,
        }
    }))
}

/// Alice's measurement basis `{|M^(j)⟩}` on systems 1 and 2.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    states: Vec<ComplexVec>,
}

impl MeasurementBasis {
    pub fn states(&self) -> &[ComplexVec] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn projector(&self, j: usize) -> ComplexMat {
        ComplexMat::outer(&self.states[j])
    }

    /// Largest entry of `|G − I|` for the Gram matrix `G_jj' = ⟨M^(j)|M^(j')⟩`.
    pub fn gram_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, a) in self.states.iter().enumerate() {
            for (jp, b) in self.states.iter().enumerate() {
                let target = if j == jp { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - target).norm());
            }
        }
        worst
    }

    /// Largest entry of `|Σ_j P^(j) − I|`.
    pub fn completeness_residual(&self) -> f64 {
        let dim = self.states.first().map_or(0, ComplexVec::dim);
        let sum = self
            .states
            .iter()
            .fold(ComplexMat::zeros(dim, dim), |acc, v| acc.add(&ComplexMat::outer(v)));
        sum.max_abs_diff(&ComplexMat::identity(dim))
    }
}

pub fn measurement_basis(table: &ProtocolTable) -> MeasurementBasis {
    let states = (0..table.outcomes())
        .map(|j| ComplexVec::new(table.row(j).to_vec()))
        .collect();
    MeasurementBasis { states }
}

/// Bob's unitaries `û^(j)`, each `n × n`. He applies `û^(j)†` on outcome `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BobUnitarySet {
    unitaries: Vec<ComplexMat>,
}

impl BobUnitarySet {
    pub fn unitaries(&self) -> &[ComplexMat] {
        &self.unitaries
    }

    pub fn get(&self, j: usize) -> &ComplexMat {
        &self.unitaries[j]
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn max_unitarity_residual(&self) -> f64 {
        self.unitaries
            .iter()
            .map(ComplexMat::unitarity_residual)
            .fold(0.0, f64::max)
    }
}

/// Builds `û^(j)`. Column `m < d` is `√s Σ_k conj(V^(j)_mk) √p_k |k⟩`; the
/// remaining `n − d` columns come from Gram–Schmidt over `|0⟩, |1⟩, ..`,
/// skipping seeds whose remainder has norm below [`COLUMN_TOLERANCE`].
pub fn bob_unitaries(table: &ProtocolTable, spectrum: &SchmidtSpectrum) -> Result<BobUnitarySet> {
    let (d, n) = (table.d(), table.n());
    if spectrum.len() != n {
        return Err(Error::DimensionMismatch {
            what: "spectrum",
            expected: n,
            found: spectrum.len(),
        });
    }
    let scale = Float::sqrt(table.outcomes() as f64);
    let roots: Vec<f64> = spectrum.probs().iter().map(|p| Float::sqrt(*p)).collect();
    let mut unitaries = Vec::with_capacity(table.outcomes());
    for j in 0..table.outcomes() {
        let mut columns: Vec<ComplexVec> = (0..d)
            .map(|m| (0..n).map(|k| table.get(j, m, k).conj() * roots[k] * scale).collect())
            .collect();
        let mut deviation: f64 = 0.0;
        for (a, ca) in columns.iter().enumerate() {
            for (b, cb) in columns.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                deviation = deviation.max((ca.inner(cb) - target).norm());
            }
        }
        if deviation.is_nan() || deviation > COLUMN_TOLERANCE {
            return Err(Error::DegenerateColumns { outcome: j, deviation });
        }
        for seed in 0..n {
            if columns.len() == n {
                break;
            }
            let mut v = ComplexVec::basis(n, seed);
            for _ in 0..2 {
                for c in &columns {
                    v = v.sub(&c.scale(c.inner(&v)));
                }
            }
            let norm = v.norm();
            if norm > COLUMN_TOLERANCE {
                columns.push(v.scale(C64::new(1.0 / norm, 0.0)));
            }
        }
        unitaries.push(ComplexMat::from_columns(&columns)?);
    }
    Ok(BobUnitarySet { unitaries })
}

/// Largest deviations of the two defining sums from their Kronecker deltas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    /// `max_{j,j'} |Σ_{m,k} conj(V^(j)_mk) V^(j')_mk − δ_jj'|`
    pub orthonormality: f64,
    /// `max_{j,m,m'} |nd Σ_k p_k conj(V^(j)_m'k) V^(j)_mk − δ_mm'|`
    pub unitarity: f64,
}

impl ConditionReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.orthonormality <= tol && self.unitarity <= tol
    }
}

/// Evaluates both defining conditions. Fails only if the spectrum length
/// does not match the table.
pub fn verify_conditions(table: &ProtocolTable, spectrum: &SchmidtSpectrum) -> Result<ConditionReport> {
    let (d, n, s) = (table.d(), table.n(), table.outcomes());
    if spectrum.len() != n {
        return Err(Error::DimensionMismatch {
            what: "spectrum",
            expected: n,
            found: spectrum.len(),
        });
    }
    let mut orthonormality: f64 = 0.0;
    for j in 0..s {
        for jp in 0..s {
            let dot: C64 = table.row(j).iter().zip(table.row(jp)).map(|(a, b)| a.conj() * b).sum();
            let target = if j == jp { 1.0 } else { 0.0 };
            orthonormality = orthonormality.max((dot - target).norm());
        }
    }
    let probs = spectrum.probs();
    let mut unitarity: f64 = 0.0;
    for j in 0..s {
        for m in 0..d {
            for mp in 0..d {
                let sum: C64 = (0..n)
                    .map(|k| table.get(j, mp, k).conj() * table.get(j, m, k) * probs[k])
                    .sum();
                let target = if m == mp { 1.0 } else { 0.0 };
                unitarity = unitarity.max((sum * s as f64 - target).norm());
            }
        }
    }
    Ok(ConditionReport {
        orthonormality,
        unitarity,
    })
}

/// How coefficients are generated by [`Protocol::synthesize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Qubit construction for `d = 2`, general formula otherwise.
    #[default]
    Auto,
    D2,
    General,
}

/// Everything needed to run the protocol for one resource and qudit size.
#[derive(Debug, Clone)]
pub struct Protocol {
    pub spectrum: SchmidtSpectrum,
    pub phases: Option<PhaseMatrix>,
    pub strategy: Option<Strategy>,
    pub table: ProtocolTable,
    pub basis: MeasurementBasis,
    pub unitaries: BobUnitarySet,
}

impl Protocol {
    pub fn synthesize(spectrum: &SchmidtSpectrum, d: usize, method: Method) -> Result<Self> {
        Self::synthesize_with(spectrum, d, method, &NumericalSearch::default())
    }

    pub fn synthesize_with(
        spectrum: &SchmidtSpectrum,
        d: usize,
        method: Method,
        search: &NumericalSearch,
    ) -> Result<Self> {
        if method == Method::D2 && d != 2 {
            return Err(Error::InvalidDimension { d });
        }
        let (phases, strategy) = phases::solve_with_strategy(spectrum, d, search)?;
        let table = match (method, d) {
            (Method::D2, _) | (Method::Auto, 2) => synthesize_d2(spectrum, &phases)?,
            _ => synthesize_general(spectrum, d, &phases)?,
        };
        let mut protocol = Self::from_table(spectrum, table)?;
        protocol.phases = Some(phases);
        protocol.strategy = Some(strategy);
        Ok(protocol)
    }

    /// Wraps an existing table, deriving the basis and Bob's unitaries.
    pub fn from_table(spectrum: &SchmidtSpectrum, table: ProtocolTable) -> Result<Self> {
        let unitaries = bob_unitaries(&table, spectrum)?;
        let basis = measurement_basis(&table);
        Ok(Self {
            spectrum: spectrum.clone(),
            phases: None,
            strategy: None,
            table,
            basis,
            unitaries,
        })
    }

    pub fn d(&self) -> usize {
        self.table.d()
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn outcomes(&self) -> usize {
        self.table.outcomes()
    }

    /// `log₂ s` bits sent from Alice to Bob.
    pub fn classical_bits(&self) -> f64 {
        Float::log2(self.outcomes() as f64)
    }

    pub fn conditions(&self) -> ConditionReport {
        verify_conditions(&self.table, &self.spectrum).expect("protocol spectrum matches its table")
    }
}
