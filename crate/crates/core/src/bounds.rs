//! Entanglement measures and classical-communication-cost (CCC) bounds.
//!
//! All quantities are in bits. Where the inputs are exact, values also carry
//! a symbolic form `Σ c_i·log₂(a_i)` with rational `c_i` and `a_i`, so
//! numbers like `log₂ 6` can be compared without tolerance games.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Float, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::phases::check_feasible;
use crate::spectrum::{rational_to_f64, Rational, SchmidtSpectrum};

/// Slack on `m ≤ n·E_t`.
pub const CONCENTRATION_TOLERANCE: f64 = 1e-12;

/// `coeff · log₂(arg)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogTerm {
    pub coeff: Rational,
    pub arg: Rational,
}

impl LogTerm {
    pub fn new(coeff: Rational, arg: Rational) -> Self {
        Self { coeff, arg }
    }

    fn int(coeff: i128, arg: i128) -> Self {
        Self::new(Rational::from_integer(coeff), Rational::from_integer(arg))
    }

    pub fn value(&self) -> f64 {
        rational_to_f64(&self.coeff) * Float::log2(rational_to_f64(&self.arg))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bits {
    pub value: f64,
    pub exact: Option<Vec<LogTerm>>,
}

impl Bits {
    pub fn float(value: f64) -> Self {
        Self { value, exact: None }
    }

    pub fn from_terms(terms: Vec<LogTerm>) -> Self {
        let terms: Vec<LogTerm> = terms
            .into_iter()
            .filter(|t| !t.coeff.is_zero() && !t.arg.is_one())
            .collect();
        let value = terms.iter().map(LogTerm::value).sum();
        Self {
            value,
            exact: Some(terms),
        }
    }

    pub fn zero() -> Self {
        Self::from_terms(Vec::new())
    }

    /// `self + other`; symbolic only if both sides are.
    pub fn plus(&self, other: &Bits) -> Bits {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Bits::from_terms(a.iter().chain(b).copied().collect()),
            _ => Bits::float(self.value + other.value),
        }
    }

    pub fn symbolic(&self) -> Option<String> {
        self.exact.as_ref().map(|_| alloc::format!("{self}"))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(terms) = &self.exact else {
            return write!(f, "{}", self.value);
        };
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in terms.iter().enumerate() {
            let negative = t.coeff.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let c = t.coeff.abs();
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            write!(f, "log2({})", t.arg)?;
        }
        Ok(())
    }
}

/// `E_t = −log₂ max_k p_k`.
pub fn entanglement_of_teleportation(spectrum: &SchmidtSpectrum) -> Bits {
    match spectrum.max_exact() {
        Some(max) => Bits::from_terms(vec![LogTerm::new(Rational::one(), max.recip())]),
        None => Bits::float(-Float::log2(spectrum.max())),
    }
}

/// `E_Sch = log₂ n` with `n` the Schmidt number.
pub fn schmidt_entanglement(spectrum: &SchmidtSpectrum) -> Bits {
    Bits::from_terms(vec![LogTerm::int(1, spectrum.len() as i128)])
}

/// Faithful teleportation of a `d`-level state is possible iff no Schmidt
/// coefficient exceeds `1/d`; this forces `n ≥ d`.
pub fn teleport_feasible(spectrum: &SchmidtSpectrum, d: usize) -> bool {
    check_feasible(spectrum, d).is_ok()
}

/// Lower bound `log₂(n1/n2)` on the CCC of any LOCC map taking a state of
/// Schmidt rank `n1` to one of rank `n2`.
pub fn locc_ccc_bound(n1: usize, n2: usize) -> Result<Bits> {
    if n2 == 0 || n1 < n2 {
        return Err(Error::RankOrder { n1, n2 });
    }
    Ok(Bits::from_terms(vec![LogTerm::new(
        Rational::one(),
        Rational::new(n1 as i128, n2 as i128),
    )]))
}

/// Concentrating to a `d × d` maximally entangled pair and then teleporting
/// costs at least `log₂(n/d) + 2·log₂ d = log₂(nd)`.
pub fn concentrate_and_teleport_bound(n: usize, d: usize) -> Result<Bits> {
    Ok(locc_ccc_bound(n, d)?.plus(&Bits::from_terms(vec![LogTerm::int(2, d as i128)])))
}

/// Why a CCC bound holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CccAssumption {
    /// No entanglement is left between Alice and Bob afterwards.
    ZeroResidual,
    /// `d > n/2`, which forces zero residual entanglement.
    DExceedsHalfN,
    /// Only strategies that concentrate first, then teleport.
    ConcentrateAndTeleport,
    /// Unconditional floor `2·log₂ d`; strategies that keep residual
    /// entanglement may reach it, nothing tighter is known in general.
    NotTight,
}

impl CccAssumption {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::ZeroResidual => "zero-residual",
            Self::DExceedsHalfN => "d>n/2",
            Self::ConcentrateAndTeleport => "concentrate-and-teleport",
            Self::NotTight => "not-tight",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CccBound {
    pub bits: Bits,
    pub assumption: CccAssumption,
}

impl CccBound {
    pub fn is_tight(&self) -> bool {
        self.assumption != CccAssumption::NotTight
    }
}

/// CCC lower bound for teleporting a `d`-level state through an `n`-level
/// resource. `log₂(nd)` when `d > n/2` or when zero residual entanglement is
/// assumed; otherwise the untight floor `2·log₂ d`.
pub fn teleport_ccc_bound(n: usize, d: usize, assume_zero_residual: bool) -> CccBound {
    let nd = LogTerm::int(1, (n * d) as i128);
    if 2 * d > n {
        CccBound {
            bits: Bits::from_terms(vec![nd]),
            assumption: CccAssumption::DExceedsHalfN,
        }
    } else if assume_zero_residual {
        CccBound {
            bits: Bits::from_terms(vec![nd]),
            assumption: CccAssumption::ZeroResidual,
        }
    } else {
        CccBound {
            bits: Bits::from_terms(vec![LogTerm::int(2, d as i128)]),
            assumption: CccAssumption::NotTight,
        }
    }
}

/// Cap on the Schmidt entanglement that can survive teleportation:
/// `log₂ n − log₂ d`, and zero once `d > n/2`.
pub fn residual_cap(n: usize, d: usize) -> Result<Bits> {
    if d == 0 || n < d {
        return Err(Error::RankOrder { n1: n, n2: d });
    }
    if 2 * d > n {
        return Ok(Bits::zero());
    }
    Ok(Bits::from_terms(vec![LogTerm::new(
        Rational::one(),
        Rational::new(n as i128, d as i128),
    )]))
}

/// Integer-constrained cap: the residual Schmidt number `n_s` must satisfy
/// `n_s·d ≤ n`, so at most `log₂ ⌊n/d⌋`.
pub fn residual_cap_integer(n: usize, d: usize) -> Result<Bits> {
    if d == 0 || n < d {
        return Err(Error::RankOrder { n1: n, n2: d });
    }
    Ok(Bits::from_terms(vec![LogTerm::int(1, (n / d) as i128)]))
}

/// Deterministic conversion of `copies` resource copies into `bells` Bell
/// pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationBounds {
    pub copies: usize,
    pub bells: usize,
    /// `bells ≤ copies·E_t`.
    pub feasible: bool,
    /// `⌊copies·E_t⌋`.
    pub max_bells: usize,
    /// `C₁ ≥ copies·E_Sch − bells`.
    pub c1_lower_bound: Bits,
    /// `copies·(E_Sch − E_t)`, the bound at the largest feasible `bells`
    /// before flooring.
    pub c1_minimum: Bits,
    /// `C₂ = 2·bells`, teleporting a `2^bells`-level state over Bell pairs.
    pub c2: Bits,
}

pub fn concentration_bounds(spectrum: &SchmidtSpectrum, copies: usize, bells: usize) -> ConcentrationBounds {
    let et = entanglement_of_teleportation(spectrum);
    let esch = schmidt_entanglement(spectrum);
    let budget = copies as f64 * et.value;
    let scale = |b: &Bits, by: Rational| match &b.exact {
        Some(terms) => Bits::from_terms(terms.iter().map(|t| LogTerm::new(t.coeff * by, t.arg)).collect()),
        None => Bits::float(b.value * rational_to_f64(&by)),
    };
    let copies_r = Rational::from_integer(copies as i128);
    let c1_lower_bound = scale(&esch, copies_r).plus(&Bits::from_terms(vec![LogTerm::int(-(bells as i128), 2)]));
    let c1_minimum = scale(&esch, copies_r).plus(&scale(&et, -copies_r));
    ConcentrationBounds {
        copies,
        bells,
        feasible: bells as f64 <= budget + CONCENTRATION_TOLERANCE,
        max_bells: Float::floor(budget + CONCENTRATION_TOLERANCE) as usize,
        c1_lower_bound,
        c1_minimum,
        c2: Bits::from_terms(vec![LogTerm::int(2 * bells as i128, 2)]),
    }
}

/// Every measure and bound for one resource spectrum and qudit size.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub d: usize,
    pub n: usize,
    pub et: Bits,
    pub esch: Bits,
    pub teleport_feasible: bool,
    /// Tight bound (zero residual, or `d > n/2`).
    pub ccc_zero_residual: CccBound,
    /// Bound when residual entanglement is allowed.
    pub ccc_with_residual: CccBound,
    /// `None` when `n < d`.
    pub concentrate_and_teleport: Option<Bits>,
    /// `log₂(n/d)` for the rank pair `(n, d)`; `None` when `n < d`.
    pub locc_bound: Option<Bits>,
    pub residual_cap: Option<Bits>,
    pub residual_cap_integer: Option<Bits>,
    pub concentration: Option<ConcentrationBounds>,
}

pub fn bounds_report(spectrum: &SchmidtSpectrum, d: usize, concentration: Option<(usize, usize)>) -> BoundsReport {
    let n = spectrum.len();
    BoundsReport {
        d,
        n,
        et: entanglement_of_teleportation(spectrum),
        esch: schmidt_entanglement(spectrum),
        teleport_feasible: teleport_feasible(spectrum, d),
        ccc_zero_residual: teleport_ccc_bound(n, d, true),
        ccc_with_residual: teleport_ccc_bound(n, d, false),
        concentrate_and_teleport: concentrate_and_teleport_bound(n, d).ok(),
        locc_bound: locc_ccc_bound(n, d).ok(),
        residual_cap: residual_cap(n, d).ok(),
        residual_cap_integer: residual_cap_integer(n, d).ok(),
        concentration: concentration.map(|(copies, bells)| concentration_bounds(spectrum, copies, bells)),
    }
}
