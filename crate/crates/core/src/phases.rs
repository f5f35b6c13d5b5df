//! Phase factors `θ_mk` with `Σ_k p_k exp(i(θ_mk − θ_m'k)) = δ_mm'`.
//!
//! For `d = 2` a solution always exists when every `p_k ≤ 1/2` and is built
//! by closing a triangle of grouped phasors. For general `d` the solver
//! tries an equal-weight partition of the spectrum first and then falls
//! back to a damped Gauss–Newton search, which may legitimately fail.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_traits::{Float, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::spectrum::{Rational, SchmidtSpectrum};

/// Accepted `max_{m≠m'} |Σ_k p_k e^{i(θ_mk−θ_m'k)}|` for a phase matrix.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Slack on the `p_max ≤ 1/d` feasibility test.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-12;

/// Float tolerance on subgroup sums when no exact rationals are available.
pub const PARTITION_TOLERANCE: f64 = 1e-9;

/// Angles closer than this to `2π` are snapped to zero on canonicalization.
const WRAP_SNAP: f64 = 1e-13;

const POLISH_STEPS: usize = 4;

/// `d × n` matrix of angles in `[0, 2π)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatrix {
    d: usize,
    n: usize,
    theta: Vec<f64>,
}

impl PhaseMatrix {
    pub fn new(d: usize, n: usize, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != d * n {
            return Err(Error::DimensionMismatch {
                what: "phase matrix",
                expected: d * n,
                found: theta.len(),
            });
        }
        Ok(Self {
            d,
            n,
            theta: theta.into_iter().map(wrap_angle).collect(),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                what: "phase matrix row",
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(rows.len(), n, rows.concat())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, m: usize, k: usize) -> f64 {
        self.theta[m * self.n + k]
    }

    pub fn row(&self, m: usize) -> &[f64] {
        &self.theta[m * self.n..(m + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.d).map(|m| self.row(m).to_vec()).collect()
    }

    /// `Σ_k p_k exp(i(θ_mk − θ_m'k))`.
    pub fn constraint_sum(&self, probs: &[f64], m: usize, mp: usize) -> C64 {
        probs
            .iter()
            .enumerate()
            .map(|(k, p)| C64::from_polar(*p, self.get(m, k) - self.get(mp, k)))
            .sum()
    }

    /// Largest off-diagonal `|Σ_k p_k e^{i(θ_mk−θ_m'k)}|`. Zero when `d = 1`.
    pub fn residual(&self, spectrum: &SchmidtSpectrum) -> f64 {
        let probs = spectrum.probs();
        let mut worst: f64 = 0.0;
        for m in 0..self.d {
            for mp in m + 1..self.d {
                worst = worst.max(self.constraint_sum(probs, m, mp).norm());
            }
        }
        worst
    }

    pub fn is_valid_for(&self, spectrum: &SchmidtSpectrum) -> bool {
        self.n == spectrum.len() && self.residual(spectrum) < RESIDUAL_TOLERANCE
    }

    /// Adds `shift` to every angle of row `m`. Validity is preserved since
    /// the constraint sums only pick up a unimodular factor.
    pub fn shift_row(&self, m: usize, shift: f64) -> Self {
        let mut theta = self.theta.clone();
        for t in &mut theta[m * self.n..(m + 1) * self.n] {
            *t = wrap_angle(*t + shift);
        }
        Self { theta, ..*self }
    }

    /// Gauge-fixed form: each column is shifted so row 0 vanishes, then each
    /// row is shifted so its first angle vanishes. Both moves leave every
    /// `|Σ_k p_k e^{i(θ_mk−θ_m'k)}|` unchanged.
    pub fn canonical(&self) -> Self {
        let mut theta = vec![0.0; self.d * self.n];
        for m in 0..self.d {
            let lead = self.get(m, 0) - self.get(0, 0);
            for k in 0..self.n {
                theta[m * self.n + k] = wrap_angle(self.get(m, k) - self.get(0, k) - lead);
            }
        }
        Self { theta, ..*self }
    }
}

fn wrap_angle(x: f64) -> f64 {
    let r = x - TAU * Float::floor(x / TAU);
    if !(0.0..TAU - WRAP_SNAP).contains(&r) {
        0.0
    } else {
        r
    }
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension { d });
    }
    Ok(())
}

/// Feasibility gate for teleporting a `d`-level state: every `p_k ≤ 1/d`
/// (exactly, when rational).
pub fn check_feasible(spectrum: &SchmidtSpectrum, d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDimension { d });
    }
    let ok = match spectrum.max_exact() {
        Some(max) => max <= Rational::new(1, d as i128),
        None => spectrum.max() <= 1.0 / d as f64 + FEASIBILITY_TOLERANCE,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InfeasibleSpectrum {
            p_max: spectrum.max(),
            d,
        })
    }
}

/// Indices sorted by descending probability, ties by index.
fn descending_order(probs: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));
    order
}

/// Qubit phases: row 0 is zero and row 1 holds `θ_k` with
/// `Σ_k p_k e^{iθ_k} = 0`.
///
/// Indices are dealt (largest first) onto the least loaded of three groups.
/// Each group then weighs at most 1/2: an item heavier than 1/4 is one of
/// the first three and lands in an empty group, a lighter one lands on a
/// group of weight at most `(1 − p)/3`. Three sides of length at most 1/2
/// summing to 1 close into a (possibly flat) triangle, whose edge directions
/// are the group angles.
pub fn solve_d2(spectrum: &SchmidtSpectrum) -> Result<PhaseMatrix> {
    check_feasible(spectrum, 2)?;
    let probs = spectrum.probs();
    let mut group_of = vec![0usize; probs.len()];
    let mut weight = [0.0f64; 3];
    for k in descending_order(probs) {
        let g = (0..3)
            .min_by(|&a, &b| weight[a].total_cmp(&weight[b]).then(a.cmp(&b)))
            .unwrap();
        group_of[k] = g;
        weight[g] += probs[k];
    }

    let [g0, g1, g2] = weight;
    let cos_a1 = ((g2 * g2 - g0 * g0 - g1 * g1) / (2.0 * g0 * g1)).clamp(-1.0, 1.0);
    let a1 = Float::acos(cos_a1);
    let closing = -(C64::new(g0, 0.0) + C64::from_polar(g1, a1));
    let a2 = if g2 > 0.0 { closing.arg() } else { 0.0 };
    let angles = [0.0, a1, a2];

    let mut theta = vec![0.0; 2 * probs.len()];
    for (k, g) in group_of.iter().enumerate() {
        theta[probs.len() + k] = angles[*g];
    }
    let phases = PhaseMatrix::new(2, probs.len(), theta)?;
    let residual = phases.residual(spectrum);
    if residual >= RESIDUAL_TOLERANCE {
        return Err(Error::PhaseFactorsNotFound {
            best_residual: residual,
        });
    }
    Ok(phases)
}

/// Assignment of each Schmidt index to one of `d` subgroups of equal weight
/// `1/d`. Labels are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
}

impl Partition {
    pub fn new(assignment: Vec<usize>) -> Self {
        Self { assignment }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn group_of(&self, k: usize) -> usize {
        self.assignment[k]
    }

    pub fn group_sums(&self, probs: &[f64], d: usize) -> Vec<f64> {
        let mut sums = vec![0.0; d];
        for (k, g) in self.assignment.iter().enumerate() {
            sums[*g] += probs[k];
        }
        sums
    }

    pub fn is_valid_for(&self, spectrum: &SchmidtSpectrum, d: usize) -> bool {
        if self.assignment.len() != spectrum.len() || self.assignment.iter().any(|&g| g >= d) {
            return false;
        }
        match spectrum.exact() {
            Some(exact) => {
                let mut sums = vec![Rational::zero(); d];
                for (k, g) in self.assignment.iter().enumerate() {
                    sums[*g] += exact[k];
                }
                sums.iter().all(|s| *s == Rational::new(1, d as i128))
            }
            None => self
                .group_sums(spectrum.probs(), d)
                .iter()
                .all(|s| (s - 1.0 / d as f64).abs() <= PARTITION_TOLERANCE),
        }
    }
}

/// Backtracking search for a partition into `d` groups each weighing `1/d`.
///
/// Indices are visited by descending probability and placed first-fit;
/// among groups with the same current load only the first is tried, so
/// relabelings are not revisited. Exact rationals are compared exactly.
pub fn find_partition(spectrum: &SchmidtSpectrum, d: usize) -> Result<Partition> {
    check_d(d)?;
    let n = spectrum.len();
    if n < d {
        return Err(Error::NoPartition { d });
    }
    let order = descending_order(spectrum.probs());
    let mut assignment = vec![0usize; n];
    let found = match spectrum.exact() {
        Some(exact) => {
            let target = Rational::new(1, d as i128);
            let weights: Vec<Rational> = order.iter().map(|&k| exact[k]).collect();
            let mut sums = vec![Rational::zero(); d];
            let mut labels = vec![0usize; n];
            let ok = place(&weights, 0, &mut sums, &mut labels, &|s| s <= target);
            for (slot, &k) in order.iter().enumerate() {
                assignment[k] = labels[slot];
            }
            ok
        }
        None => {
            let target = 1.0 / d as f64;
            let weights: Vec<f64> = order.iter().map(|&k| spectrum.probs()[k]).collect();
            let mut sums = vec![0.0; d];
            let mut labels = vec![0usize; n];
            let ok = place(&weights, 0, &mut sums, &mut labels, &|s| {
                s <= target + PARTITION_TOLERANCE
            });
            for (slot, &k) in order.iter().enumerate() {
                assignment[k] = labels[slot];
            }
            ok
        }
    };
    let partition = Partition { assignment };
    if found && partition.is_valid_for(spectrum, d) {
        Ok(partition)
    } else {
        Err(Error::NoPartition { d })
    }
}

fn place<T>(weights: &[T], idx: usize, sums: &mut [T], labels: &mut [usize], fits: &impl Fn(T) -> bool) -> bool
where
    T: Copy + PartialEq + core::ops::Add<Output = T>,
{
    if idx == weights.len() {
        return true;
    }
    // Groups with equal loads are interchangeable, so each load is tried once.
    let mut tried: Vec<T> = Vec::with_capacity(sums.len());
    for g in 0..sums.len() {
        if tried.contains(&sums[g]) {
            continue;
        }
        tried.push(sums[g]);
        let next = sums[g] + weights[idx];
        if !fits(next) {
            continue;
        }
        let before = sums[g];
        sums[g] = next;
        labels[idx] = g;
        if place(weights, idx + 1, sums, labels, fits) {
            return true;
        }
        sums[g] = before;
    }
    false
}

/// `θ_mk = (2π/d)·m·l` for `k` in subgroup `l`, with `m` and `l` counted
/// from 1.
pub fn phases_from_partition(partition: &Partition, d: usize, n: usize) -> Result<PhaseMatrix> {
    if partition.assignment.len() != n {
        return Err(Error::DimensionMismatch {
            what: "partition",
            expected: n,
            found: partition.assignment.len(),
        });
    }
    let mut theta = Vec::with_capacity(d * n);
    for m in 0..d {
        for k in 0..n {
            // Reduce the integer product first so the angle is exact mod 2π.
            let turns = ((m + 1) * (partition.group_of(k) + 1)) % d;
            theta.push(TAU * turns as f64 / d as f64);
        }
    }
    PhaseMatrix::new(d, n, theta)
}

/// Which strategy produced a phase matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    QubitTriangle,
    Partition,
    Numerical,
}

/// Solves for phase factors, trying the qubit construction, then an equal
/// weight partition, then [`NumericalSearch`]. The result is canonical.
pub fn solve_general(spectrum: &SchmidtSpectrum, d: usize) -> Result<PhaseMatrix> {
    solve_with_strategy(spectrum, d, &NumericalSearch::default()).map(|(phases, _)| phases)
}

pub fn solve_with_strategy(
    spectrum: &SchmidtSpectrum,
    d: usize,
    search: &NumericalSearch,
) -> Result<(PhaseMatrix, Strategy)> {
    check_d(d)?;
    check_feasible(spectrum, d)?;
    if d == 2 {
        if let Ok(p) = solve_d2(spectrum) {
            return Ok((p.canonical(), Strategy::QubitTriangle));
        }
    }
    if let Ok(partition) = find_partition(spectrum, d) {
        let p = phases_from_partition(&partition, d, spectrum.len())?;
        return Ok((p.canonical(), Strategy::Partition));
    }
    search.search(spectrum, d).map(|p| (p.canonical(), Strategy::Numerical))
}

/// Multi-restart Levenberg–Marquardt search minimising
/// `R(θ) = Σ_{m≠m'} |Σ_k p_k e^{i(θ_mk−θ_m'k)}|²` with row 0 pinned to zero.
#[derive(Debug, Clone)]
pub struct NumericalSearch {
    pub restarts: usize,
    pub max_evaluations: usize,
    pub seed: u64,
    /// Success threshold on `R`.
    pub objective_tolerance: f64,
}

impl Default for NumericalSearch {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_evaluations: 100_000,
            seed: 0x7e1e_0d17,
            objective_tolerance: 1e-18,
        }
    }
}

/// Outcome of one restart.
#[derive(Debug, Clone)]
struct Descent {
    theta: Vec<f64>,
    objective: f64,
}

impl NumericalSearch {
    /// Runs the restarts in order and returns the first success; on failure
    /// reports the best residual seen (ties go to the earlier restart).
    pub fn search(&self, spectrum: &SchmidtSpectrum, d: usize) -> Result<PhaseMatrix> {
        check_d(d)?;
        check_feasible(spectrum, d)?;
        let n = spectrum.len();
        let mut best_residual = f64::INFINITY;
        for restart in 0..self.restarts {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(restart as u64));
            let start: Vec<f64> = (0..(d - 1) * n).map(|_| rng.random::<f64>() * TAU).collect();
            let run = self.descend(spectrum.probs(), d, start);
            let mut theta = vec![0.0; n];
            theta.extend_from_slice(&run.theta);
            let phases = PhaseMatrix::new(d, n, theta)?;
            let residual = phases.residual(spectrum);
            if run.objective < self.objective_tolerance && residual < RESIDUAL_TOLERANCE {
                return Ok(phases);
            }
            best_residual = best_residual.min(residual);
        }
        Err(Error::PhaseFactorsNotFound { best_residual })
    }

    fn descend(&self, probs: &[f64], d: usize, mut x: Vec<f64>) -> Descent {
        let problem = PhaseProblem { probs, d };
        let (mut r, mut jac) = problem.residuals(&x, true);
        let mut objective = problem.objective(&r);
        let mut evaluations = 1;
        let mut lambda = 1e-3;
        while evaluations < self.max_evaluations && objective >= self.objective_tolerance {
            let step = match gauss_newton_step(&jac, &r, x.len(), lambda) {
                Some(step) => step,
                None => break,
            };
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
            let (tr, _) = problem.residuals(&trial, false);
            evaluations += 1;
            let trial_objective = problem.objective(&tr);
            if trial_objective < objective {
                x = trial;
                let (nr, nj) = problem.residuals(&x, true);
                r = nr;
                jac = nj;
                objective = trial_objective;
                lambda = (lambda / 3.0).max(1e-15);
            } else {
                lambda *= 4.0;
                if lambda > 1e12 {
                    break;
                }
            }
        }
        if objective < self.objective_tolerance {
            // Newton polish down to rounding level; steps are kept only if they help.
            for _ in 0..POLISH_STEPS {
                let Some(step) = gauss_newton_step(&jac, &r, x.len(), 1e-14) else {
                    break;
                };
                let trial: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
                let (tr, tj) = problem.residuals(&trial, true);
                let trial_objective = problem.objective(&tr);
                if trial_objective.is_nan() || trial_objective >= objective {
                    break;
                }
                x = trial;
                r = tr;
                jac = tj;
                objective = trial_objective;
            }
        }
        Descent { theta: x, objective }
    }
}

/// Residual layout: for each pair `m < m'` the real and imaginary parts of
/// the constraint sum. Unknowns are `θ_mk` for rows `1..d`.
struct PhaseProblem<'a> {
    probs: &'a [f64],
    d: usize,
}

impl PhaseProblem<'_> {
    fn angle(&self, x: &[f64], m: usize, k: usize) -> f64 {
        if m == 0 {
            0.0
        } else {
            x[(m - 1) * self.probs.len() + k]
        }
    }

    fn objective(&self, r: &[f64]) -> f64 {
        2.0 * r.iter().map(|v| v * v).sum::<f64>()
    }

    fn residuals(&self, x: &[f64], with_jacobian: bool) -> (Vec<f64>, Vec<f64>) {
        let n = self.probs.len();
        let vars = x.len();
        let pairs = self.d * (self.d - 1) / 2;
        let mut r = vec![0.0; 2 * pairs];
        let mut jac = if with_jacobian {
            vec![0.0; 2 * pairs * vars]
        } else {
            Vec::new()
        };
        let mut row = 0;
        for m in 0..self.d {
            for mp in m + 1..self.d {
                let mut sum = C64::new(0.0, 0.0);
                for k in 0..n {
                    let term = C64::from_polar(self.probs[k], self.angle(x, m, k) - self.angle(x, mp, k));
                    sum += term;
                    if with_jacobian {
                        // d/dθ_mk = i·term, d/dθ_m'k = −i·term
                        if m > 0 {
                            let col = (m - 1) * n + k;
                            jac[row * vars + col] = -term.im;
                            jac[(row + 1) * vars + col] = term.re;
                        }
                        let col = (mp - 1) * n + k;
                        jac[row * vars + col] = term.im;
                        jac[(row + 1) * vars + col] = -term.re;
                    }
                }
                r[row] = sum.re;
                r[row + 1] = sum.im;
                row += 2;
            }
        }
        (r, jac)
    }
}

/// Minimum-norm damped step `δ = −Jᵀ (J Jᵀ + λI)⁻¹ r`.
fn gauss_newton_step(jac: &[f64], r: &[f64], vars: usize, lambda: f64) -> Option<Vec<f64>> {
    let rows = r.len();
    let mut a = vec![0.0; rows * rows];
    for i in 0..rows {
        for j in 0..rows {
            let dot: f64 = (0..vars).map(|c| jac[i * vars + c] * jac[j * vars + c]).sum();
            a[i * rows + j] = dot + if i == j { lambda } else { 0.0 };
        }
    }
    let y = solve_dense(a, r.to_vec(), rows)?;
    Some(
        (0..vars)
            .map(|c| -(0..rows).map(|i| jac[i * vars + c] * y[i]).sum::<f64>())
            .collect(),
    )
}

/// Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>, size: usize) -> Option<Vec<f64>> {
    for col in 0..size {
        let pivot = (col..size).max_by(|&x, &y| a[x * size + col].abs().total_cmp(&a[y * size + col].abs()))?;
        if a[pivot * size + col].abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for j in 0..size {
                a.swap(col * size + j, pivot * size + j);
            }
            b.swap(col, pivot);
        }
        for row in col + 1..size {
            let f = a[row * size + col] / a[col * size + col];
            if f != 0.0 {
                for j in col..size {
                    a[row * size + j] -= f * a[col * size + j];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; size];
    for row in (0..size).rev() {
        let tail: f64 = (row + 1..size).map(|j| a[row * size + j] * x[j]).sum();
        x[row] = (b[row] - tail) / a[row * size + row];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn rational(values: &[(i128, i128)]) -> SchmidtSpectrum {
        SchmidtSpectrum::from_rationals(values.iter().map(|&(a, b)| Rational::new(a, b)).collect()).unwrap()
    }

    fn phasor_sum(probs: &[f64], angles: &[f64]) -> f64 {
        probs
            .iter()
            .zip(angles)
            .map(|(p, t)| C64::from_polar(*p, *t))
            .sum::<C64>()
            .norm()
    }

    fn close(a: f64, b: f64) -> bool {
        let diff = wrap_angle(a - b);
        diff.min(TAU - diff) < 1e-12
    }

    #[test]
    fn bell_pair_angles() {
        let s = rational(&[(1, 2), (1, 2)]);
        let p = solve_d2(&s).unwrap();
        assert_eq!(p.row(0), &[0.0, 0.0]);
        assert!(close(p.get(1, 0), 0.0) && close(p.get(1, 1), PI));
    }

    #[test]
    fn worked_example_angles() {
        let s = rational(&[(1, 2), (1, 3), (1, 6)]);
        let p = solve_d2(&s).unwrap();
        for (got, want) in p.row(1).iter().zip([0.0, PI, PI]) {
            assert!(close(*got, want), "{got} vs {want}");
        }
        assert!(phasor_sum(s.probs(), p.row(1)) < 1e-12);
    }

    #[test]
    fn unequal_three_level_closes() {
        let s = SchmidtSpectrum::from_probs(vec![0.4, 0.3, 0.3]).unwrap();
        let p = solve_d2(&s).unwrap();
        assert!(phasor_sum(s.probs(), p.row(1)) < 1e-9);
    }

    #[test]
    fn d2_rejects_heavy_coefficient() {
        let s = SchmidtSpectrum::from_probs(vec![0.6, 0.4]).unwrap();
        assert!(matches!(solve_d2(&s), Err(Error::InfeasibleSpectrum { d: 2, .. })));
    }

    #[test]
    fn symmetric_split() {
        let s = rational(&[(1, 4), (1, 4), (1, 4), (1, 4)]);
        assert_eq!(find_partition(&s, 2).unwrap().assignment(), &[0, 0, 1, 1]);
    }

    #[test]
    fn worked_example_partition() {
        let s = rational(&[(1, 2), (1, 3), (1, 6)]);
        assert_eq!(find_partition(&s, 2).unwrap().assignment(), &[0, 1, 1]);
    }

    #[test]
    fn three_way_partition() {
        let s = rational(&[(1, 3), (1, 3), (1, 6), (1, 6)]);
        let part = find_partition(&s, 3).unwrap();
        assert_eq!(part.assignment(), &[0, 1, 2, 2]);
        assert!(part.is_valid_for(&s, 3));
    }

    #[test]
    fn partition_absent() {
        let s = rational(&[(3, 10), (3, 10), (2, 10), (2, 10)]);
        assert!(matches!(find_partition(&s, 3), Err(Error::NoPartition { d: 3 })));
        let f = SchmidtSpectrum::from_probs(vec![0.3, 0.3, 0.2, 0.2]).unwrap();
        assert!(matches!(find_partition(&f, 3), Err(Error::NoPartition { d: 3 })));
    }

    #[test]
    fn float_partition_uses_tolerance() {
        let s = SchmidtSpectrum::from_probs(vec![0.25, 0.25, 0.25, 0.25]).unwrap();
        assert_eq!(find_partition(&s, 2).unwrap().assignment(), &[0, 0, 1, 1]);
    }

    #[test]
    fn fourier_table_from_identity_partition() {
        for d in 2..6 {
            let s = SchmidtSpectrum::uniform(d);
            let part = Partition::new((0..d).collect());
            let p = phases_from_partition(&part, d, d).unwrap();
            for m in 0..d {
                for k in 0..d {
                    assert!(close(p.get(m, k), TAU * ((m + 1) * (k + 1)) as f64 / d as f64));
                }
            }
            assert!(p.residual(&s) < 1e-12);
        }
    }

    #[test]
    fn worked_example_partition_phases() {
        let s = rational(&[(1, 2), (1, 3), (1, 6)]);
        let part = find_partition(&s, 2).unwrap();
        let p = phases_from_partition(&part, 2, 3).unwrap();
        assert!(close(p.get(0, 0), PI) && close(p.get(0, 1), 0.0) && close(p.get(0, 2), 0.0));
        assert!(p.residual(&s) < 1e-12);
        let canon = p.canonical();
        assert_eq!(canon.row(0), &[0.0, 0.0, 0.0]);
        assert!(close(canon.get(1, 0), 0.0) && close(canon.get(1, 1), PI) && close(canon.get(1, 2), PI));
    }

    #[test]
    fn general_falls_back_to_partition() {
        let s = SchmidtSpectrum::uniform(6);
        let (p, how) = solve_with_strategy(&s, 3, &NumericalSearch::default()).unwrap();
        assert_eq!(how, Strategy::Partition);
        assert!(p.residual(&s) < 1e-12);
    }

    #[test]
    fn general_rejects_infeasible() {
        let s = rational(&[(1, 2), (1, 3), (1, 6)]);
        assert!(matches!(
            solve_general(&s, 3),
            Err(Error::InfeasibleSpectrum { d: 3, .. })
        ));
        assert!(matches!(solve_general(&s, 1), Err(Error::InvalidDimension { d: 1 })));
    }

    #[test]
    fn numerical_search_finds_uniform_phases() {
        let s = SchmidtSpectrum::from_probs(vec![0.25; 4]).unwrap();
        let p = NumericalSearch::default().search(&s, 3).unwrap();
        assert!(p.residual(&s) < RESIDUAL_TOLERANCE);
    }

    #[test]
    fn canonical_keeps_residual() {
        let s = SchmidtSpectrum::from_probs(vec![0.4, 0.3, 0.3]).unwrap();
        let p = solve_d2(&s).unwrap().shift_row(1, 1.234);
        let c = p.canonical();
        assert!(c.residual(&s) < 1e-12);
        assert_eq!(c.get(1, 0), 0.0);
    }
}
