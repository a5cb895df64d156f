//! Exact state evolution of the multiphase-oracle Grover iteration.
//!
//! All non-solution basis states evolve identically, so the dynamics close
//! in the (M+1)-dimensional basis spanned by the normalized non-solution
//! superposition |A> and the M solution states. The amplitude stored on
//! |A> carries the sqrt(N-M) rescaling of the per-basis-state amplitude,
//! which keeps the state vector normalized in the ordinary sense.
//!
//! Three independent code paths cover the same dynamics and are held
//! against each other by the tests: the reduced-basis matrix, the
//! per-amplitude recursion, and a full N-dimensional reference built from
//! the product of single-solution reflections and the diffusion reflection.

use crate::error::{Error, Result};
use crate::kinematics::RegisterShape;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

/// Upper bound on the register size accepted by the full-basis reference
/// path. The reference exists to validate the reduced basis, not to scale.
pub const FULL_BASIS_CAP: u64 = 4096;

/// Diffusion phase omega plus one oracle phase per solution, reduced to
/// [0, 2pi). A phase given as 2pi stores as 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseAssignment {
    omega: f64,
    phis: Vec<f64>,
}

impl PhaseAssignment {
    pub fn new(omega: f64, phis: Vec<f64>) -> Self {
        Self {
            omega: reduce_phase(omega),
            phis: phis.into_iter().map(reduce_phase).collect(),
        }
    }

    /// All oracle phases and the diffusion phase set to the same value.
    pub fn equal(phase: f64, m: usize) -> Self {
        Self::new(phase, vec![phase; m])
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    /// Oracle phases with the first two swapped; used by the swap-symmetry
    /// checks of the two-solution pipeline.
    pub fn swapped(&self) -> Self {
        let mut phis = self.phis.clone();
        if phis.len() >= 2 {
            phis.swap(0, 1);
        }
        Self {
            omega: self.omega,
            phis,
        }
    }
}

fn reduce_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r == TAU {
        0.0
    } else {
        r
    }
}

/// Register state in the reduced basis: amplitude `a` on |A> plus one
/// amplitude per solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    pub a: Complex64,
    pub betas: Vec<Complex64>,
}

impl ReducedState {
    /// |a|^2 + sum |beta_j|^2; equals 1 for a physical state.
    pub fn norm_sq(&self) -> f64 {
        self.a.norm_sqr() + self.betas.iter().map(|b| b.norm_sqr()).sum::<f64>()
    }

    /// Absolute deviation of the squared norm from one.
    pub fn norm_defect(&self) -> f64 {
        (self.norm_sq() - 1.0).abs()
    }
}

/// Equal superposition of all register states, expressed in the reduced
/// basis: `a = sqrt((n-m)/n)`, `beta_j = 1/sqrt(n)`.
pub fn initial_state(shape: RegisterShape) -> ReducedState {
    let n = shape.n() as f64;
    let m = shape.m() as f64;
    ReducedState {
        a: Complex64::new(((n - m) / n).sqrt(), 0.0),
        betas: vec![Complex64::new(1.0 / n.sqrt(), 0.0); shape.m() as usize],
    }
}

/// One Grover iteration (oracle then diffusion) as an (M+1)x(M+1) unitary
/// in the reduced basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl GroverMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Largest absolute entry of `G^dagger G - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.entry(k, i).conj() * self.entry(k, j);
                }
                if i == j {
                    acc -= Complex64::new(1.0, 0.0);
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

/// Builds the reduced-basis Grover iteration for the given shape and
/// phases. Fails when the oracle phase count does not match the shape.
pub fn grover_matrix(shape: RegisterShape, phases: &PhaseAssignment) -> Result<GroverMatrix> {
    let m = shape.m() as usize;
    if phases.phis().len() != m {
        return Err(Error::PhaseCountMismatch {
            expected: m,
            got: phases.phis().len(),
        });
    }
    let n = shape.n() as f64;
    let mf = shape.m() as f64;
    let eiw = Complex64::from_polar(1.0, phases.omega());
    let c = Complex64::new(1.0, 0.0) - eiw;
    let root = (n - mf).sqrt();
    let dim = m + 1;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];

    entries[0] = (Complex64::new(mf, 0.0) + eiw * (n - mf)) / n;
    for j in 0..m {
        let eij = Complex64::from_polar(1.0, phases.phis()[j]);
        entries[j + 1] = -(root / n) * c * eij;
        entries[(j + 1) * dim] = -(root / n) * c;
        for k in 0..m {
            let eik = Complex64::from_polar(1.0, phases.phis()[k]);
            entries[(j + 1) * dim + (k + 1)] = if k == j {
                eik * (Complex64::new(1.0, 0.0) - c / n)
            } else {
                -(c / n) * eik
            };
        }
    }
    Ok(GroverMatrix { dim, entries })
}

/// Applies one iteration as a matrix-vector product.
pub fn apply_iteration(state: &ReducedState, g: &GroverMatrix) -> Result<ReducedState> {
    let dim = state.betas.len() + 1;
    if dim != g.dim {
        return Err(Error::DimensionMismatch {
            state: dim,
            matrix: g.dim,
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (row, slot) in out.iter_mut().enumerate() {
        let mut acc = g.entry(row, 0) * state.a;
        for (k, beta) in state.betas.iter().enumerate() {
            acc += g.entry(row, k + 1) * beta;
        }
        *slot = acc;
    }
    Ok(ReducedState {
        a: out[0],
        betas: out[1..].to_vec(),
    })
}

/// One iteration through the per-amplitude recursion, kept as an
/// independent code path for cross-validation against [`apply_iteration`].
///
/// The recursion acts on the per-basis-state amplitude
/// `alpha = a / sqrt(n - m)`:
///
/// ```text
/// alpha' = alpha (m + e^{iw}(n-m))/n - (1 - e^{iw})/n * sum_j e^{i phi_j} beta_j
/// beta_h' = beta_h e^{i phi_h} - alpha (1 - e^{iw})(n-m)/n
///           - (1 - e^{iw})/n * sum_j e^{i phi_j} beta_j
/// ```
pub fn recursion_step(
    state: &ReducedState,
    shape: RegisterShape,
    phases: &PhaseAssignment,
) -> Result<ReducedState> {
    let m = shape.m() as usize;
    if phases.phis().len() != m || state.betas.len() != m {
        return Err(Error::PhaseCountMismatch {
            expected: m,
            got: phases.phis().len().max(state.betas.len()),
        });
    }
    let n = shape.n() as f64;
    let mf = shape.m() as f64;
    let root = (n - mf).sqrt();
    let eiw = Complex64::from_polar(1.0, phases.omega());
    let c = Complex64::new(1.0, 0.0) - eiw;

    let alpha = state.a / root;
    let marked_sum: Complex64 = phases
        .phis()
        .iter()
        .zip(&state.betas)
        .map(|(&phi, beta)| Complex64::from_polar(1.0, phi) * beta)
        .sum();

    let alpha_next =
        alpha * (Complex64::new(mf, 0.0) + eiw * (n - mf)) / n - c / n * marked_sum;
    let betas_next = phases
        .phis()
        .iter()
        .zip(&state.betas)
        .map(|(&phi, beta)| {
            beta * Complex64::from_polar(1.0, phi) - alpha * c * ((n - mf) / n)
                - c / n * marked_sum
        })
        .collect();

    Ok(ReducedState {
        a: alpha_next * root,
        betas: betas_next,
    })
}

/// Total probability of measuring any solution: `sum_j |beta_j|^2`.
pub fn success_probability(state: &ReducedState) -> f64 {
    state.betas.iter().map(|b| b.norm_sqr()).sum()
}

/// Success probability per iteration for `t = 0..=t_max`, plus the
/// per-solution breakdown at every step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunTrace {
    pub shape: RegisterShape,
    pub phases: PhaseAssignment,
    /// Total success probability, one entry per iteration count.
    pub probs: Vec<f64>,
    /// `per_solution[t][j] = |beta_j(t)|^2`.
    pub per_solution: Vec<Vec<f64>>,
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Evolves the equal superposition for `t_max` iterations in the reduced
/// basis, recording the success probability after every step.
pub fn run_trace(shape: RegisterShape, phases: &PhaseAssignment, t_max: u64) -> Result<RunTrace> {
    let g = grover_matrix(shape, phases)?;
    let mut state = initial_state(shape);
    let mut probs = Vec::with_capacity(t_max as usize + 1);
    let mut per_solution = Vec::with_capacity(t_max as usize + 1);
    probs.push(success_probability(&state));
    per_solution.push(state.betas.iter().map(|b| b.norm_sqr()).collect());
    for _ in 0..t_max {
        state = apply_iteration(&state, &g)?;
        probs.push(success_probability(&state));
        per_solution.push(state.betas.iter().map(|b| b.norm_sqr()).collect());
    }
    Ok(RunTrace {
        shape,
        phases: phases.clone(),
        probs,
        per_solution,
    })
}

/// Full N-dimensional reference trace. The oracle is applied as the product
/// of single-solution reflections and the diffusion as the generalized
/// reflection about the equal superposition; no reduced-basis structure is
/// assumed. Capped at [`FULL_BASIS_CAP`] because its only job is to
/// validate the reduced path.
pub fn full_basis_trace(
    shape: RegisterShape,
    solution_indices: &[u64],
    phases: &PhaseAssignment,
    t_max: u64,
) -> Result<RunTrace> {
    if shape.n() > FULL_BASIS_CAP {
        return Err(Error::ReferenceTooLarge {
            n: shape.n(),
            cap: FULL_BASIS_CAP,
        });
    }
    let m = shape.m() as usize;
    if solution_indices.len() != m {
        return Err(Error::InvalidSolutions {
            reason: format!("need {m} indices, got {}", solution_indices.len()),
        });
    }
    if solution_indices.iter().any(|&s| s >= shape.n()) {
        return Err(Error::InvalidSolutions {
            reason: format!("index out of range for n = {}", shape.n()),
        });
    }
    let mut sorted = solution_indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != m {
        return Err(Error::InvalidSolutions {
            reason: "duplicate solution index".into(),
        });
    }
    if phases.phis().len() != m {
        return Err(Error::PhaseCountMismatch {
            expected: m,
            got: phases.phis().len(),
        });
    }

    let n = shape.n() as usize;
    let nf = n as f64;
    let amp0 = Complex64::new(1.0 / nf.sqrt(), 0.0);
    let mut state = vec![amp0; n];
    let eiw = Complex64::from_polar(1.0, phases.omega());
    let c = Complex64::new(1.0, 0.0) - eiw;
    let oracle_factors: Vec<Complex64> = phases
        .phis()
        .iter()
        .map(|&phi| Complex64::from_polar(1.0, phi))
        .collect();

    let solution_prob = |state: &[Complex64]| -> Vec<f64> {
        solution_indices
            .iter()
            .map(|&s| state[s as usize].norm_sqr())
            .collect()
    };

    let mut per_solution = vec![solution_prob(&state)];
    let mut probs = vec![per_solution[0].iter().sum::<f64>()];

    for _ in 0..t_max {
        // oracle: each single-solution reflection multiplies exactly one
        // amplitude by e^{i phi_j}
        for (&s, &factor) in solution_indices.iter().zip(&oracle_factors) {
            state[s as usize] *= factor;
        }
        // diffusion: v -> v - (1 - e^{iw}) <psi0|v> |psi0>
        let overlap: Complex64 = state.iter().sum::<Complex64>() / nf.sqrt();
        let shift = c * overlap / nf.sqrt();
        for amp in &mut state {
            *amp -= shift;
        }
        let per = solution_prob(&state);
        probs.push(per.iter().sum::<f64>());
        per_solution.push(per);
    }
    Ok(RunTrace {
        shape,
        phases: phases.clone(),
        probs,
        per_solution,
    })
}

/// Global maximum of a trace and the iteration reaching it; exact ties go
/// to the smallest iteration count.
pub fn peak_probability(trace: &RunTrace) -> Result<(f64, u64)> {
    if trace.probs.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut best = trace.probs[0];
    let mut at = 0u64;
    for (t, &p) in trace.probs.iter().enumerate().skip(1) {
        if p > best {
            best = p;
            at = t as u64;
        }
    }
    Ok((best, at))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn shape(n: u64, m: u64) -> RegisterShape {
        RegisterShape::new(n, m).unwrap()
    }

    #[test]
    fn phases_reduce_mod_two_pi() {
        let p = PhaseAssignment::new(TAU, vec![2.5 * TAU, -0.5]);
        assert_eq!(p.omega(), 0.0);
        assert!((p.phis()[0] - 0.5 * TAU).abs() < 1e-12);
        assert!((p.phis()[1] - (TAU - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn initial_state_examples() {
        let s = initial_state(shape(4, 1));
        assert!((s.a.re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((s.betas[0].re - 0.5).abs() < 1e-15);

        let s = initial_state(shape(200, 2));
        assert!((s.a.re - (198f64 / 200.0).sqrt()).abs() < 1e-15);
        assert!((s.betas[0].re - 1.0 / 200f64.sqrt()).abs() < 1e-15);
        assert!(s.norm_defect() < 1e-14);

        let s = initial_state(shape(2, 1));
        assert!((s.a.re - s.betas[0].re).abs() < 1e-15);
    }

    #[test]
    fn zero_omega_matrix_is_diagonal_of_oracle_phases() {
        let phases = PhaseAssignment::new(0.0, vec![1.0, 2.5]);
        let g = grover_matrix(shape(50, 2), &phases).unwrap();
        for row in 0..3 {
            for col in 0..3 {
                let e = g.entry(row, col);
                if row == col {
                    let expect = match row {
                        0 => Complex64::new(1.0, 0.0),
                        j => Complex64::from_polar(1.0, phases.phis()[j - 1]),
                    };
                    assert!((e - expect).norm() < 1e-15);
                } else {
                    assert!(e.norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn standard_single_solution_matrix() {
        // n = 4, m = 1 with flip-sign phases: one iteration is exact
        let g = grover_matrix(shape(4, 1), &PhaseAssignment::equal(PI, 1)).unwrap();
        assert!(g.unitarity_defect() < 1e-15);
        let s1 = apply_iteration(&initial_state(shape(4, 1)), &g).unwrap();
        assert!((success_probability(&s1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn deterministic_schedule_drains_the_a_amplitude() {
        let sh = shape(200, 2);
        let phi = sh.optimal_phase().unwrap();
        let g = grover_matrix(sh, &PhaseAssignment::equal(phi, 2)).unwrap();
        let mut s = initial_state(sh);
        for _ in 0..sh.required_iterations() {
            s = apply_iteration(&s, &g).unwrap();
        }
        assert!(s.a.norm() <= 1e-3, "|a| = {}", s.a.norm());
        assert!(success_probability(&s) >= 1.0 - 1e-6);
    }

    #[test]
    fn apply_iteration_checks_dimensions() {
        let g = grover_matrix(shape(50, 2), &PhaseAssignment::equal(PI, 2)).unwrap();
        let bad = initial_state(shape(50, 3));
        assert!(matches!(
            apply_iteration(&bad, &g),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn grover_matrix_rejects_wrong_phase_count() {
        let phases = PhaseAssignment::new(1.0, vec![1.0]);
        assert!(matches!(
            grover_matrix(shape(50, 2), &phases),
            Err(Error::PhaseCountMismatch { .. })
        ));
    }

    #[test]
    fn recursion_matches_matrix_path() {
        let sh = shape(200, 2);
        let phi = sh.optimal_phase().unwrap();
        let phases = PhaseAssignment::equal(phi, 2);
        let g = grover_matrix(sh, &phases).unwrap();
        let mut via_matrix = initial_state(sh);
        let mut via_recursion = initial_state(sh);
        for _ in 0..20 {
            via_matrix = apply_iteration(&via_matrix, &g).unwrap();
            via_recursion = recursion_step(&via_recursion, sh, &phases).unwrap();
        }
        assert!((via_matrix.a - via_recursion.a).norm() < 1e-12);
        for (x, y) in via_matrix.betas.iter().zip(&via_recursion.betas) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_omega_recursion_only_rotates_marked_amplitudes() {
        let sh = shape(64, 2);
        let phases = PhaseAssignment::new(0.0, vec![0.7, 1.9]);
        let s0 = initial_state(sh);
        let s1 = recursion_step(&s0, sh, &phases).unwrap();
        assert!((s1.a - s0.a).norm() < 1e-15);
        for (j, (b1, b0)) in s1.betas.iter().zip(&s0.betas).enumerate() {
            let expect = b0 * Complex64::from_polar(1.0, phases.phis()[j]);
            assert!((b1 - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn run_trace_with_flip_sign_phases_matches_closed_form() {
        let sh = shape(200, 3);
        let trace = run_trace(sh, &PhaseAssignment::equal(PI, 3), 24).unwrap();
        assert!((trace.probs[6] - 0.99936).abs() < 1e-5);
        for (t, &p) in trace.probs.iter().enumerate() {
            let expect = sh.closed_form_probability(t as u64);
            assert!((p - expect).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn zero_omega_trace_is_constant() {
        let sh = shape(128, 2);
        let trace = run_trace(sh, &PhaseAssignment::new(0.0, vec![1.0, 2.0]), 30).unwrap();
        for &p in &trace.probs {
            assert!((p - sh.ratio()).abs() < 1e-13);
        }
        let (p, _) = peak_probability(&trace).unwrap();
        assert!((p - sh.ratio()).abs() < 1e-13);
    }

    #[test]
    fn peak_ties_resolve_to_the_smallest_iteration() {
        let sh = shape(128, 2);
        let trace = RunTrace {
            shape: sh,
            phases: PhaseAssignment::equal(0.0, 2),
            probs: vec![0.2, 0.7, 0.7, 0.7, 0.1],
            per_solution: vec![],
        };
        assert_eq!(peak_probability(&trace).unwrap(), (0.7, 1));
    }

    #[test]
    fn full_basis_agrees_with_reduced_basis() {
        let sh = shape(16, 2);
        let phases = PhaseAssignment::new(2.1, vec![0.9, 5.3]);
        let reduced = run_trace(sh, &phases, 25).unwrap();
        let full = full_basis_trace(sh, &[3, 11], &phases, 25).unwrap();
        for t in 0..=25 {
            assert!(
                (reduced.probs[t] - full.probs[t]).abs() < 1e-10,
                "t = {t}: {} vs {}",
                reduced.probs[t],
                full.probs[t]
            );
        }
    }

    #[test]
    fn solution_placement_does_not_matter() {
        let sh = shape(16, 2);
        let phases = PhaseAssignment::new(1.3, vec![2.2, 4.0]);
        let a = full_basis_trace(sh, &[0, 1], &phases, 20).unwrap();
        let b = full_basis_trace(sh, &[5, 11], &phases, 20).unwrap();
        for t in 0..=20 {
            assert!((a.probs[t] - b.probs[t]).abs() < 1e-12);
        }
    }

    #[test]
    fn full_basis_guards() {
        let phases = PhaseAssignment::equal(PI, 1);
        assert!(matches!(
            full_basis_trace(shape(8192, 1), &[0], &phases, 1),
            Err(Error::ReferenceTooLarge { .. })
        ));
        assert!(full_basis_trace(shape(8, 1), &[9], &phases, 1).is_err());
        let phases2 = PhaseAssignment::equal(PI, 2);
        assert!(full_basis_trace(shape(8, 2), &[3, 3], &phases2, 1).is_err());
    }

    #[test]
    fn swap_symmetry_of_total_probability() {
        let sh = shape(200, 2);
        let phases = PhaseAssignment::new(2.3499676, vec![2.9, 1.4]);
        let fwd = run_trace(sh, &phases, 40).unwrap();
        let rev = run_trace(sh, &phases.swapped(), 40).unwrap();
        for t in 0..=40 {
            assert!((fwd.probs[t] - rev.probs[t]).abs() < 1e-12);
            // per-solution probabilities permute
            assert!((fwd.per_solution[t][0] - rev.per_solution[t][1]).abs() < 1e-12);
            assert!((fwd.per_solution[t][1] - rev.per_solution[t][0]).abs() < 1e-12);
        }
    }

    #[test]
    fn peak_probability_examples() {
        let sh = shape(200, 2);
        let phi = sh.optimal_phase().unwrap();
        let trace = run_trace(sh, &PhaseAssignment::equal(phi, 2), 12).unwrap();
        let (p, t) = peak_probability(&trace).unwrap();
        assert!(p >= 1.0 - 1e-6);
        assert_eq!(t, 8);

        let sh = shape(200, 3);
        let trace = run_trace(sh, &PhaseAssignment::equal(PI, 3), 24).unwrap();
        let (_, t) = peak_probability(&trace).unwrap();
        assert_eq!(t, 6);
    }
}
