//! Exact steady-state solvers used as ground truth: Ohm's law, series RLC,
//! general N-mesh complex KVL analysis, a superposition cross-validator, and
//! the closed-form amplifier pair.
//!
//! Phase convention: the reported phase is the angle of the current phasor
//! relative to a 0-degree source, in degrees in (-180, 180]. A net-inductive
//! branch therefore reports a negative phase. The phase of a zero-magnitude
//! current is 0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitClass, CircuitInstance, AMP_MIDDLE_RESISTANCE};
use crate::error::{Error, Result};

/// Relative pivot threshold below which the mesh matrix is reported singular.
const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// Magnitude and phase of one branch current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchResponse {
    /// Current magnitude in amperes.
    pub current_mag: f64,
    /// Phase in degrees, in (-180, 180].
    pub phase_deg: f64,
}

impl BranchResponse {
    pub fn from_phasor(current: Complex64) -> Self {
        BranchResponse {
            current_mag: current.norm(),
            phase_deg: phase_degrees(current),
        }
    }
}

/// Phase of a phasor in degrees, mapped into (-180, 180]; 0 for a zero phasor.
pub fn phase_degrees(c: Complex64) -> f64 {
    if c.re == 0.0 && c.im == 0.0 {
        return 0.0;
    }
    let deg = c.arg().to_degrees();
    if deg <= -180.0 {
        deg + 360.0
    } else {
        deg
    }
}

/// Full mesh-analysis solution of a circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshSolution {
    /// One circulating current phasor per mesh.
    pub mesh_currents: Vec<Complex64>,
    /// Signed sums of incident mesh currents, one per branch.
    pub branch_currents: Vec<Complex64>,
}

/// i = V / R.
pub fn solve_ohm(v: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() || !v.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "solve_ohm requires finite v and r > 0, got v = {v}, r = {r}"
        )));
    }
    Ok(v / r)
}

/// Single-loop series R, X_L, X_C branch driven by a 0-degree source.
pub fn solve_series_rlc(e: f64, r: f64, xl: f64, xc: f64) -> Result<BranchResponse> {
    let z = Complex64::new(r, xl - xc);
    if z.norm() == 0.0 {
        return Err(Error::DegenerateCircuit(
            "series branch has zero impedance".into(),
        ));
    }
    Ok(BranchResponse::from_phasor(Complex64::new(e, 0.0) / z))
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting on complex
/// values. A pivot smaller than 1e-12 times its row's infinity norm is
/// reported as a degenerate (singular) system.
pub fn solve_complex_system(
    mut a: Vec<Vec<Complex64>>,
    mut b: Vec<Complex64>,
) -> Result<Vec<Complex64>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }

    let mut scale: Vec<f64> = a
        .iter()
        .map(|row| row.iter().map(|z| z.norm()).fold(0.0, f64::max))
        .collect();

    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col][col].norm();
        for row in col + 1..n {
            let candidate = a[row][col].norm();
            if candidate > best {
                pivot = row;
                best = candidate;
            }
        }
        if best <= SINGULARITY_THRESHOLD * scale[pivot] || best == 0.0 {
            return Err(Error::DegenerateCircuit(format!(
                "singular mesh matrix: pivot {best:.3e} at column {col}"
            )));
        }
        if pivot != col {
            a.swap(col, pivot);
            b.swap(col, pivot);
            scale.swap(col, pivot);
        }
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let sub = factor * a[col][k];
                a[row][k] -= sub;
            }
            let sub = factor * b[col];
            b[row] -= sub;
        }
    }

    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut sum = b[row];
        for col in row + 1..n {
            sum -= a[row][col] * x[col];
        }
        x[row] = sum / a[row][row];
    }
    Ok(x)
}

/// Assembles and solves the mesh impedance system of a circuit.
///
/// The mesh matrix entry `M[p][q]` is the sum over branches shared by meshes
/// p and q of the branch impedance times both orientations; the diagonal holds
/// each loop's total impedance. The right-hand side is the signed sum of
/// branch EMFs around each mesh. The residual of the solved system is checked
/// against `1e-9 * (1 + max |E|)`.
pub fn solve_mesh(circuit: &CircuitInstance) -> Result<MeshSolution> {
    let topo = circuit.class.topology();
    let n = topo.mesh_count();

    let impedances: Vec<Complex64> = circuit.branches.iter().map(|b| b.impedance()).collect();
    let emfs: Vec<Complex64> = circuit.branches.iter().map(|b| b.emf()).collect();

    let mut matrix = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for (p, mesh) in topo.meshes.iter().enumerate() {
        for &(branch, orientation) in mesh {
            let sign = f64::from(orientation);
            rhs[p] += sign * emfs[branch];
            for (q, other) in topo.meshes.iter().enumerate() {
                for &(other_branch, other_orientation) in other {
                    if other_branch == branch {
                        matrix[p][q] += sign * f64::from(other_orientation) * impedances[branch];
                    }
                }
            }
        }
    }

    let mesh_currents = solve_complex_system(matrix.clone(), rhs.clone())?;

    let emf_norm = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tolerance = 1e-9 * (1.0 + emf_norm);
    for p in 0..n {
        let mut lhs = Complex64::new(0.0, 0.0);
        for q in 0..n {
            lhs += matrix[p][q] * mesh_currents[q];
        }
        let residual = (lhs - rhs[p]).norm();
        if residual > tolerance {
            return Err(Error::DegenerateCircuit(format!(
                "KVL residual {residual:.3e} exceeds {tolerance:.3e} in mesh {p}"
            )));
        }
    }

    let mut branch_currents = vec![Complex64::new(0.0, 0.0); topo.branch_count];
    for (p, mesh) in topo.meshes.iter().enumerate() {
        for &(branch, orientation) in mesh {
            branch_currents[branch] += f64::from(orientation) * mesh_currents[p];
        }
    }

    Ok(MeshSolution {
        mesh_currents,
        branch_currents,
    })
}

/// Solves once per nonzero source with every other EMF set to exactly zero
/// and sums the resulting currents. Cross-validates [`solve_mesh`] through
/// linearity.
pub fn solve_by_superposition(circuit: &CircuitInstance) -> Result<MeshSolution> {
    let topo = circuit.class.topology();
    let mut total = MeshSolution {
        mesh_currents: vec![Complex64::new(0.0, 0.0); topo.mesh_count()],
        branch_currents: vec![Complex64::new(0.0, 0.0); topo.branch_count],
    };

    for source in 0..circuit.branches.len() {
        if circuit.branches[source].e == 0.0 {
            continue;
        }
        let mut single = circuit.clone();
        for (index, branch) in single.branches.iter_mut().enumerate() {
            if index != source {
                branch.e = 0.0;
            }
        }
        let solution = solve_mesh(&single)?;
        for (acc, term) in total.mesh_currents.iter_mut().zip(&solution.mesh_currents) {
            *acc += term;
        }
        for (acc, term) in total
            .branch_currents
            .iter_mut()
            .zip(&solution.branch_currents)
        {
            *acc += term;
        }
    }
    Ok(total)
}

/// Magnitude and phase of the circuit's probe-branch current.
///
/// Every class is solved by mesh analysis except `amp_electronic`, whose
/// declared model is Ohm's law per loop ([`solve_amplifier_electronic`]).
pub fn probe_response(circuit: &CircuitInstance) -> Result<BranchResponse> {
    if circuit.class == CircuitClass::AmpElectronic {
        let current = solve_amplifier_electronic(
            circuit.branches[0].r,
            circuit.branches[2].r,
            circuit.branches[0].e,
        )?;
        return Ok(BranchResponse {
            current_mag: current,
            phase_deg: 0.0,
        });
    }
    let solution = solve_mesh(circuit)?;
    Ok(BranchResponse::from_phasor(
        solution.branch_currents[circuit.class.probe_branch()],
    ))
}

fn validate_amplifier_inputs(r1: f64, r6: f64, v: f64) -> Result<()> {
    if !(r1 > 0.0) || !(r6 > 0.0) || !r1.is_finite() || !r6.is_finite() || !v.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "amplifier requires finite v and positive r1, r6; got r1 = {r1}, r6 = {r6}, v = {v}"
        )));
    }
    Ok(())
}

/// Output current of the two-loop electrical amplifier with R3 fixed at 1:
/// i6 = v R3 / (r1 R3 + r1 r6 + R3 r6).
pub fn solve_amplifier_electrical(r1: f64, r6: f64, v: f64) -> Result<f64> {
    validate_amplifier_inputs(r1, r6, v)?;
    let r3 = AMP_MIDDLE_RESISTANCE;
    Ok(v * r3 / (r1 * r3 + r1 * r6 + r3 * r6))
}

/// Output current of the electronic amplifier under the zero-base-current
/// model: a divider sets the middle-node voltage, Ohm's law the output loop.
pub fn solve_amplifier_electronic(r1: f64, r6: f64, v: f64) -> Result<f64> {
    validate_amplifier_inputs(r1, r6, v)?;
    let r3 = AMP_MIDDLE_RESISTANCE;
    let v_mid = v * r3 / (r1 + r3);
    Ok(v_mid / r6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::BranchElement;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual}"
        );
    }

    #[test]
    fn ohm_examples() {
        assert_eq!(solve_ohm(10.0, 5.0).unwrap(), 2.0);
        assert_eq!(solve_ohm(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(solve_ohm(0.1, 100.0).unwrap(), 0.001);
        assert!(solve_ohm(1.0, 0.0).is_err());
        assert!(solve_ohm(1.0, -2.0).is_err());
    }

    #[test]
    fn series_rlc_examples() {
        let resp = solve_series_rlc(10.0, 3.0, 4.0, 0.0).unwrap();
        assert_close(resp.current_mag, 2.0, 1e-12);
        assert_close(resp.phase_deg, -(4.0f64 / 3.0).atan().to_degrees(), 1e-9);

        let resp = solve_series_rlc(10.0, 5.0, 0.0, 0.0).unwrap();
        assert_close(resp.current_mag, 2.0, 1e-12);
        assert_eq!(resp.phase_deg, 0.0);

        // Resonance: reactances cancel.
        let resp = solve_series_rlc(10.0, 2.0, 7.0, 7.0).unwrap();
        assert_close(resp.current_mag, 5.0, 1e-12);
        assert_eq!(resp.phase_deg, 0.0);

        assert!(solve_series_rlc(10.0, 0.0, 3.0, 3.0).is_err());
    }

    #[test]
    fn complex_solve_handles_known_system() {
        // (1+1j) x + 2 y = 3+1j ; 2 x + (1-1j) y = 3-1j  =>  x = y = 1.
        let a = vec![
            vec![Complex64::new(1.0, 1.0), Complex64::new(2.0, 0.0)],
            vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, -1.0)],
        ];
        let b = vec![Complex64::new(3.0, 1.0), Complex64::new(3.0, -1.0)];
        let x = solve_complex_system(a, b).unwrap();
        assert!((x[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((x[1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn complex_solve_needs_pivoting() {
        // Zero leading diagonal forces a row swap.
        let a = vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ];
        let b = vec![Complex64::new(2.0, 0.0), Complex64::new(5.0, 0.0)];
        let x = solve_complex_system(a, b).unwrap();
        assert!((x[0] - Complex64::new(5.0, 0.0)).norm() < 1e-12);
        assert!((x[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn complex_solve_reports_singular_matrix() {
        let a = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        let b = vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
        assert!(matches!(
            solve_complex_system(a, b),
            Err(Error::DegenerateCircuit(_))
        ));
    }

    #[test]
    fn amplifier_electrical_closed_form() {
        assert_close(solve_amplifier_electrical(1.0, 1.0, 3.0).unwrap(), 1.0, 1e-12);
        assert_close(solve_amplifier_electrical(2.0, 3.0, 11.0).unwrap(), 1.0, 1e-12);
        assert_close(
            solve_amplifier_electrical(100.0, 1.0, 1.0).unwrap(),
            1.0 / 201.0,
            1e-12,
        );
        assert!(solve_amplifier_electrical(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn amplifier_electronic_closed_form() {
        assert_close(solve_amplifier_electronic(1.0, 1.0, 2.0).unwrap(), 1.0, 1e-12);
        assert_close(solve_amplifier_electronic(3.0, 0.5, 8.0).unwrap(), 4.0, 1e-12);
        assert_close(solve_amplifier_electronic(1.0, 1.0, 0.1).unwrap(), 0.05, 1e-12);
        assert!(solve_amplifier_electronic(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn amplifier_models_differ() {
        let electrical = solve_amplifier_electrical(1.0, 1.0, 2.0).unwrap();
        let electronic = solve_amplifier_electronic(1.0, 1.0, 2.0).unwrap();
        assert_close(electrical, 2.0 / 3.0, 1e-12);
        assert_close(electronic, 1.0, 1e-12);
    }

    #[test]
    fn mesh_matches_amplifier_closed_form() {
        let circuit = CircuitInstance::new(
            CircuitClass::AmpElectrical,
            vec![
                BranchElement::sourced_resistor(2.0, 11.0),
                BranchElement::resistor(1.0),
                BranchElement::resistor(3.0),
            ],
        )
        .unwrap();
        let solution = solve_mesh(&circuit).unwrap();
        let i6 = solution.branch_currents[2];
        assert_close(i6.re, 1.0, 1e-12);
        assert_close(i6.im, 0.0, 1e-12);

        let probe = probe_response(&circuit).unwrap();
        assert_close(probe.current_mag, 1.0, 1e-12);
        assert_eq!(probe.phase_deg, 0.0);
    }

    #[test]
    fn single_mesh_reduces_to_series_solution() {
        let circuit = CircuitInstance::new(
            CircuitClass::LcrOneLoop,
            vec![BranchElement {
                r: 3.0,
                xl: 4.0,
                xc: 0.0,
                e: 10.0,
                source_phase: 0.0,
            }],
        )
        .unwrap();
        let mesh = probe_response(&circuit).unwrap();
        let series = solve_series_rlc(10.0, 3.0, 4.0, 0.0).unwrap();
        assert_close(mesh.current_mag, series.current_mag, 1e-12);
        assert_close(mesh.phase_deg, series.phase_deg, 1e-12);
    }

    #[test]
    fn probe_response_reduces_to_ohm_for_1a() {
        let circuit = CircuitInstance::new(
            CircuitClass::ResistiveOneLoop,
            vec![BranchElement::sourced_resistor(5.0, 10.0)],
        )
        .unwrap();
        let resp = probe_response(&circuit).unwrap();
        assert_close(resp.current_mag, 2.0, 1e-12);
        assert_eq!(resp.phase_deg, 0.0);
    }

    #[test]
    fn mirror_symmetric_four_mesh_currents_reflect() {
        // 3x3-node grid, horizontals b0..b5, verticals b6..b11. Element values
        // symmetric under left-right reflection, single source on the center
        // vertical branch b7.
        let r_h = [2.0, 2.0, 3.0, 3.0, 4.0, 4.0];
        let r_v = [5.0, 6.0, 5.0, 7.0, 8.0, 7.0];
        let mut branches = Vec::new();
        for r in r_h {
            branches.push(BranchElement::resistor(r));
        }
        for r in r_v {
            branches.push(BranchElement::resistor(r));
        }
        branches[7].e = 12.0;
        let circuit = CircuitInstance::new(CircuitClass::ResistiveFourLoop, branches).unwrap();
        let solution = solve_mesh(&circuit).unwrap();
        let i = &solution.branch_currents;

        // Horizontal branches map to their mirror with reversed direction.
        for (a, b) in [(0usize, 1usize), (2, 3), (4, 5)] {
            assert!((i[a] + i[b]).norm() < 1e-9, "branches {a}/{b}");
        }
        // Outer vertical branches map onto each other with direction kept.
        for (a, b) in [(6usize, 8usize), (9, 11)] {
            assert!((i[a] - i[b]).norm() < 1e-9, "branches {a}/{b}");
        }
    }

    #[test]
    fn superposition_all_sources_zero_gives_zero_currents() {
        let branches = vec![BranchElement::resistor(2.0); 7];
        let circuit = CircuitInstance::new(CircuitClass::ResistiveTwoLoop, branches).unwrap();
        let solution = solve_by_superposition(&circuit).unwrap();
        assert!(solution.branch_currents.iter().all(|c| c.norm() == 0.0));
        assert!(solution.mesh_currents.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn superposition_single_source_matches_mesh() {
        let mut branches = vec![BranchElement::resistor(1.0); 7];
        branches[0].e = 1.0;
        let circuit = CircuitInstance::new(CircuitClass::ResistiveTwoLoop, branches).unwrap();
        let by_mesh = solve_mesh(&circuit).unwrap();
        let by_superposition = solve_by_superposition(&circuit).unwrap();
        for (a, b) in by_mesh
            .branch_currents
            .iter()
            .zip(&by_superposition.branch_currents)
        {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn phase_wraps_into_half_open_range() {
        assert_eq!(phase_degrees(Complex64::new(-1.0, 0.0)), 180.0);
        assert_eq!(phase_degrees(Complex64::new(-1.0, -0.0)), 180.0);
        assert_eq!(phase_degrees(Complex64::new(0.0, 0.0)), 0.0);
        let just_below = phase_degrees(Complex64::new(-1.0, -1e-12));
        assert!(just_below > -180.0 && just_below < -179.9);
    }
}
