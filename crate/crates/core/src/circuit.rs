//! Circuit classes, grid-mesh topologies, branch elements, and the
//! per-class network architecture table.
//!
//! Circuits come in two categories (resistive-only and L,C,R) with one, two
//! or four loops each, plus the two three-branch amplifier variants. Multi-loop
//! circuits are laid out as planar grid graphs: a two-loop circuit is the
//! 2x3-node grid (7 branches), a four-loop circuit the 3x3-node grid
//! (12 branches). Branches are numbered row-major over horizontal branches
//! first, then vertical branches; the probe branch carrying the reported
//! output current is index 5 for the multi-loop classes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Middle resistance shared by the two amplifier loops, fixed at 1 ohm.
pub const AMP_MIDDLE_RESISTANCE: f64 = 1.0;

/// One of the supported circuit classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CircuitClass {
    /// Category 1, one loop: Ohm's-law circuit (R, V -> i).
    #[serde(rename = "1a")]
    ResistiveOneLoop,
    /// Category 1, two loops: 7 resistive branches, a source on every branch.
    #[serde(rename = "1b")]
    ResistiveTwoLoop,
    /// Category 1, four loops: 12 resistive branches.
    #[serde(rename = "1c")]
    ResistiveFourLoop,
    /// Category 2, one loop: series R, X_L, X_C with one source.
    #[serde(rename = "2a")]
    LcrOneLoop,
    /// Category 2, two loops: 7 L,C,R branches with a single source.
    #[serde(rename = "2b")]
    LcrTwoLoop,
    /// Category 2, four loops: 12 L,C,R branches, a source on every branch.
    #[serde(rename = "2c")]
    LcrFourLoop,
    /// Two-loop amplifier solved with mesh analysis in each loop.
    #[serde(rename = "amp_electrical")]
    AmpElectrical,
    /// Two-loop amplifier solved with Ohm's law per loop (zero base current).
    #[serde(rename = "amp_electronic")]
    AmpElectronic,
}

/// Per-mesh traversal lists: `(branch index, orientation)` with orientation
/// +1 when the mesh walks the branch along its reference direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshTopology {
    pub branch_count: usize,
    pub meshes: Vec<Vec<(usize, i8)>>,
}

/// Layer sizes of the network assigned to a circuit class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchitectureSpec {
    #[serde(rename = "inputs")]
    pub input_count: usize,
    #[serde(rename = "hidden")]
    pub hidden_layers: Vec<usize>,
    #[serde(rename = "outputs")]
    pub output_count: usize,
}

impl CircuitClass {
    pub const ALL: [CircuitClass; 8] = [
        CircuitClass::ResistiveOneLoop,
        CircuitClass::ResistiveTwoLoop,
        CircuitClass::ResistiveFourLoop,
        CircuitClass::LcrOneLoop,
        CircuitClass::LcrTwoLoop,
        CircuitClass::LcrFourLoop,
        CircuitClass::AmpElectrical,
        CircuitClass::AmpElectronic,
    ];

    /// The six category/loop classes, without the amplifier pair.
    pub const CATEGORY_CLASSES: [CircuitClass; 6] = [
        CircuitClass::ResistiveOneLoop,
        CircuitClass::ResistiveTwoLoop,
        CircuitClass::ResistiveFourLoop,
        CircuitClass::LcrOneLoop,
        CircuitClass::LcrTwoLoop,
        CircuitClass::LcrFourLoop,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CircuitClass::ResistiveOneLoop => "1a",
            CircuitClass::ResistiveTwoLoop => "1b",
            CircuitClass::ResistiveFourLoop => "1c",
            CircuitClass::LcrOneLoop => "2a",
            CircuitClass::LcrTwoLoop => "2b",
            CircuitClass::LcrFourLoop => "2c",
            CircuitClass::AmpElectrical => "amp_electrical",
            CircuitClass::AmpElectronic => "amp_electronic",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        CircuitClass::ALL
            .into_iter()
            .find(|c| c.id() == id)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown circuit class `{id}`")))
    }

    pub fn mesh_count(self) -> usize {
        match self {
            CircuitClass::ResistiveOneLoop | CircuitClass::LcrOneLoop => 1,
            CircuitClass::ResistiveTwoLoop | CircuitClass::LcrTwoLoop => 2,
            CircuitClass::ResistiveFourLoop | CircuitClass::LcrFourLoop => 4,
            CircuitClass::AmpElectrical | CircuitClass::AmpElectronic => 2,
        }
    }

    pub fn branch_count(self) -> usize {
        match self {
            CircuitClass::ResistiveOneLoop | CircuitClass::LcrOneLoop => 1,
            CircuitClass::ResistiveTwoLoop | CircuitClass::LcrTwoLoop => 7,
            CircuitClass::ResistiveFourLoop | CircuitClass::LcrFourLoop => 12,
            CircuitClass::AmpElectrical | CircuitClass::AmpElectronic => 3,
        }
    }

    /// Index of the branch whose current (and phase) is the reported output.
    pub fn probe_branch(self) -> usize {
        match self {
            CircuitClass::ResistiveOneLoop | CircuitClass::LcrOneLoop => 0,
            CircuitClass::ResistiveTwoLoop
            | CircuitClass::LcrTwoLoop
            | CircuitClass::ResistiveFourLoop
            | CircuitClass::LcrFourLoop => 5,
            CircuitClass::AmpElectrical | CircuitClass::AmpElectronic => 2,
        }
    }

    /// Category-2 classes carry inductive and capacitive reactances.
    pub fn has_reactance(self) -> bool {
        matches!(
            self,
            CircuitClass::LcrOneLoop | CircuitClass::LcrTwoLoop | CircuitClass::LcrFourLoop
        )
    }

    pub fn is_amplifier(self) -> bool {
        matches!(
            self,
            CircuitClass::AmpElectrical | CircuitClass::AmpElectronic
        )
    }

    /// Number of predicted outputs: current only, or current and phase.
    pub fn output_count(self) -> usize {
        match self {
            CircuitClass::LcrOneLoop | CircuitClass::LcrTwoLoop | CircuitClass::LcrFourLoop => 2,
            _ => 1,
        }
    }

    /// Grid layout (node rows, node columns) for the multi-loop classes.
    fn grid_dims(self) -> Option<(usize, usize)> {
        match self {
            CircuitClass::ResistiveTwoLoop | CircuitClass::LcrTwoLoop => Some((2, 3)),
            CircuitClass::ResistiveFourLoop | CircuitClass::LcrFourLoop => Some((3, 3)),
            _ => None,
        }
    }

    /// Mesh incidence of the class.
    ///
    /// Reference directions: horizontal branches point left-to-right,
    /// vertical branches top-to-bottom. Meshes traverse their cell clockwise,
    /// so a shared branch appears in its two meshes with opposite signs.
    pub fn topology(self) -> MeshTopology {
        if let Some((rows, cols)) = self.grid_dims() {
            return grid_topology(rows, cols);
        }
        match self {
            CircuitClass::ResistiveOneLoop | CircuitClass::LcrOneLoop => MeshTopology {
                branch_count: 1,
                meshes: vec![vec![(0, 1)]],
            },
            // Input branch R1 (+ source) | shared middle R3 | output branch R6.
            CircuitClass::AmpElectrical | CircuitClass::AmpElectronic => MeshTopology {
                branch_count: 3,
                meshes: vec![vec![(0, 1), (1, 1)], vec![(1, -1), (2, 1)]],
            },
            _ => unreachable!("grid classes handled above"),
        }
    }

    /// The network architecture assigned to the class.
    pub fn architecture(self) -> ArchitectureSpec {
        let (input_count, hidden_layers, output_count) = match self {
            CircuitClass::ResistiveOneLoop => (2, vec![3], 1),
            CircuitClass::ResistiveTwoLoop => (14, vec![8, 8], 1),
            CircuitClass::ResistiveFourLoop => (24, vec![16, 16], 1),
            CircuitClass::LcrOneLoop => (4, vec![3, 3], 2),
            CircuitClass::LcrTwoLoop => (22, vec![15, 15], 2),
            CircuitClass::LcrFourLoop => (48, vec![25, 25], 2),
            CircuitClass::AmpElectrical | CircuitClass::AmpElectronic => (3, vec![3, 3], 1),
        };
        ArchitectureSpec {
            input_count,
            hidden_layers,
            output_count,
        }
    }

    /// Input feature names, in the exact order the data pipeline emits them:
    /// impedance elements first, then source voltages.
    pub fn feature_names(self) -> Vec<String> {
        match self {
            CircuitClass::ResistiveOneLoop => vec!["r".into(), "v".into()],
            CircuitClass::ResistiveTwoLoop | CircuitClass::ResistiveFourLoop => {
                let n = self.branch_count();
                let mut names: Vec<String> = (1..=n).map(|i| format!("r{i}")).collect();
                names.extend((1..=n).map(|i| format!("e{i}")));
                names
            }
            CircuitClass::LcrOneLoop => {
                vec!["xl".into(), "xc".into(), "r".into(), "e".into()]
            }
            CircuitClass::LcrTwoLoop => {
                let mut names = Vec::new();
                for i in 1..=7 {
                    names.push(format!("r{i}"));
                    names.push(format!("xc{i}"));
                    names.push(format!("xl{i}"));
                }
                names.push("e".into());
                names
            }
            CircuitClass::LcrFourLoop => {
                let mut names = Vec::new();
                for i in 1..=12 {
                    names.push(format!("r{i}"));
                    names.push(format!("xc{i}"));
                    names.push(format!("xl{i}"));
                }
                names.extend((1..=12).map(|i| format!("e{i}")));
                names
            }
            CircuitClass::AmpElectrical | CircuitClass::AmpElectronic => {
                vec!["r1".into(), "r6".into(), "v".into()]
            }
        }
    }

    /// Names of the predicted outputs.
    pub fn target_names(self) -> Vec<String> {
        if self.output_count() == 2 {
            vec!["i".into(), "phi".into()]
        } else {
            vec!["i".into()]
        }
    }
}

impl std::fmt::Display for CircuitClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for CircuitClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CircuitClass::from_id(s)
    }
}

/// Planar grid of `rows` x `cols` nodes. Horizontal branches are numbered
/// row-major, then vertical branches row-major; meshes (grid cells) are
/// numbered row-major and traversed clockwise.
fn grid_topology(rows: usize, cols: usize) -> MeshTopology {
    let horizontal = |r: usize, c: usize| r * (cols - 1) + c;
    let vertical_base = rows * (cols - 1);
    let vertical = |r: usize, c: usize| vertical_base + r * cols + c;
    let branch_count = rows * (cols - 1) + (rows - 1) * cols;

    let mut meshes = Vec::with_capacity((rows - 1) * (cols - 1));
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            meshes.push(vec![
                (horizontal(r, c), 1),
                (vertical(r, c + 1), 1),
                (horizontal(r + 1, c), -1),
                (vertical(r, c), -1),
            ]);
        }
    }
    MeshTopology {
        branch_count,
        meshes,
    }
}

impl MeshTopology {
    pub fn mesh_count(&self) -> usize {
        self.meshes.len()
    }
}

/// One series branch: resistance, reactances, and an optional source EMF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchElement {
    /// Resistance in ohms.
    pub r: f64,
    /// Inductive reactance in ohms.
    #[serde(default)]
    pub xl: f64,
    /// Capacitive reactance in ohms.
    #[serde(default)]
    pub xc: f64,
    /// Source EMF magnitude in volts (0 = no source on this branch).
    #[serde(default)]
    pub e: f64,
    /// Source phase in degrees.
    #[serde(default)]
    pub source_phase: f64,
}

impl BranchElement {
    pub fn resistor(r: f64) -> Self {
        BranchElement {
            r,
            xl: 0.0,
            xc: 0.0,
            e: 0.0,
            source_phase: 0.0,
        }
    }

    pub fn sourced_resistor(r: f64, e: f64) -> Self {
        BranchElement {
            e,
            ..BranchElement::resistor(r)
        }
    }

    /// Complex impedance Z = R + j(X_L - X_C).
    pub fn impedance(&self) -> Complex64 {
        Complex64::new(self.r, self.xl - self.xc)
    }

    /// Source EMF as a phasor.
    pub fn emf(&self) -> Complex64 {
        Complex64::from_polar(self.e, self.source_phase.to_radians())
    }

    fn validate(&self, index: usize) -> Result<()> {
        let fields = [
            ("r", self.r),
            ("xl", self.xl),
            ("xc", self.xc),
            ("e", self.e),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "branch {index}: {name} = {value} must be finite and non-negative"
                )));
            }
        }
        if !self.source_phase.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "branch {index}: source_phase must be finite"
            )));
        }
        Ok(())
    }
}

/// A concrete circuit of one class.
///
/// Serializes as `{"class": "...", "branches": [{"r", "xl", "xc", "e",
/// "source_phase"}, ...]}` with ohms/volts/degrees units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitInstance {
    pub class: CircuitClass,
    pub branches: Vec<BranchElement>,
}

impl CircuitInstance {
    pub fn new(class: CircuitClass, branches: Vec<BranchElement>) -> Result<Self> {
        let instance = CircuitInstance { class, branches };
        instance.validate()?;
        Ok(instance)
    }

    pub fn validate(&self) -> Result<()> {
        let expected = self.class.branch_count();
        if self.branches.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.branches.len(),
            });
        }
        for (index, branch) in self.branches.iter().enumerate() {
            branch.validate(index)?;
            if !self.class.has_reactance() && (branch.xl != 0.0 || branch.xc != 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "class {} is resistive-only but branch {index} has reactance",
                    self.class
                )));
            }
        }
        if self.class == CircuitClass::LcrTwoLoop {
            let sources = self.branches.iter().filter(|b| b.e > 0.1).count();
            if sources != 1 {
                return Err(Error::InvalidArgument(format!(
                    "class 2b must have exactly one source branch with e > 0.1, found {sources}"
                )));
            }
        }
        if self.class.is_amplifier() {
            let middle = &self.branches[1];
            if middle.r != AMP_MIDDLE_RESISTANCE || middle.e != 0.0 {
                return Err(Error::InvalidArgument(
                    "amplifier middle branch must be a plain 1-ohm resistor".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let instance: CircuitInstance = serde_json::from_str(json)
            .map_err(|e| Error::InvalidArgument(format!("circuit JSON: {e}")))?;
        instance.validate()?;
        Ok(instance)
    }
}

/// Parameters of the mechanical analogue m x'' + b x' + k x = F0 sin(wt).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanicalParams {
    pub m: f64,
    pub b: f64,
    pub k: f64,
    pub f0: f64,
    pub omega: f64,
}

/// Electrical parameters equivalent to a [`MechanicalParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectricalEquivalent {
    pub l: f64,
    pub r: f64,
    pub c: f64,
    pub e0: f64,
    pub omega: f64,
}

impl MechanicalParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.m > 0.0
            && self.k > 0.0
            && self.b >= 0.0
            && self.omega > 0.0
            && self.f0.is_finite()
            && self.f0 >= 0.0
            && [self.m, self.b, self.k, self.omega]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "mechanical parameters require m > 0, k > 0, b >= 0, omega > 0".into(),
            ))
        }
    }
}

/// Coefficient identification L <-> m, R <-> b, 1/C <-> k, E0 <-> F0.
pub fn mechanical_to_electrical(p: &MechanicalParams) -> Result<ElectricalEquivalent> {
    p.validate()?;
    Ok(ElectricalEquivalent {
        l: p.m,
        r: p.b,
        c: 1.0 / p.k,
        e0: p.f0,
        omega: p.omega,
    })
}

/// Inverse of [`mechanical_to_electrical`].
pub fn electrical_to_mechanical(p: &ElectricalEquivalent) -> Result<MechanicalParams> {
    if p.c <= 0.0 || !p.c.is_finite() {
        return Err(Error::InvalidArgument("capacitance must be positive".into()));
    }
    let mech = MechanicalParams {
        m: p.l,
        b: p.r,
        k: 1.0 / p.c,
        f0: p.e0,
        omega: p.omega,
    };
    mech.validate()?;
    Ok(mech)
}

/// Reactances of an inductor and capacitor at angular frequency `omega`:
/// X_L = wL, X_C = 1/(wC).
pub fn reactance_from_components(l: f64, c: f64, omega: f64) -> Result<(f64, f64)> {
    if l < 0.0 || !l.is_finite() {
        return Err(Error::InvalidArgument(
            "inductance must be finite and non-negative".into(),
        ));
    }
    if c <= 0.0 || omega <= 0.0 || !c.is_finite() || !omega.is_finite() {
        return Err(Error::InvalidArgument(
            "capacitance and omega must be finite and positive".into(),
        ));
    }
    Ok((omega * l, 1.0 / (omega * c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impedance_combines_reactances() {
        let b = BranchElement {
            r: 3.0,
            xl: 4.0,
            xc: 0.0,
            e: 0.0,
            source_phase: 0.0,
        };
        assert_eq!(b.impedance(), Complex64::new(3.0, 4.0));

        let b = BranchElement::resistor(5.0);
        assert_eq!(b.impedance(), Complex64::new(5.0, 0.0));

        let b = BranchElement {
            r: 0.1,
            xl: 2.0,
            xc: 7.0,
            e: 0.0,
            source_phase: 0.0,
        };
        assert_eq!(b.impedance(), Complex64::new(0.1, -5.0));
    }

    #[test]
    fn reactance_from_components_arithmetic() {
        assert_eq!(reactance_from_components(1.0, 1.0, 1.0).unwrap(), (1.0, 1.0));
        assert_eq!(reactance_from_components(0.0, 0.5, 2.0).unwrap(), (0.0, 1.0));
        assert_eq!(
            reactance_from_components(0.25, 0.01, 100.0).unwrap(),
            (25.0, 1.0)
        );
        assert!(reactance_from_components(1.0, 0.0, 1.0).is_err());
        assert!(reactance_from_components(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn mechanical_mapping_identifies_coefficients() {
        let p = MechanicalParams {
            m: 2.0,
            b: 3.0,
            k: 4.0,
            f0: 10.0,
            omega: 1.0,
        };
        let e = mechanical_to_electrical(&p).unwrap();
        assert_eq!((e.l, e.r, e.c, e.e0, e.omega), (2.0, 3.0, 0.25, 10.0, 1.0));

        let p = MechanicalParams {
            m: 1.0,
            b: 1.0,
            k: 1.0,
            f0: 1.0,
            omega: 1.0,
        };
        let e = mechanical_to_electrical(&p).unwrap();
        assert_eq!((e.l, e.r, e.c, e.e0, e.omega), (1.0, 1.0, 1.0, 1.0, 1.0));

        let p = MechanicalParams {
            m: 0.5,
            b: 0.0,
            k: 2.0,
            f0: 5.0,
            omega: 3.0,
        };
        let e = mechanical_to_electrical(&p).unwrap();
        assert_eq!((e.l, e.r, e.c, e.e0, e.omega), (0.5, 0.0, 0.5, 5.0, 3.0));

        let bad = MechanicalParams { k: 0.0, ..p };
        assert!(mechanical_to_electrical(&bad).is_err());
    }

    #[test]
    fn architecture_table_matches_class_features() {
        for class in CircuitClass::ALL {
            let arch = class.architecture();
            assert_eq!(
                arch.input_count,
                class.feature_names().len(),
                "class {class}"
            );
            assert_eq!(arch.output_count, class.output_count(), "class {class}");
        }
        let a = CircuitClass::ResistiveOneLoop.architecture();
        assert_eq!((a.input_count, a.output_count), (2, 1));
        assert_eq!(a.hidden_layers, vec![3]);

        let a = CircuitClass::LcrOneLoop.architecture();
        assert_eq!((a.input_count, a.output_count), (4, 2));
        assert_eq!(a.hidden_layers, vec![3, 3]);

        let a = CircuitClass::LcrFourLoop.architecture();
        assert_eq!((a.input_count, a.output_count), (48, 2));
        assert_eq!(a.hidden_layers, vec![25, 25]);

        let a = CircuitClass::AmpElectrical.architecture();
        assert_eq!((a.input_count, a.output_count), (3, 1));
        assert_eq!(a.hidden_layers, vec![3, 3]);
    }

    #[test]
    fn grid_branch_counts_match_enumeration() {
        // 2x3-node grid: 2 rows x 2 horizontal + 1 gap x 3 vertical = 7.
        let topo = CircuitClass::ResistiveTwoLoop.topology();
        assert_eq!(topo.branch_count, 7);
        assert_eq!(topo.mesh_count(), 2);

        // 3x3-node grid: 3 x 2 horizontal + 2 x 3 vertical = 12.
        let topo = CircuitClass::ResistiveFourLoop.topology();
        assert_eq!(topo.branch_count, 12);
        assert_eq!(topo.mesh_count(), 4);

        let topo = CircuitClass::ResistiveOneLoop.topology();
        assert_eq!(topo.branch_count, 1);
        assert_eq!(topo.meshes, vec![vec![(0, 1)]]);
    }

    #[test]
    fn topology_orientations_cancel_on_shared_branches() {
        for class in CircuitClass::ALL {
            let topo = class.topology();
            let mut mesh_hits = vec![0usize; topo.branch_count];
            let mut orientation_sum = vec![0i32; topo.branch_count];
            for mesh in &topo.meshes {
                for &(branch, orientation) in mesh {
                    mesh_hits[branch] += 1;
                    orientation_sum[branch] += i32::from(orientation);
                }
            }
            for branch in 0..topo.branch_count {
                assert!(
                    (1..=2).contains(&mesh_hits[branch]),
                    "class {class}: branch {branch} in {} meshes",
                    mesh_hits[branch]
                );
                if mesh_hits[branch] == 2 {
                    assert_eq!(
                        orientation_sum[branch], 0,
                        "class {class}: shared branch {branch} orientations must cancel"
                    );
                }
            }
            assert!(class.probe_branch() < topo.branch_count);
        }
    }

    #[test]
    fn two_loop_shared_branch_is_the_probe() {
        let topo = CircuitClass::ResistiveTwoLoop.topology();
        let shared: Vec<usize> = (0..topo.branch_count)
            .filter(|&b| {
                topo.meshes
                    .iter()
                    .filter(|m| m.iter().any(|&(idx, _)| idx == b))
                    .count()
                    == 2
            })
            .collect();
        assert_eq!(shared, vec![5]);
        assert_eq!(CircuitClass::ResistiveTwoLoop.probe_branch(), 5);
    }

    #[test]
    fn class_ids_round_trip() {
        for class in CircuitClass::ALL {
            assert_eq!(CircuitClass::from_id(class.id()).unwrap(), class);
        }
        assert!(CircuitClass::from_id("3z").is_err());
    }

    #[test]
    fn circuit_json_round_trip() {
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
        let json = circuit.to_json();
        assert!(json.contains("\"class\": \"2a\""));
        assert_eq!(CircuitInstance::from_json(&json).unwrap(), circuit);
    }

    #[test]
    fn validation_rejects_reactance_in_category_1() {
        let result = CircuitInstance::new(
            CircuitClass::ResistiveOneLoop,
            vec![BranchElement {
                r: 1.0,
                xl: 1.0,
                xc: 0.0,
                e: 1.0,
                source_phase: 0.0,
            }],
        );
        assert!(result.is_err());
    }

    #[test]
    fn validation_enforces_single_source_for_2b() {
        let mut branches = vec![
            BranchElement {
                r: 1.0,
                xl: 1.0,
                xc: 1.0,
                e: 5.0,
                source_phase: 0.0,
            };
            7
        ];
        assert!(CircuitInstance::new(CircuitClass::LcrTwoLoop, branches.clone()).is_err());
        for b in branches.iter_mut().skip(1) {
            b.e = 0.0;
        }
        assert!(CircuitInstance::new(CircuitClass::LcrTwoLoop, branches).is_ok());
    }

    #[test]
    fn validation_fixes_amplifier_middle_resistance() {
        let branches = vec![
            BranchElement::sourced_resistor(2.0, 11.0),
            BranchElement::resistor(AMP_MIDDLE_RESISTANCE),
            BranchElement::resistor(3.0),
        ];
        assert!(CircuitInstance::new(CircuitClass::AmpElectrical, branches.clone()).is_ok());

        let mut bad = branches;
        bad[1].r = 2.0;
        assert!(CircuitInstance::new(CircuitClass::AmpElectrical, bad).is_err());
    }
}
