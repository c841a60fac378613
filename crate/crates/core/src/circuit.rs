//! Gate sets, random circuit sampling and the plain-text circuit format.
//!
//! Text format, one gate per line after a header:
//!
//! ```text
//! n_qubits=16
//! H 3
//! CNOT 3 7
//! P:-0.7853981633974483 5
//! ```
//!
//! For `CNOT` the first operand is the control.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid_arg, Error, Result};
use crate::qstate::{Gate, Gate1Q, Gate2Q, StateVector};
use crate::rng::RngStream;

/// A gate kind before it is bound to qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    One(Gate1Q),
    Cnot,
}

impl GateKind {
    pub fn is_two_qubit(self) -> bool {
        matches!(self, GateKind::Cnot)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::One(g) => g.fmt(f),
            GateKind::Cnot => f.write_str("CNOT"),
        }
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "H" => GateKind::One(Gate1Q::H),
            "T" => GateKind::One(Gate1Q::T),
            "S" => GateKind::One(Gate1Q::S),
            "NOT" => GateKind::One(Gate1Q::Not),
            "CNOT" => GateKind::Cnot,
            other => match other.strip_prefix("P:") {
                Some(angle) => {
                    let d: f64 = angle
                        .parse()
                        .map_err(|_| invalid_arg(format!("bad phase angle in {other:?}")))?;
                    if !d.is_finite() {
                        return Err(invalid_arg(format!("non-finite phase angle in {other:?}")));
                    }
                    GateKind::One(Gate1Q::Phase(d))
                }
                None => return Err(invalid_arg(format!("unknown gate kind {other:?}"))),
            },
        })
    }
}

/// Which gate set a [`GateSet`] is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateSetName {
    CnotHT,
    CnotHS,
    CnotHNot,
    Custom,
}

/// The gates a random circuit draws from, each kind with equal probability.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSet {
    name: GateSetName,
    members: Vec<GateKind>,
}

impl GateSet {
    /// `{CNOT, H, T}`, universal.
    pub fn cnot_h_t() -> Self {
        Self {
            name: GateSetName::CnotHT,
            members: vec![
                GateKind::Cnot,
                GateKind::One(Gate1Q::H),
                GateKind::One(Gate1Q::T),
            ],
        }
    }

    /// `{CNOT, H, S}`, generates the Clifford group.
    pub fn cnot_h_s() -> Self {
        Self {
            name: GateSetName::CnotHS,
            members: vec![
                GateKind::Cnot,
                GateKind::One(Gate1Q::H),
                GateKind::One(Gate1Q::S),
            ],
        }
    }

    /// `{CNOT, H, NOT}`.
    pub fn cnot_h_not() -> Self {
        Self {
            name: GateSetName::CnotHNot,
            members: vec![
                GateKind::Cnot,
                GateKind::One(Gate1Q::H),
                GateKind::One(Gate1Q::Not),
            ],
        }
    }

    pub fn custom(members: Vec<GateKind>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidConfiguration("gate set is empty".into()));
        }
        Ok(Self {
            name: GateSetName::Custom,
            members,
        })
    }

    pub fn name(&self) -> GateSetName {
        self.name
    }

    pub fn members(&self) -> &[GateKind] {
        &self.members
    }

    pub fn has_two_qubit(&self) -> bool {
        self.members.iter().any(|k| k.is_two_qubit())
    }

    /// Short identifier used on the command line (`cnot-h-t`, ...).
    pub fn slug(&self) -> String {
        match self.name {
            GateSetName::CnotHT => "cnot-h-t".into(),
            GateSetName::CnotHS => "cnot-h-s".into(),
            GateSetName::CnotHNot => "cnot-h-not".into(),
            GateSetName::Custom => self
                .members
                .iter()
                .map(|k| k.to_string().to_lowercase())
                .collect::<Vec<_>>()
                .join("-"),
        }
    }

    /// Human-readable label, e.g. `CNOT+H+T`.
    pub fn label(&self) -> String {
        self.members
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl FromStr for GateSet {
    type Err = Error;

    /// Accepts the three named sets or any `-`/`+`-separated list of kinds.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "cnot-h-t" | "cnot+h+t" => return Ok(Self::cnot_h_t()),
            "cnot-h-s" | "cnot+h+s" => return Ok(Self::cnot_h_s()),
            "cnot-h-not" | "cnot+h+not" => return Ok(Self::cnot_h_not()),
            _ => {}
        }
        let members = s
            .split(['-', '+'])
            .filter(|p| !p.is_empty())
            .map(|p| p.to_ascii_uppercase().parse())
            .collect::<Result<Vec<GateKind>>>()?;
        Self::custom(members)
    }
}

/// Draws one gate: a uniform first qubit, then a uniform kind from the set.
/// For CNOT the first qubit is the control and the target is uniform over
/// the remaining `n - 1` qubits (complete connectivity).
pub fn sample_gate(set: &GateSet, n_qubits: usize, rng: &mut RngStream) -> Result<Gate> {
    if n_qubits == 0 {
        return Err(Error::InvalidConfiguration("register has no qubits".into()));
    }
    let n = u32::try_from(n_qubits)
        .map_err(|_| Error::InvalidConfiguration(format!("register of {n_qubits} qubits")))?;
    let first = rng.below(n) as usize;
    let kind = set.members[rng.below(set.members.len() as u32) as usize];
    match kind {
        GateKind::One(g) => Ok(Gate::one(g, first)),
        GateKind::Cnot => {
            if n_qubits < 2 {
                return Err(Error::InvalidConfiguration(
                    "CNOT drawn on a single-qubit register".into(),
                ));
            }
            let mut target = rng.below(n - 1) as usize;
            if target >= first {
                target += 1;
            }
            Ok(Gate::Cnot(Gate2Q {
                control: first,
                target,
            }))
        }
    }
}

/// An ordered gate sequence on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.n_qubits) {
            return Err(invalid_arg(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(invalid_arg("two-qubit gate with identical operands"));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Gates of `self` reversed, each replaced by its inverse.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(invalid_arg(format!(
                "circuit on {} qubits applied to a {}-qubit state",
                self.n_qubits,
                state.n_qubits()
            )));
        }
        self.gates.iter().try_for_each(|g| state.apply(g))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n_qubits={}\n", self.n_qubits);
        for g in &self.gates {
            out.push_str(&format_gate(g));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing n_qubits header".into(),
        })?;
        let n_qubits: usize = header
            .strip_prefix("n_qubits=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line: hline,
                message: format!("expected `n_qubits=<n>`, got {header:?}"),
            })?;
        let mut circuit = Circuit::new(n_qubits);
        for (line, l) in lines {
            let perr = |message: String| Error::Parse { line, message };
            let gate = parse_gate(l).map_err(|e| perr(e.to_string()))?;
            circuit.push(gate).map_err(|e| perr(e.to_string()))?;
        }
        Ok(circuit)
    }
}

/// `KIND q0 [q1]`.
pub fn format_gate(g: &Gate) -> String {
    match g {
        Gate::One { kind, qubit } => format!("{kind} {qubit}"),
        Gate::Cnot(c) => format!("CNOT {} {}", c.control, c.target),
    }
}

pub fn parse_gate(line: &str) -> Result<Gate> {
    let mut parts = line.split_whitespace();
    let kind: GateKind = parts
        .next()
        .ok_or_else(|| invalid_arg("empty gate line"))?
        .parse()?;
    let mut operand = || -> Result<usize> {
        parts
            .next()
            .ok_or_else(|| invalid_arg(format!("missing operand for {kind}")))?
            .parse()
            .map_err(|_| invalid_arg(format!("bad operand for {kind}")))
    };
    let gate = match kind {
        GateKind::One(g) => Gate::one(g, operand()?),
        GateKind::Cnot => {
            let c = operand()?;
            Gate::cnot(c, operand()?)?
        }
    };
    if parts.next().is_some() {
        return Err(invalid_arg(format!("trailing tokens in {line:?}")));
    }
    Ok(gate)
}

/// Applies `n_gates` gates drawn with [`sample_gate`] and records them.
/// `observer` runs after every gate with the 1-based gate number.
pub fn heat<F>(
    state: &mut StateVector,
    set: &GateSet,
    n_gates: usize,
    rng: &mut RngStream,
    mut observer: F,
) -> Result<Circuit>
where
    F: FnMut(usize, &StateVector, &Gate),
{
    let n = state.n_qubits();
    let mut circuit = Circuit::new(n);
    circuit.gates.reserve(n_gates);
    for step in 1..=n_gates {
        let gate = sample_gate(set, n, rng)?;
        state.apply(&gate)?;
        circuit.gates.push(gate);
        observer(step, state, &gate);
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn not_only_set_is_uniform_over_qubits() {
        let set = GateSet::custom(vec![GateKind::One(Gate1Q::Not)]).unwrap();
        let mut rng = RngStream::new(11);
        let mut counts = [0u32; 3];
        let draws = 10_000;
        for _ in 0..draws {
            match sample_gate(&set, 3, &mut rng).unwrap() {
                Gate::One {
                    kind: Gate1Q::Not,
                    qubit,
                } => counts[qubit] += 1,
                g => panic!("unexpected gate {g:?}"),
            }
        }
        // chi-square, 2 dof: p > 0.01 <=> chi2 < 9.21
        let e = draws as f64 / 3.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        assert!(chi2 < 9.21, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn kind_frequencies_within_binomial_bounds() {
        let set = GateSet::cnot_h_t();
        let mut rng = RngStream::new(5);
        let draws = 30_000;
        let (mut cx, mut h, mut t) = (0, 0, 0);
        for _ in 0..draws {
            match sample_gate(&set, 16, &mut rng).unwrap() {
                Gate::Cnot(_) => cx += 1,
                Gate::One {
                    kind: Gate1Q::H, ..
                } => h += 1,
                Gate::One {
                    kind: Gate1Q::T, ..
                } => t += 1,
                g => panic!("unexpected gate {g:?}"),
            }
        }
        let p = 1.0 / 3.0;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for c in [cx, h, t] {
            assert!(
                (c as f64 - draws as f64 * p).abs() < 3.0 * sigma,
                "{cx} {h} {t}"
            );
        }
    }

    #[test]
    fn cnot_operands_distinct_and_cover_complete_graph() {
        let set = GateSet::custom(vec![GateKind::Cnot]).unwrap();
        let mut rng = RngStream::new(3);
        let mut seen = [[false; 4]; 4];
        for _ in 0..2000 {
            let Gate::Cnot(g) = sample_gate(&set, 4, &mut rng).unwrap() else {
                unreachable!()
            };
            assert_ne!(g.control, g.target);
            seen[g.control][g.target] = true;
        }
        for c in 0..4 {
            for t in 0..4 {
                assert_eq!(seen[c][t], c != t);
            }
        }
    }

    #[test]
    fn cnot_on_one_qubit_is_config_error() {
        let set = GateSet::custom(vec![GateKind::Cnot]).unwrap();
        let mut rng = RngStream::new(0);
        assert!(matches!(
            sample_gate(&set, 1, &mut rng),
            Err(Error::InvalidConfiguration(_))
        ));
    }

    #[test]
    fn seeded_sampling_is_replayable() {
        let set = GateSet::cnot_h_t();
        let draw = |seed| {
            let mut rng = RngStream::new(seed);
            (0..200)
                .map(|_| sample_gate(&set, 16, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(99), draw(99));
        assert_ne!(draw(99), draw(100));
    }

    #[test]
    fn zero_gates_is_identity() {
        let mut s = StateVector::product(&[0.2, 0.4]).unwrap();
        let orig = s.clone();
        let mut calls = 0;
        let c = heat(
            &mut s,
            &GateSet::cnot_h_t(),
            0,
            &mut RngStream::new(1),
            |_, _, _| calls += 1,
        )
        .unwrap();
        assert!(c.is_empty());
        assert_eq!(calls, 0);
        assert_eq!(s, orig);
    }

    #[test]
    fn heat_records_every_gate() {
        let mut s = StateVector::product(&[0.2, 0.4, 1.0, 2.0]).unwrap();
        let mut seen = Vec::new();
        let c = heat(
            &mut s,
            &GateSet::cnot_h_s(),
            37,
            &mut RngStream::new(8),
            |k, _, g| seen.push((k, *g)),
        )
        .unwrap();
        assert_eq!(c.len(), 37);
        assert_eq!(seen.len(), 37);
        for (i, (k, g)) in seen.iter().enumerate() {
            assert_eq!(*k, i + 1);
            assert_eq!(*g, c.gates()[i]);
        }
    }

    #[test]
    fn inverse_circuit_examples() {
        let c = Circuit::from_gates(2, vec![Gate::one(Gate1Q::H, 0)]).unwrap();
        assert_eq!(c.inverse(), c);
        let c =
            Circuit::from_gates(2, vec![Gate::one(Gate1Q::H, 0), Gate::one(Gate1Q::T, 1)]).unwrap();
        assert_eq!(
            c.inverse().gates(),
            &[
                Gate::one(Gate1Q::Phase(-FRAC_PI_4), 1),
                Gate::one(Gate1Q::H, 0)
            ]
        );
    }

    #[test]
    fn text_round_trip() {
        let mut s = StateVector::product(&[0.1; 5]).unwrap();
        let c = heat(
            &mut s,
            &GateSet::cnot_h_t(),
            64,
            &mut RngStream::new(2),
            |_, _, _| {},
        )
        .unwrap();
        let inv = c.inverse();
        for circ in [c, inv] {
            let text = circ.to_text();
            assert!(text.starts_with("n_qubits=5\n"));
            assert_eq!(Circuit::parse(&text).unwrap(), circ);
        }
    }

    #[test]
    fn text_format_lines() {
        let c = Circuit::from_gates(
            8,
            vec![
                Gate::cnot(3, 7).unwrap(),
                Gate::one(Gate1Q::T, 5),
                Gate::one(Gate1Q::Not, 0),
            ],
        )
        .unwrap();
        assert_eq!(c.to_text(), "n_qubits=8\nCNOT 3 7\nT 5\nNOT 0\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            Circuit::parse(""),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Circuit::parse("qubits 3"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Circuit::parse("n_qubits=3\nH 0\nCNOT 1 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Circuit::parse("n_qubits=3\nH 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Circuit::parse("n_qubits=3\nX 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn gate_set_names() {
        assert_eq!("cnot-h-t".parse::<GateSet>().unwrap(), GateSet::cnot_h_t());
        assert_eq!(
            "CNOT+H+NOT".parse::<GateSet>().unwrap(),
            GateSet::cnot_h_not()
        );
        let custom: GateSet = "cnot-h".parse().unwrap();
        assert_eq!(custom.name(), GateSetName::Custom);
        assert_eq!(
            custom.members(),
            &[GateKind::Cnot, GateKind::One(Gate1Q::H)]
        );
        assert_eq!(GateSet::cnot_h_s().label(), "CNOT+H+S");
        assert!("cnot-x".parse::<GateSet>().is_err());
    }
}
