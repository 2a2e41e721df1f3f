//! Boolean circuits, conjunction circuits for parallel sub-constraints, and
//! the arithmetization of circuit satisfiability as quadratic equations
//! over GF(2).
//!
//! Gate set is AND/OR/NOT with fan-in at most two; XOR is not a primitive.
//! Circuits are gate lists in topological order with the input gates first.
//! Sub-constraint circuits are built as canonical sums of accepted
//! minterms; every circuit of a conjunction family is padded with dummy
//! NOT gates to one shared size `c` so the downstream proof layouts share
//! one shape.

use crate::bits::Bits;
use crate::csp::{SubTable, VecCspInstance};
use crate::gf::FieldSpec;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadeqError {
    #[error("circuit is malformed: {0}")]
    BadCircuit(String),
    #[error("brute force space of 2^{0} exceeds the cap of 2^{1}")]
    SearchSpaceExceeded(usize, usize),
    #[error("constraint {0} is not parallel")]
    NotParallel(usize),
    #[error("conjunction family supports at most 63 constraints, got {0}")]
    TooManyConstraints(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Input,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolCircuit {
    pub gates: Vec<Gate>,
    pub n_inputs: usize,
    pub output: usize,
}

impl BoolCircuit {
    pub fn validate(&self) -> Result<(), QuadeqError> {
        if self.output >= self.gates.len() {
            return Err(QuadeqError::BadCircuit("output gate out of range".into()));
        }
        for (i, g) in self.gates.iter().enumerate() {
            let ok = match *g {
                Gate::Input => i < self.n_inputs,
                Gate::Not(a) => i >= self.n_inputs && a < i,
                Gate::And(a, b) | Gate::Or(a, b) => i >= self.n_inputs && a < i && b < i,
            };
            if !ok {
                return Err(QuadeqError::BadCircuit(format!("gate {i} violates layout")));
            }
        }
        if self.n_inputs > self.gates.len() {
            return Err(QuadeqError::BadCircuit("fewer gates than inputs".into()));
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Values of every gate under the given input bits.
    pub fn eval_gates(&self, inputs: &Bits) -> Bits {
        assert_eq!(inputs.len(), self.n_inputs, "input arity mismatch");
        let mut vals = Bits::zeros(self.gates.len());
        for (i, g) in self.gates.iter().enumerate() {
            let v = match *g {
                Gate::Input => inputs.get(i),
                Gate::Not(a) => !vals.get(a),
                Gate::And(a, b) => vals.get(a) && vals.get(b),
                Gate::Or(a, b) => vals.get(a) || vals.get(b),
            };
            vals.set(i, v);
        }
        vals
    }

    pub fn eval(&self, inputs: &Bits) -> bool {
        self.eval_gates(inputs).get(self.output)
    }

    /// Append never-referenced NOT gates until the circuit has exactly
    /// `target` gates.
    pub fn pad_to(&mut self, target: usize) {
        assert!(target >= self.gates.len(), "cannot shrink a circuit");
        while self.gates.len() < target {
            self.gates.push(Gate::Not(0));
        }
    }
}

/// Circuit on `2t` inputs computing `sub(chi^{-1}(a), chi^{-1}(b))`, where
/// the first `t` inputs are the bits of `a` and the rest the bits of `b`.
/// Canonical sum-of-accepted-minterms construction.
pub fn subconstraint_to_circuit(sub: &SubTable) -> BoolCircuit {
    let spec = sub.spec();
    let t = spec.t() as usize;
    let n_inputs = 2 * t;
    let mut gates: Vec<Gate> = vec![Gate::Input; n_inputs];
    // one NOT per input, in input order
    let not_of: Vec<usize> = (0..n_inputs)
        .map(|i| {
            gates.push(Gate::Not(i));
            gates.len() - 1
        })
        .collect();

    let mut minterm_outputs = Vec::new();
    for a in spec.elements() {
        for b in spec.elements() {
            if !sub.accepts(a, b) {
                continue;
            }
            // literal for input bit i: the input gate if set, else its NOT
            let literal = |i: usize, set: bool| if set { i } else { not_of[i] };
            let mut acc = literal(0, a.bits() & 1 == 1);
            for i in 1..n_inputs {
                let set = if i < t {
                    (a.bits() >> i) & 1 == 1
                } else {
                    (b.bits() >> (i - t)) & 1 == 1
                };
                gates.push(Gate::And(acc, literal(i, set)));
                acc = gates.len() - 1;
            }
            minterm_outputs.push(acc);
        }
    }

    let output = match minterm_outputs.len() {
        0 => {
            // constant 0: x AND NOT x
            gates.push(Gate::And(0, not_of[0]));
            gates.len() - 1
        }
        _ => {
            let mut acc = minterm_outputs[0];
            for &m in &minterm_outputs[1..] {
                gates.push(Gate::Or(acc, m));
                acc = gates.len() - 1;
            }
            acc
        }
    };
    BoolCircuit { gates, n_inputs, output }
}

/// Builder for the conjunction circuits of an all-parallel instance whose
/// constraint `l` connects slots `2l` and `2l+1` (0-based; the caller is
/// responsible for the variable arrangement). All emitted circuits share
/// the gate count of the full conjunction.
#[derive(Clone, Debug)]
pub struct ConjunctionFamily {
    pub subs: Vec<SubTable>,
    pub k: usize,
    pub t: usize,
    /// Shared padded gate count.
    pub c: usize,
    sub_circuits: Vec<BoolCircuit>,
}

impl ConjunctionFamily {
    pub fn new(subs: Vec<SubTable>, k: usize, spec: FieldSpec) -> Result<Self, QuadeqError> {
        let m = subs.len();
        if m > 63 {
            return Err(QuadeqError::TooManyConstraints(m));
        }
        if 2 * m > k {
            return Err(QuadeqError::BadCircuit(format!(
                "{m} parallel constraints need at least {} variables, instance has {k}",
                2 * m
            )));
        }
        let t = spec.t() as usize;
        let sub_circuits: Vec<BoolCircuit> = subs.iter().map(subconstraint_to_circuit).collect();
        let mut family = ConjunctionFamily { subs, k, t, c: 0, sub_circuits };
        let full: u64 = if m == 0 { 0 } else { (1u64 << m) - 1 };
        family.c = family.raw_circuit(full).size();
        Ok(family)
    }

    pub fn m(&self) -> usize {
        self.subs.len()
    }

    pub fn n_inputs(&self) -> usize {
        self.k * self.t
    }

    /// Circuit for subset mask `s` before padding.
    fn raw_circuit(&self, s: u64) -> BoolCircuit {
        let n_inputs = self.n_inputs();
        let mut gates: Vec<Gate> = vec![Gate::Input; n_inputs];
        let mut member_outputs = Vec::new();
        for l in 0..self.m() {
            if (s >> l) & 1 == 0 {
                continue;
            }
            let sub = &self.sub_circuits[l];
            // inline the sub-circuit, remapping its inputs onto the bit
            // groups of slots 2l and 2l+1
            let base = gates.len();
            let map_ref = |r: usize, base: usize, t: usize, l: usize, n_inputs: usize| -> usize {
                if r < 2 * t {
                    let slot = 2 * l + r / t;
                    let bit = r % t;
                    debug_assert!(slot * t + bit < n_inputs);
                    slot * t + bit
                } else {
                    base + (r - 2 * t)
                }
            };
            for g in sub.gates.iter().skip(2 * self.t) {
                let remap = |r: usize| map_ref(r, base, self.t, l, n_inputs);
                gates.push(match *g {
                    Gate::Input => unreachable!("inputs are first"),
                    Gate::Not(a) => Gate::Not(remap(a)),
                    Gate::And(a, b) => Gate::And(remap(a), remap(b)),
                    Gate::Or(a, b) => Gate::Or(remap(a), remap(b)),
                });
            }
            member_outputs.push(map_ref(sub.output, base, self.t, l, n_inputs));
        }
        let output = match member_outputs.len() {
            0 => {
                // empty conjunction: constant 1 as x OR NOT x
                gates.push(Gate::Not(0));
                gates.push(Gate::Or(0, gates.len() - 1));
                gates.len() - 1
            }
            1 => member_outputs[0],
            _ => {
                let mut acc = member_outputs[0];
                for &o in &member_outputs[1..] {
                    gates.push(Gate::And(acc, o));
                    acc = gates.len() - 1;
                }
                acc
            }
        };
        BoolCircuit { gates, n_inputs, output }
    }

    /// Conjunction circuit for subset mask `s`, padded to the shared size.
    pub fn circuit(&self, s: u64) -> BoolCircuit {
        assert!(self.m() == 64 || s < (1u64 << self.m()), "subset out of range");
        let mut c = self.raw_circuit(s);
        c.pad_to(self.c);
        c
    }
}

/// A system of quadratic equations `u^T D_i u = b_i` over GF(2). Matrices
/// are stored sparsely as `(row, col)` entry lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadEquation {
    pub entries: Vec<(u32, u32)>,
    pub rhs: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadeqInstance {
    pub c: usize,
    pub equations: Vec<QuadEquation>,
}

impl QuadeqInstance {
    pub fn q(&self) -> usize {
        self.equations.len()
    }

    /// Pad with all-zero equations (`D = 0`, `b = 0`) to `q` equations.
    pub fn pad_to(&mut self, q: usize) {
        assert!(q >= self.equations.len());
        while self.equations.len() < q {
            self.equations.push(QuadEquation { entries: vec![], rhs: false });
        }
    }

    pub fn eval_equation(&self, i: usize, u: &Bits) -> bool {
        let mut acc = false;
        for &(r, c) in &self.equations[i].entries {
            acc ^= u.get(r as usize) && u.get(c as usize);
        }
        acc
    }

    pub fn check(&self, u: &Bits) -> bool {
        assert_eq!(u.len(), self.c, "assignment length mismatch");
        (0..self.equations.len()).all(|i| self.eval_equation(i, u) == self.equations[i].rhs)
    }

    pub const BRUTE_FORCE_CAP: usize = 24;

    /// Lexicographically first solution in counter order (variable 0 is the
    /// least significant bit), or `None`.
    pub fn brute_force(&self) -> Result<Option<Bits>, QuadeqError> {
        if self.c > Self::BRUTE_FORCE_CAP {
            return Err(QuadeqError::SearchSpaceExceeded(self.c, Self::BRUTE_FORCE_CAP));
        }
        for counter in 0u64..(1u64 << self.c) {
            let u = Bits::from_fn(self.c, |i| (counter >> i) & 1 == 1);
            if self.check(&u) {
                return Ok(Some(u));
            }
        }
        Ok(None)
    }

    /// Sum of the `D` matrices selected by `h` (a subset of `[q]`), as a
    /// deduplicated sparse entry list (entries appearing an even number of
    /// times cancel over GF(2)).
    pub fn combo_entries(&self, h: &Bits) -> Vec<(u32, u32)> {
        assert_eq!(h.len(), self.q());
        let mut count: std::collections::BTreeMap<(u32, u32), u32> = std::collections::BTreeMap::new();
        for (_, z) in h.iter_ones() {
            for &e in &self.equations[z].entries {
                *count.entry(e).or_insert(0) += 1;
            }
        }
        count.into_iter().filter(|&(_, c)| c % 2 == 1).map(|(e, _)| e).collect()
    }

    /// Sum of the right-hand sides selected by `h`.
    pub fn combo_rhs(&self, h: &Bits) -> bool {
        let mut acc = false;
        for (_, z) in h.iter_ones() {
            acc ^= self.equations[z].rhs;
        }
        acc
    }
}

/// One variable per gate; per-gate equations using `x^2 = x`:
/// AND `g = a b`, OR `g = a + b + a b`, NOT `g = 1 + a`; input gates
/// unconstrained; the output gate is forced to 1.
pub fn circuit_to_quadeq(circuit: &BoolCircuit) -> QuadeqInstance {
    let mut equations = Vec::new();
    for (g, gate) in circuit.gates.iter().enumerate() {
        let g = g as u32;
        match *gate {
            Gate::Input => {}
            Gate::And(a, b) => equations.push(QuadEquation {
                entries: vec![(a as u32, b as u32), (g, g)],
                rhs: false,
            }),
            Gate::Or(a, b) => equations.push(QuadEquation {
                entries: vec![
                    (a as u32, a as u32),
                    (b as u32, b as u32),
                    (a as u32, b as u32),
                    (g, g),
                ],
                rhs: false,
            }),
            Gate::Not(a) => equations.push(QuadEquation {
                entries: vec![(a as u32, a as u32), (g, g)],
                rhs: true,
            }),
        }
    }
    equations.push(QuadEquation {
        entries: vec![(circuit.output as u32, circuit.output as u32)],
        rhs: true,
    });
    QuadeqInstance { c: circuit.size(), equations }
}

/// Coordinate-to-constraint-set map of an all-parallel instance:
/// `kappa(j)` is the bitmask of constraints whose coordinate set contains
/// `j`. Coordinates in no constraint map to the empty set.
pub fn kappa_map(g_p: &VecCspInstance) -> Result<Vec<u64>, QuadeqError> {
    let m = g_p.constraints.len();
    if m > 63 {
        return Err(QuadeqError::TooManyConstraints(m));
    }
    let mut kappa = vec![0u64; g_p.d];
    for (l, c) in g_p.constraints.iter().enumerate() {
        match &c.kind {
            crate::csp::ConstraintKind::Parallel { q, .. } => {
                for &j in q {
                    kappa[j] |= 1 << l;
                }
            }
            _ => return Err(QuadeqError::NotParallel(l)),
        }
    }
    Ok(kappa)
}

/// Flatten field entries of one coordinate of an assignment into circuit
/// input bits: slot `i` holds `chi(sigma^j(x_{arrangement[i]}))`.
pub fn coordinate_inputs(
    sigma: &crate::csp::Assignment,
    arrangement: &[usize],
    coord: usize,
    t: usize,
) -> Bits {
    Bits::from_fn(arrangement.len() * t, |bit| {
        let slot = bit / t;
        let within = bit % t;
        let value = sigma.values[arrangement[slot]].get(coord);
        (value.bits() >> within) & 1 == 1
    })
}
