//! Vector-valued CSP data model.
//!
//! A `VecCspInstance` has `k` variables over `F^d` and binary constraints
//! that are either linear (`u = M v`, head `u`) or parallel (one
//! sub-constraint applied on every coordinate of a subset `Q`). Each
//! variable may touch at most one parallel constraint; parallel edges
//! between the same endpoints are allowed and constraint identity is
//! positional.
//!
//! Instances are immutable after construction and evaluation is pure, so
//! everything here can be shared across threads.

pub mod json;

use crate::gf::{FieldElement, FieldMatrix, FieldSpec, FieldVector, GfError};
use num::rational::Ratio;
use thiserror::Error;

pub type Rational = Ratio<u64>;

#[derive(Debug, Error)]
pub enum CspError {
    #[error("assignment covers {got} variables, instance has {want}")]
    AssignmentArity { got: usize, want: usize },
    #[error("assignment value for variable {var} has wrong shape")]
    AssignmentShape { var: usize },
    #[error("search space of 2^{0} assignments exceeds the cap of 2^{1}")]
    SearchSpaceExceeded(u32, u32),
    #[error("instance is invalid: {0}")]
    InvalidInstance(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Boolean table for one parallel sub-constraint, `|F| x |F|`, indexed by
/// `(head entry, tail entry)` bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubTable {
    spec: FieldSpec,
    accept: Vec<bool>,
}

impl SubTable {
    pub fn new(spec: FieldSpec, accept: Vec<bool>) -> Result<Self, CspError> {
        let n = spec.order() as usize;
        if accept.len() != n * n {
            return Err(CspError::InvalidInstance(format!(
                "sub-constraint table has {} entries, expected {}",
                accept.len(),
                n * n
            )));
        }
        Ok(SubTable { spec, accept })
    }

    pub fn from_fn(spec: FieldSpec, f: impl Fn(FieldElement, FieldElement) -> bool) -> Self {
        let n = spec.order() as usize;
        let mut accept = Vec::with_capacity(n * n);
        for a in spec.elements() {
            for b in spec.elements() {
                accept.push(f(a, b));
            }
        }
        SubTable { spec, accept }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn accepts(&self, a: FieldElement, b: FieldElement) -> bool {
        let n = self.spec.order() as usize;
        self.accept[a.bits() as usize * n + b.bits() as usize]
    }

    pub fn to_grid(&self) -> Vec<Vec<u8>> {
        let n = self.spec.order() as usize;
        (0..n)
            .map(|a| (0..n).map(|b| self.accept[a * n + b] as u8).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConstraintKind {
    /// `head = M * tail`.
    Linear { m: FieldMatrix },
    /// `sub(head[i], tail[i])` for every coordinate `i` in `q`.
    Parallel { sub: SubTable, q: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub u: usize,
    pub v: usize,
    pub kind: ConstraintKind,
}

impl Constraint {
    pub fn is_parallel(&self) -> bool {
        matches!(self.kind, ConstraintKind::Parallel { .. })
    }
}

/// Total assignment: one `F^d` value per variable, in variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub values: Vec<FieldVector>,
}

impl Assignment {
    pub fn zero(spec: FieldSpec, d: usize, k: usize) -> Self {
        Assignment {
            values: vec![FieldVector::zero(spec, d); k],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VecCspInstance {
    pub field: FieldSpec,
    pub d: usize,
    pub k: usize,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SelfLoop { constraint: usize },
    EndpointOutOfRange { constraint: usize },
    VariableInMultipleParallel { variable: usize, count: usize },
    MatrixShape { constraint: usize, rows: usize, cols: usize },
    CoordinateOutOfRange { constraint: usize, coord: usize },
    TableField { constraint: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::SelfLoop { constraint } => write!(f, "constraint {constraint} is a self-loop"),
            Violation::EndpointOutOfRange { constraint } => {
                write!(f, "constraint {constraint} references a variable out of range")
            }
            Violation::VariableInMultipleParallel { variable, count } => {
                write!(f, "variable {variable} is in {count} parallel constraints")
            }
            Violation::MatrixShape { constraint, rows, cols } => {
                write!(f, "constraint {constraint} has a {rows}x{cols} matrix, expected square of dimension d")
            }
            Violation::CoordinateOutOfRange { constraint, coord } => {
                write!(f, "constraint {constraint} applies to coordinate {coord} >= d")
            }
            Violation::TableField { constraint } => {
                write!(f, "constraint {constraint} has a sub-constraint table over the wrong field")
            }
        }
    }
}

impl VecCspInstance {
    pub fn new(field: FieldSpec, d: usize, k: usize, constraints: Vec<Constraint>) -> Self {
        VecCspInstance { field, d, k, constraints }
    }

    fn check_assignment(&self, sigma: &Assignment) -> Result<(), CspError> {
        if sigma.values.len() != self.k {
            return Err(CspError::AssignmentArity {
                got: sigma.values.len(),
                want: self.k,
            });
        }
        for (var, v) in sigma.values.iter().enumerate() {
            if v.len() != self.d || v.spec() != self.field {
                return Err(CspError::AssignmentShape { var });
            }
        }
        Ok(())
    }

    pub fn constraint_satisfied(&self, c: &Constraint, sigma: &Assignment) -> bool {
        let head = &sigma.values[c.u];
        let tail = &sigma.values[c.v];
        match &c.kind {
            ConstraintKind::Linear { m } => match m.mul_vector(tail) {
                Ok(rhs) => *head == rhs,
                Err(_) => false,
            },
            ConstraintKind::Parallel { sub, q } => {
                q.iter().all(|&i| sub.accepts(head.get(i), tail.get(i)))
            }
        }
    }

    /// Exact satisfied fraction; a constraint-free instance evaluates to 1.
    pub fn evaluate(&self, sigma: &Assignment) -> Result<Rational, CspError> {
        self.check_assignment(sigma)?;
        if self.constraints.is_empty() {
            return Ok(Rational::from_integer(1));
        }
        let satisfied = self
            .constraints
            .iter()
            .filter(|c| self.constraint_satisfied(c, sigma))
            .count() as u64;
        Ok(Rational::new(satisfied, self.constraints.len() as u64))
    }

    pub fn is_solution(&self, sigma: &Assignment) -> Result<bool, CspError> {
        Ok(self.evaluate(sigma)? == Rational::from_integer(1))
    }

    /// Structural diagnostics; an empty list means the instance is a valid
    /// vector-valued CSP.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut parallel_count = vec![0usize; self.k];
        for (i, c) in self.constraints.iter().enumerate() {
            if c.u >= self.k || c.v >= self.k {
                out.push(Violation::EndpointOutOfRange { constraint: i });
                continue;
            }
            if c.u == c.v {
                out.push(Violation::SelfLoop { constraint: i });
            }
            match &c.kind {
                ConstraintKind::Linear { m } => {
                    if m.rows() != self.d || m.cols() != self.d {
                        out.push(Violation::MatrixShape {
                            constraint: i,
                            rows: m.rows(),
                            cols: m.cols(),
                        });
                    }
                }
                ConstraintKind::Parallel { sub, q } => {
                    parallel_count[c.u] += 1;
                    parallel_count[c.v] += 1;
                    if sub.spec() != self.field {
                        out.push(Violation::TableField { constraint: i });
                    }
                    for &coord in q {
                        if coord >= self.d {
                            out.push(Violation::CoordinateOutOfRange { constraint: i, coord });
                        }
                    }
                }
            }
        }
        for (variable, &count) in parallel_count.iter().enumerate() {
            if count > 1 {
                out.push(Violation::VariableInMultipleParallel { variable, count });
            }
        }
        out
    }

    /// Partition constraints into the all-linear and all-parallel
    /// sub-instances over the same variable set.
    pub fn split(&self) -> (VecCspInstance, VecCspInstance) {
        let (parallel, linear): (Vec<_>, Vec<_>) = self
            .constraints
            .iter()
            .cloned()
            .partition(Constraint::is_parallel);
        (
            VecCspInstance::new(self.field, self.d, self.k, linear),
            VecCspInstance::new(self.field, self.d, self.k, parallel),
        )
    }

    pub fn parallel_constraints(&self) -> impl Iterator<Item = (usize, &Constraint)> {
        self.constraints.iter().enumerate().filter(|(_, c)| c.is_parallel())
    }

    fn log2_search_space(&self) -> u32 {
        // (|F|^d)^k = 2^(t*d*k)
        (self.field.t() as u32)
            .saturating_mul(self.d as u32)
            .saturating_mul(self.k as u32)
    }

    /// Exhaustive solver for micro instances. Returns the lexicographically
    /// first solution under variable order and entry-tuple value order.
    pub fn brute_force_solve(&self, cap_log2: u32) -> Result<Option<Assignment>, CspError> {
        let bits = self.log2_search_space();
        if bits > cap_log2 {
            return Err(CspError::SearchSpaceExceeded(bits, cap_log2));
        }
        let per_var: Vec<FieldVector> = FieldVector::iter_lex(self.field, self.d).collect();
        let n_values = per_var.len();
        let mut counters = vec![0usize; self.k];
        loop {
            let sigma = Assignment {
                values: counters.iter().map(|&c| per_var[c].clone()).collect(),
            };
            if self.is_solution(&sigma)? {
                return Ok(Some(sigma));
            }
            // odometer with the last variable fastest, so the first hit is
            // lexicographically minimal
            let mut pos = self.k;
            loop {
                if pos == 0 {
                    return Ok(None);
                }
                pos -= 1;
                counters[pos] += 1;
                if counters[pos] < n_values {
                    break;
                }
                counters[pos] = 0;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Generic gap CSP with explicit per-variable alphabets.
// ---------------------------------------------------------------------------

/// A value of a gap-CSP variable: a tuple of field vectors. Proof-position
/// variables use arity-1 tuples; supernodes use one entry per queried
/// position.
pub type GapValue = Vec<FieldVector>;

#[derive(Clone, Debug)]
pub struct GapAlphabet {
    pub values: Vec<GapValue>,
}

#[derive(Clone, Debug)]
pub struct GapConstraint {
    pub u: usize,
    pub v: usize,
    /// Accepting pairs as `(index into u's alphabet, index into v's alphabet)`.
    pub accepting: std::collections::BTreeSet<(u32, u32)>,
}

/// Generic binary CSP with finite explicit alphabets, used for the
/// materialized gap instances built from micro verifiers.
#[derive(Clone, Debug)]
pub struct GapCspInstance {
    pub alphabets: Vec<GapAlphabet>,
    pub constraints: Vec<GapConstraint>,
}

impl GapCspInstance {
    /// Exact satisfied fraction under an assignment given as one alphabet
    /// index per variable.
    pub fn evaluate(&self, sigma: &[u32]) -> Result<Rational, CspError> {
        if sigma.len() != self.alphabets.len() {
            return Err(CspError::AssignmentArity {
                got: sigma.len(),
                want: self.alphabets.len(),
            });
        }
        for (var, (&s, alpha)) in sigma.iter().zip(&self.alphabets).enumerate() {
            if s as usize >= alpha.values.len() {
                return Err(CspError::AssignmentShape { var });
            }
        }
        if self.constraints.is_empty() {
            return Ok(Rational::from_integer(1));
        }
        let satisfied = self
            .constraints
            .iter()
            .filter(|c| c.accepting.contains(&(sigma[c.u], sigma[c.v])))
            .count() as u64;
        Ok(Rational::new(satisfied, self.constraints.len() as u64))
    }
}

#[cfg(test)]
pub mod fixtures {
    use super::*;
    use crate::gf::{GF2, GF8};

    /// LIN-1: k=2, d=1 over GF(2), one linear equality constraint.
    pub fn lin1() -> VecCspInstance {
        VecCspInstance::new(
            GF2,
            1,
            2,
            vec![Constraint {
                u: 0,
                v: 1,
                kind: ConstraintKind::Linear {
                    m: FieldMatrix::identity(GF2, 1),
                },
            }],
        )
    }

    /// PAR-1: k=2, d=2 over GF(2), one parallel NAND constraint on both
    /// coordinates.
    pub fn par1() -> VecCspInstance {
        VecCspInstance::new(
            GF2,
            2,
            2,
            vec![Constraint {
                u: 0,
                v: 1,
                kind: ConstraintKind::Parallel {
                    sub: SubTable::from_fn(GF2, |a, b| !(a.bits() == 1 && b.bits() == 1)),
                    q: vec![0, 1],
                },
            }],
        )
    }

    pub fn assignment(spec: crate::gf::FieldSpec, rows: &[&[u8]]) -> Assignment {
        Assignment {
            values: rows
                .iter()
                .map(|r| FieldVector::from_bits(spec, r.to_vec()).unwrap())
                .collect(),
        }
    }

    pub fn gf8_assignment(rows: &[&[u8]]) -> Assignment {
        assignment(GF8, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::{assignment, lin1, par1};
    use super::*;
    use crate::gf::GF2;
    use proptest::prelude::*;

    #[test]
    fn evaluate_counts_exactly() {
        let g = par1();
        // both coordinates violate NAND
        let sigma = assignment(GF2, &[&[1, 1], &[1, 1]]);
        assert_eq!(g.evaluate(&sigma).unwrap(), Rational::new(0, 1));
        let ok = assignment(GF2, &[&[0, 0], &[0, 0]]);
        assert_eq!(g.evaluate(&ok).unwrap(), Rational::from_integer(1));
    }

    #[test]
    fn evaluate_is_exact_fraction() {
        // 72 constraints with exactly one violated: 71 vacuous parallel
        // constraints (empty coordinate set) plus one violated equality
        let mut constraints: Vec<Constraint> = (0..71)
            .map(|_| Constraint {
                u: 0,
                v: 1,
                kind: ConstraintKind::Parallel {
                    sub: SubTable::from_fn(GF2, |_, _| false),
                    q: vec![],
                },
            })
            .collect();
        constraints.push(Constraint {
            u: 0,
            v: 1,
            kind: ConstraintKind::Linear { m: FieldMatrix::identity(GF2, 1) },
        });
        let g = VecCspInstance::new(GF2, 1, 2, constraints);
        let sigma = assignment(GF2, &[&[1], &[0]]);
        assert_eq!(g.evaluate(&sigma).unwrap(), Rational::new(71, 72));
    }

    #[test]
    fn evaluate_rejects_partial_assignments() {
        let g = lin1();
        let short = Assignment {
            values: vec![FieldVector::zero(GF2, 1)],
        };
        assert!(matches!(
            g.evaluate(&short),
            Err(CspError::AssignmentArity { got: 1, want: 2 })
        ));
    }

    #[test]
    fn validate_flags_double_parallel() {
        let mut g = par1();
        g.constraints.push(g.constraints[0].clone());
        let violations = g.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::VariableInMultipleParallel { .. })));
        assert!(lin1().validate().is_empty());
        assert!(par1().validate().is_empty());
    }

    #[test]
    fn split_partitions_constraints() {
        let mut g = lin1();
        g.constraints.extend(par1().constraints.clone());
        g.d = 1; // parallel Q references coord 1 which is now out of range, but split is structural
        let (gl, gp) = g.split();
        assert_eq!(gl.constraints.len() + gp.constraints.len(), g.constraints.len());
        assert!(gl.constraints.iter().all(|c| !c.is_parallel()));
        assert!(gp.constraints.iter().all(Constraint::is_parallel));

        let (all_l, none) = lin1().split();
        assert_eq!(all_l.constraints.len(), 1);
        assert!(none.constraints.is_empty());
    }

    #[test]
    fn brute_force_finds_lex_first() {
        let lin = lin1().brute_force_solve(24).unwrap().unwrap();
        assert!(lin.values.iter().all(FieldVector::is_zero));
        let par = par1().brute_force_solve(24).unwrap().unwrap();
        assert!(par.values.iter().all(FieldVector::is_zero));

        // all-rejecting table has no solution
        let dead = VecCspInstance::new(
            GF2,
            1,
            2,
            vec![Constraint {
                u: 0,
                v: 1,
                kind: ConstraintKind::Parallel {
                    sub: SubTable::from_fn(GF2, |_, _| false),
                    q: vec![0],
                },
            }],
        );
        assert!(dead.brute_force_solve(24).unwrap().is_none());

        // cap enforcement
        let big = VecCspInstance::new(crate::gf::GF8, 4, 8, vec![]);
        assert!(matches!(
            big.brute_force_solve(24),
            Err(CspError::SearchSpaceExceeded(96, 24))
        ));
    }

    #[test]
    fn zero_assignment_satisfies_all_linear() {
        let g = lin1();
        let zero = Assignment::zero(GF2, g.d, g.k);
        assert!(g.is_solution(&zero).unwrap());
    }

    #[test]
    fn split_solution_iff_both_sides_exhaustive() {
        // micro instance with one linear and one parallel constraint
        let mut g = par1();
        g.constraints.push(Constraint {
            u: 0,
            v: 1,
            kind: ConstraintKind::Linear {
                m: FieldMatrix::identity(GF2, 2),
            },
        });
        let (gl, gp) = g.split();
        let one = Rational::from_integer(1);
        let values: Vec<FieldVector> = FieldVector::iter_all(GF2, 2).collect();
        for a in &values {
            for b in &values {
                let sigma = Assignment {
                    values: vec![a.clone(), b.clone()],
                };
                let whole = g.evaluate(&sigma).unwrap() == one;
                let parts =
                    gl.evaluate(&sigma).unwrap() == one && gp.evaluate(&sigma).unwrap() == one;
                assert_eq!(whole, parts);
            }
        }
    }

    proptest! {
        /// Evaluation is invariant under reordering of the constraint list.
        #[test]
        fn evaluate_order_invariant(perm_seed in 0u64..1000, val_idx in 0u32..16) {
            let mut g = par1();
            g.constraints.push(Constraint {
                u: 0,
                v: 1,
                kind: ConstraintKind::Linear { m: FieldMatrix::identity(GF2, 2) },
            });
            g.constraints.push(Constraint {
                u: 1,
                v: 0,
                kind: ConstraintKind::Linear { m: FieldMatrix::zero(GF2, 2, 2) },
            });
            let a = FieldVector::from_index(GF2, 2, (val_idx % 4) as u128);
            let b = FieldVector::from_index(GF2, 2, (val_idx / 4) as u128);
            let sigma = Assignment { values: vec![a, b] };
            let before = g.evaluate(&sigma).unwrap();
            // rotate the constraint list by the seed
            let n = g.constraints.len();
            g.constraints.rotate_left((perm_seed as usize) % n);
            prop_assert_eq!(before, g.evaluate(&sigma).unwrap());
        }
    }
}
