//! Reduction from structured 3SAT to a vector-valued CSP over `GF(8)^d`.
//!
//! Clauses and variables are partitioned into `ell` parts each. For every
//! combination of clause part `p`, variable part `q`, literal position `j`,
//! occurrence rank `s`, and sign `b`, the instance holds a clause-side
//! vertex `z_{p,q,j,s,b}` (entries indexed by the clauses of part `p`) and a
//! variable-side vertex `w_{p,q,j,s,b}` (entries indexed by the variables of
//! part `q`, stored after a permutation that aligns matched entries).
//!
//! * One parallel constraint per `(p,q,j,s,b)` applies the clause/variable
//!   consistency test on the matched coordinates.
//! * Equality cycles over the `z`-duplicates of each clause part and
//!   permuted-equality cycles over the `w`-duplicates of each variable part
//!   force all duplicates to encode one global assignment.
//!
//! Vertex and constraint orders are fixed so serialized instances are
//! bit-exact. With every variable in at most four clauses the counts are
//! exactly `|V| = 48*ell^2` and `|E| = 72*ell^2`; formulas with more
//! occurrences are handled by growing the occurrence range `s_max`, giving
//! `|V| = 12*s_max*ell^2` and `|E| = 18*s_max*ell^2`.

use super::{Cnf3, SatError};
use crate::csp::{Assignment, Constraint, ConstraintKind, Rational, SubTable, VecCspInstance};
use crate::gf::{FieldMatrix, FieldVector, GF8};
use serde::{Deserialize, Serialize};

/// One appearance of a variable: which clause, which literal position, and
/// with which sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub clause: usize,
    pub position: usize,
    pub negated: bool,
}

/// How clauses and variables were split into parts, plus the fixed
/// per-variable occurrence order (clause-index order; any fixed order is
/// valid).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionPlan {
    pub ell: usize,
    pub s_max: usize,
    pub d: usize,
    pub clause_parts: Vec<Vec<usize>>,
    pub variable_parts: Vec<Vec<usize>>,
    pub occurrence_order: Vec<Vec<Occurrence>>,
    /// clause id -> (part, index within part)
    pub clause_loc: Vec<(usize, usize)>,
    /// variable id -> (part, index within part)
    pub var_loc: Vec<(usize, usize)>,
}

/// Index of a `(p, q, j, s, b)` combination; all components 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaB {
    pub p: usize,
    pub q: usize,
    pub j: usize,
    pub s: usize,
    pub b: bool,
}

/// The matched `(clause entry, variable entry)` pairs for one `(zeta, b)`
/// and the full permutation of `[d]` extending that matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub zeta: ZetaB,
    pub pairs: Vec<(usize, usize)>,
    pub kappa: Vec<usize>,
}

/// Everything the reduction produced: the instance plus the sidecar data
/// needed to lift witnesses into it and project solutions out of it.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub cnf: Cnf3,
    pub plan: PartitionPlan,
    pub matchings: Vec<Matching>,
    pub instance: VecCspInstance,
}

/// Consistency test between a clause entry and a variable entry: the clause
/// assignment `tau` (three literal values packed little-endian into a GF(8)
/// bitmask) must be satisfying, the variable entry `c` must be binary, and
/// literal `j`'s value must equal `c + b`.
pub fn build_pi_jb(j: usize, b: bool) -> SubTable {
    assert!(j < 3, "literal position out of range");
    SubTable::from_fn(GF8, move |tau, c| {
        let tau_bits = tau.bits();
        let c_bits = c.bits();
        c_bits <= 1 && tau_bits != 0 && ((tau_bits >> j) & 1) == (c_bits ^ b as u8)
    })
}

fn chunk(ids: usize, ell: usize) -> Vec<Vec<usize>> {
    let size = ids.div_ceil(ell);
    (0..ell)
        .map(|p| {
            let lo = (p * size).min(ids);
            let hi = ((p + 1) * size).min(ids);
            (lo..hi).collect()
        })
        .collect()
}

pub fn build_plan(cnf: &Cnf3, ell: usize) -> Result<PartitionPlan, SatError> {
    if ell == 0 {
        return Err(SatError::BadInput("ell must be positive".into()));
    }
    let clause_parts = chunk(cnf.m(), ell);
    let variable_parts = chunk(cnf.n, ell);

    let mut occurrence_order = vec![Vec::new(); cnf.n];
    for (c, clause) in cnf.clauses.iter().enumerate() {
        for (j, lit) in clause.iter().enumerate() {
            occurrence_order[lit.var].push(Occurrence {
                clause: c,
                position: j,
                negated: lit.negated,
            });
        }
    }
    // clause-index order is already guaranteed by the loop above
    let s_max = occurrence_order
        .iter()
        .map(Vec::len)
        .max()
        .unwrap_or(0)
        .max(4);
    let d = cnf.m().div_ceil(ell).max(cnf.n.div_ceil(ell));

    let mut clause_loc = vec![(0, 0); cnf.m()];
    for (p, part) in clause_parts.iter().enumerate() {
        for (i, &c) in part.iter().enumerate() {
            clause_loc[c] = (p, i);
        }
    }
    let mut var_loc = vec![(0, 0); cnf.n];
    for (q, part) in variable_parts.iter().enumerate() {
        for (i, &x) in part.iter().enumerate() {
            var_loc[x] = (q, i);
        }
    }

    Ok(PartitionPlan {
        ell,
        s_max,
        d,
        clause_parts,
        variable_parts,
        occurrence_order,
        clause_loc,
        var_loc,
    })
}

impl PartitionPlan {
    /// Lexicographic rank of `(p, q, j, s, b)`.
    pub fn zeta_index(&self, z: ZetaB) -> usize {
        (((z.p * self.ell + z.q) * 3 + z.j) * self.s_max + z.s) * 2 + z.b as usize
    }

    pub fn zeta_count(&self) -> usize {
        self.ell * self.ell * 3 * self.s_max * 2
    }

    pub fn z_var(&self, z: ZetaB) -> usize {
        self.zeta_index(z)
    }

    pub fn w_var(&self, z: ZetaB) -> usize {
        self.zeta_count() + self.zeta_index(z)
    }

    pub fn iter_zeta(&self) -> impl Iterator<Item = ZetaB> + '_ {
        let (ell, s_max) = (self.ell, self.s_max);
        (0..ell).flat_map(move |p| {
            (0..ell).flat_map(move |q| {
                (0..3).flat_map(move |j| {
                    (0..s_max).flat_map(move |s| {
                        [false, true].into_iter().map(move |b| ZetaB { p, q, j, s, b })
                    })
                })
            })
        })
    }
}

fn build_matching(cnf: &Cnf3, plan: &PartitionPlan, zeta: ZetaB) -> Matching {
    let mut pairs = Vec::new();
    for (x_local, &x) in plan.variable_parts[zeta.q].iter().enumerate() {
        if let Some(occ) = plan.occurrence_order[x].get(zeta.s) {
            if occ.position == zeta.j
                && occ.negated == zeta.b
                && plan.clause_loc[occ.clause].0 == zeta.p
            {
                pairs.push((plan.clause_loc[occ.clause].1, x_local));
            }
        }
    }
    let _ = cnf;
    pairs.sort_unstable();

    // extend the partial matching to a permutation of [d]: unmatched
    // sources map to unmatched targets in ascending order
    let d = plan.d;
    let mut kappa = vec![usize::MAX; d];
    let mut target_used = vec![false; d];
    for &(c, x) in &pairs {
        kappa[c] = x;
        target_used[x] = true;
    }
    let mut free_targets = (0..d).filter(|&x| !target_used[x]);
    for slot in kappa.iter_mut() {
        if *slot == usize::MAX {
            *slot = free_targets.next().expect("matching smaller than d");
        }
    }
    Matching { zeta, pairs, kappa }
}

fn inverse_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// The full reduction. For any well-formed input the output is a valid
/// vector-valued CSP with `12*s_max*ell^2` variables and `18*s_max*ell^2`
/// constraints, satisfiable iff the formula is.
pub fn reduce_sat_to_veccsp(cnf: &Cnf3, ell: usize) -> Result<Reduction, SatError> {
    for (i, c) in cnf.clauses.iter().enumerate() {
        if c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var {
            return Err(SatError::BadInput(format!(
                "clause {i} does not have three distinct variables"
            )));
        }
        if let Some(l) = c.iter().find(|l| l.var >= cnf.n) {
            return Err(SatError::BadInput(format!(
                "clause {i} references variable {} beyond n={}",
                l.var + 1,
                cnf.n
            )));
        }
    }
    let plan = build_plan(cnf, ell)?;
    let d = plan.d;
    let matchings: Vec<Matching> = plan.iter_zeta().map(|z| build_matching(cnf, &plan, z)).collect();

    let mut constraints = Vec::new();

    // parallel clause/variable consistency edges, one per (zeta, b)
    for m in &matchings {
        constraints.push(Constraint {
            u: plan.z_var(m.zeta),
            v: plan.w_var(m.zeta),
            kind: ConstraintKind::Parallel {
                sub: build_pi_jb(m.zeta.j, m.zeta.b),
                q: m.pairs.iter().map(|&(c, _)| c).collect(),
            },
        });
    }

    // equality cycle over the z-duplicates of each clause part
    for p in 0..plan.ell {
        let nodes: Vec<usize> = plan
            .iter_zeta()
            .filter(|z| z.p == p)
            .map(|z| plan.z_var(z))
            .collect();
        for i in 0..nodes.len() {
            constraints.push(Constraint {
                u: nodes[i],
                v: nodes[(i + 1) % nodes.len()],
                kind: ConstraintKind::Linear {
                    m: FieldMatrix::identity(GF8, d),
                },
            });
        }
    }

    // permuted-equality cycle over the w-duplicates of each variable part
    for q in 0..plan.ell {
        let nodes: Vec<ZetaB> = plan.iter_zeta().filter(|z| z.q == q).collect();
        for i in 0..nodes.len() {
            let hat = nodes[i];
            let tilde = nodes[(i + 1) % nodes.len()];
            let kappa_hat = &matchings[plan.zeta_index(hat)].kappa;
            let kappa_tilde_inv = inverse_perm(&matchings[plan.zeta_index(tilde)].kappa);
            // stored hat[i] = raw[kappa_hat(i)] and stored tilde[i] =
            // raw[kappa_tilde(i)], so hat = M tilde with (Mv)[i] =
            // v[kappa_tilde^{-1}(kappa_hat(i))]
            let perm: Vec<usize> = (0..d).map(|i| kappa_tilde_inv[kappa_hat[i]]).collect();
            constraints.push(Constraint {
                u: plan.w_var(hat),
                v: plan.w_var(tilde),
                kind: ConstraintKind::Linear {
                    m: FieldMatrix::permutation(GF8, &perm),
                },
            });
        }
    }

    let instance = VecCspInstance::new(GF8, d, 2 * plan.zeta_count(), constraints);
    Ok(Reduction {
        cnf: cnf.clone(),
        plan,
        matchings,
        instance,
    })
}

impl Reduction {
    /// Clause assignment induced by a boolean assignment: the three literal
    /// values packed little-endian (position 1 is bit 0).
    fn clause_tau(&self, clause: usize, assignment: &[bool]) -> u8 {
        let mut tau = 0u8;
        for (j, lit) in self.cnf.clauses[clause].iter().enumerate() {
            if lit.value(assignment) {
                tau |= 1 << j;
            }
        }
        tau
    }

    /// Lift a boolean assignment into the reduced instance. Defined for any
    /// total assignment; the lift of a satisfying assignment is a solution.
    pub fn lift_assignment(&self, assignment: &[bool]) -> Assignment {
        assert_eq!(assignment.len(), self.cnf.n, "assignment must be total");
        let plan = &self.plan;
        let d = plan.d;
        let mut values = vec![FieldVector::zero(GF8, d); self.instance.k];
        for m in &self.matchings {
            let z = m.zeta;
            // clause-side vertex: entry c holds tau(clause) for used entries
            let mut zv = FieldVector::zero(GF8, d);
            for (c_local, &c) in plan.clause_parts[z.p].iter().enumerate() {
                zv.set(c_local, GF8.el(self.clause_tau(c, assignment)));
            }
            values[plan.z_var(z)] = zv;
            // variable-side vertex, stored after the kappa rearrangement:
            // stored[i] = raw[kappa(i)]
            let mut raw = vec![0u8; d];
            for (x_local, &x) in plan.variable_parts[z.q].iter().enumerate() {
                raw[x_local] = assignment[x] as u8;
            }
            let wv = FieldVector::from_bits(GF8, (0..d).map(|i| raw[m.kappa[i]]).collect())
                .expect("binary entries are valid GF(8) elements");
            values[plan.w_var(z)] = wv;
        }
        Assignment { values }
    }

    /// Read a boolean assignment back out of a solution of the reduced
    /// instance. Errors unless the input satisfies every constraint; the
    /// result satisfies the original formula.
    pub fn project_solution(&self, sigma: &Assignment) -> Result<Vec<bool>, SatError> {
        let val = self
            .instance
            .evaluate(sigma)
            .map_err(|e| SatError::BadInput(e.to_string()))?;
        if val != Rational::from_integer(1) {
            return Err(SatError::NotASolution);
        }
        let plan = &self.plan;
        let mut assignment = vec![false; self.cnf.n];
        for (x, value) in assignment.iter_mut().enumerate() {
            let (q, x_local) = plan.var_loc[x];
            // the cycles force all duplicates consistent, so read the first
            let zeta = ZetaB { p: 0, q, j: 0, s: 0, b: false };
            let m = &self.matchings[plan.zeta_index(zeta)];
            let stored_pos = m.kappa.iter().position(|&t| t == x_local).expect("kappa is a permutation");
            let e = sigma.values[plan.w_var(zeta)].get(stored_pos);
            // entries of variables that occur in some clause are forced
            // binary; unconstrained ones default to false
            *value = e.bits() == 1;
        }
        if !self.cnf.satisfied(&assignment) {
            return Err(SatError::NotASolution);
        }
        Ok(assignment)
    }
}
