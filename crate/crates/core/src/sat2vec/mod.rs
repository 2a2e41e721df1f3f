//! 3SAT frontend: DIMACS ingestion, structure checks, a brute-force oracle,
//! and random formula generators for test corpora.
//!
//! Every clause must contain exactly three distinct variables. The
//! reduction to vector-valued CSPs lives in [`reduce`].

pub mod reduce;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: clause does not have exactly three distinct variables")]
    NotThreeDistinct { line: usize },
    #[error("formula has {0} variables, brute force cap is {1}")]
    TooManyVariables(usize, usize),
    #[error("reduction input invalid: {0}")]
    BadInput(String),
    #[error("assignment is not a solution of the reduced instance")]
    NotASolution,
}

/// A signed literal over 0-based variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn value(&self, assignment: &[bool]) -> bool {
        assignment[self.var] ^ self.negated
    }
}

/// A 3CNF formula where each clause has exactly three distinct variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf3 {
    pub n: usize,
    pub clauses: Vec<[Lit; 3]>,
}

impl Cnf3 {
    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clause_satisfied(&self, c: usize, assignment: &[bool]) -> bool {
        self.clauses[c].iter().any(|l| l.value(assignment))
    }

    pub fn satisfied(&self, assignment: &[bool]) -> bool {
        (0..self.m()).all(|c| self.clause_satisfied(c, assignment))
    }
}

/// Parse DIMACS CNF text. The `p cnf` header is optional; comment lines
/// start with `c` or `%`. Clauses are zero-terminated and may not repeat a
/// variable.
pub fn parse_dimacs(text: &str) -> Result<Cnf3, SatError> {
    let mut n_declared = 0usize;
    let mut max_var = 0usize;
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut clause_start_line = 1usize;

    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            let mut parts = trimmed.split_whitespace();
            let (_p, fmt) = (parts.next(), parts.next());
            if fmt != Some("cnf") {
                return Err(SatError::Parse {
                    line: line_no,
                    msg: format!("unsupported problem line {trimmed:?}"),
                });
            }
            n_declared = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or(SatError::Parse {
                    line: line_no,
                    msg: "missing variable count in problem line".into(),
                })?;
            continue;
        }
        for tok in trimmed.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| SatError::Parse {
                line: line_no,
                msg: format!("bad token {tok:?}"),
            })?;
            if v == 0 {
                finish_clause(&mut current, clause_start_line, &mut clauses)?;
                clause_start_line = line_no;
            } else {
                if current.is_empty() {
                    clause_start_line = line_no;
                }
                let var = v.unsigned_abs() as usize - 1;
                max_var = max_var.max(var + 1);
                current.push(Lit { var, negated: v < 0 });
            }
        }
    }
    if !current.is_empty() {
        return Err(SatError::Parse {
            line: clause_start_line,
            msg: "unterminated clause at end of input".into(),
        });
    }
    Ok(Cnf3 {
        n: n_declared.max(max_var),
        clauses,
    })
}

fn finish_clause(
    current: &mut Vec<Lit>,
    line: usize,
    clauses: &mut Vec<[Lit; 3]>,
) -> Result<(), SatError> {
    if current.is_empty() {
        return Ok(()); // stray terminator
    }
    if current.len() != 3 {
        current.clear();
        return Err(SatError::NotThreeDistinct { line });
    }
    let c = [current[0], current[1], current[2]];
    if c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var {
        current.clear();
        return Err(SatError::NotThreeDistinct { line });
    }
    clauses.push(c);
    current.clear();
    Ok(())
}

/// Per-variable occurrence counts and whether the at-most-four-occurrences
/// structure hypothesis holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub occurrences: Vec<usize>,
    pub max_occurrences: usize,
    pub within_four: bool,
}

pub fn check_structure(cnf: &Cnf3) -> StructureReport {
    let mut occurrences = vec![0usize; cnf.n];
    for clause in &cnf.clauses {
        for lit in clause {
            occurrences[lit.var] += 1;
        }
    }
    let max_occurrences = occurrences.iter().copied().max().unwrap_or(0);
    StructureReport {
        occurrences,
        max_occurrences,
        within_four: max_occurrences <= 4,
    }
}

pub const SAT_BRUTE_FORCE_CAP: usize = 24;

/// Exhaustive satisfiability oracle. Assignments are enumerated with
/// variable 0 as the fastest-moving bit, so `Some` returns the first
/// satisfying assignment in that counter order.
pub fn brute_force_sat(cnf: &Cnf3) -> Result<Option<Vec<bool>>, SatError> {
    if cnf.n > SAT_BRUTE_FORCE_CAP {
        return Err(SatError::TooManyVariables(cnf.n, SAT_BRUTE_FORCE_CAP));
    }
    for counter in 0u64..(1u64 << cnf.n) {
        let assignment: Vec<bool> = (0..cnf.n).map(|j| (counter >> j) & 1 == 1).collect();
        if cnf.satisfied(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// Random formula with exactly-three-distinct-variable clauses.
pub fn random_cnf3(rng: &mut impl Rng, n: usize, m: usize) -> Cnf3 {
    assert!(n >= 3, "need at least three variables");
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let mut vars = Vec::with_capacity(3);
        while vars.len() < 3 {
            let v = rng.gen_range(0..n);
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        clauses.push([0, 1, 2].map(|i| Lit {
            var: vars[i],
            negated: rng.gen_bool(0.5),
        }));
    }
    Cnf3 { n, clauses }
}

/// Random formula additionally keeping every variable in at most four
/// clauses (the structured form the headline counting identities assume).
/// Greedy on remaining capacity with a random tiebreak, which never wedges
/// while `3m <= 4n`.
pub fn random_structured_cnf3(rng: &mut impl Rng, n: usize, m: usize) -> Cnf3 {
    assert!(n >= 3, "need at least three variables");
    assert!(3 * m <= 4 * n, "too many clauses for the occurrence bound");
    let mut occ = vec![0usize; n];
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let mut candidates: Vec<usize> = (0..n).filter(|&v| occ[v] < 4).collect();
        // shuffle, then stable-sort by used capacity so the tiebreak is random
        for i in (1..candidates.len()).rev() {
            candidates.swap(i, rng.gen_range(0..=i));
        }
        candidates.sort_by_key(|&v| occ[v]);
        let vars = &candidates[..3];
        for &v in vars {
            occ[v] += 1;
        }
        clauses.push([0, 1, 2].map(|i| Lit {
            var: vars[i],
            negated: rng.gen_bool(0.5),
        }));
    }
    Cnf3 { n, clauses }
}

/// The single-clause fixture `(x1 v x2 v x3)`.
pub fn sat1() -> Cnf3 {
    parse_dimacs("p cnf 3 1\n1 2 3 0\n").expect("fixture parses")
}

/// The complete 8-clause formula over three variables (unsatisfiable).
pub fn complete_formula_3vars() -> Cnf3 {
    let mut clauses = Vec::new();
    for signs in 0..8u8 {
        clauses.push([0, 1, 2].map(|v| Lit {
            var: v,
            negated: (signs >> v) & 1 == 1,
        }));
    }
    Cnf3 { n: 3, clauses }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basics() {
        let cnf = parse_dimacs("p cnf 3 1\n1 2 3 0").unwrap();
        assert_eq!(cnf.n, 3);
        assert_eq!(cnf.clauses.len(), 1);
        assert_eq!(cnf.clauses[0][0], Lit { var: 0, negated: false });

        let two = parse_dimacs("p cnf 4 2\n1 -2 3 0\n-1 2 4 0").unwrap();
        assert_eq!(two.clauses.len(), 2);
        assert_eq!(two.n, 4);
        assert!(two.clauses[0][1].negated);
    }

    #[test]
    fn parse_rejects_repeated_variable() {
        assert!(matches!(
            parse_dimacs("1 1 2 0"),
            Err(SatError::NotThreeDistinct { line: 1 })
        ));
        assert!(matches!(
            parse_dimacs("1 2 0"),
            Err(SatError::NotThreeDistinct { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 3 1\nx y z 0"),
            Err(SatError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn structure_report() {
        let r = check_structure(&sat1());
        assert_eq!(r.max_occurrences, 1);
        assert!(r.within_four);

        let r = check_structure(&complete_formula_3vars());
        assert_eq!(r.max_occurrences, 8);
        assert!(!r.within_four);

        let empty = Cnf3 { n: 0, clauses: vec![] };
        let r = check_structure(&empty);
        assert_eq!(r.max_occurrences, 0);
        assert!(r.within_four);
    }

    #[test]
    fn brute_force_examples() {
        // first satisfying assignment flips x1 only
        let a = brute_force_sat(&sat1()).unwrap().unwrap();
        assert_eq!(a, vec![true, false, false]);

        assert!(brute_force_sat(&complete_formula_3vars()).unwrap().is_none());

        let empty = Cnf3 { n: 0, clauses: vec![] };
        assert_eq!(brute_force_sat(&empty).unwrap(), Some(vec![]));

        let big = Cnf3 { n: 30, clauses: vec![] };
        assert!(matches!(
            brute_force_sat(&big),
            Err(SatError::TooManyVariables(30, 24))
        ));
    }

    #[test]
    fn random_structured_respects_occurrence_bound() {
        let mut rng = crate::rng::sampling_rng(11, 0);
        for _ in 0..20 {
            let cnf = random_structured_cnf3(&mut rng, 9, 12);
            assert!(check_structure(&cnf).within_four);
            for c in &cnf.clauses {
                assert_ne!(c[0].var, c[1].var);
                assert_ne!(c[1].var, c[2].var);
                assert_ne!(c[0].var, c[2].var);
            }
        }
    }
}
