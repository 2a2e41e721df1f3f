//! JSON wire format for instances and assignments.
//!
//! Instances:
//! `{"field":{"t":..},"d":..,"k":..,"constraints":[{"u":i,"v":j,"kind":"linear","M":[[..]]}
//!  | {"u":i,"v":j,"kind":"parallel","Q":[..],"sub":[[0|1,..],..]}]}`
//!
//! Assignments: `{"values":[[..],..]}` with entries as element bitmasks.

use super::{Assignment, Constraint, ConstraintKind, CspError, SubTable, VecCspInstance};
use crate::gf::{FieldMatrix, FieldSpec, FieldVector};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    field: FieldSpec,
    d: usize,
    k: usize,
    constraints: Vec<ConstraintJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ConstraintJson {
    Linear {
        u: usize,
        v: usize,
        #[serde(rename = "M")]
        m: Vec<Vec<u8>>,
    },
    Parallel {
        u: usize,
        v: usize,
        #[serde(rename = "Q")]
        q: Vec<usize>,
        sub: Vec<Vec<u8>>,
    },
}

#[derive(Serialize, Deserialize)]
struct AssignmentJson {
    values: Vec<Vec<u8>>,
}

impl VecCspInstance {
    pub fn to_json(&self) -> serde_json::Value {
        let constraints = self
            .constraints
            .iter()
            .map(|c| match &c.kind {
                ConstraintKind::Linear { m } => ConstraintJson::Linear {
                    u: c.u,
                    v: c.v,
                    m: m.to_rows(),
                },
                ConstraintKind::Parallel { sub, q } => ConstraintJson::Parallel {
                    u: c.u,
                    v: c.v,
                    q: q.clone(),
                    sub: sub.to_grid(),
                },
            })
            .collect();
        serde_json::to_value(InstanceJson {
            field: self.field,
            d: self.d,
            k: self.k,
            constraints,
        })
        .expect("instance serialization cannot fail")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, CspError> {
        let raw: InstanceJson = serde_json::from_value(value.clone())
            .map_err(|e| CspError::InvalidInstance(e.to_string()))?;
        let mut constraints = Vec::with_capacity(raw.constraints.len());
        for c in raw.constraints {
            constraints.push(match c {
                ConstraintJson::Linear { u, v, m } => Constraint {
                    u,
                    v,
                    kind: ConstraintKind::Linear {
                        m: FieldMatrix::from_rows(raw.field, &m)?,
                    },
                },
                ConstraintJson::Parallel { u, v, q, sub } => {
                    let n = raw.field.order() as usize;
                    if sub.len() != n || sub.iter().any(|r| r.len() != n) {
                        return Err(CspError::InvalidInstance(format!(
                            "sub table must be {n}x{n}"
                        )));
                    }
                    let flat: Vec<bool> = sub.iter().flatten().map(|&b| b != 0).collect();
                    Constraint {
                        u,
                        v,
                        kind: ConstraintKind::Parallel {
                            sub: SubTable::new(raw.field, flat)?,
                            q,
                        },
                    }
                }
            });
        }
        Ok(VecCspInstance::new(raw.field, raw.d, raw.k, constraints))
    }
}

impl Assignment {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(AssignmentJson {
            values: self.values.iter().map(|v| v.raw().to_vec()).collect(),
        })
        .expect("assignment serialization cannot fail")
    }

    pub fn from_json(
        value: &serde_json::Value,
        spec: FieldSpec,
    ) -> Result<Self, CspError> {
        let raw: AssignmentJson = serde_json::from_value(value.clone())
            .map_err(|e| CspError::InvalidInstance(e.to_string()))?;
        let values = raw
            .values
            .into_iter()
            .map(|v| FieldVector::from_bits(spec, v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Assignment { values })
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{lin1, par1};
    use super::*;

    #[test]
    fn instance_roundtrip() {
        for g in [lin1(), par1()] {
            let j = g.to_json();
            let back = VecCspInstance::from_json(&j).unwrap();
            assert_eq!(g, back);
        }
    }

    #[test]
    fn wire_format_field_names() {
        let j = lin1().to_json();
        let c = &j["constraints"][0];
        assert_eq!(c["kind"], "linear");
        assert_eq!(c["M"][0][0], 1);
        let j = par1().to_json();
        let c = &j["constraints"][0];
        assert_eq!(c["Q"], serde_json::json!([0, 1]));
        assert_eq!(c["sub"][1][1], 0); // NAND rejects (1,1)
    }

    #[test]
    fn assignment_roundtrip() {
        let g = par1();
        let sigma = Assignment::zero(g.field, g.d, g.k);
        let back = Assignment::from_json(&sigma.to_json(), g.field).unwrap();
        assert_eq!(sigma, back);
    }

    #[test]
    fn bad_element_rejected() {
        let j = serde_json::json!({"values": [[7], [0]]});
        assert!(Assignment::from_json(&j, crate::gf::GF2).is_err());
    }
}
