//! JSON catalog files.
//!
//! The top level is an array of entries:
//!
//! ```json
//! [{
//!   "id": "EX1",
//!   "sequence": {"kind": "hypergeometric", "upper": ["1/2", "1/6", "5/6"], "lower": ["1", "1", "1"]},
//!   "z": [{"radicand": 1, "coeff": "-1/512000"}],
//!   "poly": [[{"radicand": 1, "coeff": "263"}], [{"radicand": 1, "coeff": "5418"}]],
//!   "scale": [{"radicand": 15, "coeff": "1/3200"}],
//!   "target": "pi_inverse",
//!   "p_min": 5,
//!   "convergent": true,
//!   "congruences": [{"radicand": 1, "coefficient": "263", "jacobi": -15, "p_exponent": 1, "modulus_exponent": 3}]
//! }]
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{CatalogError, SeriesSpec, SeriesTarget};
use crate::congruence::CongruenceTarget;
use crate::quad_ring::{MultiQuadElement, Radicand};
use crate::rational::Rational;
use crate::sequences::SequenceKind;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    radicand: i64,
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CongruenceDoc {
    radicand: i64,
    coefficient: Rational,
    jacobi: i64,
    p_exponent: u32,
    modulus_exponent: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    id: String,
    sequence: SequenceKind,
    z: Vec<TermDoc>,
    poly: Vec<Vec<TermDoc>>,
    scale: Vec<TermDoc>,
    target: SeriesTarget,
    p_min: u64,
    convergent: bool,
    congruences: Vec<CongruenceDoc>,
}

fn element_doc(x: &MultiQuadElement) -> Vec<TermDoc> {
    x.components().map(|(d, c)| TermDoc { radicand: d.get(), coeff: c.clone() }).collect()
}

fn entry_doc(spec: &SeriesSpec) -> EntryDoc {
    EntryDoc {
        id: spec.id.clone(),
        sequence: spec.kind.clone(),
        z: element_doc(&spec.z),
        poly: spec.poly.iter().map(element_doc).collect(),
        scale: element_doc(&spec.scale),
        target: spec.target,
        p_min: spec.p_min,
        convergent: spec.convergent,
        congruences: spec
            .targets
            .iter()
            .map(|t| CongruenceDoc {
                radicand: t.component.get(),
                coefficient: t.coefficient.clone(),
                jacobi: t.jacobi_radicand,
                p_exponent: t.p_exponent,
                modulus_exponent: t.modulus_exponent,
            })
            .collect(),
    }
}

fn element_from_doc(id: &str, field: &str, terms: Vec<TermDoc>) -> Result<MultiQuadElement, CatalogError> {
    let invalid = |message: String| CatalogError::Validation { id: id.to_string(), message };
    let mut seen = BTreeSet::new();
    let mut out = MultiQuadElement::zero();
    for t in terms {
        let d = Radicand::new(t.radicand).map_err(|e| invalid(format!("{field}: {e}")))?;
        if !seen.insert(d) {
            return Err(invalid(format!("{field}: radicand {d} listed twice")));
        }
        out = &out + &MultiQuadElement::from_basis(d, t.coeff);
    }
    Ok(out)
}

fn spec_from_doc(doc: EntryDoc) -> Result<SeriesSpec, CatalogError> {
    let id = doc.id;
    let invalid = |message: String| CatalogError::Validation { id: id.clone(), message };
    let z = element_from_doc(&id, "z", doc.z)?;
    let scale = element_from_doc(&id, "scale", doc.scale)?;
    let poly = doc
        .poly
        .into_iter()
        .enumerate()
        .map(|(i, terms)| element_from_doc(&id, &format!("poly[{i}]"), terms))
        .collect::<Result<Vec<_>, _>>()?;
    let targets = doc
        .congruences
        .into_iter()
        .map(|c| {
            let d = Radicand::new(c.radicand).map_err(|e| invalid(format!("congruence: {e}")))?;
            CongruenceTarget::new(d, c.coefficient, c.jacobi, c.p_exponent, c.modulus_exponent)
                .map_err(|e| invalid(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let spec = SeriesSpec {
        id: id.clone(),
        kind: doc.sequence,
        z,
        poly,
        scale,
        target: doc.target,
        p_min: doc.p_min,
        targets,
        convergent: doc.convergent,
    };
    spec.validate()?;
    Ok(spec)
}

/// Parses and validates a catalog document.
pub fn load_catalog(source: &str) -> Result<Vec<SeriesSpec>, CatalogError> {
    let docs: Vec<EntryDoc> = serde_json::from_str(source).map_err(|e| CatalogError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(docs.len());
    for doc in docs {
        if !seen.insert(doc.id.clone()) {
            return Err(CatalogError::DuplicateId(doc.id));
        }
        out.push(spec_from_doc(doc)?);
    }
    Ok(out)
}

/// Pretty-printed catalog JSON; radicands appear in increasing order.
pub fn serialize_catalog(specs: &[SeriesSpec]) -> String {
    let docs: Vec<EntryDoc> = specs.iter().map(entry_doc).collect();
    serde_json::to_string_pretty(&docs).expect("catalog documents serialize")
}

/// Appends `extra` to `base`, rejecting ids already present.
pub fn merge_catalogs(mut base: Vec<SeriesSpec>, extra: Vec<SeriesSpec>) -> Result<Vec<SeriesSpec>, CatalogError> {
    for spec in extra {
        if base.iter().any(|s| s.id == spec.id) {
            return Err(CatalogError::DuplicateId(spec.id));
        }
        base.push(spec);
    }
    Ok(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin, builtins};

    const EX1_DOC: &str = r#"[{
      "id": "EX1",
      "sequence": {"kind": "hypergeometric", "upper": ["1/2", "1/6", "5/6"], "lower": ["1", "1", "1"]},
      "z": [{"radicand": 1, "coeff": "-1/512000"}],
      "poly": [[{"radicand": 1, "coeff": "263"}], [{"radicand": 1, "coeff": "5418"}]],
      "scale": [{"radicand": 15, "coeff": "1/3200"}],
      "target": "pi_inverse",
      "p_min": 5,
      "convergent": true,
      "congruences": [{"radicand": 1, "coefficient": "263", "jacobi": -15, "p_exponent": 1, "modulus_exponent": 3}]
    }]"#;

    #[test]
    fn handwritten_ex1_matches_builtin() {
        let specs = load_catalog(EX1_DOC).unwrap();
        assert_eq!(specs, vec![builtin("EX1").unwrap()]);
    }

    #[test]
    fn builtins_round_trip() {
        let all = builtins();
        assert_eq!(load_catalog(&serialize_catalog(&all)).unwrap(), all);
    }

    #[test]
    fn arity_mismatch_is_a_validation_error() {
        let doc = EX1_DOC.replace(
            r#"[{"radicand": 1, "coeff": "5418"}]]"#,
            r#"[{"radicand": 1, "coeff": "5418"}], [{"radicand": 1, "coeff": "1"}]]"#,
        );
        let doc = doc.replace("\"pi_inverse\"", "\"none\"");
        assert!(matches!(load_catalog(&doc), Err(CatalogError::Validation { .. })));
    }

    #[test]
    fn non_square_free_radicand_is_rejected() {
        let doc = EX1_DOC.replace(r#""z": [{"radicand": 1,"#, r#""z": [{"radicand": 12,"#);
        match load_catalog(&doc) {
            Err(CatalogError::Validation { message, .. }) => assert!(message.contains("square-free"), "{message}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_location() {
        let doc = EX1_DOC.replace("\"-1/512000\"", "\"-1/0\"");
        match load_catalog(&doc) {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load_catalog("[{"), Err(CatalogError::Parse { .. })));
    }

    #[test]
    fn duplicate_ids() {
        let body = EX1_DOC.trim().trim_start_matches('[').trim_end_matches(']');
        let doc = format!("[{body},{body}]");
        assert_eq!(load_catalog(&doc), Err(CatalogError::DuplicateId("EX1".into())));
        let extra = load_catalog(EX1_DOC).unwrap();
        assert_eq!(merge_catalogs(builtins(), extra), Err(CatalogError::DuplicateId("EX1".into())));
    }

    #[test]
    fn other_sequence_kinds_parse() {
        let doc = EX1_DOC.replace(
            r#"{"kind": "hypergeometric", "upper": ["1/2", "1/6", "5/6"], "lower": ["1", "1", "1"]}"#,
            r#"{"kind": "almkvist_zudilin"}"#,
        );
        let specs = load_catalog(&doc).unwrap();
        assert_eq!(specs[0].kind, SequenceKind::AlmkvistZudilin);
    }
}
