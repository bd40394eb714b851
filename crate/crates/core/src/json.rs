//! JSON encoding of basis elements and formal sums.
//!
//! The schema is stable and lossless against a declared universe:
//!
//! ```text
//! segment     {"label": "rho", "a": 0, "b": 1}
//! GL class    {"segments": [segment, ...]}          ([] is the unit)
//! Sp class    {"gl": glclass, "sp": "sigma"}
//! formal sum  {"kind": "formal_sum", "basis": "gl⊗sp" | "gl⊗gl" | "gl⊗gl⊗gl" | "gl" | "sp",
//!              "terms": [{"left": ..., "right": ..., "mult": 1}, ...]}
//! ```
//!
//! Scalar bases use `"elem"` instead of `"left"`/`"right"`; the triple basis
//! adds `"middle"`. Terms appear in display order (left-factor rank, then
//! rendered text), so output is deterministic.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::model::{GLClass, Segment, SpClass, Universe};
use crate::render::TextTerm;
use crate::sum::FormalSum;

fn bad(msg: impl Into<String>) -> Error {
    Error::Json { msg: msg.into() }
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value> {
    obj.get(key).ok_or_else(|| bad(format!("missing `{key}`")))
}

fn as_object<'v>(value: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| bad(format!("{what} is not an object")))
}

pub fn segment_to_json(s: Segment, universe: &Universe) -> Value {
    json!({
        "label": universe.label_name(s.label()),
        "a": s.a(),
        "b": s.b(),
    })
}

pub fn segment_from_json(value: &Value, universe: &Universe) -> Result<Segment> {
    let obj = as_object(value, "segment")?;
    let name = field(obj, "label")?
        .as_str()
        .ok_or_else(|| bad("`label` is not a string"))?;
    let label = universe
        .lookup_gl(name)
        .ok_or_else(|| Error::UnknownLabel { name: name.into() })?;
    let a = field(obj, "a")?
        .as_i64()
        .ok_or_else(|| bad("`a` is not an integer"))?;
    let b = field(obj, "b")?
        .as_i64()
        .ok_or_else(|| bad("`b` is not an integer"))?;
    Segment::new(label, a as i32, b as i32)
}

pub fn glclass_to_json(x: &GLClass, universe: &Universe) -> Value {
    json!({
        "segments": x
            .segments()
            .iter()
            .map(|&s| segment_to_json(s, universe))
            .collect::<Vec<_>>(),
    })
}

pub fn glclass_from_json(value: &Value, universe: &Universe) -> Result<GLClass> {
    let obj = as_object(value, "GL class")?;
    let segments = field(obj, "segments")?
        .as_array()
        .ok_or_else(|| bad("`segments` is not an array"))?;
    Ok(GLClass::new(
        segments
            .iter()
            .map(|v| segment_from_json(v, universe))
            .collect::<Result<Vec<_>>>()?,
    ))
}

pub fn spclass_to_json(x: &SpClass, universe: &Universe) -> Value {
    json!({
        "gl": glclass_to_json(&x.gl_part, universe),
        "sp": universe.sp_name(x.sp_label),
    })
}

pub fn spclass_from_json(value: &Value, universe: &Universe) -> Result<SpClass> {
    let obj = as_object(value, "Sp class")?;
    let gl_part = glclass_from_json(field(obj, "gl")?, universe)?;
    let name = field(obj, "sp")?
        .as_str()
        .ok_or_else(|| bad("`sp` is not a string"))?;
    let sp = universe
        .lookup_sp(name)
        .ok_or_else(|| Error::UnknownLabel { name: name.into() })?;
    Ok(SpClass::new(gl_part, sp))
}

/// A basis element with a JSON term encoding inside a formal sum.
pub trait JsonTerm: Sized {
    /// The `basis` discriminator of sums over this element kind.
    const BASIS: &'static str;
    fn term_to_json(&self, universe: &Universe) -> Map<String, Value>;
    fn term_from_json(obj: &Map<String, Value>, universe: &Universe) -> Result<Self>;
}

impl JsonTerm for GLClass {
    const BASIS: &'static str = "gl";

    fn term_to_json(&self, universe: &Universe) -> Map<String, Value> {
        let mut obj = Map::new();
        obj.insert("elem".into(), glclass_to_json(self, universe));
        obj
    }

    fn term_from_json(obj: &Map<String, Value>, universe: &Universe) -> Result<Self> {
        glclass_from_json(field(obj, "elem")?, universe)
    }
}

impl JsonTerm for SpClass {
    const BASIS: &'static str = "sp";

    fn term_to_json(&self, universe: &Universe) -> Map<String, Value> {
        let mut obj = Map::new();
        obj.insert("elem".into(), spclass_to_json(self, universe));
        obj
    }

    fn term_from_json(obj: &Map<String, Value>, universe: &Universe) -> Result<Self> {
        spclass_from_json(field(obj, "elem")?, universe)
    }
}

impl JsonTerm for (GLClass, GLClass) {
    const BASIS: &'static str = "gl⊗gl";

    fn term_to_json(&self, universe: &Universe) -> Map<String, Value> {
        let mut obj = Map::new();
        obj.insert("left".into(), glclass_to_json(&self.0, universe));
        obj.insert("right".into(), glclass_to_json(&self.1, universe));
        obj
    }

    fn term_from_json(obj: &Map<String, Value>, universe: &Universe) -> Result<Self> {
        Ok((
            glclass_from_json(field(obj, "left")?, universe)?,
            glclass_from_json(field(obj, "right")?, universe)?,
        ))
    }
}

impl JsonTerm for (GLClass, SpClass) {
    const BASIS: &'static str = "gl⊗sp";

    fn term_to_json(&self, universe: &Universe) -> Map<String, Value> {
        let mut obj = Map::new();
        obj.insert("left".into(), glclass_to_json(&self.0, universe));
        obj.insert("right".into(), spclass_to_json(&self.1, universe));
        obj
    }

    fn term_from_json(obj: &Map<String, Value>, universe: &Universe) -> Result<Self> {
        Ok((
            glclass_from_json(field(obj, "left")?, universe)?,
            spclass_from_json(field(obj, "right")?, universe)?,
        ))
    }
}

impl JsonTerm for (GLClass, GLClass, GLClass) {
    const BASIS: &'static str = "gl⊗gl⊗gl";

    fn term_to_json(&self, universe: &Universe) -> Map<String, Value> {
        let mut obj = Map::new();
        obj.insert("left".into(), glclass_to_json(&self.0, universe));
        obj.insert("middle".into(), glclass_to_json(&self.1, universe));
        obj.insert("right".into(), glclass_to_json(&self.2, universe));
        obj
    }

    fn term_from_json(obj: &Map<String, Value>, universe: &Universe) -> Result<Self> {
        Ok((
            glclass_from_json(field(obj, "left")?, universe)?,
            glclass_from_json(field(obj, "middle")?, universe)?,
            glclass_from_json(field(obj, "right")?, universe)?,
        ))
    }
}

/// Encode a formal sum with terms in display order.
pub fn sum_to_json<B>(sum: &FormalSum<B>, universe: &Universe) -> Value
where
    B: JsonTerm + TextTerm + Ord,
{
    let mut terms: Vec<(u32, String, Map<String, Value>)> = sum
        .iter()
        .map(|(b, m)| {
            let mut obj = b.term_to_json(universe);
            obj.insert("mult".into(), json!(m));
            (b.grade(universe), b.text(universe), obj)
        })
        .collect();
    terms.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    json!({
        "kind": "formal_sum",
        "basis": B::BASIS,
        "terms": terms.into_iter().map(|(_, _, obj)| Value::Object(obj)).collect::<Vec<_>>(),
    })
}

/// Decode a formal sum produced by [`sum_to_json`].
pub fn sum_from_json<B>(value: &Value, universe: &Universe) -> Result<FormalSum<B>>
where
    B: JsonTerm + Ord,
{
    let obj = as_object(value, "formal sum")?;
    if field(obj, "kind")?.as_str() != Some("formal_sum") {
        return Err(bad("`kind` is not \"formal_sum\""));
    }
    if field(obj, "basis")?.as_str() != Some(B::BASIS) {
        return Err(bad(format!("`basis` is not \"{}\"", B::BASIS)));
    }
    let terms = field(obj, "terms")?
        .as_array()
        .ok_or_else(|| bad("`terms` is not an array"))?;
    let mut out = FormalSum::zero();
    for term in terms {
        let term = as_object(term, "term")?;
        let mult = field(term, "mult")?
            .as_u64()
            .ok_or_else(|| bad("`mult` is not a nonnegative integer"))?;
        out.insert(B::term_from_json(term, universe)?, mult);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expression, Expr, SessionDeclarations};
    use crate::hopf::{comult_gl, jacquet_sp, m_star};
    use crate::sum::{GlPairSum, LeviSum};

    fn universe() -> Universe {
        SessionDeclarations::parse_inline("rho:GL(1); rho2:GL(2); sigma:Sp(1)")
            .unwrap()
            .build_universe()
            .unwrap()
    }

    #[test]
    fn basis_elements_round_trip() {
        let u = universe();
        for text in ["1", "Z[-2,1]@rho x rho2", "~rho x Z[0,3]@~rho2"] {
            match parse_expression(text, &u).unwrap() {
                Expr::Gl(x) => {
                    let v = glclass_to_json(&x, &u);
                    assert_eq!(glclass_from_json(&v, &u).unwrap(), x);
                }
                other => panic!("{other:?}"),
            }
        }
        for text in ["sigma", "rho |x sigma", "Z[0,1]@rho x rho2 |x sigma"] {
            match parse_expression(text, &u).unwrap() {
                Expr::Sp(x) => {
                    let v = spclass_to_json(&x, &u);
                    assert_eq!(spclass_from_json(&v, &u).unwrap(), x);
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn sums_round_trip() {
        let u = universe();
        match parse_expression("Z[0,1]@rho x rho2", &u).unwrap() {
            Expr::Gl(x) => {
                let sum = comult_gl(&x);
                let v = sum_to_json(&sum, &u);
                assert_eq!(sum_from_json::<(GLClass, GLClass)>(&v, &u).unwrap(), sum);
                let m = m_star(&x, &u);
                let v = sum_to_json(&m, &u);
                assert_eq!(sum_from_json::<(GLClass, GLClass)>(&v, &u).unwrap(), m);
            }
            other => panic!("{other:?}"),
        }
        match parse_expression("rho |x sigma", &u).unwrap() {
            Expr::Sp(x) => {
                let sum = jacquet_sp(&x, 1, &u).unwrap();
                let v = sum_to_json(&sum, &u);
                assert_eq!(sum_from_json::<(GLClass, SpClass)>(&v, &u).unwrap(), sum);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schema_shape_is_stable() {
        let u = universe();
        match parse_expression("rho |x sigma", &u).unwrap() {
            Expr::Sp(x) => {
                let v = sum_to_json(&jacquet_sp(&x, 0, &u).unwrap(), &u);
                assert_eq!(v["kind"], "formal_sum");
                assert_eq!(v["basis"], "gl⊗sp");
                assert_eq!(v["terms"][0]["mult"], 1);
                assert_eq!(v["terms"][0]["left"]["segments"], json!([]));
                assert_eq!(v["terms"][0]["right"]["sp"], "sigma");
                assert_eq!(v["terms"][0]["right"]["gl"]["segments"][0]["label"], "rho");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mismatched_basis_is_rejected() {
        let u = universe();
        let v = sum_to_json(&GlPairSum::zero(), &u);
        assert!(sum_from_json::<(GLClass, SpClass)>(&v, &u).is_err());
        assert!(sum_from_json::<(GLClass, GLClass)>(&json!({"kind": "x"}), &u).is_err());
        let _ = sum_to_json(&LeviSum::zero(), &u);
    }
}
