//! JSON encodings: exact rationals as `"a/b"` strings, complex values as
//! `{re, im}`, floats as shortest round-trip decimals (serde_json's default).

use crlab_core::algebra::{rat_string, ExactMatrix, PointAssignment, GR};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

pub fn gr(x: &GR) -> Value {
    json!({ "re": rat_string(&x.re), "im": rat_string(&x.im) })
}

pub fn matrix(m: &ExactMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(gr).collect())).collect())
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn complex_matrix(rows: usize, cols: usize, at: impl Fn(usize, usize) -> Complex64) -> Value {
    Value::Array((0..rows).map(|i| Value::Array((0..cols).map(|j| complex(at(i, j))).collect())).collect())
}

/// Holomorphic and real coordinates by variable name.
pub fn point(p: &PointAssignment) -> Value {
    let mut m = Map::new();
    for (v, x) in p.coordinates() {
        m.insert(v.to_string(), gr(x));
    }
    Value::Object(m)
}

pub fn strings<T: ToString>(items: &[T]) -> Value {
    Value::Array(items.iter().map(|x| Value::String(x.to_string())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crlab_core::algebra::Var;

    #[test]
    fn exact_encodings() {
        assert_eq!(gr(&GR::ratio(-4, 6)), json!({"re": "-2/3", "im": "0"}));
        let p = PointAssignment::new().with(Var::z(1), GR::from_ints(1, 2)).unwrap();
        assert_eq!(point(&p), json!({"z1": {"re": "1", "im": "2"}}));
        assert_eq!(complex(Complex64::new(0.1, -2.5)).to_string(), r#"{"im":-2.5,"re":0.1}"#);
    }
}
