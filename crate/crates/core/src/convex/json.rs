//! Body JSON interchange format.
//!
//! ```json
//! { "dim": 2, "rep": "V", "data": [["1", "0"], ["0", "1/2"], ...],
//!   "exact": true, "symmetric": true }
//! ```
//!
//! `rep` is `"V"` (rows are points), `"H"` (rows are `a_1..a_d, b` for
//! `a · x <= b`), or an oracle id: `"ball"` (`data = [[radius]]`),
//! `"lp-sum"` (`parts = [K, L]`, `p`), `"linear"` (`parts = [body]`, `data`
//! the matrix rows), `"polar"` (`parts = [body]`), `"quotient"` (`parts =
//! [body]`, `data = [dir, normal, lift..., coords...]`) and
//! `"plane-projection"` (`parts = [body]`, `data` the two rows). Exact
//! entries are `"p/q"` strings.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::convex::hull::Facet;
use crate::convex::lp_sum::LpSumBody;
use crate::convex::oracle::{LinearImage, Oracle, PlaneProjection, Quotient};
use crate::convex::{ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Field, Rational};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BodyJson {
    pub dim: usize,
    pub rep: String,
    #[serde(default)]
    pub data: Vec<Vec<Value>>,
    #[serde(default)]
    pub exact: bool,
    #[serde(default)]
    pub symmetric: bool,
    /// Exponent of an ℓ_p-sum: a number, or `"inf"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<BodyJson>,
}

fn float_row(v: &[f64]) -> Vec<Value> {
    v.iter().map(|&x| Value::from(x)).collect()
}

fn exact_row(v: &[Rational]) -> Vec<Value> {
    v.iter().map(|x| Value::String(format_rational(x))).collect()
}

fn parse_exact(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_i64(i)),
            None => Ok(<Rational as Field>::from_f64(n.as_f64().unwrap_or(f64::NAN))),
        },
        other => Err(Error::Parse(format!("expected a number or \"p/q\" string, got {other}"))),
    }
}

fn parse_float(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse("bad number".into())),
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        Value::String(s) => Ok(parse_rational(s)?.to_f64()),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

fn float_rows(data: &[Vec<Value>]) -> Result<Vec<Vec<f64>>> {
    data.iter().map(|r| r.iter().map(parse_float).collect()).collect()
}

fn exact_rows(data: &[Vec<Value>]) -> Result<Vec<Vec<Rational>>> {
    data.iter().map(|r| r.iter().map(parse_exact).collect()).collect()
}

fn check_width<T>(rows: &[Vec<T>], width: usize) -> Result<()> {
    match rows.iter().find(|r| r.len() != width) {
        Some(r) => Err(Error::DimensionMismatch { expected: width, got: r.len() }),
        None => Ok(()),
    }
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<Value>> {
    (0..m.nrows()).map(|i| float_row(&m.row(i).iter().copied().collect::<Vec<_>>())).collect()
}

impl BodyJson {
    pub fn from_body(body: &ConvexBody) -> BodyJson {
        let dim = body.dim();
        let symmetric = body.is_symmetric();
        let plain = |rep: &str, data: Vec<Vec<Value>>, parts: Vec<BodyJson>| BodyJson {
            dim,
            rep: rep.into(),
            data,
            exact: false,
            symmetric,
            p: None,
            parts,
        };
        match body {
            ConvexBody::Polytope(p) => match p.exact() {
                Some(e) => BodyJson {
                    exact: true,
                    ..plain("V", e.vertices().iter().map(|v| exact_row(v)).collect(), vec![])
                },
                None => plain("V", p.float().vertices().iter().map(|v| float_row(v)).collect(), vec![]),
            },
            ConvexBody::Oracle(o) => match o {
                Oracle::Ball { radius, .. } => plain("ball", vec![vec![Value::from(*radius)]], vec![]),
                Oracle::LpSum(s) => {
                    let p = if s.p.is_infinite() { Value::from("inf") } else { Value::from(s.p) };
                    BodyJson {
                        p: Some(p),
                        ..plain("lp-sum", vec![], vec![Self::from_body(&s.left), Self::from_body(&s.right)])
                    }
                }
                Oracle::Linear(l) => plain("linear", matrix_rows(&l.map), vec![Self::from_body(&l.body)]),
                Oracle::Polar(b) => plain("polar", vec![], vec![Self::from_body(b)]),
                Oracle::Quotient(q) => {
                    let mut data = vec![float_row(&q.dir), float_row(&q.normal)];
                    data.extend(q.lift.iter().map(|w| float_row(w)));
                    data.extend(q.coords.iter().map(|c| float_row(c)));
                    plain("quotient", data, vec![Self::from_body(&q.body)])
                }
                Oracle::PlaneProjection(pp) => plain(
                    "plane-projection",
                    pp.rows.iter().map(|r| float_row(r)).collect(),
                    vec![Self::from_body(&pp.body)],
                ),
            },
        }
    }

    pub fn to_body(&self) -> Result<ConvexBody> {
        let part = |i: usize| -> Result<ConvexBody> {
            self.parts
                .get(i)
                .ok_or_else(|| Error::Parse(format!("rep {} needs part {i}", self.rep)))?
                .to_body()
        };
        let body = match self.rep.as_str() {
            "V" if self.exact => {
                let rows = exact_rows(&self.data)?;
                check_width(&rows, self.dim)?;
                ConvexBody::from(Polytope::from_points(self.dim, &rows)?)
            }
            "V" => {
                let rows = float_rows(&self.data)?;
                check_width(&rows, self.dim)?;
                ConvexBody::from(Polytope::from_points(self.dim, &rows)?)
            }
            "H" if self.exact => {
                let rows = exact_rows(&self.data)?;
                check_width(&rows, self.dim + 1)?;
                let facets: Vec<Facet<Rational>> = rows
                    .into_iter()
                    .map(|mut r| {
                        let offset = r.pop().expect("width checked");
                        Facet { normal: r, offset }
                    })
                    .collect();
                ConvexBody::from(Polytope::from_facets(self.dim, &facets)?)
            }
            "H" => {
                let rows = float_rows(&self.data)?;
                check_width(&rows, self.dim + 1)?;
                let facets: Vec<Facet<f64>> = rows
                    .into_iter()
                    .map(|mut r| {
                        let offset = r.pop().expect("width checked");
                        Facet { normal: r, offset }
                    })
                    .collect();
                ConvexBody::from(Polytope::from_facets(self.dim, &facets)?)
            }
            "ball" => {
                let r = self.data.first().and_then(|row| row.first()).map(parse_float).transpose()?.unwrap_or(1.0);
                if !(r > 0.0) {
                    return Err(Error::Parse("ball radius must be positive".into()));
                }
                ConvexBody::ball(self.dim, r)
            }
            "lp-sum" => {
                let p = match &self.p {
                    Some(v) => parse_float(v)?,
                    None => return Err(Error::Parse("lp-sum needs p".into())),
                };
                ConvexBody::Oracle(Oracle::LpSum(Arc::new(LpSumBody::new(part(0)?, part(1)?, p)?)))
            }
            "linear" => {
                let rows = float_rows(&self.data)?;
                check_width(&rows, self.dim)?;
                let flat: Vec<f64> = rows.concat();
                let map = DMatrix::from_row_slice(self.dim, self.dim, &flat);
                let inverse = map.clone().try_inverse().ok_or_else(|| Error::Degenerate("singular map".into()))?;
                ConvexBody::Oracle(Oracle::Linear(Arc::new(LinearImage { body: part(0)?, map, inverse })))
            }
            "polar" => ConvexBody::Oracle(Oracle::Polar(Arc::new(part(0)?))),
            "quotient" => {
                let rows = float_rows(&self.data)?;
                let k = self.dim;
                if rows.len() != 2 + 2 * k {
                    return Err(Error::Parse("quotient data needs dir, normal, lift and coords rows".into()));
                }
                ConvexBody::Oracle(Oracle::Quotient(Arc::new(Quotient {
                    body: part(0)?,
                    dir: rows[0].clone(),
                    normal: rows[1].clone(),
                    lift: rows[2..2 + k].to_vec(),
                    coords: rows[2 + k..].to_vec(),
                })))
            }
            "plane-projection" => {
                let rows = float_rows(&self.data)?;
                if rows.len() != 2 {
                    return Err(Error::Parse("plane-projection needs two rows".into()));
                }
                ConvexBody::Oracle(Oracle::PlaneProjection(Arc::new(PlaneProjection {
                    body: part(0)?,
                    rows: [rows[0].clone(), rows[1].clone()],
                })))
            }
            other => return Err(Error::Parse(format!("unknown representation {other:?}"))),
        };
        if body.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: body.dim() });
        }
        Ok(body)
    }
}

pub fn body_to_json_string(body: &ConvexBody) -> String {
    serde_json::to_string_pretty(&BodyJson::from_body(body)).expect("body JSON serializes")
}

pub fn body_from_json_str(s: &str) -> Result<ConvexBody> {
    let j: BodyJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_body()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let h = ConvexBody::from_int_points(2, &[vec![0, 1], vec![0, -1], vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]])
            .unwrap();
        let s = body_to_json_string(&h);
        assert!(s.contains("\"exact\": true"));
        let back = body_from_json_str(&s).unwrap();
        assert!(back.as_exact().unwrap().same_vertices(h.as_exact().unwrap()));
    }

    #[test]
    fn h_rep_and_oracles() {
        let s = r#"{"dim":2,"rep":"H","data":[["1","0","1"],["-1","0","1"],["0","1","1/2"],["0","-1","1/2"]],"exact":true}"#;
        let b = body_from_json_str(s).unwrap();
        assert_eq!(b.as_exact().unwrap().volume(), Rational::from_i64(2));
        let s = r#"{"dim":3,"rep":"lp-sum","p":2,"parts":[{"dim":1,"rep":"ball","data":[[1]]},{"dim":2,"rep":"ball","data":[[2]]}]}"#;
        let b = body_from_json_str(s).unwrap();
        assert!((b.gauge(&[0.0, 2.0, 0.0]) - 1.0).abs() < 1e-15);
        let again = body_from_json_str(&body_to_json_string(&b)).unwrap();
        assert_eq!(again.gauge(&[0.3, 0.1, 0.2]), b.gauge(&[0.3, 0.1, 0.2]));
    }

    #[test]
    fn bad_input() {
        assert!(body_from_json_str(r#"{"dim":2,"rep":"Z"}"#).is_err());
        assert!(body_from_json_str(r#"{"dim":2,"rep":"V","data":[[1,2,3]]}"#).is_err());
    }
}
