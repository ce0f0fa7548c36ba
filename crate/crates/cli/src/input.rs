//! The one input format: a JSON document with a `kind` tag and one payload.
//!
//! Kinds and their payload fields:
//!
//! | kind       | payload field | shape                                |
//! |------------|---------------|--------------------------------------|
//! | `points`   | `points`      | array of coordinate arrays           |
//! | `matrix`   | `matrix`      | square distance matrix               |
//! | `curve`    | `vertices`    | ordered array of coordinate arrays   |
//! | `measured` | `ids`+`values`| labels and one real value per point  |
//! | `plhomeo`  | `breakpoints` | array of `[x, y]` breakpoint pairs   |
//!
//! Every number may be a JSON decimal or an exact fraction string `"p/q"`;
//! the `plhomeo` payload keeps fractions exact (decimals pass through the
//! binary value of the JSON float). An optional `name` labels the object in
//! reports. Payloads are validated by the owning engine on load, so a
//! document that parses is immediately usable.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::Value;

use corrdist_core::frechet::PolygonalCurve;
use corrdist_core::hausdorff::AmbientSubset;
use corrdist_core::natural_pd::MeasuredSpace;
use corrdist_core::plhomeo::PlHomeo;
use corrdist_core::FiniteMetricSpace;

/// A loading or validation failure; the message always names the offending
/// file and field.
#[derive(Debug)]
pub struct InputError {
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.message.fmt(f)
    }
}

impl std::error::Error for InputError {}

fn fail<T>(file: &str, field: &str, what: impl fmt::Display) -> Result<T, InputError> {
    Err(InputError {
        message: format!("{file}: field `{field}`: {what}"),
    })
}

#[derive(Debug, Clone)]
pub enum Payload {
    Points(Vec<Vec<f64>>),
    Matrix(Vec<Vec<f64>>),
    Curve(Vec<Vec<f64>>),
    Measured { ids: Vec<String>, values: Vec<f64> },
    PlHomeo(Vec<(BigRational, BigRational)>),
}

#[derive(Debug, Clone)]
pub struct InputDocument {
    pub name: Option<String>,
    pub payload: Payload,
}

impl InputDocument {
    pub fn kind(&self) -> &'static str {
        match &self.payload {
            Payload::Points(_) => "points",
            Payload::Matrix(_) => "matrix",
            Payload::Curve(_) => "curve",
            Payload::Measured { .. } => "measured",
            Payload::PlHomeo(_) => "plhomeo",
        }
    }

    pub fn load(path: &Path) -> Result<Self, InputError> {
        let file = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| InputError {
            message: format!("{file}: cannot read file: {e}"),
        })?;
        Self::parse(&text, &file)
    }

    pub fn parse(text: &str, file: &str) -> Result<Self, InputError> {
        let value: Value = serde_json::from_str(text).map_err(|e| InputError {
            message: format!("{file}: invalid JSON: {e}"),
        })?;
        let Value::Object(map) = value else {
            return fail(file, "(document)", "expected a JSON object");
        };
        let kind = match map.get("kind") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => return fail(file, "kind", "expected a string"),
            None => return fail(file, "kind", "missing required field"),
        };
        let name = match map.get("name") {
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return fail(file, "name", "expected a string"),
            None => None,
        };
        let payload = match kind.as_str() {
            "points" => Payload::Points(real_rows(&map, "points", file)?),
            "matrix" => Payload::Matrix(real_rows(&map, "matrix", file)?),
            "curve" => Payload::Curve(real_rows(&map, "vertices", file)?),
            "measured" => {
                let ids = match map.get("ids") {
                    Some(Value::Array(items)) => {
                        let mut ids = Vec::with_capacity(items.len());
                        for (k, item) in items.iter().enumerate() {
                            match item {
                                Value::String(s) => ids.push(s.clone()),
                                _ => return fail(file, &format!("ids[{k}]"), "expected a string"),
                            }
                        }
                        ids
                    }
                    Some(_) => return fail(file, "ids", "expected an array"),
                    None => return fail(file, "ids", "missing required field"),
                };
                let values = real_row(&map, "values", file)?;
                Payload::Measured { ids, values }
            }
            "plhomeo" => {
                let Some(raw) = map.get("breakpoints") else {
                    return fail(file, "breakpoints", "missing required field");
                };
                let Value::Array(rows) = raw else {
                    return fail(file, "breakpoints", "expected an array");
                };
                let mut breakpoints = Vec::with_capacity(rows.len());
                for (k, row) in rows.iter().enumerate() {
                    let field = format!("breakpoints[{k}]");
                    let Value::Array(pair) = row else {
                        return fail(file, &field, "expected an [x, y] pair");
                    };
                    if pair.len() != 2 {
                        return fail(file, &field, "expected exactly two entries");
                    }
                    let x = parse_rational(&pair[0], file, &format!("{field}[0]"))?;
                    let y = parse_rational(&pair[1], file, &format!("{field}[1]"))?;
                    breakpoints.push((x, y));
                }
                Payload::PlHomeo(breakpoints)
            }
            other => {
                return fail(
                    file,
                    "kind",
                    format!(
                        "unknown kind `{other}`; expected one of points, matrix, curve, measured, plhomeo"
                    ),
                )
            }
        };
        Ok(Self { name, payload })
    }

    /// Report label: the document's `name` or the file stem.
    pub fn label(&self, path: &Path) -> String {
        self.name.clone().unwrap_or_else(|| {
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string())
        })
    }

    pub fn to_ambient_subset(&self, file: &str) -> Result<AmbientSubset, InputError> {
        match &self.payload {
            Payload::Points(points) => AmbientSubset::from_coords(points.clone())
                .map_err(|e| InputError {
                    message: format!("{file}: field `points`: {e}"),
                }),
            _ => fail(file, "kind", format!("expected `points`, got `{}`", self.kind())),
        }
    }

    /// Accepts a distance matrix directly, or a point set (which induces
    /// its Euclidean distance matrix).
    pub fn to_metric_space(&self, file: &str) -> Result<FiniteMetricSpace, InputError> {
        match &self.payload {
            Payload::Matrix(matrix) => FiniteMetricSpace::from_matrix(matrix.clone())
                .map_err(|e| InputError {
                    message: format!("{file}: field `matrix`: {e}"),
                }),
            Payload::Points(points) => FiniteMetricSpace::from_points(points)
                .map_err(|e| InputError {
                    message: format!("{file}: field `points`: {e}"),
                }),
            _ => fail(
                file,
                "kind",
                format!("expected `matrix` or `points`, got `{}`", self.kind()),
            ),
        }
    }

    pub fn to_curve(&self, file: &str) -> Result<PolygonalCurve, InputError> {
        match &self.payload {
            Payload::Curve(vertices) => PolygonalCurve::new(vertices.clone()).map_err(|e| {
                InputError {
                    message: format!("{file}: field `vertices`: {e}"),
                }
            }),
            _ => fail(file, "kind", format!("expected `curve`, got `{}`", self.kind())),
        }
    }

    pub fn to_measured(&self, file: &str) -> Result<MeasuredSpace, InputError> {
        match &self.payload {
            Payload::Measured { ids, values } => {
                MeasuredSpace::new(ids.clone(), values.clone()).map_err(|e| InputError {
                    message: format!("{file}: fields `ids`/`values`: {e}"),
                })
            }
            _ => fail(file, "kind", format!("expected `measured`, got `{}`", self.kind())),
        }
    }

    pub fn to_plhomeo(&self, file: &str) -> Result<PlHomeo, InputError> {
        match &self.payload {
            Payload::PlHomeo(breakpoints) => PlHomeo::new(breakpoints.clone()).map_err(|e| {
                InputError {
                    message: format!("{file}: field `breakpoints`: {e}"),
                }
            }),
            _ => fail(file, "kind", format!("expected `plhomeo`, got `{}`", self.kind())),
        }
    }
}

/// Emission structs, one per kind, so field order in the output is fixed.
#[derive(Serialize)]
struct PointsDoc<'a> {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
    points: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct PlHomeoDoc<'a> {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
    breakpoints: Vec<[String; 2]>,
}

/// Renders index pairs (an argmin correspondence, coupling, or bijection
/// graph) as a `points` document: pair (i, j) becomes the 2-D point
/// [i, j]. Re-parsing yields the same pair list.
pub fn pairs_document(name: Option<&str>, pairs: &[(usize, usize)]) -> String {
    let doc = PointsDoc {
        kind: "points",
        name,
        points: pairs
            .iter()
            .map(|&(i, j)| vec![i as f64, j as f64])
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("document serialization cannot fail")
}

/// Renders a PL homeomorphism as a `plhomeo` document with exact fraction
/// strings.
pub fn plhomeo_document(name: Option<&str>, h: &PlHomeo) -> String {
    let doc = PlHomeoDoc {
        kind: "plhomeo",
        name,
        breakpoints: h
            .breakpoints()
            .iter()
            .map(|(x, y)| [rational_string(x), rational_string(y)])
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("document serialization cannot fail")
}

pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn real_rows(
    map: &serde_json::Map<String, Value>,
    field: &str,
    file: &str,
) -> Result<Vec<Vec<f64>>, InputError> {
    let Some(raw) = map.get(field) else {
        return fail(file, field, "missing required field");
    };
    let Value::Array(rows) = raw else {
        return fail(file, field, "expected an array of arrays");
    };
    let mut out = Vec::with_capacity(rows.len());
    for (k, row) in rows.iter().enumerate() {
        let Value::Array(items) = row else {
            return fail(file, &format!("{field}[{k}]"), "expected an array");
        };
        let mut parsed = Vec::with_capacity(items.len());
        for (c, item) in items.iter().enumerate() {
            parsed.push(parse_real(item, file, &format!("{field}[{k}][{c}]"))?);
        }
        out.push(parsed);
    }
    Ok(out)
}

fn real_row(
    map: &serde_json::Map<String, Value>,
    field: &str,
    file: &str,
) -> Result<Vec<f64>, InputError> {
    let Some(raw) = map.get(field) else {
        return fail(file, field, "missing required field");
    };
    let Value::Array(items) = raw else {
        return fail(file, field, "expected an array");
    };
    let mut out = Vec::with_capacity(items.len());
    for (k, item) in items.iter().enumerate() {
        out.push(parse_real(item, file, &format!("{field}[{k}]"))?);
    }
    Ok(out)
}

/// A real number: a JSON number, or an exact fraction string `"p/q"`.
fn parse_real(value: &Value, file: &str, field: &str) -> Result<f64, InputError> {
    let rational = parse_rational(value, file, field)?;
    match rational.to_f64() {
        Some(v) if v.is_finite() => Ok(v),
        _ => fail(file, field, "value does not fit a finite f64"),
    }
}

fn parse_rational(value: &Value, file: &str, field: &str) -> Result<BigRational, InputError> {
    match value {
        Value::Number(n) => {
            let Some(v) = n.as_f64() else {
                return fail(file, field, "number is not representable");
            };
            match BigRational::from_float(v) {
                Some(r) => Ok(r),
                None => fail(file, field, "number is not finite"),
            }
        }
        Value::String(s) => parse_fraction(s)
            .ok_or(())
            .or_else(|_| fail(file, field, format!("`{s}` is not an integer or `p/q` fraction"))),
        _ => fail(file, field, "expected a number or a `p/q` fraction string"),
    }
}

fn parse_fraction(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let numer = BigInt::from_str(p.trim()).ok()?;
            let denom = BigInt::from_str(q.trim()).ok()?;
            if denom.is_zero() {
                return None;
            }
            Some(BigRational::new(numer, denom))
        }
        None => {
            let numer = BigInt::from_str(s).ok()?;
            Some(BigRational::from_integer(numer))
        }
    }
}

/// Loads every `.json` document in a directory, sorted by file name so the
/// resulting report is deterministic.
pub fn load_directory(dir: &Path) -> Result<Vec<(std::path::PathBuf, InputDocument)>, InputError> {
    let entries = std::fs::read_dir(dir).map_err(|e| InputError {
        message: format!("{}: cannot read directory: {e}", dir.display()),
    })?;
    let mut paths: Vec<std::path::PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    let mut docs = Vec::with_capacity(paths.len());
    for path in paths {
        let doc = InputDocument::load(&path)?;
        docs.push((path, doc));
    }
    Ok(docs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_points_with_fraction_strings() {
        let doc = InputDocument::parse(
            r#"{"kind":"points","name":"A","points":[[0,0],["1/2",3]]}"#,
            "test.json",
        )
        .unwrap();
        match &doc.payload {
            Payload::Points(points) => {
                assert_eq!(points[1][0], 0.5);
                assert_eq!(points[1][1], 3.0);
            }
            _ => panic!("wrong payload"),
        }
        assert_eq!(doc.name.as_deref(), Some("A"));
    }

    #[test]
    fn error_names_file_and_field() {
        let err = InputDocument::parse(
            r#"{"kind":"points","points":[[0,"x"]]}"#,
            "bad.json",
        )
        .unwrap_err();
        assert!(err.message.contains("bad.json"), "{}", err.message);
        assert!(err.message.contains("points[0][1]"), "{}", err.message);
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let err =
            InputDocument::parse(r#"{"kind":"blob","points":[]}"#, "k.json").unwrap_err();
        assert!(err.message.contains("`kind`"), "{}", err.message);
    }

    #[test]
    fn plhomeo_fractions_stay_exact() {
        let doc = InputDocument::parse(
            r#"{"kind":"plhomeo","breakpoints":[["0","0"],["1/2","1/4"],["1","1"]]}"#,
            "h.json",
        )
        .unwrap();
        let h = doc.to_plhomeo("h.json").unwrap();
        assert_eq!(
            h.eval(&corrdist_core::plhomeo::ratio(1, 2)).unwrap(),
            corrdist_core::plhomeo::ratio(1, 4)
        );
    }

    #[test]
    fn plhomeo_document_round_trips() {
        let h = corrdist_core::plhomeo::make_contraction();
        let text = plhomeo_document(Some("h"), &h);
        let doc = InputDocument::parse(&text, "emitted.json").unwrap();
        assert_eq!(doc.to_plhomeo("emitted.json").unwrap(), h);
    }

    #[test]
    fn pairs_document_round_trips() {
        let text = pairs_document(Some("argmin"), &[(0, 1), (1, 0)]);
        let doc = InputDocument::parse(&text, "emitted.json").unwrap();
        match &doc.payload {
            Payload::Points(points) => {
                assert_eq!(points, &vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
            }
            _ => panic!("wrong payload"),
        }
    }

    #[test]
    fn matrix_payload_is_validated_on_load() {
        let doc = InputDocument::parse(
            r#"{"kind":"matrix","matrix":[[0,1],[2,0]]}"#,
            "m.json",
        )
        .unwrap();
        let err = doc.to_metric_space("m.json").unwrap_err();
        assert!(err.message.contains("m.json"), "{}", err.message);
        assert!(err.message.contains("dist[0][1]"), "{}", err.message);
    }

    #[test]
    fn fraction_parser_edge_cases() {
        assert_eq!(parse_fraction("3").unwrap(), BigRational::from_integer(3.into()));
        assert_eq!(parse_fraction("-1/2").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_fraction("1/0").is_none());
        assert!(parse_fraction("a/b").is_none());
    }
}
