//! The JSON problem-instance schema.
//!
//! Rationals are strings "±num/den" (denominator omitted when 1).
//! Polynomials are arrays of rational strings, ascending degree. Rational
//! functions are {"num": [...], "den": [...]}; a bare rational string is
//! shorthand for a constant. Matrices are row-major arrays of rational
//! functions. Points are {"x": "2", "y": ["1", "0"]}, with "inf" for the
//! point at infinity. Systems are {"g": ratfunc, "A": matrix}. Recurrences
//! are {"order", "h": [...], "g", "alpha", "init": [...]}.

use serde_json::{json, Map, Value};
use skewlin::algebra::{format_rat, parse_rat, FuncMat, Mat, Poly, Rat, RatFunc};
use skewlin::padic::LinearForm;
use skewlin::projective::{BaseMap, ProjPoint};
use skewlin::recurrence::{Progression, Recurrence};
use skewlin::skew::{SkewPoint, SkewSystem, VarietyPoly};

/// A schema-level parse failure with its field location.
#[derive(Debug, Clone)]
pub struct SchemaError {
    pub kind: &'static str,
    pub path: String,
    pub message: String,
}

impl SchemaError {
    fn new(kind: &'static str, path: &str, message: impl Into<String>) -> Self {
        SchemaError {
            kind,
            path: path.to_string(),
            message: message.into(),
        }
    }

    pub fn violation(path: &str, message: impl Into<String>) -> Self {
        Self::new("SchemaViolation", path, message)
    }

    pub fn malformed_rational(path: &str, message: impl Into<String>) -> Self {
        Self::new("MalformedRational", path, message)
    }

    pub fn dimension(path: &str, message: impl Into<String>) -> Self {
        Self::new("DimensionMismatch", path, message)
    }
}

type PResult<T> = Result<T, SchemaError>;

#[derive(Debug, Clone)]
pub enum InstanceKind {
    Orbit {
        system: SkewSystem,
        start: SkewPoint,
        variety: Vec<VarietyPoly>,
    },
    Zeros {
        recurrence: Recurrence,
    },
    Decompose {
        zeros: Vec<usize>,
        n_max: Option<usize>,
    },
    Certify {
        recurrence: Recurrence,
        progression: Progression,
    },
    Padic {
        system: SkewSystem,
        start: SkewPoint,
        form: LinearForm,
    },
    Filtration {
        system: SkewSystem,
    },
    Snf {
        matrix: Mat<Poly>,
    },
    PvMatrix {
        system: SkewSystem,
        alpha: ProjPoint,
    },
    ClassifyEmbed {
        h: RatFunc,
        g: BaseMap,
        alpha: ProjPoint,
    },
    ClassifyRecurrence {
        recurrence: Recurrence,
    },
}

#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub kind: InstanceKind,
}

impl ProblemInstance {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            InstanceKind::Orbit { .. } => "orbit",
            InstanceKind::Zeros { .. } => "zeros",
            InstanceKind::Decompose { .. } => "decompose",
            InstanceKind::Certify { .. } => "certify",
            InstanceKind::Padic { .. } => "padic",
            InstanceKind::Filtration { .. } => "filtration",
            InstanceKind::Snf { .. } => "snf",
            InstanceKind::PvMatrix { .. } => "pvmatrix",
            InstanceKind::ClassifyEmbed { .. } | InstanceKind::ClassifyRecurrence { .. } => {
                "classify"
            }
        }
    }
}

fn obj<'a>(v: &'a Value, path: &str) -> PResult<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| SchemaError::violation(path, "expected an object"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> PResult<&'a Value> {
    m.get(key)
        .ok_or_else(|| SchemaError::violation(path, format!("missing field {key:?}")))
}

fn arr<'a>(v: &'a Value, path: &str) -> PResult<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| SchemaError::violation(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> PResult<&'a str> {
    v.as_str()
        .ok_or_else(|| SchemaError::violation(path, "expected a string"))
}

fn usize_val(v: &Value, path: &str) -> PResult<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| SchemaError::violation(path, "expected a nonnegative integer"))
}

pub fn parse_rational(v: &Value, path: &str) -> PResult<Rat> {
    let s = string(v, path)?;
    parse_rat(s).map_err(|e| SchemaError::malformed_rational(path, e.to_string()))
}

pub fn parse_poly(v: &Value, path: &str) -> PResult<Poly> {
    let items = arr(v, path)?;
    let mut coeffs = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        coeffs.push(parse_rational(item, &format!("{path}[{i}]"))?);
    }
    Ok(Poly::from_coeffs(coeffs))
}

pub fn parse_ratfunc(v: &Value, path: &str) -> PResult<RatFunc> {
    if v.is_string() {
        return Ok(RatFunc::constant(parse_rational(v, path)?));
    }
    let m = obj(v, path)?;
    let num = parse_poly(field(m, "num", path)?, &format!("{path}.num"))?;
    let den = parse_poly(field(m, "den", path)?, &format!("{path}.den"))?;
    RatFunc::new(num, den)
        .map_err(|e| SchemaError::violation(&format!("{path}.den"), e.to_string()))
}

pub fn parse_matrix(v: &Value, path: &str) -> PResult<FuncMat> {
    let rows_json = arr(v, path)?;
    if rows_json.is_empty() {
        return Err(SchemaError::dimension(path, "matrix must have >= 1 row"));
    }
    let mut rows = Vec::with_capacity(rows_json.len());
    let mut width = None;
    for (i, row_json) in rows_json.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let entries = arr(row_json, &row_path)?;
        match width {
            None => width = Some(entries.len()),
            Some(w) if w != entries.len() => {
                return Err(SchemaError::dimension(&row_path, "ragged matrix rows"))
            }
            _ => {}
        }
        let mut row = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            row.push(parse_ratfunc(e, &format!("{row_path}[{j}]"))?);
        }
        rows.push(row);
    }
    if width == Some(0) {
        return Err(SchemaError::dimension(path, "matrix must have >= 1 column"));
    }
    FuncMat::from_rows(rows).map_err(|e| SchemaError::dimension(path, e.to_string()))
}

pub fn parse_base_point(v: &Value, path: &str) -> PResult<ProjPoint> {
    let s = string(v, path)?;
    if s == "inf" {
        return Ok(ProjPoint::infinity());
    }
    let r = parse_rat(s).map_err(|e| SchemaError::malformed_rational(path, e.to_string()))?;
    Ok(ProjPoint::from_rat(&r))
}

pub fn parse_point(v: &Value, path: &str, dim: usize) -> PResult<SkewPoint> {
    let m = obj(v, path)?;
    let base = parse_base_point(field(m, "x", path)?, &format!("{path}.x"))?;
    let y = arr(field(m, "y", path)?, &format!("{path}.y"))?;
    if y.len() != dim {
        return Err(SchemaError::dimension(
            &format!("{path}.y"),
            format!("fiber has {} coordinates, system needs {dim}", y.len()),
        ));
    }
    let mut fiber = Vec::with_capacity(dim);
    for (i, c) in y.iter().enumerate() {
        fiber.push(parse_rational(c, &format!("{path}.y[{i}]"))?);
    }
    Ok(SkewPoint::new(base, fiber))
}

pub fn parse_system(v: &Value, path: &str) -> PResult<SkewSystem> {
    let m = obj(v, path)?;
    let g_func = parse_ratfunc(field(m, "g", path)?, &format!("{path}.g"))?;
    let g = BaseMap::new(g_func)
        .map_err(|e| SchemaError::violation(&format!("{path}.g"), e.to_string()))?;
    let a = parse_matrix(field(m, "A", path)?, &format!("{path}.A"))?;
    SkewSystem::new(g, a).map_err(|e| SchemaError::dimension(&format!("{path}.A"), e.to_string()))
}

pub fn parse_recurrence(v: &Value, path: &str) -> PResult<Recurrence> {
    let m = obj(v, path)?;
    let order = usize_val(field(m, "order", path)?, &format!("{path}.order"))?;
    let h_json = arr(field(m, "h", path)?, &format!("{path}.h"))?;
    if h_json.len() != order {
        return Err(SchemaError::dimension(
            &format!("{path}.h"),
            format!("{} coefficients for order {order}", h_json.len()),
        ));
    }
    let mut coeffs = Vec::with_capacity(order);
    for (i, h) in h_json.iter().enumerate() {
        coeffs.push(parse_ratfunc(h, &format!("{path}.h[{i}]"))?);
    }
    let g_func = parse_ratfunc(field(m, "g", path)?, &format!("{path}.g"))?;
    let g = BaseMap::new(g_func)
        .map_err(|e| SchemaError::violation(&format!("{path}.g"), e.to_string()))?;
    let alpha = parse_base_point(field(m, "alpha", path)?, &format!("{path}.alpha"))?;
    let init_json = arr(field(m, "init", path)?, &format!("{path}.init"))?;
    if init_json.len() != order {
        return Err(SchemaError::dimension(
            &format!("{path}.init"),
            format!("{} initial terms for order {order}", init_json.len()),
        ));
    }
    let mut init = Vec::with_capacity(order);
    for (i, c) in init_json.iter().enumerate() {
        init.push(parse_rational(c, &format!("{path}.init[{i}]"))?);
    }
    Recurrence::new(coeffs, g, alpha, init)
        .map_err(|e| SchemaError::dimension(path, e.to_string()))
}

pub fn parse_variety(v: &Value, path: &str, dim: usize) -> PResult<Vec<VarietyPoly>> {
    let polys = arr(v, path)?;
    let mut out = Vec::with_capacity(polys.len());
    for (i, p) in polys.iter().enumerate() {
        let p_path = format!("{path}[{i}]");
        let terms_json = arr(p, &p_path)?;
        let mut terms = Vec::with_capacity(terms_json.len());
        for (j, t) in terms_json.iter().enumerate() {
            let t_path = format!("{p_path}[{j}]");
            let tm = obj(t, &t_path)?;
            let c = parse_rational(field(tm, "c", &t_path)?, &format!("{t_path}.c"))?;
            let e_json = arr(field(tm, "e", &t_path)?, &format!("{t_path}.e"))?;
            let mut exps = Vec::with_capacity(e_json.len());
            for (k, e) in e_json.iter().enumerate() {
                exps.push(usize_val(e, &format!("{t_path}.e[{k}]"))? as u32);
            }
            terms.push((c, exps));
        }
        out.push(
            VarietyPoly::new(terms, dim)
                .map_err(|e| SchemaError::dimension(&p_path, e.to_string()))?,
        );
    }
    Ok(out)
}

pub fn parse_form(v: &Value, path: &str, dim: usize) -> PResult<LinearForm> {
    let m = obj(v, path)?;
    let constant = match m.get("constant") {
        Some(c) => parse_rational(c, &format!("{path}.constant"))?,
        None => Rat::from_integer(0.into()),
    };
    let coeffs_json = arr(field(m, "coeffs", path)?, &format!("{path}.coeffs"))?;
    if coeffs_json.len() != dim {
        return Err(SchemaError::dimension(
            &format!("{path}.coeffs"),
            format!("{} coefficients for fiber dimension {dim}", coeffs_json.len()),
        ));
    }
    let mut coeffs = Vec::with_capacity(dim);
    for (i, c) in coeffs_json.iter().enumerate() {
        coeffs.push(parse_rational(c, &format!("{path}.coeffs[{i}]"))?);
    }
    Ok(LinearForm { constant, coeffs })
}

pub fn parse_progression(v: &Value, path: &str) -> PResult<Progression> {
    let m = obj(v, path)?;
    Ok(Progression {
        offset: usize_val(field(m, "offset", path)?, &format!("{path}.offset"))?,
        step: usize_val(field(m, "step", path)?, &format!("{path}.step"))?,
    })
}

pub fn parse_instance(v: &Value) -> PResult<ProblemInstance> {
    let m = obj(v, "$")?;
    let kind = string(field(m, "kind", "$")?, "$.kind")?;
    let payload = field(m, "payload", "$")?;
    let p = "$.payload";
    let pm = obj(payload, p)?;
    let kind = match kind {
        "orbit" => {
            let system = parse_system(field(pm, "system", p)?, &format!("{p}.system"))?;
            let start = parse_point(field(pm, "start", p)?, &format!("{p}.start"), system.dim())?;
            let variety = parse_variety(
                field(pm, "variety", p)?,
                &format!("{p}.variety"),
                system.dim(),
            )?;
            InstanceKind::Orbit {
                system,
                start,
                variety,
            }
        }
        "zeros" => InstanceKind::Zeros {
            recurrence: parse_recurrence(
                field(pm, "recurrence", p)?,
                &format!("{p}.recurrence"),
            )?,
        },
        "decompose" => {
            let zeros_json = arr(field(pm, "zeros", p)?, &format!("{p}.zeros"))?;
            let mut zeros = Vec::with_capacity(zeros_json.len());
            for (i, z) in zeros_json.iter().enumerate() {
                zeros.push(usize_val(z, &format!("{p}.zeros[{i}]"))?);
            }
            if zeros.windows(2).any(|w| w[0] >= w[1]) {
                return Err(SchemaError::violation(
                    &format!("{p}.zeros"),
                    "zero indices must be strictly increasing",
                ));
            }
            let n_max = match pm.get("n_max") {
                Some(v) => Some(usize_val(v, &format!("{p}.n_max"))?),
                None => None,
            };
            InstanceKind::Decompose { zeros, n_max }
        }
        "certify" => InstanceKind::Certify {
            recurrence: parse_recurrence(
                field(pm, "recurrence", p)?,
                &format!("{p}.recurrence"),
            )?,
            progression: parse_progression(
                field(pm, "progression", p)?,
                &format!("{p}.progression"),
            )?,
        },
        "padic" => {
            let system = parse_system(field(pm, "system", p)?, &format!("{p}.system"))?;
            let start = parse_point(field(pm, "start", p)?, &format!("{p}.start"), system.dim())?;
            let form = parse_form(field(pm, "form", p)?, &format!("{p}.form"), system.dim())?;
            InstanceKind::Padic {
                system,
                start,
                form,
            }
        }
        "filtration" => InstanceKind::Filtration {
            system: parse_system(field(pm, "system", p)?, &format!("{p}.system"))?,
        },
        "snf" => {
            let mat = parse_matrix(field(pm, "matrix", p)?, &format!("{p}.matrix"))?;
            let matrix = mat.to_poly().ok_or_else(|| {
                SchemaError::violation(
                    &format!("{p}.matrix"),
                    "Smith normal form needs polynomial entries",
                )
            })?;
            InstanceKind::Snf { matrix }
        }
        "pvmatrix" => {
            let system = parse_system(field(pm, "system", p)?, &format!("{p}.system"))?;
            let alpha = parse_base_point(field(pm, "alpha", p)?, &format!("{p}.alpha"))?;
            InstanceKind::PvMatrix { system, alpha }
        }
        "classify" => {
            let element = field(pm, "element", p)?;
            let em = obj(element, &format!("{p}.element"))?;
            if let Some(h) = em.get("embed") {
                let h = parse_ratfunc(h, &format!("{p}.element.embed"))?;
                let g_func = parse_ratfunc(field(pm, "g", p)?, &format!("{p}.g"))?;
                let g = BaseMap::new(g_func)
                    .map_err(|e| SchemaError::violation(&format!("{p}.g"), e.to_string()))?;
                let alpha = parse_base_point(field(pm, "alpha", p)?, &format!("{p}.alpha"))?;
                InstanceKind::ClassifyEmbed { h, g, alpha }
            } else if let Some(r) = em.get("recurrence") {
                InstanceKind::ClassifyRecurrence {
                    recurrence: parse_recurrence(r, &format!("{p}.element.recurrence"))?,
                }
            } else {
                return Err(SchemaError::violation(
                    &format!("{p}.element"),
                    "expected \"embed\" or \"recurrence\"",
                ));
            }
        }
        other => {
            return Err(SchemaError::violation(
                "$.kind",
                format!("unknown instance kind {other:?}"),
            ))
        }
    };
    Ok(ProblemInstance { kind })
}

// canonical serialization (round-trip: parse -> serialize -> parse is the
// identity on the parsed data)

pub fn rational_json(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

pub fn poly_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(rational_json).collect())
}

pub fn ratfunc_json(h: &RatFunc) -> Value {
    json!({ "num": poly_json(h.num()), "den": poly_json(h.den()) })
}

pub fn matrix_json(m: &FuncMat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| ratfunc_json(m.at(i, j))).collect()))
            .collect(),
    )
}

pub fn poly_matrix_json(m: &Mat<Poly>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| {
                            json!({
                                "num": poly_json(m.at(i, j)),
                                "den": poly_json(&Poly::one()),
                            })
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn base_point_json(pt: &ProjPoint) -> Value {
    match pt.as_rat() {
        Some(r) => rational_json(&r),
        None => Value::String("inf".into()),
    }
}

pub fn point_json(pt: &SkewPoint) -> Value {
    json!({
        "x": base_point_json(&pt.base),
        "y": pt.fiber.iter().map(rational_json).collect::<Vec<_>>(),
    })
}

pub fn system_json(sys: &SkewSystem) -> Value {
    json!({
        "g": ratfunc_json(sys.base().func()),
        "A": matrix_json(sys.matrix()),
    })
}

pub fn recurrence_json(rec: &Recurrence) -> Value {
    json!({
        "order": rec.order(),
        "h": rec.coeffs().iter().map(ratfunc_json).collect::<Vec<_>>(),
        "g": ratfunc_json(rec.base().func()),
        "alpha": base_point_json(rec.alpha()),
        "init": rec.init().iter().map(rational_json).collect::<Vec<_>>(),
    })
}

pub fn variety_json(polys: &[VarietyPoly]) -> Value {
    Value::Array(
        polys
            .iter()
            .map(|p| {
                Value::Array(
                    p.terms()
                        .iter()
                        .map(|(c, e)| json!({ "c": rational_json(c), "e": e }))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn form_json(f: &LinearForm) -> Value {
    json!({
        "constant": rational_json(&f.constant),
        "coeffs": f.coeffs.iter().map(rational_json).collect::<Vec<_>>(),
    })
}

pub fn progression_json(p: &Progression) -> Value {
    json!({ "offset": p.offset, "step": p.step })
}

pub fn instance_json(inst: &ProblemInstance) -> Value {
    let payload = match &inst.kind {
        InstanceKind::Orbit {
            system,
            start,
            variety,
        } => json!({
            "system": system_json(system),
            "start": point_json(start),
            "variety": variety_json(variety),
        }),
        InstanceKind::Zeros { recurrence } => json!({
            "recurrence": recurrence_json(recurrence),
        }),
        InstanceKind::Decompose { zeros, n_max } => match n_max {
            Some(n) => json!({ "zeros": zeros, "n_max": n }),
            None => json!({ "zeros": zeros }),
        },
        InstanceKind::Certify {
            recurrence,
            progression,
        } => json!({
            "recurrence": recurrence_json(recurrence),
            "progression": progression_json(progression),
        }),
        InstanceKind::Padic {
            system,
            start,
            form,
        } => json!({
            "system": system_json(system),
            "start": point_json(start),
            "form": form_json(form),
        }),
        InstanceKind::Filtration { system } => json!({ "system": system_json(system) }),
        InstanceKind::Snf { matrix } => json!({ "matrix": poly_matrix_json(matrix) }),
        InstanceKind::PvMatrix { system, alpha } => json!({
            "system": system_json(system),
            "alpha": base_point_json(alpha),
        }),
        InstanceKind::ClassifyEmbed { h, g, alpha } => json!({
            "element": { "embed": ratfunc_json(h) },
            "g": ratfunc_json(g.func()),
            "alpha": base_point_json(alpha),
        }),
        InstanceKind::ClassifyRecurrence { recurrence } => json!({
            "element": { "recurrence": recurrence_json(recurrence) },
        }),
    };
    json!({ "kind": inst.kind_name(), "payload": payload })
}
