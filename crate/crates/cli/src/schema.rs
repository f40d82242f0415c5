//! Structural validator for the JSON report, mirroring
//! `docs/report.schema.json`. Returns every violation found rather than
//! stopping at the first.

use serde_json::Value;

const STATUSES: [&str; 3] = ["pass", "fail", "not_applicable"];

pub fn validate_report(value: &Value) -> Result<(), Vec<String>> {
    let mut errors = Vec::new();
    let root = match value.as_object() {
        Some(o) => o,
        None => return Err(vec!["root must be an object".into()]),
    };
    for key in ["tool_version", "command", "curves", "summary"] {
        if !root.contains_key(key) {
            errors.push(format!("root is missing `{}`", key));
        }
    }
    for key in ["tool_version", "command"] {
        if let Some(v) = root.get(key) {
            if !v.is_string() {
                errors.push(format!("`{}` must be a string", key));
            }
        }
    }

    let mut tally = (0usize, 0usize, 0usize);
    match root.get("curves") {
        Some(Value::Array(curves)) => {
            for (i, curve) in curves.iter().enumerate() {
                validate_curve(curve, i, &mut errors, &mut tally);
            }
        }
        Some(_) => errors.push("`curves` must be an array".into()),
        None => {}
    }

    match root.get("summary") {
        Some(Value::Object(summary)) => {
            let read = |key: &str| -> Option<u64> { summary.get(key).and_then(Value::as_u64) };
            for key in ["pass", "fail", "not_applicable"] {
                if read(key).is_none() {
                    errors.push(format!("summary.{} must be a non-negative integer", key));
                }
            }
            if let (Some(p), Some(f), Some(n)) =
                (read("pass"), read("fail"), read("not_applicable"))
            {
                if (p, f, n) != (tally.0 as u64, tally.1 as u64, tally.2 as u64) {
                    errors.push(format!(
                        "summary ({}, {}, {}) does not match the claim tally ({}, {}, {})",
                        p, f, n, tally.0, tally.1, tally.2
                    ));
                }
            }
        }
        Some(_) => errors.push("`summary` must be an object".into()),
        None => {}
    }

    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn validate_curve(
    value: &Value,
    index: usize,
    errors: &mut Vec<String>,
    tally: &mut (usize, usize, usize),
) {
    let at = |field: &str| format!("curves[{}].{}", index, field);
    let curve = match value.as_object() {
        Some(o) => o,
        None => {
            errors.push(format!("curves[{}] must be an object", index));
            return;
        }
    };
    match curve.get("label") {
        Some(v) if !v.is_string() && !v.is_null() => {
            errors.push(format!("{} must be a string or null", at("label")))
        }
        None => errors.push(format!("{} is missing", at("label"))),
        _ => {}
    }
    for field in ["conductor", "torsion_order", "torsion_gcd_bound"] {
        if curve.get(field).and_then(Value::as_u64).is_none() {
            errors.push(format!("{} must be a non-negative integer", at(field)));
        }
    }
    match curve.get("congruence_precision") {
        Some(v) if !v.is_u64() && !v.is_null() => errors.push(format!(
            "{} must be a non-negative integer or null",
            at("congruence_precision")
        )),
        None => errors.push(format!("{} is missing", at("congruence_precision"))),
        _ => {}
    }
    match curve.get("claims") {
        Some(Value::Array(claims)) => {
            for (j, claim) in claims.iter().enumerate() {
                let claim = match claim.as_object() {
                    Some(o) => o,
                    None => {
                        errors.push(format!("curves[{}].claims[{}] must be an object", index, j));
                        continue;
                    }
                };
                if claim.get("claim_id").and_then(Value::as_str).is_none() {
                    errors.push(format!("curves[{}].claims[{}].claim_id missing", index, j));
                }
                match claim.get("r") {
                    Some(v) if !v.is_u64() && !v.is_null() => errors.push(format!(
                        "curves[{}].claims[{}].r must be an integer or null",
                        index, j
                    )),
                    None => errors.push(format!("curves[{}].claims[{}].r missing", index, j)),
                    _ => {}
                }
                if claim.get("detail").and_then(Value::as_str).is_none() {
                    errors.push(format!("curves[{}].claims[{}].detail missing", index, j));
                }
                match claim.get("status").and_then(Value::as_str) {
                    Some("pass") => tally.0 += 1,
                    Some("fail") => tally.1 += 1,
                    Some("not_applicable") => tally.2 += 1,
                    Some(other) => errors.push(format!(
                        "curves[{}].claims[{}].status `{}` is not one of {:?}",
                        index, j, other, STATUSES
                    )),
                    None => errors.push(format!("curves[{}].claims[{}].status missing", index, j)),
                }
            }
        }
        _ => errors.push(format!("{} must be an array", at("claims"))),
    }
}
