//! Structural validation of knowledge-base JSON with pointer-addressed errors.

use serde_json::Value;

use super::{AnnotationLevel, ApplicationProfile, CatalogEntry, KnowledgeBase};
use crate::error::{Error, Result};
use crate::lang::{parse, serialize};

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

fn array<'v>(value: &'v Value, key: &str, pointer: &str) -> Result<&'v Vec<Value>> {
    match value.get(key) {
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(schema(format!("{pointer}/{key}"), "expected an array")),
        None => Err(schema(pointer.to_string(), format!("missing `{key}`"))),
    }
}

fn string_field(obj: &Value, key: &str, pointer: &str) -> Result<String> {
    match obj.get(key) {
        Some(Value::String(s)) if !s.trim().is_empty() => Ok(s.clone()),
        Some(Value::String(_)) => Err(schema(format!("{pointer}/{key}"), "must not be empty")),
        Some(_) => Err(schema(format!("{pointer}/{key}"), "expected a string")),
        None => Err(schema(pointer.to_string(), format!("missing `{key}`"))),
    }
}

pub(super) fn profile(value: &Value, pointer: &str) -> Result<ApplicationProfile> {
    if !value.is_object() {
        return Err(schema(pointer.to_string(), "expected an object"));
    }
    let level = string_field(value, "annotation_level", pointer)?;
    let annotation_level = AnnotationLevel::from_name(&level).ok_or_else(|| {
        schema(
            format!("{pointer}/annotation_level"),
            format!("expected one of word, phrase, sentence, paragraph, document; got {level:?}"),
        )
    })?;
    Ok(ApplicationProfile {
        id: string_field(value, "id", pointer)?,
        problem_description: string_field(value, "problem_description", pointer)?,
        annotation_level,
        problem_type: string_field(value, "problem_type", pointer)?,
        performance_metric: string_field(value, "performance_metric", pointer)?,
    })
}

pub(super) fn knowledge_base(value: &Value) -> Result<KnowledgeBase> {
    if !value.is_object() {
        return Err(schema("", "expected an object"));
    }
    let mut applications: Vec<ApplicationProfile> = Vec::new();
    for (i, a) in array(value, "applications", "")?.iter().enumerate() {
        let p = profile(a, &format!("/applications/{i}"))?;
        if applications.iter().any(|x| x.id == p.id) {
            return Err(schema(
                format!("/applications/{i}/id"),
                format!("duplicate id {:?}", p.id),
            ));
        }
        applications.push(p);
    }

    let mut catalog: Vec<CatalogEntry> = Vec::new();
    for (j, c) in array(value, "catalog", "")?.iter().enumerate() {
        let pointer = format!("/catalog/{j}");
        if !c.is_object() {
            return Err(schema(pointer, "expected an object"));
        }
        let feature_id = string_field(c, "feature_id", &pointer)?;
        let source = string_field(c, "fspl_source", &pointer)?;
        let spec =
            parse(&source).map_err(|e| schema(format!("{pointer}/fspl_source"), e.to_string()))?;
        let canonical = serialize(&spec);
        if catalog.iter().any(|x| x.feature_id == feature_id) {
            return Err(schema(
                format!("{pointer}/feature_id"),
                format!("duplicate id {feature_id:?}"),
            ));
        }
        if let Some(other) = catalog.iter().find(|x| x.fspl_source == canonical) {
            return Err(schema(
                pointer,
                format!("same specification as {}", other.feature_id),
            ));
        }
        catalog.push(CatalogEntry {
            feature_id,
            fspl_source: canonical,
        });
    }

    let rows = array(value, "pf", "")?;
    if rows.len() != applications.len() {
        return Err(schema(
            "/pf",
            format!("expected {} rows, found {}", applications.len(), rows.len()),
        ));
    }
    let mut pf = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let Value::Array(cells) = row else {
            return Err(schema(format!("/pf/{i}"), "expected an array"));
        };
        if cells.len() != catalog.len() {
            return Err(schema(
                format!("/pf/{i}"),
                format!("expected {} values, found {}", catalog.len(), cells.len()),
            ));
        }
        let mut out = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            match cell.as_f64() {
                Some(x) if (0.0..=1.0).contains(&x) => out.push(x),
                _ => {
                    return Err(schema(
                        format!("/pf/{i}/{j}"),
                        "expected a number in [0, 1]",
                    ))
                }
            }
        }
        pf.push(out);
    }
    Ok(KnowledgeBase::from_parts(applications, catalog, pf))
}
