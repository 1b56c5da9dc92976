//! JSON fan files and machine-readable reports.
//!
//! A fan file looks like
//!
//! ```json
//! { "rank": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2], [0, 2]] }
//! ```
//!
//! with optional `description` (free text), `labels` (one display name per
//! ray) and `history` (the subdivision steps that produced the fan). Rational numbers in reports are
//! written as strings such as `"-4/7"`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::artin::{Euler3dReport, Simplicialization, SubdivisionStep};
use crate::error::{Error, Result};
use crate::fan::{StackyFan, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub cone: Vec<usize>,
    pub new_ray_index: usize,
    pub new_ray: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<HistoryEntry>,
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))
}

fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(to_i64).collect()
}

impl FanFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: FanFile = serde_json::from_str(text).map_err(|e| Error::FanParse(e.to_string()))?;
        if !file.labels.is_empty() && file.labels.len() != file.rays.len() {
            return Err(Error::FanParse(format!("{} labels given for {} rays", file.labels.len(), file.rays.len())));
        }
        Ok(file)
    }

    pub fn from_fan(fan: &StackyFan) -> Result<Self> {
        Ok(FanFile {
            description: None,
            rank: fan.rank(),
            rays: fan.rays().iter().map(|r| to_i64_vec(r)).collect::<Result<_>>()?,
            max_cones: fan.max_cones().to_vec(),
            labels: Vec::new(),
            history: Vec::new(),
        })
    }

    pub fn with_history(mut self, steps: &[SubdivisionStep]) -> Result<Self> {
        for s in steps {
            self.history.push(HistoryEntry {
                cone: s.cone.clone(),
                new_ray_index: s.new_ray_index,
                new_ray: to_i64_vec(&s.new_ray)?,
            });
        }
        Ok(self)
    }

    pub fn to_fan(&self) -> Result<StackyFan> {
        StackyFan::from_i64(self.rank, &self.rays, &self.max_cones)
    }

    /// Display name of ray `i`: its label if present, `x{i}` otherwise.
    pub fn label(&self, i: usize) -> String {
        self.labels.get(i).cloned().unwrap_or_else(|| format!("x{i}"))
    }

    /// One field per line, each value in compact form.
    pub fn to_json(&self) -> String {
        fn compact<T: Serialize + ?Sized>(v: &T) -> String {
            serde_json::to_string(v).expect("fan files always serialize")
        }
        let mut fields = Vec::new();
        if let Some(d) = &self.description {
            fields.push(format!("\"description\": {}", compact(d)));
        }
        fields.push(format!("\"rank\": {}", self.rank));
        fields.push(format!("\"rays\": {}", compact(&self.rays)));
        fields.push(format!("\"max_cones\": {}", compact(&self.max_cones)));
        if !self.labels.is_empty() {
            fields.push(format!("\"labels\": {}", compact(&self.labels)));
        }
        if !self.history.is_empty() {
            let entries: Vec<String> = self.history.iter().map(|h| format!("    {}", compact(h))).collect();
            fields.push(format!("\"history\": [\n{}\n  ]", entries.join(",\n")));
        }
        format!("{{\n  {}\n}}", fields.join(",\n  "))
    }
}

/// Parses and validates a fan file.
pub fn parse_fan(text: &str) -> Result<StackyFan> {
    FanFile::parse(text)?.to_fan()
}

pub fn fan_to_json(fan: &StackyFan) -> Result<String> {
    Ok(FanFile::from_fan(fan)?.to_json())
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

pub fn validation_json(report: &ValidationReport) -> Value {
    json!({
        "rank": report.rank,
        "rays": report.rays,
        "max_cones": report.max_cones,
        "cones": report.cones,
        "complete": report.complete,
        "simplicial": report.simplicial,
    })
}

/// The subdivision steps and the image of every generator under `f^*`.
pub fn simplicialization_json(simp: &Simplicialization) -> Value {
    let steps: Vec<Value> = simp
        .steps
        .iter()
        .map(|s| json!({ "cone": s.cone, "new_ray_index": s.new_ray_index, "new_ray": strings(&s.new_ray) }))
        .collect();
    let images: Vec<Value> = (0..simp.map.source_rays())
        .map(|r| json!({ "generator": r, "image": simp.map.image_class(r).to_string() }))
        .collect();
    json!({ "steps": steps, "pullback": images, "rays": simp.target.num_rays(), "max_cones": simp.target.max_cones() })
}

pub fn euler3d_json(report: &Euler3dReport) -> Value {
    let corrections: Vec<Value> = report
        .corrections
        .iter()
        .map(|c| {
            let new_cones: Vec<Value> = c
                .new_cone_terms
                .iter()
                .map(|t| json!({ "cone": t.cone, "multiplicity": t.multiplicity.to_string(), "value": t.value.to_string() }))
                .collect();
            let rays: Vec<Value> = c
                .ray_terms
                .iter()
                .map(|t| {
                    json!({
                        "ray": t.ray,
                        "plus": t.plus,
                        "minus": t.minus,
                        "b_sigma": t.b_sigma.to_string(),
                        "beta_plus": t.beta_plus.to_string(),
                        "multiplicity_plus": t.multiplicity_plus.to_string(),
                        "weight": t.weight.to_string(),
                        "value": t.value.to_string(),
                    })
                })
                .collect();
            json!({
                "cone": c.cone,
                "new_ray_index": c.new_ray_index,
                "new_ray": strings(&c.new_ray),
                "dual": strings(&c.dual),
                "new_cones": new_cones,
                "rays": rays,
                "total": c.total.to_string(),
            })
        })
        .collect();
    json!({
        "simplicial_euler": report.simplicial_euler.to_string(),
        "corrections": corrections,
        "euler": report.euler.to_string(),
    })
}
