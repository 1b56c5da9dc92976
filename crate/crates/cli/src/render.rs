use std::fmt::Write;

use num_bigint::BigInt;
use serde_json::{json, Value};
use toric_artin::io::{FanFile, HistoryEntry};
use toric_artin::{
    ChowClass, Euler3dReport, Simplicialization, SrPresentation, StackyFan, SubdivisionStep, ValidationReport,
};

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn vector(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn value(key: &str, v: &str, json: bool) -> String {
    if json {
        json!({ key: v }).to_string()
    } else {
        v.to_string()
    }
}

pub fn validation(r: &ValidationReport) -> String {
    format!(
        "valid\nrank: {}\nrays: {}\nmaximal cones: {}\ncones: {}\ncomplete: {}\nsimplicial: {}",
        r.rank,
        r.rays,
        r.max_cones,
        r.cones,
        yes_no(r.complete),
        yes_no(r.simplicial)
    )
}

pub struct Info {
    labels: Vec<String>,
    report: ValidationReport,
    nonsimplicial: Vec<Vec<usize>>,
    /// `None` for nonsimplicial cones.
    multiplicities: Vec<(Vec<usize>, Option<BigInt>)>,
}

impl Info {
    pub fn of(file: &FanFile, fan: &StackyFan) -> toric_artin::Result<Self> {
        let multiplicities = fan
            .max_cones()
            .iter()
            .map(|c| {
                let simplicial = fan.cone(c).is_some_and(|k| k.is_simplicial());
                Ok((c.clone(), if simplicial { Some(fan.stacky_multiplicity(c)?) } else { None }))
            })
            .collect::<toric_artin::Result<_>>()?;
        Ok(Info {
            labels: (0..fan.num_rays()).map(|i| file.label(i)).collect(),
            report: ValidationReport::of(fan),
            nonsimplicial: fan.nonsimplicial_cones().iter().map(|c| c.rays().to_vec()).collect(),
            multiplicities,
        })
    }

    pub fn text(&self) -> String {
        let r = &self.report;
        let mut s = format!(
            "rank: {}\nrays: {}\ncomplete: {}\nsimplicial: {}\n",
            r.rank,
            r.rays,
            yes_no(r.complete),
            yes_no(r.simplicial)
        );
        s.push_str("nonsimplicial cones:");
        if self.nonsimplicial.is_empty() {
            s.push_str(" none");
        }
        for c in &self.nonsimplicial {
            let _ = write!(s, " {c:?}");
        }
        s.push_str("\nmultiplicities:\n");
        for (c, d) in &self.multiplicities {
            let names: Vec<&str> = c.iter().map(|&i| self.labels[i].as_str()).collect();
            let d = d.as_ref().map_or("nonsimplicial".to_string(), BigInt::to_string);
            let _ = writeln!(s, "  {c:?} ({}): {d}", names.join(" "));
        }
        s
    }

    pub fn json(&self) -> Value {
        let r = &self.report;
        let mults: Vec<Value> = self
            .multiplicities
            .iter()
            .map(|(c, d)| json!({ "cone": c, "multiplicity": d.as_ref().map(BigInt::to_string) }))
            .collect();
        json!({
            "rank": r.rank,
            "rays": r.rays,
            "labels": self.labels,
            "complete": r.complete,
            "simplicial": r.simplicial,
            "nonsimplicial_cones": self.nonsimplicial,
            "multiplicities": mults,
        })
    }
}

/// The fan file of `fan`, obtained from `source` by `steps`.
pub fn derived_file(source: &FanFile, fan: &StackyFan, steps: &[SubdivisionStep]) -> toric_artin::Result<FanFile> {
    let mut out = FanFile::from_fan(fan)?.with_history(steps)?;
    let mut history: Vec<HistoryEntry> = source.history.clone();
    history.append(&mut out.history);
    out.history = history;
    if !source.labels.is_empty() {
        out.labels =
            (0..fan.num_rays()).map(|i| source.labels.get(i).cloned().unwrap_or_else(|| format!("x{i}"))).collect();
    }
    Ok(out)
}

pub fn subdivision_summary(step: &SubdivisionStep, json: bool) -> String {
    if json {
        json!({
            "cone": step.cone,
            "new_ray_index": step.new_ray_index,
            "new_ray": step.new_ray.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
        .to_string()
    } else {
        format!("subdivided {:?}: new ray {} = {}", step.cone, step.new_ray_index, vector(&step.new_ray))
    }
}

pub fn simplicialization(simp: &Simplicialization) -> String {
    let mut s = String::new();
    if simp.steps.is_empty() {
        s.push_str("already simplicial\n");
    }
    for (k, step) in simp.steps.iter().enumerate() {
        let _ = writeln!(
            s,
            "step {}: subdivide {:?}, new ray {} = {}",
            k + 1,
            step.cone,
            step.new_ray_index,
            vector(&step.new_ray)
        );
    }
    s.push_str("pullback:\n");
    for r in 0..simp.map.source_rays() {
        let _ = writeln!(s, "  x{r} -> {}", simp.map.image_class(r));
    }
    s.push_str("maximal cones:");
    for c in simp.target.max_cones() {
        let _ = write!(s, " {c:?}");
    }
    s
}

pub fn sr(sr: &SrPresentation, nvars: usize, json: bool) -> String {
    let linear: Vec<String> = sr.linear_classes(nvars).iter().map(ChowClass::to_string).collect();
    let monomial: Vec<String> = sr.monomial_classes(nvars).iter().map(ChowClass::to_string).collect();
    if json {
        return json!({
            "linear_relations": linear,
            "minimal_nonfaces": sr.minimal_nonfaces,
            "monomials": monomial,
        })
        .to_string();
    }
    let mut s = String::from("linear relations:\n");
    for l in &linear {
        let _ = writeln!(s, "  {l}");
    }
    s.push_str("minimal nonfaces:");
    if monomial.is_empty() {
        s.push_str(" none");
    }
    for m in &monomial {
        let _ = write!(s, "\n  {m}");
    }
    s
}

pub fn euler3d(report: &Euler3dReport) -> String {
    let mut s = format!("simplicial euler: {}\n", report.simplicial_euler);
    for c in &report.corrections {
        let _ = writeln!(
            s,
            "cone {:?}: new ray {} = {}, m = {}",
            c.cone,
            c.new_ray_index,
            vector(&c.new_ray),
            vector(&c.dual)
        );
        for t in &c.new_cone_terms {
            let _ = writeln!(s, "  new cone {:?}: D = {}, term = {}", t.cone, t.multiplicity, t.value);
        }
        for t in &c.ray_terms {
            let _ = writeln!(
                s,
                "  ray {}: wall {}|{}, b = {}, beta+ = {}, D+ = {}, weight = {}, term = {}",
                t.ray, t.plus, t.minus, t.b_sigma, t.beta_plus, t.multiplicity_plus, t.weight, t.value
            );
        }
        let _ = writeln!(s, "  correction: {}", c.total);
    }
    s.push_str(&report.euler.to_string());
    s
}
