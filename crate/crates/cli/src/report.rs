use cdod_core::scope::Scope;
use cdod_core::{SemanticConfig, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Serialize)]
pub struct ConfigReport {
    pub key: String,
    pub name: Option<String>,
    pub text: String,
}

impl ConfigReport {
    pub fn new(config: &SemanticConfig, name: Option<String>) -> Self {
        ConfigReport { key: config.key(), name, text: config.to_string() }
    }
}

pub fn verdict_json(engine: &str, config: &ConfigReport, v: &Verdict, notes: &[String]) -> Value {
    json!({
        "engine": engine,
        "verdict": v.outcome.label(),
        "config": config,
        "scope": v.scope,
        "exhaustive": v.exhaustive,
        "resource_limited": v.resource_limited,
        "stats": v.stats,
        "witness": v.outcome.witness(),
        "diagnostics": notes,
    })
}

pub fn scope_line(s: &Scope) -> String {
    let mut parts: Vec<String> = s.class_bounds.iter().map(|(c, n)| format!("{c}={n}")).collect();
    parts.push(format!("foreign={}", s.foreign_max));
    if let Some(t) = s.total_max {
        parts.push(format!("total={t}"));
    }
    let v = &s.values;
    parts.push(format!("ints={:?}", v.int));
    parts.push(format!("strings={}", v.string.len()));
    parts.push(format!("dates={}", v.date.len()));
    parts.join(" ")
}

pub fn print_verdict(engine: &str, config: &ConfigReport, v: &Verdict) {
    println!("engine:     {engine}");
    match &config.name {
        Some(n) => println!("config:     {} ({n})", config.key),
        None => println!("config:     {}", config.key),
    }
    println!("verdict:    {}", v.outcome.label());
    println!("scope:      {}", scope_line(&v.scope));
    println!("exhaustive: {}", v.exhaustive);
    if v.resource_limited {
        println!("note:       solver stopped at its conflict limit");
    }
    let s = &v.stats;
    if engine == "enum" {
        println!("stats:      {} candidates, {:.3} ms", s.candidates, s.micros as f64 / 1000.0);
    } else {
        println!(
            "stats:      {} variables, {} clauses, {} conflicts, {:.3} ms",
            s.variables,
            s.clauses,
            s.conflicts,
            s.micros as f64 / 1000.0
        );
    }
}
