#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub const BIN: &str = env!("CARGO_BIN_EXE_ulrich-forge");

pub fn forge(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("ULRICH_FORGE_WORKERS").output().expect("binary runs")
}

pub fn forge_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("ULRICH_FORGE_WORKERS")
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Validates `instance` against `schemas/<name>.schema.json`, with the other
/// shipped schemas available for cross references.
pub fn validate(name: &str, instance: &Value) -> Result<(), String> {
    let mut resources = Vec::new();
    for entry in std::fs::read_dir(schema_dir()).expect("schemas directory") {
        let schema = read_json(&entry.expect("dir entry").path());
        let id = schema["$id"].as_str().expect("schema has $id").to_string();
        resources.push((id, schema));
    }
    let registry = jsonschema::Registry::new().extend(resources).map_err(|e| e.to_string())?.prepare().map_err(|e| e.to_string())?;
    let main = read_json(&schema_dir().join(format!("{name}.schema.json")));
    let validator = jsonschema::options().with_registry(&registry).build(&main).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("; "))
    }
}

pub fn assert_valid(name: &str, instance: &Value) {
    if let Err(e) = validate(name, instance) {
        panic!("{name} schema rejects output: {e}");
    }
}

pub fn load_json(path: &Path) -> Value {
    read_json(path)
}
