//! JSON instance and plan files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::model::{CuttingPlan, Instance};

pub fn read_instance(path: &Path) -> Result<Instance> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn read_plan(path: &Path) -> Result<CuttingPlan> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn write_instance(path: &Path, inst: &Instance) -> Result<()> {
    write_json(path, inst)
}

pub fn write_plan(path: &Path, plan: &CuttingPlan) -> Result<()> {
    write_json(path, plan)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Writes each instance to `<dir>/<name>.json`, creating `dir` if needed.
pub fn write_instances(dir: &Path, instances: &[Instance]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    instances
        .iter()
        .map(|inst| {
            let path = dir.join(format!("{}.json", inst.name));
            write_instance(&path, inst)?;
            Ok(path)
        })
        .collect()
}
