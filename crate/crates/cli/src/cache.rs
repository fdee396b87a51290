//! Content-addressed artifact cache: one file per (command, resolved config).

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::commands::{Artifact, Command};
use crate::config::RunConfig;

#[derive(Serialize)]
struct Key<'a> {
    version: &'a str,
    command: &'a Command,
    config: &'a RunConfig,
}

pub fn key(cmd: &Command, cfg: &RunConfig) -> String {
    let mut cfg = cfg.clone();
    cfg.cache = None;
    let canonical = serde_json::to_vec(&Key {
        version: env!("CARGO_PKG_VERSION"),
        command: cmd,
        config: &cfg,
    })
    .expect("serializable");
    hex::encode(Sha256::digest(canonical))
}

fn entry(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

pub fn load(dir: &Path, key: &str) -> Option<Artifact> {
    let text = std::fs::read_to_string(entry(dir, key)).ok()?;
    serde_json::from_str(&text).ok()
}

pub fn store(dir: &Path, key: &str, art: &Artifact) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!("{key}.tmp"));
    std::fs::write(&tmp, serde_json::to_vec(art).expect("serializable"))?;
    std::fs::rename(tmp, entry(dir, key))
}
