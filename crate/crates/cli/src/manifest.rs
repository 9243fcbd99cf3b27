use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub input_digests: Vec<InputDigest>,
    pub tool_version: String,
    pub wall_time_ms: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Reads input files and remembers their digests.
#[derive(Debug, Default)]
pub struct InputLog {
    digests: Vec<InputDigest>,
}

impl InputLog {
    pub fn read(&mut self, path: &str) -> Result<String, crate::error::CliError> {
        let bytes = std::fs::read(path).map_err(|e| crate::error::CliError::input(format!("{path}: {e}")))?;
        let sha256 = sha256_hex(&bytes);
        if !self.digests.iter().any(|d| d.path == path) {
            self.digests.push(InputDigest { path: path.to_string(), sha256 });
        }
        String::from_utf8(bytes).map_err(|_| crate::error::CliError::input(format!("{path}: not valid UTF-8")))
    }

    pub fn into_digests(self) -> Vec<InputDigest> {
        self.digests
    }
}
