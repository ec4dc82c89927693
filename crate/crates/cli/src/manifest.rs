//! Run manifest echoed into every output header: command, request digest,
//! seed, tolerance record, tool version. Equal manifests mean bit-identical
//! output.

use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    pub spec_digest: String,
    pub seed: u64,
    pub tolerances: String,
    pub version: String,
}

impl RunManifest {
    pub fn new(request: &Value, seed: u64, tolerance_tag: &str) -> Self {
        // the output destination is not part of the computation; dropping it
        // keeps equal requests byte-identical wherever they are written
        let mut command = Vec::new();
        let mut args = std::env::args().skip(1);
        while let Some(arg) = args.next() {
            if arg == "--out" {
                args.next();
                continue;
            }
            command.push(arg);
        }
        RunManifest {
            command: command.join(" "),
            spec_digest: digest_str(&request.to_string()),
            seed,
            tolerances: tolerance_tag.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Comment lines placed at the top of every output.
    pub fn header(&self) -> String {
        format!(
            "# opq {}\n# command: {}\n# spec-digest: {}\n# seed: {}\n# tolerances: {}\n",
            self.version, self.command, self.spec_digest, self.seed, self.tolerances
        )
    }
}

pub fn digest_str(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    format!("sha256:{}", hex::encode(hasher.finalize()))
}
