//! JSON certificate files.
//!
//! ```json
//! {
//!   "format": "liouville-cert",
//!   "version": 1,
//!   "subjects": [{ "label": "xi", "recipe": {..}, "witnesses": [{"n": 1, "p": "3", "q": "2"}] }],
//!   "construction_log": {..},
//!   "metadata": { "tool": "liouville 0.1.0", "generated_at": "unix:1700000000" }
//! }
//! ```
//!
//! Big integers are decimal strings. The verified region is `subjects`; the
//! log and metadata are informational.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liouville::{check_witness, LiouvilleCertificate, Witness};
use crate::real::{Budget, ExactReal, Recipe};
use crate::steer::ConstructionLog;

pub const FORMAT: &str = "liouville-cert";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Subject {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub recipe: Recipe,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub generated_at: String,
}

impl Metadata {
    pub fn now() -> Self {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Metadata {
            tool: format!("liouville {}", env!("CARGO_PKG_VERSION")),
            generated_at: format!("unix:{secs}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub format: String,
    pub version: u32,
    pub subjects: Vec<Subject>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction_log: Option<ConstructionLog>,
    pub metadata: Metadata,
}

/// Per-subject outcome of [`CertificateFile::verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubjectReport {
    pub label: Option<String>,
    pub level: u32,
}

impl CertificateFile {
    pub fn new(subjects: Vec<Subject>) -> Self {
        CertificateFile {
            format: FORMAT.into(),
            version: VERSION,
            subjects,
            construction_log: None,
            metadata: Metadata::now(),
        }
    }

    pub fn with_log(mut self, log: Option<ConstructionLog>) -> Self {
        self.construction_log = log;
        self
    }

    /// A subject from a value's recipe and a certificate.
    pub fn subject(
        label: Option<&str>,
        x: &ExactReal,
        cert: &LiouvilleCertificate,
    ) -> Result<Subject> {
        let recipe = cert
            .subject
            .clone()
            .or_else(|| x.recipe().cloned())
            .ok_or_else(|| {
                Error::InvalidArgument(
                    "value has no recipe and cannot be written to a certificate".into(),
                )
            })?;
        Ok(Subject {
            label: label.map(str::to_string),
            recipe,
            witnesses: cert.witnesses.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: CertificateFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if f.format != FORMAT {
            return Err(Error::Format(format!(
                "expected format {FORMAT:?}, found {:?}",
                f.format
            )));
        }
        if f.version != VERSION {
            return Err(Error::Format(format!("unsupported version {}", f.version)));
        }
        Ok(f)
    }

    /// Canonical text of the verified region.
    pub fn verified_region(&self) -> String {
        serde_json::to_string(&self.subjects).expect("subjects serialize")
    }

    /// Rebuilds every subject from its recipe and checks each witness.
    /// Levels must run `1..=N`; a failing witness is an `InvalidWitness`.
    pub fn verify(&self) -> Result<Vec<SubjectReport>> {
        self.verify_with(&Budget::default())
    }

    pub fn verify_with(&self, budget: &Budget) -> Result<Vec<SubjectReport>> {
        let mut out = Vec::with_capacity(self.subjects.len());
        for (idx, s) in self.subjects.iter().enumerate() {
            let name = s.label.clone().unwrap_or_else(|| format!("subject {idx}"));
            let cert = LiouvilleCertificate {
                subject: Some(s.recipe.clone()),
                witnesses: s.witnesses.clone(),
            };
            if !cert.is_contiguous() {
                return Err(Error::InvalidWitness(format!(
                    "{name}: levels are not 1..N"
                )));
            }
            let x = s.recipe.realize()?;
            for w in &s.witnesses {
                if !check_witness(&x, w, budget)? {
                    return Err(Error::InvalidWitness(format!(
                        "{name}: level {} witness {}/{} fails",
                        w.n, w.p, w.q
                    )));
                }
            }
            out.push(SubjectReport {
                label: s.label.clone(),
                level: cert.level(),
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::{certify_level, classical_constant};

    fn classical_file(level: u32) -> CertificateFile {
        let x = classical_constant();
        let cert = certify_level(&x, level).unwrap();
        CertificateFile::new(vec![
            CertificateFile::subject(Some("L10"), &x, &cert).unwrap()
        ])
    }

    #[test]
    fn round_trip_and_verify() {
        let f = classical_file(4);
        let text = f.to_json();
        let back = CertificateFile::from_json(&text).unwrap();
        assert_eq!(back, f);
        let rep = back.verify().unwrap();
        assert_eq!(
            rep,
            vec![SubjectReport {
                label: Some("L10".into()),
                level: 4
            }]
        );
        assert!(text.contains("\"q\": \"1000000\""));
    }

    #[test]
    fn tampering() {
        let mut f = classical_file(3);
        f.subjects[0].witnesses[2].q += 1;
        assert_eq!(f.verify().unwrap_err().token(), "InvalidWitness");
        let mut f = classical_file(3);
        f.subjects[0].witnesses.remove(1);
        assert_eq!(f.verify().unwrap_err().token(), "InvalidWitness");
    }

    #[test]
    fn metadata_outside_region() {
        let mut a = classical_file(2);
        let b = a.clone();
        a.metadata.generated_at = "unix:0".into();
        assert_eq!(a.verified_region(), b.verified_region());
    }

    #[test]
    fn rejects_foreign_documents() {
        assert_eq!(
            CertificateFile::from_json("{}").unwrap_err().token(),
            "FormatError"
        );
        let mut f = classical_file(1);
        f.version = 9;
        assert_eq!(
            CertificateFile::from_json(&f.to_json())
                .unwrap_err()
                .token(),
            "FormatError"
        );
    }
}
