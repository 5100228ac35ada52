//! Certificates: named inequalities `lhs <= rhs` recorded by every
//! numerically produced object.

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertEntry {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl CertEntry {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }

    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// A list of verified inequalities.
///
/// `entries` gate validity. `advisory` entries are recorded for the report
/// but do not affect `valid()`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Certificate {
    entries: Vec<CertEntry>,
    advisory: Vec<CertEntry>,
}

impl Certificate {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `lhs <= rhs` under `name` and returns whether it holds.
    pub fn check(&mut self, name: impl Into<String>, lhs: f64, rhs: f64) -> bool {
        let entry = CertEntry {
            name: name.into(),
            lhs,
            rhs,
        };
        let ok = entry.holds();
        self.entries.push(entry);
        ok
    }

    pub fn note(&mut self, name: impl Into<String>, lhs: f64, rhs: f64) {
        self.advisory.push(CertEntry {
            name: name.into(),
            lhs,
            rhs,
        });
    }

    pub fn valid(&self) -> bool {
        self.entries.iter().all(CertEntry::holds)
    }

    pub fn entries(&self) -> &[CertEntry] {
        &self.entries
    }

    pub fn advisory(&self) -> &[CertEntry] {
        &self.advisory
    }

    pub fn get(&self, name: &str) -> Option<&CertEntry> {
        self.entries
            .iter()
            .chain(self.advisory.iter())
            .find(|e| e.name == name)
    }

    /// Whether every named entry is present (gating or advisory).
    pub fn has_all(&self, names: &[&str]) -> bool {
        names.iter().all(|n| self.get(n).is_some())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CertEntry> {
        self.entries.iter().filter(|e| !e.holds())
    }

    /// Appends `other`'s entries, prefixing their names with `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: &Certificate) {
        let rename = |e: &CertEntry| CertEntry {
            name: format!("{prefix}/{}", e.name),
            ..e.clone()
        };
        self.entries.extend(other.entries.iter().map(rename));
        self.advisory.extend(other.advisory.iter().map(rename));
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for e in &self.entries {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entries = Vec::<CertEntry>::deserialize(deserializer)?;
        Ok(Certificate {
            entries,
            advisory: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity_is_recomputable() {
        let mut c = Certificate::new();
        assert!(c.valid());
        assert!(c.check("a", 1.0, 2.0));
        c.note("info", 5.0, 1.0);
        assert!(c.valid());
        assert!(!c.check("b", 3.0, 2.0));
        assert!(!c.valid());
        let json = serde_json::to_string(&c).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back.valid(), c.valid());
        assert_eq!(back.entries(), c.entries());
        assert!(c.has_all(&["a", "b", "info"]));
        assert_eq!(c.failures().count(), 1);
    }

    #[test]
    fn serializes_as_array_of_entries() {
        let mut c = Certificate::new();
        c.check("x", 0.5, 1.0);
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v, serde_json::json!([{"name": "x", "lhs": 0.5, "rhs": 1.0}]));
    }

    #[test]
    fn absorb_prefixes_names() {
        let mut inner = Certificate::new();
        inner.check("residual", 0.0, 1.0);
        let mut outer = Certificate::new();
        outer.absorb("neumann", &inner);
        assert!(outer.get("neumann/residual").is_some());
    }
}
