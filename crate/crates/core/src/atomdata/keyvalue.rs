//! Sectioned `key = value` files with `#` comments.

use crate::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone)]
pub(crate) struct Document {
    pub source: String,
    pub sections: Vec<Section>,
}

impl Document {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut sections = vec![Section { name: String::new(), line: 0, entries: vec![] }];
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .map(str::trim)
                    .filter(|n| !n.is_empty())
                    .ok_or_else(|| parse_error(source, line, format!("malformed section header {content:?}")))?;
                if sections.iter().any(|s| s.name == name) {
                    return Err(parse_error(source, line, format!("duplicate section [{name}]")));
                }
                sections.push(Section { name: name.to_string(), line, entries: vec![] });
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| parse_error(source, line, format!("expected `key = value`, found {content:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(parse_error(source, line, "missing key before `=`"));
            }
            let section = sections.last_mut().unwrap();
            if section.entries.iter().any(|e| e.key == key) {
                return Err(parse_error(source, line, format!("duplicate key {key:?}")));
            }
            section.entries.push(Entry { key: key.to_string(), value: value.to_string(), line });
        }
        Ok(Document { source: source.to_string(), sections })
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require_section(&self, name: &str) -> Result<&Section> {
        self.section(name).ok_or_else(|| parse_error(&self.source, 0, format!("missing section [{name}]")))
    }

    /// Rejects sections and keys outside the given schema.
    pub fn check_schema(&self, schema: &[(&str, &[&str])]) -> Result<()> {
        for section in &self.sections {
            let Some((_, keys)) = schema.iter().find(|(name, _)| *name == section.name) else {
                if section.name.is_empty() && section.entries.is_empty() {
                    continue;
                }
                return Err(parse_error(&self.source, section.line, format!("unknown section [{}]", section.name)));
            };
            // an empty key list means free-form keys
            if keys.is_empty() {
                continue;
            }
            for entry in &section.entries {
                if !keys.contains(&entry.key.as_str()) {
                    return Err(parse_error(
                        &self.source,
                        entry.line,
                        format!("unknown key {:?} in [{}]", entry.key, section.name),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn error(&self, line: usize, message: impl Into<String>) -> Error {
        parse_error(&self.source, line, message)
    }
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn require<'a>(&'a self, doc: &Document, key: &str) -> Result<&'a Entry> {
        self.get(key).ok_or_else(|| {
            let where_ = if self.name.is_empty() { "top level".to_string() } else { format!("[{}]", self.name) };
            doc.error(self.line, format!("missing required field {key:?} in {where_}"))
        })
    }
}

pub(crate) fn parse_error(source: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse { source_name: source.to_string(), line, message: message.into() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_comments() {
        let doc = Document::parse("top = 1\n# note\n[a]\nx = 2 # trailing\n\n[b]\ny=3\n", "t").unwrap();
        assert_eq!(doc.sections.len(), 3);
        assert_eq!(doc.section("").unwrap().get("top").unwrap().value, "1");
        let x = doc.section("a").unwrap().get("x").unwrap();
        assert_eq!((x.value.as_str(), x.line), ("2", 4));
        assert_eq!(doc.section("b").unwrap().get("y").unwrap().value, "3");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = Document::parse("[a]\nx = 1\nnonsense\n", "file.cfg").unwrap_err();
        assert_eq!(err.to_string(), "file.cfg:3: expected `key = value`, found \"nonsense\"");
        assert!(Document::parse("[a]\nx = 1\nx = 2\n", "f").is_err());
        assert!(Document::parse("[a]\n[a]\n", "f").is_err());
        assert!(Document::parse("[a\n", "f").is_err());
    }

    #[test]
    fn schema_rejects_unknown_keys() {
        let doc = Document::parse("[a]\nx = 1\nz = 2\n", "f").unwrap();
        let err = doc.check_schema(&[("", &[]), ("a", &["x", "y"])]).unwrap_err();
        assert!(err.to_string().contains("unknown key \"z\""));
        let err = doc.check_schema(&[("", &[])]).unwrap_err();
        assert!(err.to_string().contains("unknown section [a]"));
    }
}
