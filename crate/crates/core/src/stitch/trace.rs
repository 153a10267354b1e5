use std::fmt::Write as _;

/// One `kind key=value ...` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl TraceRecord {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Parses a line written by [`Trace::to_text`].
    pub fn parse(line: &str) -> Option<TraceRecord> {
        let mut parts = line.split_whitespace();
        let kind = parts.next()?.to_string();
        let fields = parts
            .map(|p| p.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
            .collect::<Option<Vec<_>>>()?;
        Some(TraceRecord { kind, fields })
    }
}

/// Branch decisions and edge-count checkpoints of one pipeline run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
}

impl Trace {
    pub fn push(&mut self, kind: &str, fields: &[(&str, String)]) {
        self.records.push(TraceRecord {
            kind: kind.to_string(),
            fields: fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        });
    }

    pub fn of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a TraceRecord> + 'a {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&r.kind);
            for (k, v) in &r.fields {
                let _ = write!(s, " {k}={v}");
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Option<Trace> {
        let records = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(TraceRecord::parse)
            .collect::<Option<Vec<_>>>()?;
        Some(Trace { records })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut t = Trace::default();
        t.push("solve", &[("depth", "0".into()), ("n", "5".into())]);
        t.push("greedy", &[]);
        let text = t.to_text();
        assert_eq!(text, "solve depth=0 n=5\ngreedy\n");
        let back = Trace::parse(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.records[0].get("n"), Some("5"));
        assert_eq!(back.of_kind("greedy").count(), 1);
    }
}
