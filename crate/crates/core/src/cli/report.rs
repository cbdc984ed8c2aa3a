//! Tabular reports, rendered as TSV or JSON.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, columns: &[&str]) -> Table {
        Table { title: title.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let r: Vec<String> = cells.into_iter().map(Into::into).collect();
        assert_eq!(r.len(), self.columns.len(), "row width in table {}", self.title);
        self.rows.push(r);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub tables: Vec<Table>,
    /// Free-form verdict lines.
    pub notes: Vec<String>,
}

impl Report {
    pub fn push(&mut self, t: Table) {
        self.tables.push(t);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn table(&self, title: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.title == title)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Tsv => {
                let mut out = String::new();
                for (i, t) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    out.push_str(&format!("# {}\n", t.title));
                    out.push_str(&t.columns.join("\t"));
                    out.push('\n');
                    for r in &t.rows {
                        out.push_str(&r.join("\t"));
                        out.push('\n');
                    }
                }
                if !self.notes.is_empty() {
                    if !self.tables.is_empty() {
                        out.push('\n');
                    }
                    for n in &self.notes {
                        out.push_str(&format!("## {n}\n"));
                    }
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_layout() {
        let mut r = Report::default();
        let mut t = Table::new("lengths", &["word", "length"]);
        t.row(["a", "1/2"]);
        r.push(t);
        r.note("done");
        assert_eq!(r.render(Format::Tsv), "# lengths\nword\tlength\na\t1/2\n\n## done\n");
        assert!(r.render(Format::Json).contains("\"title\": \"lengths\""));
    }
}
