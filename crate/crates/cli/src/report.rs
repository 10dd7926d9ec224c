//! Command output: `#? key=value` lines for machines, then a summary.

use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    machine: Vec<String>,
    human: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Appends one machine line. Whitespace inside values is removed so
    /// that lines split cleanly on spaces.
    pub fn kv(&mut self, pairs: &[(&str, String)]) {
        let fields: Vec<String> = pairs
            .iter()
            .map(|(k, v)| format!("{k}={}", v.split_whitespace().collect::<String>()))
            .collect();
        self.machine.push(format!("#? {}", fields.join(" ")));
    }

    pub fn say(&mut self, line: impl Into<String>) {
        self.human.push(line.into());
    }

    pub fn machine_lines(&self) -> &[String] {
        &self.machine
    }

    /// Value of `key` on the first machine line that has it.
    pub fn value(&self, key: &str) -> Option<&str> {
        let prefix = format!("{key}=");
        self.machine
            .iter()
            .flat_map(|l| l.split(' ').skip(1))
            .find_map(|f| f.strip_prefix(prefix.as_str()))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.machine {
            writeln!(f, "{l}")?;
        }
        if !self.human.is_empty() {
            writeln!(f)?;
            for l in &self.human {
                writeln!(f, "{l}")?;
            }
        }
        Ok(())
    }
}
