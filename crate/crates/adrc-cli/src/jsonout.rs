//! Deterministic JSON emission with fixed key order and 17-significant-digit
//! numbers (see `adrc_core::fmt::g17`).

use adrc_core::fmt::g17;

pub fn array(xs: &[f64]) -> String {
    let body: Vec<String> = xs.iter().map(|&x| g17(x)).collect();
    format!("[{}]", body.join(", "))
}

/// Ordered key/value object; values are pre-rendered JSON fragments.
pub struct Object {
    fields: Vec<(String, String)>,
}

impl Object {
    pub fn new() -> Self {
        Object { fields: Vec::new() }
    }

    pub fn num(mut self, key: &str, value: f64) -> Self {
        self.fields.push((key.into(), g17(value)));
        self
    }

    pub fn usize(mut self, key: &str, value: usize) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn opt_num(self, key: &str, value: Option<f64>) -> Self {
        match value {
            Some(v) => self.num(key, v),
            None => self,
        }
    }

    pub fn arr(mut self, key: &str, values: &[f64]) -> Self {
        self.fields.push((key.into(), array(values)));
        self
    }

    pub fn raw(mut self, key: &str, fragment: String) -> Self {
        self.fields.push((key.into(), fragment));
        self
    }

    pub fn render(&self, indent: usize) -> String {
        let pad = "  ".repeat(indent + 1);
        let close_pad = "  ".repeat(indent);
        let body: Vec<String> =
            self.fields.iter().map(|(k, v)| format!("{pad}\"{k}\": {v}")).collect();
        format!("{{\n{}\n{close_pad}}}", body.join(",\n"))
    }
}
