use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::GlobalArgs;

#[derive(Debug)]
pub enum CliError {
    Core(ctclab::Error),
    /// Malformed or invalid input document.
    Parse {
        kind: &'static str,
        message: String,
    },
    Io(String),
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Parse { kind, .. } => kind,
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Parse { message, .. } | CliError::Io(message) | CliError::Usage(message) => message.clone(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 2,
            _ => 1,
        }
    }
}

impl From<ctclab::Error> for CliError {
    fn from(e: ctclab::Error) -> Self {
        CliError::Core(e)
    }
}

/// Validation failures raised while deserializing keep their library tag.
fn classify(e: serde_json::Error, origin: &str) -> CliError {
    if e.is_io() {
        return CliError::Io(format!("{origin}: {e}"));
    }
    let text = e.to_string();
    const TAGS: [(&str, &str); 7] = [
        ("dimension error:", "dimension"),
        ("contract violation:", "contract"),
        ("solver failure:", "solver"),
        ("domain error:", "domain"),
        ("truncation error:", "truncation"),
        ("critical lightray:", "critical_ray"),
        ("ambiguous localization:", "ambiguous"),
    ];
    let kind = TAGS.iter().find(|(p, _)| text.starts_with(p)).map_or("parse", |(_, k)| k);
    CliError::Parse { kind, message: format!("{origin}: {text}") }
}

pub fn read_input<T: DeserializeOwned>(g: &GlobalArgs) -> Result<T, CliError> {
    let path = g.input.as_deref().ok_or_else(|| CliError::Usage("this command needs --in <file>".into()))?;
    read_json(path)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| classify(e, origin))
}

pub fn write_output(g: &GlobalArgs, contents: &str) -> Result<(), CliError> {
    match &g.out {
        Some(path) => fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report types serialize");
    s.push('\n');
    s
}

/// CSV with a header row, comma separators and LF line endings.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, fields: &[Field]) {
        for (k, f) in fields.iter().enumerate() {
            if k > 0 {
                self.text.push(',');
            }
            match f {
                Field::Float(x) => write!(self.text, "{}", fmt_float(*x)),
                Field::Int(n) => write!(self.text, "{n}"),
                Field::Text(s) => write!(self.text, "{s}"),
            }
            .expect("write to string");
        }
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub enum Field {
    Float(f64),
    Int(i64),
    Text(&'static str),
}

/// Shortest decimal string that reads back as the same double.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
