//! The workspace file format: named matrices given as lists of primitives.
//!
//! ```text
//! # upper triangular ones
//! matrix V { upper_cone d=0 from=1 value=1 }
//! matrix E11 {
//!     cell i=1 j=1 value=1/2
//! }
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::matrix::{Primitive, Shape, SymbolicMatrix};
use crate::scalar::Scalar;

/// Named matrices plus the position of each definition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Workspace {
    matrices: BTreeMap<String, SymbolicMatrix>,
    positions: BTreeMap<String, (usize, usize)>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bind `name`, failing if it is already bound.
    pub fn insert(&mut self, name: &str, m: SymbolicMatrix) -> Result<()> {
        if self.matrices.contains_key(name) {
            return Err(Error::Parse { line: 0, column: 0, message: format!("duplicate matrix name `{name}`") });
        }
        self.matrices.insert(name.to_string(), m);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&SymbolicMatrix> {
        self.matrices.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// Line and column where `name` was defined, if it came from source text.
    pub fn position(&self, name: &str) -> Option<(usize, usize)> {
        self.positions.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.matrices.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SymbolicMatrix)> {
        self.matrices.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

/// One matrix block in source form.
pub fn print_matrix(name: &str, m: &SymbolicMatrix) -> String {
    let mut out = format!("matrix {name} {{\n");
    for t in m.terms() {
        let _ = writeln!(out, "    {t}");
    }
    out.push_str("}\n");
    out
}

impl fmt::Display for Workspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, m)) in self.matrices.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            f.write_str(&print_matrix(name, m))?;
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, column, message: message.into() })
}

fn lex(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut c = 0;
        while c < chars.len() {
            let ch = chars[c];
            if ch.is_whitespace() {
                c += 1;
                continue;
            }
            let (line, column) = (n + 1, c + 1);
            if ch == '{' || ch == '}' {
                out.push(Token { tok: if ch == '{' { Tok::Open } else { Tok::Close }, line, column });
                c += 1;
                continue;
            }
            let begin = c;
            while c < chars.len() && !chars[c].is_whitespace() && chars[c] != '{' && chars[c] != '}' {
                c += 1;
            }
            out.push(Token { tok: Tok::Word(chars[begin..c].iter().collect()), line, column });
        }
    }
    out
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

const KINDS: [(&str, &[&str]); 6] = [
    ("cell", &["i", "j", "value"]),
    ("row_prog", &["i", "from", "step", "value"]),
    ("col_prog", &["j", "from", "step", "value"]),
    ("diag", &["d", "from", "value"]),
    ("upper_cone", &["d", "from", "value"]),
    ("lower_cone", &["d", "from", "value"]),
];

struct Params<'a> {
    values: BTreeMap<&'a str, (&'a str, usize, usize)>,
}

impl Params<'_> {
    fn index(&self, key: &str) -> Result<usize> {
        let (v, line, column) = self.values[key];
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            Ok(_) => err(line, column, format!("`{key}` must be at least 1")),
            Err(_) => err(line, column, format!("`{key}` expects a positive integer, found `{v}`")),
        }
    }

    fn offset(&self, key: &str) -> Result<i64> {
        let (v, line, column) = self.values[key];
        v.parse().or_else(|_| err(line, column, format!("`{key}` expects an integer, found `{v}`")))
    }

    fn value(&self) -> Result<Scalar> {
        let (v, line, column) = self.values["value"];
        v.parse().or_else(|_| err(line, column, format!("`value` expects a rational, found `{v}`")))
    }
}

/// Parse a workspace. Names must be unique; definitions may come in any order.
pub fn parse_dsl(text: &str) -> Result<Workspace> {
    let tokens = lex(text);
    let mut ws = Workspace::new();
    let mut pos = 0;
    let end = |tokens: &[Token]| tokens.last().map_or((1, 1), |t| (t.line, t.column + 1));
    while pos < tokens.len() {
        let t = &tokens[pos];
        if t.tok != Tok::Word("matrix".into()) {
            return err(t.line, t.column, "expected `matrix`");
        }
        let Some(name_tok) = tokens.get(pos + 1) else {
            let (l, c) = end(&tokens);
            return err(l, c, "expected a matrix name");
        };
        let name = match &name_tok.tok {
            Tok::Word(w) if is_ident(w) && !w.contains('=') => w.clone(),
            _ => return err(name_tok.line, name_tok.column, "expected a matrix name"),
        };
        if let Some((l, c)) = ws.position(&name) {
            return err(
                name_tok.line,
                name_tok.column,
                format!("duplicate matrix name `{name}` (first defined at {l}:{c})"),
            );
        }
        match tokens.get(pos + 2) {
            Some(Token { tok: Tok::Open, .. }) => {}
            Some(t) => return err(t.line, t.column, "expected `{`"),
            None => {
                let (l, c) = end(&tokens);
                return err(l, c, "expected `{`");
            }
        }
        pos += 3;
        let mut terms = Vec::new();
        loop {
            let Some(t) = tokens.get(pos) else {
                let (l, c) = end(&tokens);
                return err(l, c, format!("unterminated matrix `{name}`"));
            };
            let kind = match &t.tok {
                Tok::Close => break,
                Tok::Open => return err(t.line, t.column, "unexpected `{`"),
                Tok::Word(w) => w.as_str(),
            };
            let Some((_, keys)) = KINDS.iter().find(|(k, _)| *k == kind) else {
                return err(t.line, t.column, format!("unknown primitive `{kind}`"));
            };
            let (kline, kcol) = (t.line, t.column);
            pos += 1;
            let mut values = BTreeMap::new();
            while let Some(Token { tok: Tok::Word(w), line, column }) = tokens.get(pos) {
                let Some((key, value)) = w.split_once('=') else { break };
                if !keys.contains(&key) {
                    return err(*line, *column, format!("`{kind}` has no parameter `{key}`"));
                }
                if values.insert(key, (value, *line, *column)).is_some() {
                    return err(*line, *column, format!("parameter `{key}` given twice"));
                }
                pos += 1;
            }
            if let Some(missing) = keys.iter().find(|k| !values.contains_key(*k)) {
                return err(kline, kcol, format!("`{kind}` is missing parameter `{missing}`"));
            }
            let p = Params { values };
            let shape = match kind {
                "cell" => Shape::Cell { i: p.index("i")?, j: p.index("j")? },
                "row_prog" => Shape::RowProg { row: p.index("i")?, from: p.index("from")?, step: p.index("step")? },
                "col_prog" => Shape::ColProg { col: p.index("j")?, from: p.index("from")?, step: p.index("step")? },
                "diag" => Shape::Diag { offset: p.offset("d")?, from: p.index("from")? },
                "upper_cone" => Shape::UpperCone { offset: p.offset("d")?, from: p.index("from")? },
                _ => Shape::LowerCone { offset: p.offset("d")?, from: p.index("from")? },
            };
            if let Err(reason) = shape.validate() {
                return err(kline, kcol, format!("invalid `{kind}`: {reason}"));
            }
            terms.push(Primitive::new(shape, p.value()?));
        }
        pos += 1;
        let m = SymbolicMatrix::new(terms).or_else(|e| err(name_tok.line, name_tok.column, e.to_string()))?;
        ws.positions.insert(name.clone(), (name_tok.line, name_tok.column));
        ws.matrices.insert(name, m);
    }
    Ok(ws)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_err(text: &str) -> (usize, usize, String) {
        match parse_dsl(text) {
            Err(Error::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_single_line_blocks() {
        let ws = parse_dsl("matrix V { upper_cone d=0 from=1 value=1 }").unwrap();
        assert_eq!(ws.get("V").unwrap(), &SymbolicMatrix::new([Primitive::upper_cone(0, 1, 1)]).unwrap());
        let ws = parse_dsl("matrix E11 { cell i=1 j=1 value=1 }").unwrap();
        assert_eq!(ws.get("E11").unwrap(), &SymbolicMatrix::unit(1, 1));
    }

    #[test]
    fn parses_sums_and_comments() {
        let text = "# connector\nmatrix B { row_prog i=1 from=1 step=1 value=1  col_prog j=1 from=1 step=1 value=1  \
                    cell i=2 j=2 value=1  cell i=1 j=1 value=-1 }\n";
        let b = parse_dsl(text).unwrap().get("B").unwrap().clone();
        assert_eq!(b.entry(1, 1), Scalar::one());
        assert_eq!(b.entry(2, 2), Scalar::one());
        assert_eq!(b.entry(2, 3), Scalar::zero());
        assert_eq!(b.entry(5, 1), Scalar::one());
    }

    #[test]
    fn rationals_and_negative_offsets() {
        let ws = parse_dsl("matrix M {\n  diag d=-1 from=2 value=-3/6\n}").unwrap();
        assert_eq!(ws.get("M").unwrap().entry(2, 1), Scalar::new(-1, 2));
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_err("matrix A {\n  cel i=1 j=1 value=1\n}").0, 2);
        let (line, column, msg) = parse_err("matrix A {\n  cell i=1 j=0 value=1\n}");
        assert_eq!((line, column), (2, 12));
        assert!(msg.contains("at least 1"));
        let (_, _, msg) = parse_err("matrix A { diag d=-2 from=1 value=1 }");
        assert!(msg.contains("from + d"));
        let (_, _, msg) = parse_err("matrix A { cell i=1 value=1 }");
        assert!(msg.contains("missing parameter `j`"));
        let (_, _, msg) = parse_err("matrix A { cell i=1 j=1 value=1/0 }");
        assert!(msg.contains("rational"));
        let (line, _, msg) = parse_err("matrix A { }\n\nmatrix A { }");
        assert_eq!(line, 3);
        assert!(msg.contains("duplicate"));
        parse_err("matrix A { cell i=1 j=1 value=1 ");
        parse_err("mat A { }");
    }

    #[test]
    fn print_then_parse_is_identity() {
        let text =
            "matrix Z { }\nmatrix B { diag d=1 from=1 value=1 diag d=-1 from=2 value=-1 diag d=1 from=4 value=2 }";
        let ws = parse_dsl(text).unwrap();
        let again = parse_dsl(&ws.to_string()).unwrap();
        assert_eq!(ws.iter().collect::<Vec<_>>(), again.iter().collect::<Vec<_>>());
        assert!(again.get("Z").unwrap().is_zero_repr());
    }
}
