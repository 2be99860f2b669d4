//! The line-oriented `.frob` input format.
//!
//! Statements end at a newline or `;`. Indices of points (simples, subspace members) are
//! 1-based here and 0-based everywhere else.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::Value;

use super::CliError;
use crate::algebra::{AlgRef, Algebra};
use crate::bimodule::Bimodule;
use crate::exactla::{Field, Matrix};
use crate::frobanalysis::restrict_bimodule;
use crate::module::{Representation, StandardCatalog};
use crate::spectrum::complement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Check,
    Ranks,
    Classify,
    Restrict,
    Partition,
    Glue,
    Duality,
    ReportAll,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Check,
        Command::Ranks,
        Command::Classify,
        Command::Restrict,
        Command::Partition,
        Command::Glue,
        Command::Duality,
        Command::ReportAll,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Ranks => "ranks",
            Command::Classify => "classify",
            Command::Restrict => "restrict",
            Command::Partition => "partition",
            Command::Glue => "glue",
            Command::Duality => "duality",
            Command::ReportAll => "report-all",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::UnknownCommand(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectOp {
    /// JSON equality.
    Equals,
    /// Substring of a string value.
    Contains,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expectation {
    /// Dotted path into the task result; numeric segments are 1-based array positions.
    pub key: String,
    pub op: ExpectOp,
    pub value: Value,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Task {
    pub command: Command,
    pub args: Vec<String>,
    pub expectations: Vec<Expectation>,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct NamedBimodule {
    pub name: String,
    pub left: String,
    pub right: String,
    pub bimodule: Bimodule,
}

#[derive(Clone, Debug)]
pub struct NamedModule {
    pub name: String,
    pub algebra: String,
    pub module: Representation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSubspace {
    pub name: String,
    pub algebra: String,
    /// 0-based killed points.
    pub killed: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct InputDocument {
    pub field: Option<Field>,
    pub algebras: Vec<(String, AlgRef)>,
    pub modules: Vec<NamedModule>,
    pub bimodules: Vec<NamedBimodule>,
    pub subspaces: Vec<NamedSubspace>,
    pub tasks: Vec<Task>,
}

impl InputDocument {
    pub fn algebra(&self, name: &str) -> Option<&AlgRef> {
        self.algebras.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    pub fn bimodule(&self, name: &str) -> Option<&NamedBimodule> {
        self.bimodules.iter().find(|b| b.name == name)
    }

    pub fn subspace(&self, name: &str) -> Option<&NamedSubspace> {
        self.subspaces.iter().find(|s| s.name == name)
    }

    fn name_taken(&self, name: &str) -> bool {
        self.algebra(name).is_some()
            || self.bimodule(name).is_some()
            || self.subspace(name).is_some()
            || self.modules.iter().any(|m| m.name == name)
    }

    /// Name of a declared algebra with the same structure, registering `algebra` otherwise.
    fn resolve_algebra(&mut self, algebra: &AlgRef, fallback: &str) -> String {
        if let Some((n, _)) = self.algebras.iter().find(|(_, a)| a.same_as(algebra)) {
            return n.clone();
        }
        let mut name = fallback.to_string();
        let mut k = 2;
        while self.name_taken(&name) {
            name = format!("{fallback}{k}");
            k += 1;
        }
        self.algebras.push((name.clone(), algebra.clone()));
        name
    }

    /// The document in explicit form: every algebra and bimodule spelled out by its tables.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(f) = self.field {
            let _ = writeln!(s, "field {}", f.p());
        }
        for (name, a) in &self.algebras {
            write_algebra(&mut s, name, a);
        }
        for m in &self.modules {
            let a = &m.module.algebra();
            let _ = writeln!(s, "\nmodule {} over {} {{", m.name, m.algebra);
            let _ = writeln!(s, "  dim {}", m.module.dim());
            for (i, x) in m.module.action().iter().enumerate() {
                let _ = writeln!(s, "  action {} = {}", text_labels(a)[i], matrix_text(x));
            }
            s.push_str("}\n");
        }
        for b in &self.bimodules {
            let m = &b.bimodule;
            let _ = writeln!(s, "\nbimodule {} over {}, {} {{", b.name, b.left, b.right);
            let _ = writeln!(s, "  dim {}", m.dim());
            for (i, x) in m.lambda().iter().enumerate() {
                let _ = writeln!(s, "  left {} = {}", text_labels(m.left_algebra())[i], matrix_text(x));
            }
            for (i, x) in m.rho().iter().enumerate() {
                let _ = writeln!(s, "  right {} = {}", text_labels(m.right_algebra())[i], matrix_text(x));
            }
            s.push_str("}\n");
        }
        if !self.subspaces.is_empty() {
            s.push('\n');
        }
        for u in &self.subspaces {
            let pts: Vec<String> = u.killed.iter().map(|x| (x + 1).to_string()).collect();
            let _ = writeln!(s, "subspace {} of {} killed {{ {} }}", u.name, u.algebra, pts.join(", "));
        }
        for t in &self.tasks {
            let _ = writeln!(s, "\ntask {} {}", t.command.as_str(), t.args.join(" "));
            for e in &t.expectations {
                let op = match e.op {
                    ExpectOp::Equals => "=",
                    ExpectOp::Contains => "~",
                };
                let _ = writeln!(s, "expect {} {} {}", e.key, op, e.value);
            }
        }
        s
    }
}

/// Basis labels usable as words; generated labels like `1` or `1'2` become `b1, b2, ...`.
fn text_labels(a: &Algebra) -> Vec<String> {
    let word = |l: &String| {
        l.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') && l.chars().all(is_word_char)
    };
    let mut seen = std::collections::HashSet::new();
    if a.labels().iter().all(|l| word(l) && seen.insert(l)) {
        a.labels().to_vec()
    } else {
        (1..=a.dim()).map(|i| format!("b{i}")).collect()
    }
}

fn lincomb_text(a: &Algebra, x: &[u32]) -> String {
    let f = a.field();
    let labels = text_labels(a);
    let terms: Vec<String> = x
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match f.signed(c) {
            1 => labels[i].clone(),
            s => format!("{s}*{}", labels[i]),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .to_int_rows()
        .iter()
        .map(|r| {
            let xs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("[{}]", xs.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn write_algebra(s: &mut String, name: &str, a: &Algebra) {
    let _ = writeln!(s, "\nalgebra {name} {{");
    let l = text_labels(a);
    let _ = writeln!(s, "  basis {}", l.join(" "));
    let _ = writeln!(s, "  unit {}", lincomb_text(a, a.unit()));
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let p = a.basis_product(i, j);
            if p.iter().any(|&c| c != 0) {
                let _ = writeln!(s, "  mul {}*{} = {}", l[i], l[j], lincomb_text(a, p));
            }
        }
    }
    let idems: Vec<String> = a.idempotents().iter().map(|e| lincomb_text(a, e)).collect();
    let _ = writeln!(s, "  idempotents {}", idems.join(", "));
    s.push_str("}\n");
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Int(i64),
    Str(String),
    Punct(char),
    Newline,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    start: usize,
    end: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | '|' | ':')
}

fn lex(src: &str) -> Result<Vec<Token>, CliError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut it = src.char_indices().peekable();
    while let Some(&(start, c)) = it.peek() {
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Token>, tok, end| {
            out.push(Token {
                tok,
                line: l0,
                col: c0,
                start,
                end,
            })
        };
        if c == '\n' {
            it.next();
            push(&mut out, Tok::Newline, start + 1);
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            it.next();
            col += 1;
        } else if c == '#' {
            while it.peek().is_some_and(|&(_, c)| c != '\n') {
                it.next();
            }
        } else if c == '"' {
            it.next();
            col += 1;
            let mut text = String::new();
            let mut end = None;
            for (i, c) in it.by_ref() {
                col += 1;
                match c {
                    '"' => {
                        end = Some(i + 1);
                        break;
                    }
                    '\n' => break,
                    _ => text.push(c),
                }
            }
            let end = end.ok_or(CliError::Syntax {
                line: l0,
                col: c0,
                msg: "unterminated string".into(),
            })?;
            push(&mut out, Tok::Str(text), end);
        } else if is_word_char(c) {
            let mut text = String::new();
            let mut end = start;
            while let Some(&(i, c)) = it.peek() {
                if !is_word_char(c) {
                    break;
                }
                text.push(c);
                end = i + c.len_utf8();
                it.next();
                col += 1;
            }
            let tok = if text.chars().all(|c| c.is_ascii_digit()) {
                Tok::Int(text.parse().map_err(|_| CliError::Syntax {
                    line: l0,
                    col: c0,
                    msg: format!("integer {text} out of range"),
                })?)
            } else {
                Tok::Word(text)
            };
            push(&mut out, tok, end);
        } else {
            it.next();
            col += 1;
            push(&mut out, Tok::Punct(c), start + c.len_utf8());
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
        start: src.len(),
        end: src.len(),
    });
    Ok(out)
}

// ---------------------------------------------------------------- parser

enum Arg {
    Name(String),
    Int(i64),
    Matrix(Vec<Vec<i64>>),
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    i: usize,
    doc: InputDocument,
}

fn semantic(block: impl Into<String>, reason: impl ToString) -> CliError {
    CliError::Semantic {
        block: block.into(),
        reason: reason.to_string(),
    }
}

pub fn parse(src: &str) -> Result<InputDocument, CliError> {
    let mut p = Parser {
        src,
        toks: lex(src)?,
        i: 0,
        doc: InputDocument::default(),
    };
    p.document()?;
    Ok(p.doc)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, CliError> {
        let t = &self.toks[self.i];
        Err(CliError::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn punct(&mut self, c: char) -> Result<(), CliError> {
        if *self.peek() == Tok::Punct(c) {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {}", self.describe()))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        let hit = *self.peek() == Tok::Punct(c);
        if hit {
            self.next();
        }
        hit
    }

    fn word(&mut self) -> Result<String, CliError> {
        match self.peek().clone() {
            Tok::Word(w) => {
                self.next();
                Ok(w)
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), CliError> {
        match self.peek() {
            Tok::Word(w) if w == k => {
                self.next();
                Ok(())
            }
            _ => self.err(format!("expected `{k}`, found {}", self.describe())),
        }
    }

    fn int(&mut self) -> Result<i64, CliError> {
        let neg = self.eat('-');
        match *self.peek() {
            Tok::Int(n) => {
                self.next();
                Ok(if neg { -n } else { n })
            }
            _ => self.err(format!("expected an integer, found {}", self.describe())),
        }
    }

    fn count(&mut self) -> Result<usize, CliError> {
        let n = self.int()?;
        usize::try_from(n).or_else(|_| self.err("expected a non-negative integer"))
    }

    fn at_end_of_statement(&self) -> bool {
        matches!(self.peek(), Tok::Newline | Tok::Eof | Tok::Punct(';') | Tok::Punct('}'))
    }

    fn end_statement(&mut self) -> Result<(), CliError> {
        match self.peek() {
            Tok::Newline | Tok::Punct(';') => {
                self.next();
                Ok(())
            }
            Tok::Eof | Tok::Punct('}') => Ok(()),
            _ => self.err(format!("expected end of statement, found {}", self.describe())),
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Tok::Newline | Tok::Punct(';')) {
            self.next();
        }
    }

    fn field(&self, block: &str) -> Result<Field, CliError> {
        self.doc
            .field
            .ok_or_else(|| semantic(block, "no `field` line precedes this block"))
    }

    fn fresh_name(&self, name: &str) -> Result<(), CliError> {
        if self.doc.name_taken(name) {
            return Err(semantic(name, "name is already declared"));
        }
        Ok(())
    }

    fn lookup_algebra(&self, block: &str, name: &str) -> Result<AlgRef, CliError> {
        self.doc.algebra(name).cloned().ok_or_else(|| CliError::Unresolved {
            block: block.into(),
            name: name.into(),
        })
    }

    fn lookup_bimodule(&self, block: &str, name: &str) -> Result<Bimodule, CliError> {
        self.doc
            .bimodule(name)
            .map(|b| b.bimodule.clone())
            .ok_or_else(|| CliError::Unresolved {
                block: block.into(),
                name: name.into(),
            })
    }

    fn lookup_subspace(&self, block: &str, name: &str) -> Result<NamedSubspace, CliError> {
        self.doc.subspace(name).cloned().ok_or_else(|| CliError::Unresolved {
            block: block.into(),
            name: name.into(),
        })
    }

    fn document(&mut self) -> Result<(), CliError> {
        loop {
            self.skip_separators();
            let kw = match self.peek().clone() {
                Tok::Eof => return Ok(()),
                Tok::Word(w) => w,
                _ => return self.err(format!("expected a declaration, found {}", self.describe())),
            };
            self.next();
            match kw.as_str() {
                "field" => self.field_line()?,
                "algebra" => self.algebra()?,
                "module" => self.module()?,
                "bimodule" => self.bimodule()?,
                "subspace" => self.subspace()?,
                "task" => self.task()?,
                "expect" => self.expect()?,
                other => {
                    self.i -= 1;
                    return self.err(format!("unknown declaration `{other}`"));
                }
            }
            self.end_statement()?;
        }
    }

    fn field_line(&mut self) -> Result<(), CliError> {
        let p = self.int()?;
        let f = u64::try_from(p)
            .ok()
            .and_then(|p| Field::new(p).ok())
            .ok_or_else(|| semantic("field", format!("modulus {p} is not prime")))?;
        match self.doc.field {
            Some(g) if g != f => Err(semantic("field", "a document has a single field modulus")),
            _ => {
                self.doc.field = Some(f);
                Ok(())
            }
        }
    }

    /// `[[1,0],[0,1]]`; `[]` for no rows.
    fn matrix_literal(&mut self) -> Result<Vec<Vec<i64>>, CliError> {
        self.punct('[')?;
        let mut rows = Vec::new();
        if self.eat(']') {
            return Ok(rows);
        }
        loop {
            self.punct('[')?;
            let mut row = Vec::new();
            if !self.eat(']') {
                loop {
                    row.push(self.int()?);
                    if self.eat(']') {
                        break;
                    }
                    self.punct(',')?;
                }
            }
            rows.push(row);
            if self.eat(']') {
                return Ok(rows);
            }
            self.punct(',')?;
        }
    }

    fn matrix(&mut self, f: Field, rows: usize, cols: usize, block: &str) -> Result<Matrix, CliError> {
        let lit = self.matrix_literal()?;
        if lit.len() != rows || lit.iter().any(|r| r.len() != cols) {
            return Err(semantic(block, format!("expected a {rows}x{cols} matrix")));
        }
        Matrix::from_rows(f, &lit, cols).map_err(|e| semantic(block, e))
    }

    fn lincomb(&mut self, a: &Algebra) -> Result<Vec<u32>, CliError> {
        let f = a.field();
        let mut v = vec![0u32; a.dim()];
        let mut first = true;
        loop {
            let mut sign = 1i64;
            if !first {
                if self.eat('-') {
                    sign = -1;
                } else if !self.eat('+') {
                    return Ok(v);
                }
            }
            first = false;
            while let Tok::Punct(c @ ('+' | '-')) = *self.peek() {
                if c == '-' {
                    sign = -sign;
                }
                self.next();
            }
            let mut coeff = 1i64;
            if let Tok::Int(n) = *self.peek() {
                self.next();
                coeff = n;
                self.eat('*');
                if !matches!(self.peek(), Tok::Word(_)) {
                    if n == 0 {
                        continue;
                    }
                    return self.err("expected a basis label after the coefficient");
                }
            }
            let label = self.word()?;
            let Some(k) = a.labels().iter().position(|l| *l == label) else {
                self.i -= 1;
                return self.err(format!("unknown basis label `{label}`"));
            };
            v[k] = f.add(v[k], f.from_i64(sign * coeff));
        }
    }

    fn args(&mut self) -> Result<Vec<Arg>, CliError> {
        let mut out = Vec::new();
        if !self.eat('(') {
            return Ok(out);
        }
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            out.push(match self.peek() {
                Tok::Word(_) => Arg::Name(self.word()?),
                Tok::Punct('[') => Arg::Matrix(self.matrix_literal()?),
                _ => Arg::Int(self.int()?),
            });
            if self.eat(')') {
                return Ok(out);
            }
            self.punct(',')?;
        }
    }

    fn algebra(&mut self) -> Result<(), CliError> {
        let name = self.word()?;
        self.fresh_name(&name)?;
        let block = format!("algebra {name}");
        let f = self.field(&block)?;
        let alg = if self.eat('=') {
            self.algebra_constructor(&block, f)?
        } else {
            self.punct('{')?;
            self.algebra_body(&block, f)?
        };
        self.doc.algebras.push((name, alg));
        Ok(())
    }

    fn algebra_constructor(&mut self, block: &str, f: Field) -> Result<AlgRef, CliError> {
        let ctor = self.word()?;
        let args = self.args()?;
        let sem = |e: crate::FrobError| semantic(block, e);
        let bad = || semantic(block, format!("bad arguments to `{ctor}`"));
        let alg = |this: &Self, a: &Arg| match a {
            Arg::Name(n) => this.lookup_algebra(block, n),
            _ => Err(bad()),
        };
        let int = |a: &Arg| match a {
            Arg::Int(n) if *n >= 0 => Ok(*n as usize),
            _ => Err(bad()),
        };
        let poly = |args: &[Arg]| {
            args.iter()
                .map(|a| match a {
                    Arg::Int(n) => Ok(*n),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<i64>, _>>()
        };
        match (ctor.as_str(), args.as_slice()) {
            ("ground", []) => Algebra::ground(f).map_err(sem),
            ("lower_triangular", [n]) => Algebra::lower_triangular(f, int(n)?).map_err(sem),
            ("extension", cs) if !cs.is_empty() => Algebra::field_extension(f, &poly(cs)?).map_err(sem),
            ("triangular_extension", cs) if !cs.is_empty() => {
                Algebra::triangular_extension(f, &poly(cs)?).map_err(sem)
            }
            ("linear_quiver", [n]) => {
                crate::fixtures::linear_quiver(u64::from(f.p()), int(n)?).map_err(sem)
            }
            ("product", [a, b]) => Algebra::product(&*alg(self, a)?, &*alg(self, b)?).map_err(sem),
            ("tensor", [a, b]) => Algebra::tensor(&*alg(self, a)?, &*alg(self, b)?).map_err(sem),
            ("opposite", [a]) => Ok(Algebra::opposite(&*alg(self, a)?)),
            ("matrix", [a, n]) => Algebra::matrix_over(&*alg(self, a)?, int(n)?).map_err(sem),
            ("corner", [Arg::Name(a), Arg::Name(u)]) => {
                let u = self.lookup_subspace(block, u)?;
                if u.algebra != *a {
                    return Err(semantic(block, format!("`{}` is not a subspace of `{a}`", u.name)));
                }
                let a = self.lookup_algebra(block, a)?;
                let c = a.corner(&complement(a.num_points(), &u.killed)).map_err(sem)?;
                Ok(c.algebra)
            }
            _ => Err(bad()),
        }
    }

    fn algebra_body(&mut self, block: &str, f: Field) -> Result<AlgRef, CliError> {
        self.skip_separators();
        self.keyword("basis")?;
        let mut labels = Vec::new();
        while !self.at_end_of_statement() {
            let l = self.word()?;
            if labels.contains(&l) {
                return Err(semantic(block, format!("basis label `{l}` repeated")));
            }
            labels.push(l);
        }
        if labels.is_empty() {
            return self.err("expected basis labels");
        }
        self.end_statement()?;
        let d = labels.len();
        // a zero-table algebra on the labels, used only to parse linear combinations
        let scratch = Algebra::raw(f, labels.clone(), vec![0; d * d * d], vec![0; d], vec![], false)
            .map_err(|e| semantic(block, e))?;
        let mut table = vec![0u32; d * d * d];
        let mut unit = None;
        let mut idempotents = None;
        loop {
            self.skip_separators();
            if self.eat('}') {
                break;
            }
            match self.word()?.as_str() {
                "unit" => unit = Some(self.lincomb(&scratch)?),
                "mul" => {
                    let x = self.label_index(&scratch)?;
                    self.punct('*')?;
                    let y = self.label_index(&scratch)?;
                    self.punct('=')?;
                    let v = self.lincomb(&scratch)?;
                    table[(x * d + y) * d..(x * d + y + 1) * d].copy_from_slice(&v);
                }
                "idempotents" => {
                    let mut es = vec![self.lincomb(&scratch)?];
                    while self.eat(',') {
                        es.push(self.lincomb(&scratch)?);
                    }
                    idempotents = Some(es);
                }
                other => {
                    self.i -= 1;
                    return self.err(format!("unknown algebra statement `{other}`"));
                }
            }
            self.end_statement()?;
        }
        let unit = unit.ok_or_else(|| semantic(block, "missing `unit`"))?;
        let idempotents = idempotents.unwrap_or_else(|| vec![unit.clone()]);
        Algebra::new(f, labels, table, unit, idempotents).map_err(|e| semantic(block, e))
    }

    fn label_index(&mut self, a: &Algebra) -> Result<usize, CliError> {
        let l = self.word()?;
        match a.labels().iter().position(|x| *x == l) {
            Some(i) => Ok(i),
            None => {
                self.i -= 1;
                self.err(format!("unknown basis label `{l}`"))
            }
        }
    }

    fn module(&mut self) -> Result<(), CliError> {
        let name = self.word()?;
        self.fresh_name(&name)?;
        let block = format!("module {name}");
        let (alg_name, module) = if self.eat('=') {
            let ctor = self.word()?;
            let args = self.args()?;
            let (a, idx) = match args.as_slice() {
                [Arg::Name(a)] => (a.clone(), None),
                [Arg::Name(a), Arg::Int(i)] => (a.clone(), Some(*i)),
                _ => return Err(semantic(&block, format!("bad arguments to `{ctor}`"))),
            };
            let alg = self.lookup_algebra(&block, &a)?;
            let m = match (ctor.as_str(), idx) {
                ("regular", None) => Representation::regular(alg),
                (kind @ ("simple" | "projective" | "injective"), Some(i)) => {
                    let cat = StandardCatalog::new(&alg).map_err(|e| semantic(&block, e))?;
                    let list = match kind {
                        "simple" => cat.simples,
                        "projective" => cat.projectives,
                        _ => cat.injectives,
                    };
                    usize::try_from(i - 1)
                        .ok()
                        .and_then(|i| list.get(i).cloned())
                        .ok_or_else(|| semantic(&block, format!("no point {i}")))?
                }
                _ => return Err(semantic(&block, format!("unknown module constructor `{ctor}`"))),
            };
            (a, m)
        } else {
            self.keyword("over")?;
            let a = self.word()?;
            let alg = self.lookup_algebra(&block, &a)?;
            self.punct('{')?;
            let mut dim = None;
            let mut action: Vec<Option<Matrix>> = vec![None; alg.dim()];
            loop {
                self.skip_separators();
                if self.eat('}') {
                    break;
                }
                match self.word()?.as_str() {
                    "dim" => dim = Some(self.count()?),
                    "action" => {
                        let i = self.label_index(&alg)?;
                        self.punct('=')?;
                        let d = dim.ok_or_else(|| semantic(&block, "`dim` must precede actions"))?;
                        action[i] = Some(self.matrix(alg.field(), d, d, &block)?);
                    }
                    other => {
                        self.i -= 1;
                        return self.err(format!("unknown module statement `{other}`"));
                    }
                }
                self.end_statement()?;
            }
            let dim = dim.ok_or_else(|| semantic(&block, "missing `dim`"))?;
            let action = collect_actions(&block, &alg, action, "action")?;
            let m = Representation::new(alg, dim, action).map_err(|e| semantic(&block, e))?;
            (a, m)
        };
        self.doc.modules.push(NamedModule {
            name,
            algebra: alg_name,
            module,
        });
        Ok(())
    }

    fn bimodule(&mut self) -> Result<(), CliError> {
        let name = self.word()?;
        self.fresh_name(&name)?;
        let block = format!("bimodule {name}");
        let mut over = None;
        if matches!(self.peek(), Tok::Word(w) if w == "over") {
            self.next();
            let a = self.word()?;
            self.punct(',')?;
            let b = self.word()?;
            over = Some((a, b));
        }
        let bimodule = if self.eat('=') {
            self.bimodule_constructor(&block)?
        } else {
            let (a, b) = over
                .clone()
                .ok_or_else(|| semantic(&block, "an explicit bimodule needs `over A, B`"))?;
            self.punct('{')?;
            self.bimodule_body(&block, &a, &b)?
        };
        let (left, right) = match over {
            Some((a, b)) => {
                for (n, alg) in [(&a, bimodule.left_algebra()), (&b, bimodule.right_algebra())] {
                    if !self.lookup_algebra(&block, n)?.same_as(alg) {
                        return Err(semantic(&block, format!("algebra `{n}` does not match")));
                    }
                }
                (a, b)
            }
            None => {
                let l = self.doc.resolve_algebra(bimodule.left_algebra(), &format!("{name}_left"));
                let r = self.doc.resolve_algebra(bimodule.right_algebra(), &format!("{name}_right"));
                (l, r)
            }
        };
        self.doc.bimodules.push(NamedBimodule {
            name,
            left,
            right,
            bimodule,
        });
        Ok(())
    }

    fn bimodule_body(&mut self, block: &str, a: &str, b: &str) -> Result<Bimodule, CliError> {
        let (alg_a, alg_b) = (self.lookup_algebra(block, a)?, self.lookup_algebra(block, b)?);
        let mut dim = None;
        let mut lambda: Vec<Option<Matrix>> = vec![None; alg_a.dim()];
        let mut rho: Vec<Option<Matrix>> = vec![None; alg_b.dim()];
        loop {
            self.skip_separators();
            if self.eat('}') {
                break;
            }
            let kw = self.word()?;
            match kw.as_str() {
                "dim" => dim = Some(self.count()?),
                "left" | "right" => {
                    let alg = if kw == "left" { &alg_a } else { &alg_b };
                    let i = self.label_index(alg)?;
                    self.punct('=')?;
                    let d = dim.ok_or_else(|| semantic(block, "`dim` must precede actions"))?;
                    let m = Some(self.matrix(alg.field(), d, d, block)?);
                    if kw == "left" {
                        lambda[i] = m;
                    } else {
                        rho[i] = m;
                    }
                }
                other => {
                    self.i -= 1;
                    return self.err(format!("unknown bimodule statement `{other}`"));
                }
            }
            self.end_statement()?;
        }
        let dim = dim.ok_or_else(|| semantic(block, "missing `dim`"))?;
        let lambda = collect_actions(block, &alg_a, lambda, "left")?;
        let rho = collect_actions(block, &alg_b, rho, "right")?;
        Bimodule::new(alg_a, alg_b, dim, lambda, rho).map_err(|e| semantic(block, e))
    }

    fn bimodule_constructor(&mut self, block: &str) -> Result<Bimodule, CliError> {
        let ctor = self.word()?;
        let args = self.args()?;
        let sem = |e: crate::FrobError| semantic(block, e);
        let bad = || semantic(block, format!("bad arguments to `{ctor}`"));
        let name = |a: &Arg| match a {
            Arg::Name(n) => Ok(n.clone()),
            _ => Err(bad()),
        };
        let alg = |a: &Arg| self.lookup_algebra(block, &name(a)?);
        let bim = |a: &Arg| self.lookup_bimodule(block, &name(a)?);
        match (ctor.as_str(), args.as_slice()) {
            ("regular", [a]) => Ok(Bimodule::regular(alg(a)?)),
            ("diagonal", [a]) => Bimodule::diagonal(alg(a)?).map_err(sem),
            ("zero", [a, b]) => Ok(Bimodule::zero(alg(a)?, alg(b)?)),
            ("twist", [a, Arg::Matrix(rows)]) => {
                let a = alg(a)?;
                let d = a.dim();
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(semantic(block, format!("expected a {d}x{d} matrix")));
                }
                let phi = Matrix::from_rows(a.field(), rows, d).map_err(sem)?;
                Bimodule::twist(a, &phi).map_err(sem)
            }
            ("quotient", [a, b, Arg::Matrix(rows)]) => {
                let a = alg(a)?;
                let d = a.dim();
                if rows.iter().any(|r| r.len() != d) {
                    return Err(semantic(block, format!("ideal rows need {d} entries")));
                }
                let ideal = Matrix::from_rows(a.field(), rows, d).map_err(sem)?;
                Bimodule::quotient_by_ideal(a, &ideal, alg(b)?, None).map_err(sem)
            }
            ("external", [m, n]) => Bimodule::external(&bim(m)?, &bim(n)?).map_err(sem),
            ("direct_sum", [m, n]) => bim(m)?.direct_sum(&bim(n)?).map_err(sem),
            ("restrict", [m, v, u]) => {
                let m = bim(m)?;
                let v = self.lookup_subspace(block, &name(v)?)?;
                let u = self.lookup_subspace(block, &name(u)?)?;
                let (a, b) = (m.left_algebra(), m.right_algebra());
                if !self.lookup_algebra(block, &v.algebra)?.same_as(a)
                    || !self.lookup_algebra(block, &u.algebra)?.same_as(b)
                {
                    return Err(semantic(block, "subspaces are not over the bimodule's algebras"));
                }
                restrict_bimodule(
                    &m,
                    &complement(a.num_points(), &v.killed),
                    &complement(b.num_points(), &u.killed),
                )
                .map_err(sem)
            }
            _ => Err(bad()),
        }
    }

    fn subspace(&mut self) -> Result<(), CliError> {
        let name = self.word()?;
        self.fresh_name(&name)?;
        let block = format!("subspace {name}");
        self.keyword("of")?;
        let a = self.word()?;
        let alg = self.lookup_algebra(&block, &a)?;
        self.keyword("killed")?;
        self.punct('{')?;
        let mut killed = Vec::new();
        while !self.eat('}') {
            let x = self.int()?;
            let n = alg.num_points();
            if x < 1 || x as usize > n {
                return Err(semantic(&block, format!("point {x} is not among 1..{n}")));
            }
            killed.push(x as usize - 1);
            self.eat(',');
        }
        killed.sort_unstable();
        killed.dedup();
        self.doc.subspaces.push(NamedSubspace {
            name,
            algebra: a,
            killed,
        });
        Ok(())
    }

    fn task(&mut self) -> Result<(), CliError> {
        let line = self.toks[self.i].line;
        let cmd = match self.peek().clone() {
            Tok::Word(w) => {
                self.next();
                w
            }
            _ => return self.err("expected a command"),
        };
        let command: Command = cmd.parse()?;
        if command == Command::ReportAll {
            self.i -= 1;
            return self.err("`report-all` is a command, not a task");
        }
        let mut args = Vec::new();
        while !self.at_end_of_statement() {
            match self.next().tok {
                Tok::Word(w) => args.push(w),
                Tok::Int(n) => args.push(n.to_string()),
                Tok::Punct(',') => {}
                _ => {
                    self.i -= 1;
                    return self.err("expected a task argument");
                }
            }
        }
        let block = format!("task {cmd} (line {line})");
        self.check_task(&block, command, &args)?;
        self.doc.tasks.push(Task {
            command,
            args,
            expectations: Vec::new(),
            line,
        });
        Ok(())
    }

    fn check_task(&self, block: &str, command: Command, args: &[String]) -> Result<(), CliError> {
        let arity = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(semantic(block, "wrong number of arguments"))
            }
        };
        let bim = |n: &String| self.lookup_bimodule(block, n).map(|_| ());
        let sub = |n: &String| self.lookup_subspace(block, n).map(|_| ());
        match command {
            Command::Check | Command::Ranks | Command::Classify | Command::Partition => {
                arity(args.len() == 1)?;
                bim(&args[0])
            }
            Command::Restrict => {
                arity(args.len() == 2)?;
                bim(&args[0])?;
                sub(&args[1])
            }
            Command::Glue => {
                arity(args.len() == 3 || args.len() == 6)?;
                let split = if args.len() == 3 { 1 } else { 2 };
                args[..split].iter().try_for_each(bim)?;
                args[split..].iter().try_for_each(sub)
            }
            Command::Duality => {
                let names: Vec<&String> = args.iter().filter(|a| a.parse::<u64>().is_err()).collect();
                arity(!names.is_empty() && names.len() <= 2 && args.len() - names.len() <= 1)?;
                names.into_iter().try_for_each(bim)
            }
            Command::ReportAll => unreachable!("rejected by the caller"),
        }
    }

    fn expect(&mut self) -> Result<(), CliError> {
        let line = self.toks[self.i].line;
        let key = match self.next().tok {
            Tok::Word(w) => w,
            Tok::Int(n) => n.to_string(),
            _ => {
                self.i -= 1;
                return self.err("expected a result key");
            }
        };
        let op = if self.eat('=') {
            ExpectOp::Equals
        } else if self.eat('~') {
            ExpectOp::Contains
        } else {
            return self.err(format!("expected `=` or `~`, found {}", self.describe()));
        };
        let first = self.i;
        while !matches!(self.peek(), Tok::Newline | Tok::Eof) {
            self.next();
        }
        if self.i == first {
            return self.err("expected a value");
        }
        let raw = &self.src[self.toks[first].start..self.toks[self.i - 1].end];
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        let Some(task) = self.doc.tasks.last_mut() else {
            return Err(semantic(format!("expect (line {line})"), "no task precedes this expectation"));
        };
        task.expectations.push(Expectation { key, op, value, line });
        Ok(())
    }
}

fn collect_actions(
    block: &str,
    alg: &Algebra,
    action: Vec<Option<Matrix>>,
    what: &str,
) -> Result<Vec<Matrix>, CliError> {
    action
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            m.ok_or_else(|| semantic(block, format!("missing `{what} {}`", alg.labels()[i])))
        })
        .collect()
}
