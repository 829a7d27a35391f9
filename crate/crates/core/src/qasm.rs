//! OpenQASM 2.0 subset reader and writer.
//!
//! Supported: the `OPENQASM 2.0;` header, `include "qelib1.inc";`, a single
//! `qreg`, `creg` and `barrier` (both ignored), `//` comments, and the gates
//! of the built-in table below. Angle arguments accept numeric literals,
//! `pi`, unary minus, and binary `*` and `/`.
//!
//! | QASM                          | IR                                  |
//! |-------------------------------|-------------------------------------|
//! | `id x y z h s sdg t tdg`      | matching [`GateKind`]               |
//! | `rx ry rz`                    | `RX RY RZ`                          |
//! | `u1(l)`, `p(l)`               | `Phase(l)`                          |
//! | `u2(f,l)`                     | `U3(pi/2, f, l)`                    |
//! | `u3(t,f,l)`, `U(t,f,l)`       | `U3(t, f, l)`                       |
//! | `cx CX cy cz ch`              | one control on `X Y Z H`            |
//! | `crx cry crz cu1 cp cu3`      | one control on the rotation         |
//! | `ccx`                         | Toffoli                             |

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseDiagnostic {
    /// 1-based line of the offending token.
    pub line: usize,
    /// 1-based column (in characters) of the offending token.
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EmitError {
    #[error("gate `{0}` has no qelib1 spelling")]
    Unrepresentable(String),
    #[error("gate `{0}` has a non-finite parameter")]
    NonFinite(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Real(f64),
    Str(String),
    Sym(char),
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Real(x) => write!(f, "`{x}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn diag(line: usize, column: usize, message: impl Into<String>) -> ParseDiagnostic {
    ParseDiagnostic {
        line,
        column,
        message: message.into(),
    }
}

fn lex(source: &str) -> Result<Vec<Token>, ParseDiagnostic> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let ch = chars[i];
        let (tl, tc) = (line, col);
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if ch == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if ch.is_ascii_alphabetic() || ch == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if ch.is_ascii_digit()
            || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit()))
        {
            let mut is_real = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                is_real = true;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    is_real = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            if is_real {
                Tok::Real(
                    text.parse()
                        .map_err(|_| diag(tl, tc, format!("bad number `{text}`")))?,
                )
            } else {
                Tok::Int(
                    text.parse()
                        .map_err(|_| diag(tl, tc, format!("bad integer `{text}`")))?,
                )
            }
        } else if ch == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(diag(tl, tc, "unterminated string"));
            }
            i += 1;
            Tok::Str(chars[start + 1..i - 1].iter().collect())
        } else if ch == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            Tok::Arrow
        } else if "[](){};,*/-+=".contains(ch) {
            i += 1;
            Tok::Sym(ch)
        } else {
            return Err(diag(tl, tc, format!("unexpected character `{ch}`")));
        };
        col += i - start;
        tokens.push(Token {
            tok,
            line: tl,
            column: tc,
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(tokens)
}

struct GateSpec {
    params: usize,
    qubits: usize,
    build: fn(&[f64]) -> GateKind,
}

fn lookup(name: &str) -> Option<GateSpec> {
    use GateKind::*;
    let spec = |params, qubits, build| {
        Some(GateSpec {
            params,
            qubits,
            build,
        })
    };
    match name {
        "id" => spec(0, 1, |_| I),
        "x" => spec(0, 1, |_| X),
        "y" => spec(0, 1, |_| Y),
        "z" => spec(0, 1, |_| Z),
        "h" => spec(0, 1, |_| H),
        "s" => spec(0, 1, |_| S),
        "sdg" => spec(0, 1, |_| Sdg),
        "t" => spec(0, 1, |_| T),
        "tdg" => spec(0, 1, |_| Tdg),
        "rx" => spec(1, 1, |p| RX(p[0])),
        "ry" => spec(1, 1, |p| RY(p[0])),
        "rz" => spec(1, 1, |p| RZ(p[0])),
        "u1" | "p" => spec(1, 1, |p| Phase(p[0])),
        "u2" => spec(2, 1, |p| U3(PI / 2.0, p[0], p[1])),
        "u3" | "U" => spec(3, 1, |p| U3(p[0], p[1], p[2])),
        "cx" | "CX" => spec(0, 2, |_| X),
        "cy" => spec(0, 2, |_| Y),
        "cz" => spec(0, 2, |_| Z),
        "ch" => spec(0, 2, |_| H),
        "crx" => spec(1, 2, |p| RX(p[0])),
        "cry" => spec(1, 2, |p| RY(p[0])),
        "crz" => spec(1, 2, |p| RZ(p[0])),
        "cu1" | "cp" => spec(1, 2, |p| Phase(p[0])),
        "cu3" => spec(3, 2, |p| U3(p[0], p[1], p[2])),
        "ccx" => spec(0, 3, |_| X),
        _ => None,
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    register: Option<(String, usize)>,
    gates: Vec<Gate>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, msg: impl Into<String>) -> ParseDiagnostic {
        diag(t.line, t.column, msg)
    }

    fn expect_sym(&mut self, c: char) -> Result<Token, ParseDiagnostic> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(t)
        } else {
            Err(self.error_at(&t, format!("expected `{c}`, found {}", t.tok)))
        }
    }

    fn expect_int(&mut self) -> Result<(u64, Token), ParseDiagnostic> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => Ok((v, t)),
            _ => Err(self.error_at(&t, format!("expected an integer, found {}", t.tok))),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Token), ParseDiagnostic> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => Err(self.error_at(&t, format!("expected an identifier, found {}", t.tok))),
        }
    }

    fn program(&mut self) -> Result<(), ParseDiagnostic> {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == "OPENQASM") {
            self.next();
            let t = self.next();
            match t.tok {
                Tok::Real(2.0) => {}
                _ => {
                    return Err(self.error_at(&t, format!("unsupported OpenQASM version {}", t.tok)))
                }
            }
            self.expect_sym(';')?;
        }
        while self.peek().tok != Tok::Eof {
            self.statement()?;
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<(), ParseDiagnostic> {
        let (word, t) = self.expect_ident()?;
        match word.as_str() {
            "include" => {
                let s = self.next();
                match &s.tok {
                    Tok::Str(f) if f == "qelib1.inc" => {}
                    Tok::Str(f) => {
                        return Err(self.error_at(
                            &s,
                            format!("cannot include \"{f}\": only qelib1.inc is built in"),
                        ))
                    }
                    other => {
                        return Err(
                            self.error_at(&s, format!("expected a file name, found {other}"))
                        )
                    }
                }
                self.expect_sym(';')?;
            }
            "qreg" => {
                if self.register.is_some() {
                    return Err(self.error_at(&t, "only one quantum register is supported"));
                }
                let (name, _) = self.expect_ident()?;
                self.expect_sym('[')?;
                let (size, st) = self.expect_int()?;
                if size == 0 {
                    return Err(self.error_at(&st, "register size must be at least 1"));
                }
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                self.register = Some((name, size as usize));
            }
            "creg" => {
                self.expect_ident()?;
                self.expect_sym('[')?;
                self.expect_int()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
            }
            "barrier" => {
                loop {
                    let (name, nt) = self.expect_ident()?;
                    self.check_register(&name, &nt)?;
                    if self.peek().tok == Tok::Sym('[') {
                        self.next();
                        let (idx, it) = self.expect_int()?;
                        self.check_index(idx, &it)?;
                        self.expect_sym(']')?;
                    }
                    if self.peek().tok == Tok::Sym(',') {
                        self.next();
                    } else {
                        break;
                    }
                }
                self.expect_sym(';')?;
            }
            "measure" | "reset" | "if" | "gate" | "opaque" => {
                return Err(self.error_at(
                    &t,
                    format!("`{word}` is not supported: circuits must be purely unitary"),
                ));
            }
            _ => self.gate_call(word, t)?,
        }
        Ok(())
    }

    fn check_register(&self, name: &str, t: &Token) -> Result<usize, ParseDiagnostic> {
        match &self.register {
            None => Err(self.error_at(t, "qubit used before any `qreg` declaration")),
            Some((reg, size)) if reg == name => Ok(*size),
            Some(_) => Err(self.error_at(t, format!("unknown register `{name}`"))),
        }
    }

    fn check_index(&self, idx: u64, t: &Token) -> Result<usize, ParseDiagnostic> {
        let size = self.register.as_ref().map_or(0, |r| r.1);
        if idx as usize >= size {
            return Err(self.error_at(
                t,
                format!("qubit index {idx} out of range for register of size {size}"),
            ));
        }
        Ok(idx as usize)
    }

    fn gate_call(&mut self, name: String, t: Token) -> Result<(), ParseDiagnostic> {
        let spec =
            lookup(&name).ok_or_else(|| self.error_at(&t, format!("unknown gate `{name}`")))?;
        let mut params = Vec::new();
        if self.peek().tok == Tok::Sym('(') {
            self.next();
            if self.peek().tok != Tok::Sym(')') {
                loop {
                    params.push(self.expr()?);
                    if self.peek().tok == Tok::Sym(',') {
                        self.next();
                    } else {
                        break;
                    }
                }
            }
            self.expect_sym(')')?;
        }
        if params.len() != spec.params {
            return Err(self.error_at(
                &t,
                format!(
                    "gate `{name}` takes {} parameter(s), got {}",
                    spec.params,
                    params.len()
                ),
            ));
        }
        let mut qubits = Vec::new();
        loop {
            let (reg, rt) = self.expect_ident()?;
            self.check_register(&reg, &rt)?;
            self.expect_sym('[')?;
            let (idx, it) = self.expect_int()?;
            let q = self.check_index(idx, &it)?;
            if qubits.contains(&q) {
                return Err(self.error_at(&it, format!("qubit {q} used twice in one gate")));
            }
            qubits.push(q);
            self.expect_sym(']')?;
            if self.peek().tok == Tok::Sym(',') {
                self.next();
            } else {
                break;
            }
        }
        if qubits.len() != spec.qubits {
            return Err(self.error_at(
                &t,
                format!(
                    "gate `{name}` acts on {} qubit(s), got {}",
                    spec.qubits,
                    qubits.len()
                ),
            ));
        }
        self.expect_sym(';')?;
        let target = qubits.pop().expect("at least one qubit");
        self.gates.push(Gate {
            kind: (spec.build)(&params),
            controls: qubits,
            target,
        });
        Ok(())
    }

    fn expr(&mut self) -> Result<f64, ParseDiagnostic> {
        let mut value = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Sym('*') => {
                    self.next();
                    value *= self.unary()?;
                }
                Tok::Sym('/') => {
                    self.next();
                    value /= self.unary()?;
                }
                _ => break,
            }
        }
        Ok(value)
    }

    fn unary(&mut self) -> Result<f64, ParseDiagnostic> {
        let t = self.next();
        match &t.tok {
            Tok::Sym('-') => Ok(-self.unary()?),
            Tok::Real(v) => Ok(*v),
            Tok::Int(v) => Ok(*v as f64),
            Tok::Ident(s) if s == "pi" => Ok(PI),
            other => Err(self.error_at(&t, format!("expected an angle, found {other}"))),
        }
    }
}

/// Parses an OpenQASM 2.0 program into a circuit over its single register.
pub fn parse_qasm(source: &str) -> Result<Circuit, ParseDiagnostic> {
    let tokens = lex(source)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        register: None,
        gates: Vec::new(),
    };
    p.program()?;
    let Some((_, size)) = p.register else {
        let end = p.peek().clone();
        return Err(p.error_at(&end, "no quantum register declared"));
    };
    Ok(Circuit::from_gates(size, p.gates).expect("indices checked while parsing"))
}

fn qasm_name(gate: &Gate) -> Result<&'static str, EmitError> {
    use GateKind::*;
    let name = match (gate.controls.len(), gate.kind) {
        (0, k) => match k {
            I => "id",
            X => "x",
            Y => "y",
            Z => "z",
            H => "h",
            S => "s",
            Sdg => "sdg",
            T => "t",
            Tdg => "tdg",
            RX(_) => "rx",
            RY(_) => "ry",
            RZ(_) => "rz",
            Phase(_) => "u1",
            U3(..) => "u3",
        },
        (1, X) => "cx",
        (1, Y) => "cy",
        (1, Z) => "cz",
        (1, H) => "ch",
        (1, RX(_)) => "crx",
        (1, RY(_)) => "cry",
        (1, RZ(_)) => "crz",
        (1, Phase(_)) => "cu1",
        (1, U3(..)) => "cu3",
        (2, X) => "ccx",
        _ => return Err(EmitError::Unrepresentable(gate.to_string())),
    };
    Ok(name)
}

/// Writes the circuit as OpenQASM 2.0 over register `q`.
///
/// Angles are printed with round-trip precision, so `parse_qasm` recovers
/// the circuit exactly.
pub fn emit_qasm(circuit: &Circuit) -> Result<String, EmitError> {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    out.push_str(&format!("qreg q[{}];\n", circuit.num_qubits()));
    for g in circuit.gates() {
        out.push_str(qasm_name(g)?);
        let params = g.kind.params();
        if !params.is_empty() {
            if params.iter().any(|p| !p.is_finite()) {
                return Err(EmitError::NonFinite(g.to_string()));
            }
            let ps: Vec<String> = params.iter().map(|p| format!("{p:?}")).collect();
            out.push('(');
            out.push_str(&ps.join(","));
            out.push(')');
        }
        let qs: Vec<String> = g.qubits().map(|q| format!("q[{q}]")).collect();
        out.push(' ');
        out.push_str(&qs.join(","));
        out.push_str(";\n");
    }
    Ok(out)
}
