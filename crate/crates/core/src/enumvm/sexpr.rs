//! Parenthesized program syntax, e.g.
//! `(Interleave (Emit 1 2) (MapPair (Pair 3 SelfIndex) (RunIndex (Smn 4 0))))`.

use std::fmt;

use num_bigint::BigUint;

use super::{IndexExpr, Nat, Prog, VmError};

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nat::Lit(n) => write!(f, "{n}"),
            Nat::SelfIndex => f.write_str("SelfIndex"),
            Nat::Param => f.write_str("Param"),
            Nat::Pair(a, b) => write!(f, "(Pair {a} {b})"),
        }
    }
}

impl fmt::Display for IndexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexExpr::Lit(n) => write!(f, "{n}"),
            IndexExpr::SelfIndex => f.write_str("SelfIndex"),
            IndexExpr::Param => f.write_str("Param"),
            IndexExpr::Smn(i, n) => write!(f, "(Smn {i} {n})"),
        }
    }
}

impl fmt::Display for Prog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prog::Emit(items) => {
                f.write_str("(Emit")?;
                for n in items {
                    write!(f, " {n}")?;
                }
                f.write_str(")")
            }
            Prog::Interleave(a, b) => write!(f, "(Interleave {a} {b})"),
            Prog::MapPair(n, p) => write!(f, "(MapPair {n} {p})"),
            Prog::Section(n, p) => write!(f, "(Section {n} {p})"),
            Prog::RunIndex(i) => write!(f, "(RunIndex {i})"),
            Prog::EnumConsequences(n) => write!(f, "(EnumConsequences {n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn read(text: &str) -> Result<Sexp, VmError> {
    let spaced = text.replace('(', " ( ").replace(')', " ) ");
    let mut tokens = spaced.split_whitespace().peekable();
    let mut stack: Vec<Vec<Sexp>> = vec![vec![]];
    for tok in tokens.by_ref() {
        match tok {
            "(" => stack.push(vec![]),
            ")" => {
                let list = stack.pop().unwrap();
                let parent = stack.last_mut().ok_or_else(|| VmError::Syntax("unbalanced `)`".into()))?;
                parent.push(Sexp::List(list));
            }
            atom => stack.last_mut().unwrap().push(Sexp::Atom(atom.to_string())),
        }
        if stack.is_empty() {
            return Err(VmError::Syntax("unbalanced `)`".into()));
        }
    }
    if stack.len() != 1 {
        return Err(VmError::Syntax("unbalanced `(`".into()));
    }
    let mut top = stack.pop().unwrap();
    if top.len() != 1 {
        return Err(VmError::Syntax("expected exactly one expression".into()));
    }
    Ok(top.pop().unwrap())
}

fn syntax(msg: impl Into<String>) -> VmError {
    VmError::Syntax(msg.into())
}

fn nat(s: &Sexp) -> Result<Nat, VmError> {
    match s {
        Sexp::Atom(a) if a == "SelfIndex" => Ok(Nat::SelfIndex),
        Sexp::Atom(a) if a == "Param" => Ok(Nat::Param),
        Sexp::Atom(a) => a.parse::<BigUint>().map(Nat::Lit).map_err(|_| syntax(format!("bad number `{a}`"))),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(h), a, b] if h == "Pair" => Ok(Nat::Pair(Box::new(nat(a)?), Box::new(nat(b)?))),
            _ => Err(syntax("expected a number, SelfIndex, Param or (Pair a b)")),
        },
    }
}

fn index(s: &Sexp) -> Result<IndexExpr, VmError> {
    match s {
        Sexp::Atom(a) if a == "SelfIndex" => Ok(IndexExpr::SelfIndex),
        Sexp::Atom(a) if a == "Param" => Ok(IndexExpr::Param),
        Sexp::Atom(a) => a.parse().map(IndexExpr::Lit).map_err(|_| syntax(format!("bad index `{a}`"))),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(h), i, n] if h == "Smn" => Ok(IndexExpr::Smn(Box::new(index(i)?), nat(n)?)),
            _ => Err(syntax("expected an index, SelfIndex, Param or (Smn i n)")),
        },
    }
}

fn prog(s: &Sexp) -> Result<Prog, VmError> {
    let Sexp::List(items) = s else { return Err(syntax("expected a program")) };
    let Some((Sexp::Atom(head), args)) = items.split_first() else { return Err(syntax("expected a constructor")) };
    Ok(match (head.as_str(), args) {
        ("Emit", items) => Prog::Emit(items.iter().map(nat).collect::<Result<_, _>>()?),
        ("Interleave", [a, b]) => Prog::interleave(prog(a)?, prog(b)?),
        ("MapPair", [n, p]) => Prog::map_pair(nat(n)?, prog(p)?),
        ("Section", [n, p]) => Prog::section(nat(n)?, prog(p)?),
        ("RunIndex", [i]) => Prog::RunIndex(index(i)?),
        ("EnumConsequences", [n]) => Prog::EnumConsequences(nat(n)?),
        (h, _) => return Err(syntax(format!("bad constructor or arity: `{h}`"))),
    })
}

pub fn parse_prog(text: &str) -> Result<Prog, VmError> {
    prog(&read(text)?)
}
