use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;

use super::run::{RunOutcome, Runner};
use super::sexpr::parse_prog;
use super::{Index, IndexExpr, Nat, Prog, VmError};

/// Append-only table of programs. Index 0 is always `(Emit)`, the empty
/// enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry {
    progs: Vec<Prog>,
    smn_memo: HashMap<(Index, BigUint), Index>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry::new()
    }
}

impl Registry {
    pub fn new() -> Registry {
        let mut reg = Registry { progs: vec![], smn_memo: HashMap::new() };
        reg.alloc(Prog::Emit(vec![])).unwrap();
        reg
    }

    pub fn len(&self) -> usize {
        self.progs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.progs.is_empty()
    }

    /// The index the next allocation will receive.
    pub fn next_index(&self) -> Index {
        self.progs.len() as Index
    }

    pub fn get(&self, e: Index) -> Option<&Prog> {
        self.progs.get(usize::try_from(e).ok()?)
    }

    pub fn alloc(&mut self, prog: Prog) -> Result<Index, VmError> {
        if prog.has_param() {
            return Err(VmError::OpenProgram);
        }
        let e = self.next_index();
        if let Some(key) = smn_key(&prog) {
            self.smn_memo.entry(key).or_insert(e);
        }
        self.progs.push(prog);
        Ok(e)
    }

    /// An index enumerating `{m : pair(n, m) ∈ W_e}`. Repeated calls
    /// return the same index.
    pub fn smn(&mut self, e: Index, n: impl Into<BigUint>) -> Result<Index, VmError> {
        self.get(e).ok_or(VmError::Unallocated(e))?;
        let n = n.into();
        if let Some(&i) = self.smn_memo.get(&(e, n.clone())) {
            return Ok(i);
        }
        self.alloc(Prog::section(Nat::Lit(n), Prog::RunIndex(IndexExpr::Lit(e))))
    }

    /// The emissions of the first `budget` steps of program `e`.
    pub fn run(&self, e: Index, budget: u64) -> Result<RunOutcome, VmError> {
        let mut r = self.runner(e)?;
        r.advance_to(self, budget);
        Ok(r.outcome())
    }

    pub fn runner(&self, e: Index) -> Result<Runner, VmError> {
        let prog = self.get(e).ok_or(VmError::Unallocated(e))?;
        Ok(Runner::new(prog, e))
    }

    /// One `alloc <index> <program>` line per entry.
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.progs.iter().enumerate() {
            writeln!(out, "alloc {i} {p}").unwrap();
        }
        out
    }

    /// Replays a transcript. Indices must be consecutive from 0.
    pub fn from_transcript(text: &str) -> Result<Registry, VmError> {
        let mut reg = Registry { progs: vec![], smn_memo: HashMap::new() };
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| VmError::Transcript { line: n + 1, msg };
            let rest = line.strip_prefix("alloc ").ok_or_else(|| err("expected `alloc <index> <program>`".into()))?;
            let (idx, prog) = rest.trim().split_once(' ').ok_or_else(|| err("missing program".into()))?;
            let idx: Index = idx.parse().map_err(|_| err(format!("bad index `{idx}`")))?;
            if idx != reg.next_index() {
                return Err(err(format!("expected index {}, found {idx}", reg.next_index())));
            }
            let prog = parse_prog(prog).map_err(|e| err(e.to_string()))?;
            reg.alloc(prog).map_err(|e| err(e.to_string()))?;
        }
        if reg.progs.first() != Some(&Prog::Emit(vec![])) {
            return Err(VmError::Transcript { line: 1, msg: "index 0 must be (Emit)".into() });
        }
        Ok(reg)
    }
}

fn smn_key(p: &Prog) -> Option<(Index, BigUint)> {
    match p {
        Prog::Section(Nat::Lit(n), inner) => match &**inner {
            Prog::RunIndex(IndexExpr::Lit(e)) => Some((*e, n.clone())),
            _ => None,
        },
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::pair;

    fn nums(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn p(a: u64, b: u64) -> u64 {
        let z = pair(&a.into(), &b.into());
        u64::try_from(z).unwrap()
    }

    #[test]
    fn emit_runs_to_exhaustion() {
        let mut reg = Registry::new();
        let e = reg.alloc(Prog::emit([1, 2, 3])).unwrap();
        let out = reg.run(e, 3).unwrap();
        assert_eq!(out.emitted, nums(&[1, 2, 3]));
        assert!(!out.exhausted);
        let out = reg.run(e, 10).unwrap();
        assert_eq!(out.emitted, nums(&[1, 2, 3]));
        assert!(out.exhausted);
        assert!(reg.run(0, 5).unwrap().exhausted);
    }

    #[test]
    fn interleave_is_fair() {
        let mut reg = Registry::new();
        let e = reg.alloc(Prog::interleave(Prog::emit(vec![0; 1000]), Prog::emit([5]))).unwrap();
        assert!(reg.run(e, 2).unwrap().contains(&BigUint::from(5u32)));
    }

    #[test]
    fn smn_sections() {
        let mut reg = Registry::new();
        let e = reg.alloc(Prog::emit([p(3, 10), p(4, 20)])).unwrap();
        let s = reg.smn(e, 3u32).unwrap();
        assert_eq!(reg.run(s, 100).unwrap().emitted, nums(&[10]));
        assert_eq!(reg.smn(e, 3u32).unwrap(), s);
        let empty = reg.smn(0, 9u32).unwrap();
        assert!(reg.run(empty, 100).unwrap().emitted.is_empty());
        assert_eq!(reg.smn(99, 1u32), Err(VmError::Unallocated(99)));
    }

    #[test]
    fn self_reference_is_cut_off() {
        let mut reg = Registry::new();
        let e = reg.alloc(Prog::interleave(Prog::emit([1]), Prog::RunIndex(IndexExpr::SelfIndex))).unwrap();
        let out = reg.run(e, 5000).unwrap();
        assert!(out.emitted.iter().all(|x| *x == BigUint::from(1u32)));
        assert!(out.emitted.len() > 1);
    }

    #[test]
    fn transcript_replay() {
        let mut reg = Registry::new();
        let e = reg.alloc(Prog::map_pair(Nat::SelfIndex, Prog::emit([7]))).unwrap();
        reg.smn(e, 2u32).unwrap();
        let text = reg.transcript();
        let again = Registry::from_transcript(&text).unwrap();
        assert_eq!(again, reg);
        assert_eq!(again.run(e, 10), reg.run(e, 10));
        assert!(Registry::from_transcript("alloc 1 (Emit)").is_err());
        assert!(Registry::from_transcript("alloc 0 (Emit Param)").is_err());
    }
}
