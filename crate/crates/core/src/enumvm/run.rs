use std::collections::VecDeque;

use num_bigint::BigUint;

use crate::calculus::{Enumerator, TheorySpec};
use crate::syntax::{encode_formula, pair, unpair};

use super::{Index, IndexExpr, Nat, Prog, Registry};

/// Nesting limit for `RunIndex` chains. Deeper calls never emit.
pub const MAX_NESTING: usize = 256;

/// Values wider than this are dropped instead of emitted.
pub const MAX_VALUE_BITS: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub emitted: Vec<BigUint>,
    /// The program can emit nothing further.
    pub exhausted: bool,
}

impl RunOutcome {
    pub fn contains(&self, n: &BigUint) -> bool {
        self.emitted.contains(n)
    }
}

enum Tick {
    Emit(BigUint),
    Idle,
    Done,
}

enum Cursor {
    Emit { items: Vec<BigUint>, pos: usize },
    Interleave { a: Box<Cursor>, b: Box<Cursor>, left_next: bool },
    MapPair { n: BigUint, child: Box<Cursor> },
    Section { n: BigUint, child: Box<Cursor> },
    Run { target: Index, depth: usize, child: Option<Box<Cursor>> },
    Enum { theory: Box<Enumerator>, buffer: VecDeque<BigUint> },
    /// Never emits, never finishes.
    Stuck,
}

impl Cursor {
    fn new(prog: &Prog, this: Index, depth: usize) -> Cursor {
        let nat = |n: &Nat| n.eval(Some(this));
        match prog {
            Prog::Emit(items) => match items.iter().map(nat).collect::<Option<Vec<_>>>() {
                Some(items) => Cursor::Emit { items, pos: 0 },
                None => Cursor::Stuck,
            },
            Prog::Interleave(a, b) => Cursor::Interleave {
                a: Box::new(Cursor::new(a, this, depth)),
                b: Box::new(Cursor::new(b, this, depth)),
                left_next: true,
            },
            Prog::MapPair(n, p) => match nat(n) {
                Some(n) => Cursor::MapPair { n, child: Box::new(Cursor::new(p, this, depth)) },
                None => Cursor::Stuck,
            },
            Prog::Section(n, p) => match nat(n) {
                Some(n) => Cursor::Section { n, child: Box::new(Cursor::new(p, this, depth)) },
                None => Cursor::Stuck,
            },
            Prog::RunIndex(i) => Cursor::index(i, this, depth),
            Prog::EnumConsequences(code) => match nat(code).map(|c| TheorySpec::from_code(&c)) {
                Some(Ok(t)) => Cursor::Enum { theory: Box::new(Enumerator::new(t)), buffer: VecDeque::new() },
                _ => Cursor::Stuck,
            },
        }
    }

    fn index(i: &IndexExpr, this: Index, depth: usize) -> Cursor {
        match i {
            IndexExpr::Lit(k) => Cursor::Run { target: *k, depth: depth + 1, child: None },
            IndexExpr::SelfIndex => Cursor::Run { target: this, depth: depth + 1, child: None },
            IndexExpr::Param => Cursor::Stuck,
            IndexExpr::Smn(inner, n) => match n.eval(Some(this)) {
                Some(n) => Cursor::Section { n, child: Box::new(Cursor::index(inner, this, depth)) },
                None => Cursor::Stuck,
            },
        }
    }

    fn tick(&mut self, reg: &Registry) -> Tick {
        match self {
            Cursor::Emit { items, pos } => match items.get(*pos) {
                Some(x) => {
                    *pos += 1;
                    Tick::Emit(x.clone())
                }
                None => Tick::Done,
            },
            Cursor::Interleave { a, b, left_next } => {
                let (first, second) = if *left_next { (a, b) } else { (b, a) };
                *left_next = !*left_next;
                match first.tick(reg) {
                    Tick::Done => second.tick(reg),
                    t => t,
                }
            }
            Cursor::MapPair { n, child } => match child.tick(reg) {
                Tick::Emit(m) if m.bits() + n.bits() < MAX_VALUE_BITS / 2 => Tick::Emit(pair(n, &m)),
                Tick::Emit(_) => Tick::Idle,
                t => t,
            },
            Cursor::Section { n, child } => match child.tick(reg) {
                Tick::Emit(z) => {
                    let (k, m) = unpair(&z);
                    if k == *n {
                        Tick::Emit(m)
                    } else {
                        Tick::Idle
                    }
                }
                t => t,
            },
            Cursor::Run { target, depth, child } => {
                if child.is_none() {
                    match reg.get(*target).filter(|_| *depth <= MAX_NESTING) {
                        Some(p) => *child = Some(Box::new(Cursor::new(p, *target, *depth))),
                        None => return Tick::Idle,
                    }
                }
                child.as_mut().unwrap().tick(reg)
            }
            Cursor::Enum { theory, buffer } => {
                if buffer.is_empty() {
                    let before = theory.len();
                    theory.step();
                    buffer.extend((before..theory.len()).map(|i| encode_formula(theory.get(i).unwrap())));
                }
                match buffer.pop_front() {
                    Some(code) => Tick::Emit(code),
                    None => Tick::Idle,
                }
            }
            Cursor::Stuck => Tick::Idle,
        }
    }
}

/// A resumable run of one registry index. One budget unit is one step of
/// the root cursor.
pub struct Runner {
    root: Cursor,
    steps: u64,
    emitted: Vec<BigUint>,
    exhausted: bool,
}

impl Runner {
    pub(super) fn new(prog: &Prog, this: Index) -> Runner {
        Runner { root: Cursor::new(prog, this, 0), steps: 0, emitted: vec![], exhausted: false }
    }

    /// Steps taken so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn emitted(&self) -> &[BigUint] {
        &self.emitted
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Runs until `budget` steps have been taken in total.
    pub fn advance_to(&mut self, reg: &Registry, budget: u64) {
        while self.steps < budget && !self.exhausted {
            self.steps += 1;
            match self.root.tick(reg) {
                Tick::Emit(x) => self.emitted.push(x),
                Tick::Idle => {}
                Tick::Done => self.exhausted = true,
            }
        }
        // an exhausted run stays exhausted at every larger budget
        if self.exhausted {
            self.steps = self.steps.max(budget);
        }
    }

    /// Runs until `n` elements are emitted or `max_steps` is reached.
    pub fn advance_until(&mut self, reg: &Registry, n: usize, max_steps: u64) {
        while self.emitted.len() < n && self.steps < max_steps && !self.exhausted {
            let next = self.steps + 1;
            self.advance_to(reg, next);
        }
    }

    pub fn outcome(&self) -> RunOutcome {
        RunOutcome { emitted: self.emitted.clone(), exhausted: self.exhausted }
    }
}
