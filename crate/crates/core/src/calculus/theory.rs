use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::syntax::{pair, unpair};

/// Axiom schemas. The first seven are the logical schemas of the Hilbert
/// calculus and are available in every theory; the rest are theory schemas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemaId {
    PropAx1,
    PropAx2,
    PropAx3,
    QInst,
    QDistr,
    EqRefl,
    EqSubst,
    PAAxiom,
    Induction,
    Comp,
    /// Knowledge of Tautology: `K(ψ)` for every logically valid `ψ`.
    KT,
    /// Knowledge Modus Ponens.
    KMP,
    /// Knowledge of Arithmetic.
    KArith,
    Closure,
    Factivity,
    /// Knowledge of Factivity: `K(K(ψ) -> ψ)`.
    KFactivity,
    /// `K(ψ) <-> In(num ⌜ψ⌝, num e)`.
    GNum(u64),
    /// Knowledge of having index `e`: `K(K(ψ) <-> In(num ⌜ψ⌝, num e))`.
    KGNum(u64),
}

impl SchemaId {
    pub const LOGICAL: [SchemaId; 7] = [
        SchemaId::PropAx1,
        SchemaId::PropAx2,
        SchemaId::PropAx3,
        SchemaId::QInst,
        SchemaId::QDistr,
        SchemaId::EqRefl,
        SchemaId::EqSubst,
    ];

    pub fn is_logical(self) -> bool {
        Self::LOGICAL.contains(&self)
    }

    /// Bit position in a theory code; `None` for logical schemas.
    fn bit(self) -> Option<u32> {
        Some(match self {
            SchemaId::PAAxiom => 0,
            SchemaId::Induction => 1,
            SchemaId::Comp => 2,
            SchemaId::KT => 3,
            SchemaId::KMP => 4,
            SchemaId::KArith => 5,
            SchemaId::Closure => 6,
            SchemaId::Factivity => 7,
            SchemaId::KFactivity => 8,
            SchemaId::GNum(_) => 9,
            SchemaId::KGNum(_) => 10,
            _ => return None,
        })
    }

    pub fn index(self) -> Option<u64> {
        match self {
            SchemaId::GNum(e) | SchemaId::KGNum(e) => Some(e),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::PropAx1 => "PropAx1",
            SchemaId::PropAx2 => "PropAx2",
            SchemaId::PropAx3 => "PropAx3",
            SchemaId::QInst => "QInst",
            SchemaId::QDistr => "QDistr",
            SchemaId::EqRefl => "EqRefl",
            SchemaId::EqSubst => "EqSubst",
            SchemaId::PAAxiom => "PAAxiom",
            SchemaId::Induction => "Induction",
            SchemaId::Comp => "Comp",
            SchemaId::KT => "KT",
            SchemaId::KMP => "KMP",
            SchemaId::KArith => "KArith",
            SchemaId::Closure => "Closure",
            SchemaId::Factivity => "Factivity",
            SchemaId::KFactivity => "KFactivity",
            SchemaId::GNum(_) => "GNum",
            SchemaId::KGNum(_) => "KGNum",
        }
    }

    /// Parses a schema name; `GNum`/`KGNum` take the given index.
    pub fn from_name(name: &str, e: u64) -> Option<SchemaId> {
        Some(match name {
            "PropAx1" => SchemaId::PropAx1,
            "PropAx2" => SchemaId::PropAx2,
            "PropAx3" => SchemaId::PropAx3,
            "QInst" => SchemaId::QInst,
            "QDistr" => SchemaId::QDistr,
            "EqRefl" => SchemaId::EqRefl,
            "EqSubst" => SchemaId::EqSubst,
            "PAAxiom" => SchemaId::PAAxiom,
            "Induction" => SchemaId::Induction,
            "Comp" => SchemaId::Comp,
            "KT" => SchemaId::KT,
            "KMP" => SchemaId::KMP,
            "KArith" => SchemaId::KArith,
            "Closure" => SchemaId::Closure,
            "Factivity" => SchemaId::Factivity,
            "KFactivity" => SchemaId::KFactivity,
            "GNum" => SchemaId::GNum(e),
            "KGNum" => SchemaId::KGNum(e),
            _ => return None,
        })
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index() {
            Some(e) => write!(f, "{}({e})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("unknown theory or schema `{0}`")]
    Unknown(String),
    #[error("schema {0} is logical and cannot be listed in a theory")]
    Logical(String),
    #[error("theory code does not decode to a theory")]
    BadCode,
    #[error("GNum and KGNum carry different indices")]
    MixedIndex,
}

/// A theory given by a finite menu of schemas, denoting the (infinite) set of
/// their instances.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TheorySpec {
    schemas: BTreeSet<SchemaId>,
}

const SIGMA_MACHINE: [SchemaId; 5] =
    [SchemaId::KT, SchemaId::KMP, SchemaId::KArith, SchemaId::Closure, SchemaId::Factivity];
const PA: [SchemaId; 3] = [SchemaId::PAAxiom, SchemaId::Induction, SchemaId::Comp];

impl TheorySpec {
    pub fn new(schemas: impl IntoIterator<Item = SchemaId>) -> Result<TheorySpec, TheoryError> {
        let schemas: BTreeSet<_> = schemas.into_iter().collect();
        if let Some(s) = schemas.iter().find(|s| s.is_logical()) {
            return Err(TheoryError::Logical(s.name().into()));
        }
        let indices: BTreeSet<u64> = schemas.iter().filter_map(|s| s.index()).collect();
        if indices.len() > 1 {
            return Err(TheoryError::MixedIndex);
        }
        Ok(TheorySpec { schemas })
    }

    fn of(schemas: &[SchemaId]) -> TheorySpec {
        TheorySpec::new(schemas.iter().copied()).expect("preset is well formed")
    }

    /// Pure predicate calculus with equality.
    pub fn logic() -> TheorySpec {
        TheorySpec::default()
    }

    /// Peano arithmetic: the six basic axioms and induction.
    pub fn pa() -> TheorySpec {
        TheorySpec::of(&[SchemaId::PAAxiom, SchemaId::Induction])
    }

    /// The axioms of a knowing machine.
    pub fn sigma_machine() -> TheorySpec {
        TheorySpec::of(&SIGMA_MACHINE)
    }

    /// Knowing-machine axioms together with arithmetic.
    pub fn sigma_slash() -> TheorySpec {
        let mut t = TheorySpec::sigma_machine();
        t.schemas.extend(PA);
        t
    }

    /// Knowing-machine axioms, arithmetic, Knowledge of Factivity and
    /// Knowledge of having index `e`. Inconsistent for every `e`.
    pub fn sigma_e(e: u64) -> TheorySpec {
        let mut t = TheorySpec::sigma_e_bare(e);
        t.schemas.extend(PA);
        t
    }

    /// As [`TheorySpec::sigma_e`] but without arithmetic listed directly;
    /// arithmetic is still reachable through Knowledge of Arithmetic and
    /// Factivity.
    pub fn sigma_e_bare(e: u64) -> TheorySpec {
        let mut t = TheorySpec::sigma_machine();
        t.schemas.extend([SchemaId::KFactivity, SchemaId::KGNum(e)]);
        t
    }

    /// Arithmetic, the knowing-machine axioms except Factivity, Knowledge of
    /// having index `e`, and the unquoted index schema. Its consequences are
    /// the knowledge of the self-knowing machine.
    pub fn sigma_prime(e: u64) -> TheorySpec {
        let mut t = TheorySpec::of(&PA);
        t.schemas.extend([SchemaId::KT, SchemaId::KMP, SchemaId::KArith, SchemaId::Closure]);
        t.schemas.extend([SchemaId::KGNum(e), SchemaId::GNum(e)]);
        t
    }

    /// Looks up a preset by name.
    pub fn preset(name: &str, e: u64) -> Option<TheorySpec> {
        Some(match name {
            "logic" | "empty" => TheorySpec::logic(),
            "pa" => TheorySpec::pa(),
            "sigma_machine" => TheorySpec::sigma_machine(),
            "sigma_slash" => TheorySpec::sigma_slash(),
            "sigma_e" => TheorySpec::sigma_e(e),
            "sigma_e_bare" => TheorySpec::sigma_e_bare(e),
            "sigma_prime" => TheorySpec::sigma_prime(e),
            _ => return None,
        })
    }

    /// Parses a preset name or a comma-separated schema list.
    pub fn parse(spec: &str, e: u64) -> Result<TheorySpec, TheoryError> {
        let spec = spec.trim();
        if let Some(t) = TheorySpec::preset(spec, e) {
            return Ok(t);
        }
        let mut schemas = Vec::new();
        for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let s = SchemaId::from_name(name, e).ok_or_else(|| TheoryError::Unknown(name.into()))?;
            schemas.push(s);
        }
        TheorySpec::new(schemas)
    }

    pub fn contains(&self, s: SchemaId) -> bool {
        self.schemas.contains(&s)
    }

    pub fn schemas(&self) -> impl Iterator<Item = SchemaId> + '_ {
        self.schemas.iter().copied()
    }

    pub fn without(&self, s: SchemaId) -> TheorySpec {
        let mut t = self.clone();
        t.schemas.remove(&s);
        t
    }

    pub fn is_empty(&self) -> bool {
        self.schemas.is_empty()
    }

    /// The index parameter of `GNum`/`KGNum`, if present.
    pub fn index(&self) -> Option<u64> {
        self.schemas.iter().find_map(|s| s.index())
    }

    /// Natural-number code `pair(mask, e)` where bit `i` of `mask` marks the
    /// `i`-th theory schema.
    pub fn code(&self) -> BigUint {
        let mask: u32 = self.schemas.iter().filter_map(|s| s.bit()).map(|b| 1 << b).sum();
        pair(&BigUint::from(mask), &BigUint::from(self.index().unwrap_or(0)))
    }

    pub fn from_code(code: &BigUint) -> Result<TheorySpec, TheoryError> {
        let (mask, e) = unpair(code);
        let mask = mask.to_u32().filter(|m| *m < (1 << 11)).ok_or(TheoryError::BadCode)?;
        let e = e.to_u64().ok_or(TheoryError::BadCode)?;
        let all = [
            SchemaId::PAAxiom,
            SchemaId::Induction,
            SchemaId::Comp,
            SchemaId::KT,
            SchemaId::KMP,
            SchemaId::KArith,
            SchemaId::Closure,
            SchemaId::Factivity,
            SchemaId::KFactivity,
            SchemaId::GNum(e),
            SchemaId::KGNum(e),
        ];
        let schemas: Vec<_> = all.into_iter().filter(|s| mask & (1 << s.bit().unwrap()) != 0).collect();
        if e != 0 && !schemas.iter().any(|s| s.index().is_some()) {
            return Err(TheoryError::BadCode);
        }
        TheorySpec::new(schemas)
    }

    /// Header text for proof files: a schema list plus `e=<n>` when indexed.
    pub fn header(&self) -> String {
        let names: Vec<_> = self.schemas.iter().map(|s| s.name()).collect();
        let list = if names.is_empty() { "logic".to_string() } else { names.join(",") };
        match self.index() {
            Some(e) => format!("{list} e={e}"),
            None => list,
        }
    }
}

impl FromStr for TheorySpec {
    type Err = TheoryError;

    /// Accepts `<preset or list> [e=<n>]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (body, e) = match s.rsplit_once("e=") {
            Some((body, e)) => {
                let e = e.trim().parse().map_err(|_| TheoryError::Unknown(s.into()))?;
                (body, e)
            }
            None => (s, 0),
        };
        TheorySpec::parse(body, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_prime_never_contains_factivity() {
        for e in [0, 1, 7, 1000] {
            let t = TheorySpec::sigma_prime(e);
            assert!(!t.contains(SchemaId::Factivity));
            assert!(!t.contains(SchemaId::KFactivity));
            assert!(t.contains(SchemaId::GNum(e)) && t.contains(SchemaId::KGNum(e)));
        }
    }

    #[test]
    fn code_round_trip() {
        for t in [
            TheorySpec::logic(),
            TheorySpec::pa(),
            TheorySpec::sigma_slash(),
            TheorySpec::sigma_e(3),
            TheorySpec::sigma_prime(12345),
        ] {
            assert_eq!(TheorySpec::from_code(&t.code()).unwrap(), t);
        }
    }

    #[test]
    fn rejects_mixed_indices_and_logical_schemas() {
        assert_eq!(TheorySpec::new([SchemaId::GNum(1), SchemaId::KGNum(2)]), Err(TheoryError::MixedIndex));
        assert!(matches!(TheorySpec::new([SchemaId::PropAx1]), Err(TheoryError::Logical(_))));
    }

    #[test]
    fn header_parses_back() {
        for t in [TheorySpec::logic(), TheorySpec::sigma_e(7), TheorySpec::sigma_machine()] {
            assert_eq!(t.header().parse::<TheorySpec>().unwrap(), t);
        }
        assert_eq!("sigma_e e=4".parse::<TheorySpec>().unwrap(), TheorySpec::sigma_e(4));
    }
}
