use num_bigint::BigUint;

use crate::calculus::TheorySpec;
use crate::syntax::unpair;

use super::{Index, IndexExpr, Nat, Prog, Registry, VmError};

/// A program with a parameter, describing the index transformer
/// `e ↦ index of the program with the parameter set to e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template(Prog);

impl Template {
    pub fn new(prog: Prog) -> Template {
        Template(prog)
    }

    pub fn prog(&self) -> &Prog {
        &self.0
    }

    pub fn instantiate(&self, e: Index) -> Prog {
        self.0.subst(&Nat::lit(e), &IndexExpr::Lit(e))
    }

    fn instantiate_self(&self) -> Prog {
        self.0.subst(&Nat::SelfIndex, &IndexExpr::SelfIndex)
    }
}

/// `f(e)`: allocates the template instantiated at `e`.
pub fn apply(reg: &mut Registry, f: &Template, e: Index) -> Result<Index, VmError> {
    reg.alloc(f.instantiate(e))
}

/// A fixed point by self-reference: the new entry's program is the
/// template with the parameter bound to the entry's own index.
pub fn fixed_point(reg: &mut Registry, f: &Template) -> Index {
    reg.alloc(f.instantiate_self()).expect("instantiated templates are closed")
}

/// A fixed point by the s-m-n construction: allocate `p` enumerating
/// `{pair(p, m) : m ∈ W_{f(s)}}` where `s = smn(p, p)`, then return `s`.
/// Then `W_s = {m : pair(p, m) ∈ W_p} = W_{f(s)}`.
pub fn fixed_point_classical(reg: &mut Registry, f: &Template) -> Result<Index, VmError> {
    let p = reg.next_index();
    let s = p + 1;
    let e = reg.alloc(Prog::map_pair(Nat::lit(p), f.instantiate(s)))?;
    let got = reg.smn(e, p)?;
    if got != s {
        return Err(VmError::FixedPointDrift { expected: s, got });
    }
    Ok(got)
}

/// The transformer `e ↦ EnumConsequences(code of Σ′_e)`.
pub fn consequences_transformer() -> Template {
    let (mask, _) = unpair(&TheorySpec::sigma_prime(0).code());
    let code = Nat::Pair(Box::new(Nat::Lit(mask)), Box::new(Nat::Param));
    Template(Prog::EnumConsequences(code))
}

/// Theory code of `Σ′_e`.
pub fn sigma_prime_code(e: Index) -> BigUint {
    TheorySpec::sigma_prime(e).code()
}
