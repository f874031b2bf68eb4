//! Knowing machines over first-order arithmetic.
//!
//! * [`syntax`]: the language, Gödel coding, substitution.
//! * [`calculus`]: theories, the Hilbert proof checker, the deduction-theorem
//!   compiler and the fair consequence enumerator.
//! * [`enumvm`]: an indexed registry of enumerator programs with s-m-n and
//!   the recursion theorem.
//! * [`selfref`]: the diagonal construction and the refutation of knowing
//!   both one's own factivity and one's own index.
//! * [`machines`]: standard-model and slash evaluation, the machine zoo and
//!   factivity audits.

pub mod calculus;
pub mod demo;
pub mod enumvm;
pub mod machines;
pub mod syntax;
pub mod selfref;
