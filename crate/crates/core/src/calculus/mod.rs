//! The Hilbert calculus over L(K): theories, axiom schemas, proofs and the
//! checker, the deduction-theorem compiler and the consequence enumerator.

pub mod axioms;
pub mod catalog;
pub mod enumerate;
pub mod mutate;
pub mod proof;
pub mod proof_file;
pub mod script;
pub mod taut;
pub mod theory;

pub use proof::{check_proof, check_pure, is_axiom_instance, BuildError, Justification, Lemma, Proof, ProofBuilder, Step, Verdict};
pub use theory::{SchemaId, TheoryError, TheorySpec};
pub use script::{hilbertize, Deriver, Line, Script, ScriptError, ScriptStep};
pub use taut::{is_tautology, prove_tautology, TautError};
pub use proof_file::{parse_proof_file, write_proof_file, ProofFile, ProofFileError};
pub use enumerate::{enumerate_consequences, Enumerator};
