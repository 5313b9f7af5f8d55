//! Verification toolkit for p-rank reflection bounds in dihedral extensions
//! of degree `2p`.
//!
//! * [`arith`]: exact integers, factorization, polynomial discriminants.
//! * [`abgroup`]: finite abelian groups in invariant-factor form.
//! * [`lattice`]: Hermite and Smith normal forms over the integers.
//! * [`quadforms`]: class groups of quadratic fields via binary quadratic forms.
//! * [`cubicforms`]: cubic field counts from binary cubic forms, an
//!   independent 3-rank oracle.
//! * [`galmod`]: finite p-groups with a Frobenius-group action.
//! * [`families`]: the cubic, quintic and cyclic cubic polynomial families.
//! * [`verifier`]: rank bounds, class number formula and structure checks
//!   over dihedral instances.

pub mod abgroup;
pub mod arith;
pub mod cubicforms;
pub mod families;
pub mod galmod;
pub mod lattice;
pub mod quadforms;
pub mod verifier;

pub use abgroup::AbelianGroupStructure;
