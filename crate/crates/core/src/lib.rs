//! Bivariate linear operator (B-LO) codes over prime fields.
//!
//! Encoders for permuted product and folded Reed-Solomon codes, a
//! deterministic list decoder driven by an extendibility witness, and an
//! exhaustive oracle for small instances.

pub mod codes;
pub mod demos;
pub mod error;
pub mod field;
pub mod io;
pub mod linalg;
pub mod listdecode;
pub mod operators;
pub mod oracle;
pub mod poly;

pub use codes::{BloInstance, Codeword, FrsParams, InstanceOrigin, PpcParams};
pub use error::{Error, Result};
pub use field::{Felt, Field};
pub use linalg::Matrix;
pub use listdecode::{build_plan, list_decode, Candidate, DecodingPlan, PlanParams};
pub use operators::{ExtendibilityWitness, LinOp, OperatorFamily};
pub use oracle::{oracle_list_decode, OracleBudget};
pub use poly::{AffineMap, BiPoly, PolyMatrix};
