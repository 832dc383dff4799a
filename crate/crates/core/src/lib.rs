//! Permutation edit distances through cycle graphs.
//!
//! The cycle graph of `π ∈ S_n` is encoded as the even permutation
//! `π̄ = (0,1,…,n) ∘ (0,π_n,…,π_1)`; its cycles give lower bounds on
//! block-interchange, transposition and prefix transposition distances,
//! exact formulas for block-interchanges and prefix exchanges, and extremal
//! permutations for the prefix transposition diameter. An exhaustive
//! breadth-first search over `S_n` provides exact distances to check all of
//! them against.
//!
//! ```
//! use permcycle::{bounds, cycle_graph::encode, Permutation};
//!
//! let pi: Permutation = "4 1 6 2 5 7 3".parse().unwrap();
//! assert_eq!(encode(&pi).to_string(), "(0,4,1,5,3)(2,7,6)");
//! assert_eq!(bounds::ptd_new_lower_bound(&pi), 4);
//! ```

pub mod bounds;
pub mod cycle_graph;
pub mod descents;
pub mod diameter;
pub mod error;
pub mod oracle;
pub mod ops;
pub mod perm;
pub mod verify;

pub use error::{Error, Result};
pub use ops::{FamilyTag, GeneratorFamily, Rearrangement};
pub use perm::{Bijection, CycleDecomposition, PermRank, Permutation};
