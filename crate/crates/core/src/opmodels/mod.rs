//! Finite models of operator pairs, weighted sequences and subspace systems.

pub mod commutant;
pub mod pairs;
pub mod sequence;
pub mod subspace;

pub use commutant::{commutant_basis, is_strongly_irreducible, StrongIrreducibility};
pub use pairs::{kron_pair_bilateral, kron_pair_shift_rank_one, Fixture, OperatorPair};
pub use sequence::{density_criterion, log_mk, DensityVerdict, SequenceSpec};
pub use subspace::{four_subspace_from_pair, hrr_system, phi_map, subspace_system_end, SubspaceSystem};
