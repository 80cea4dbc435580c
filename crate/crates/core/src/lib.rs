//! Exact counts of Fourier-Mukai partners of very general special cubic
//! fourfolds of discriminant `d`.
//!
//! The count is computed along three independent routes that must agree:
//!
//! * a closed formula in terms of the number of square roots of unity
//!   modulo `2d` ([`counting::fm_count`]),
//! * direct enumeration of the glue parameters classifying the relevant
//!   even overlattices ([`counting::count_m_st`]),
//! * a scan over isotropic glue subgroups of the discriminant form of
//!   `S ⊕ T` ([`counting::glue_oracle_count`]).
//!
//! A generic integral-lattice engine ([`lattice`]) can additionally
//! assemble every enumerated overlattice from its glue data and certify
//! evenness, determinant, index and saturation with arbitrary-precision
//! arithmetic.

pub mod counting;
pub mod lattice;
pub mod modarith;
pub mod mukai;
