//! S-box property kernels and evolutionary search for low boomerang uniformity.
//!
//! * [`sbox`], [`field`], [`affine`]: lookup-table S-boxes, GF(2^n) power maps
//!   and affine equivalence.
//! * [`properties`]: DDT, BCT, differential and boomerang uniformity,
//!   algebraic degree.
//! * [`encodings`]: integer, permutation and cellular-automaton genotypes with
//!   their variation operators.
//! * [`search`]: fitness functions, steady-state EA, random search, NSGA-II.
//! * [`harness`]: seeded multi-run experiments, summaries and exports.
//!
//! The `parallel` feature (default) evaluates independent runs and batches of
//! genotypes on the rayon pool; see [`exec`].

pub mod affine;
pub mod encodings;
pub mod exec;
pub mod field;
pub mod harness;
pub mod properties;
pub mod sbox;
pub mod search;

pub use affine::{apply_affine, AffineMap};
pub use encodings::{random_genotype, Encoding, Genotype, GenotypeError, OperatorSuite};
pub use exec::Execution;
pub use field::{gf_mul, power_map, FieldSpec};
pub use harness::{run_experiment, Algorithm, ExperimentConfig, RunRecord};
pub use properties::{
    algebraic_degree, bct_fast, bct_naive, boomerang_uniformity, ddt, delta_uniformity,
    CountTable, PropertyReport, TableKind,
};
pub use sbox::{SBox, SBoxError};
pub use search::{
    crowding_distance, dominates, fitness_multi, fitness_single, nondominated_sort, nsga2,
    random_search, steady_state_ea, Objective, ParetoFront, SearchConfig, SearchError,
};
