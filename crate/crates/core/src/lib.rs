//! Exact calculus for cone-ordered sets and vector duality on sampled data.

pub mod cone;
pub mod conjugate;
pub mod duality;
pub mod error;
pub mod farkas;
pub mod instance;
pub mod linop;
pub mod num;
pub mod oracle;
pub mod order;
pub mod problem;
pub mod search;
pub mod suites;

pub use cone::{Cone, PointClass, Tolerance};
pub use conjugate::SampledMap;
pub use error::{Error, Result};
pub use linop::{LinOp, PosOp};
pub use num::{Vector, Q};
pub use order::{FiniteVecSet, GenSet, Orientation, RegionLabel};
pub use problem::ProblemInstance;
pub use search::{SearchConfig, SearchSpace};
