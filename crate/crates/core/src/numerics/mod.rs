//! Special functions, linear algebra, random streams and minimisers.

pub mod linalg;
pub mod lowdisc;
pub mod minimize;
pub mod normal;
pub mod rng;

pub use linalg::{cholesky_factor, mat_vec, LowerTriangularFactor};
pub use lowdisc::Halton;
pub use minimize::{
    golden_section_min, grid_golden_minima, multistart_min, multistart_minima, nelder_mead,
    NelderMeadOptions, SearchBox,
};
pub use normal::{std_normal_cdf, std_normal_inv_cdf, std_normal_pdf};
pub use rng::{sample_unit_sphere, RandomStream};
