//! Distance kernel embeddings of finite metric measure spaces.
//!
//! A finite metric measure space `(X, d, mu)` defines the operator
//! `D_ij = d(x_i, x_j) mu(x_j)`, self-adjoint for the `mu`-weighted inner
//! product. Its eigenpairs give complex coordinates `alpha_i = sqrt(lambda_i) e_i`
//! whose truncations embed `X` into `C^k`, recovering the metric through the
//! bilinear form `[v, w] = sum v_i w_i`.
//!
//! The crate is organized as:
//!
//! * [`mmspace`]: construction, validation, sampling and I/O of spaces;
//! * [`spectral`]: the kernel operator and its ordered, sign-fixed spectrum;
//! * [`embedding`]: coordinates, distance reconstruction, Hausdorff
//!   distances, point-set bottleneck matching and the family of bound evaluators;
//! * [`persistence`]: simplicial complexes, lower-star persistence, bottleneck
//!   distance between diagrams, Betti and Euler curves;
//! * [`transforms`]: the intrinsic and embedded persistence / Euler kernel transforms;
//! * [`experiments`]: drivers that assemble the above into reproducible tables.

pub mod embedding;
pub mod error;
pub mod experiments;
pub mod matching;
pub mod mmspace;
pub mod persistence;
pub mod spectral;
pub mod transforms;

pub use error::{Error, Result, Violation};
pub use mmspace::{AbStandardness, MetricMeasureSpace};
pub use spectral::{KernelMatrix, Spectrum};
