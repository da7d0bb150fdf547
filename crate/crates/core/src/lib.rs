//! Convolutional signal processing on simplicial complexes.
//!
//! The crate models a simplicial complex algebraically (incidence matrices and
//! Hodge Laplacians), analyzes signals on it in the simplicial Fourier domain,
//! filters them with two-polynomial convolutional filters and the cross-level
//! filter bank, and designs filter coefficients by least squares.
//!
//! Everything is a pure function of immutable inputs: complexes, bases, and
//! coefficient sets never mutate after construction and are safe to share
//! across threads.

pub mod bank;
pub mod complex;
pub mod design;
pub mod error;
pub mod filter;
pub mod incidence;
pub mod io;
pub mod laplacian;
pub mod random;
pub mod signal;
pub mod simplex;
pub mod spectral;

pub use bank::{FilterBank, LevelBranches};
pub use complex::{OrientationRecord, PermutationRecord, SimplicialComplex};
pub use design::{
    bank_nmse, check_invertible, fit_bank, fit_filter, fit_heat_kernel,
    fit_heat_kernel_with_basis, fit_response, nmse, rational_apply, BankFit, BankOrders, PreparedRational,
    BranchOrders, ResponseFit, ResponseSample, ResponseTarget, TrainingSample, TrainingSet,
    DEFAULT_RIDGE,
};
pub use error::{Result, ScError};
pub use filter::FilterCoeffs;
pub use incidence::{boundary_condition_holds, IncidenceMatrix};
pub use laplacian::HodgeLaplacian;
pub use random::{gnp_edges, seeded_clique_complex, SeedSplitter};
pub use signal::{ComplexSignal, SimplicialSignal};
pub use simplex::Simplex;
pub use spectral::{eigendecompose, FreqType, HodgeParts, SpectralBasis};
