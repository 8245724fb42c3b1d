//! Spectral primitives: Chebyshev polynomials, circular shift and banded
//! Toeplitz matrices with their spectra, arcsine-law quadrature, and the
//! Marčenko–Pastur / Silverstein fixed-point solvers.

mod chebyshev;
mod quadrature;
mod shift;
mod silverstein;
mod spectral;

pub use chebyshev::chebyshev_eval;
pub use quadrature::{
    arcsine_integral, arcsine_integral_with, gauss_chebyshev_nodes, gauss_legendre, ARCSINE_NODES,
};
pub use shift::{
    shift_matrix, symmetric_eigenvalues, symmetrized_shift_spectrum, szego_limit, szego_moment,
    toeplitz_band,
};
pub use silverstein::{
    companion_to_stieltjes, lsd_density, m_bar_derivative, silverstein_residual, solve_silverstein,
    solve_silverstein_any, SolverConfig, StieltjesPoint, DENSITY_EPSILON,
};
pub use spectral::{JointSpectralDistribution, SpectralDistribution};
