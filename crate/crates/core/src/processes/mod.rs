//! Samplers for iterated Brownian motion and its relatives, analytic laws
//! of their functionals, and Kolmogorov–Smirnov comparison.

mod functionals;
mod paths;
mod rng;
mod samplers;
mod stats;

pub use functionals::{
    density_cdf, even_moment, half_line_mass, max_abs_bm_density, max_density_i1, max_density_i1_series,
    max_density_i1_two_branch, sojourn_density_i1, sojourn_density_i1_integral, sojourn_density_i1_series,
};
pub use paths::{sample_max_i1, simulate_max_i1, simulate_sojourn_i1, PATH_STEPS};
pub use rng::{parallel_chunks, parallel_samples, RngStream, CHUNK};
pub use samplers::{
    airy_table, sample_airy_marginal, sample_composed, sample_g_vector, sample_iterated_terminal,
    sample_multivariate_common_time, ComposedKind, GVector, AIRY_TABLE_MAX, AIRY_TABLE_POINTS, COMPOSED_LAMBDA,
};
pub use stats::{
    correlation, kolmogorov_survival, ks_critical, ks_statistic, mc_compare, normal_cdf, McSummary, TabulatedCdf,
};
