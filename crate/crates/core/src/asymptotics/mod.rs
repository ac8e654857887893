//! Cycle parameters, generating functions for the joint moments, leading-order
//! first and second moments, and the limiting variable `W`.

pub mod moments;
pub mod series;
pub mod spectral;
pub mod wdist;
pub mod xi;

pub use moments::{
    asymptotic_ey, asymptotic_ey_simple, hamilton_probability, ln_asymptotic_ey, prob_simple,
    second_moment_ratio, variance_sum, SimpleFirstMoment, VarianceSum,
};
pub use series::SeriesQ;
pub use spectral::{j_start, spectral_pair, spectral_pairs, SpectralPair};
pub use wdist::{sample_w, sample_w_batch, select_jmax, JmaxChoice, WSampleRecord, WSampler};
pub use xi::{xi_by_recurrence, xi_by_series, xi_closed_form};
