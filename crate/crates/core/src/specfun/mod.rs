//! Special functions: Airy, Bessel I and J of real order, gamma.

mod airy;
mod bessel;
mod gamma;

pub use airy::{airy, airy_ai, airy_ai_log_derivative, airy_scaled, AiryValues, BI_OVERFLOW};
pub use bessel::{bessel_i, bessel_i_scaled, bessel_i_scaled_batch, bessel_j, bessel_j_prime};
pub use gamma::{gamma, ln_gamma, rgamma};
