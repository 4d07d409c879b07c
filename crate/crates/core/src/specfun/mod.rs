//! Real special functions and exact combinatorial coefficients.

pub mod beta;
pub mod combinat;
pub mod dawson;
pub mod expint;
pub mod gamma;
pub mod hyper;
pub mod polygamma;
pub mod series;

pub use beta::{f_cdf, f_quantile, inc_beta, reg_inc_beta};
pub use combinat::{norlund, stirling1, stirling1_unsigned, stirling2};
pub use dawson::dawson;
pub use expint::{expint_ei, expint_ei_scaled, lower_gamma, EULER_GAMMA};
pub use gamma::{binomial, falling_factorial, gamma, ln_gamma, ln_gamma_ratio, pochhammer, rpochhammer};
pub use hyper::{hyp1f1, hyp2f1, hyp2f1_unit, hyp_pfq, hyp_pfq_unit};
pub use polygamma::{digamma, polygamma, trigamma};
