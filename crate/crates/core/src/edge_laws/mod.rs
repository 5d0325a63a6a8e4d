//! Everything at the spectral edge: the Airy kernel and its windowed
//! operator, the Tracy-Widom distribution by two independent methods, the
//! universal limiting kernel as the Airy resolvent, its Bessel-form
//! asymptotics deep in the bulk, the m-th largest eigenvalue laws, the
//! finite-n scaled kernels, and the convergence-rate experiment.

pub mod window;
pub mod painleve;
pub mod kernels;
pub mod finite_n;

pub use finite_n::{convergence_rate, finite_n_scaled_kernel, FiniteNKernel, RateExperiment};
pub use kernels::{
    bessel_form_kernel, build_mth_law, continuity_at_zero, limit_kernel, limit_kernel_with,
    mth_law_limit, mth_law_limit_with, mth_law_routes, BesselFormKernel, LimitKernel, MthLaw,
};
pub use painleve::{hastings_mcleod, hastings_mcleod_default, tw_painleve, HastingsMcLeod};
pub use window::{
    airy_kernel, tw_fredholm, AiryWindow, DEFAULT_RESOLUTION, KERNEL_ALPHA_GATE, TW_ALPHA_GATE,
    WINDOW_END,
};
