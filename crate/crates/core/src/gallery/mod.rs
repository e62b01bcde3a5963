//! Executable examples: a family with non-Hölder eigenvalue derivatives and
//! jumping eigenvectors, a weakly-but-not-norm differentiable diagonal
//! family, and a discretized Schrödinger operator.

pub mod curve_lemma;
pub mod resolvent;
pub mod schrodinger;

pub use curve_lemma::{
    eigenvector_jump, holder_closed_form, holder_quotient, top_eigenvector_angle, CurveLemmaFamily, HolderQuotient,
    WindowFamily,
};
pub use resolvent::{bump, resolvent_weak_vs_norm, resolvent_weak_vs_norm_with, ResolventExampleFamily, WeakVsNorm};
pub use schrodinger::{schrodinger_track, SchrodingerFamily};
