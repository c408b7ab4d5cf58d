//! Numerical probes: γ estimation, exponent fits, the tightness sequences and
//! the KL quotient.

mod fit;
mod gamma;
mod kl;
mod report;
mod sequences;

pub use fit::{fit_exponent, ExponentFit};
pub use gamma::{estimate_gamma, estimate_gamma_with, kappa_table, BandInfimum, GammaEstimate, GammaGrid};
pub use kl::{kl_quotient, kl_sequence_point, ConeSpec, KlPoint};
pub use report::{write_demo_csv, DemoRow};
pub use sequences::{tightness_sequence, SequenceKind, SequencePoint};
