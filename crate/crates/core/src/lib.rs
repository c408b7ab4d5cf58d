pub mod analysis;
pub mod block;
pub mod cli;
pub mod error;
pub mod faces;
pub mod feasibility;
pub mod frf;
pub mod geometry;
pub mod gfun;
pub mod linalg;
pub mod parse;

pub use block::BlockPoint;
pub use error::{Error, Result};
pub use faces::FaceDescriptor;
pub use frf::{Coefficient, FrfExpr};
pub use geometry::{Membership, MembershipStatus, MoreauPair, Point3};
pub use gfun::GFunction;
