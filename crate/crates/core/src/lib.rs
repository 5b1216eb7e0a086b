//! Confined axisymmetric surfaces in the unit ball.
//!
//! Builds surfaces of revolution from arcs, catenaries and graphs, evaluates
//! their area, Willmore energy and curvature integrals by adaptive quadrature,
//! and provides the two explicit families used to bound the least Willmore
//! energy at fixed area inside the ball: an inward bump on the unit sphere and
//! two nested spheres joined by a catenoid neck. A penalized descent over
//! discrete profiles estimates the minimum numerically.

pub mod bump;
pub mod error;
pub mod geometry;
pub mod identity;
pub mod io;
pub mod neck;
pub mod probe;
pub mod quadrature;
pub mod roots;
pub mod sweep;

pub use error::{Error, Result};
pub use geometry::{frame_at, Orientation, PointFrame, ProfileSegment, RevolutionSurface, SurfaceReport};
