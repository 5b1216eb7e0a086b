//! Profile curves, their revolved surfaces, and pointwise/integral geometry.

pub mod frame;
pub mod segment;
pub mod spline;
pub mod surface;

pub use frame::{frame_at, frame_at_with, PointFrame};
pub use segment::{Branch, BumpGraph, ProfileSegment, Side};
pub use spline::ProfileSpline;
pub use surface::{Orientation, ReportResiduals, RevolutionSurface, SurfaceReport, TAU_CONF, TAU_POS, TAU_TAN};
