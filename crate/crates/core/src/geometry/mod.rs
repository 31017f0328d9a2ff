//! Pointwise exterior algebra on four-dimensional coordinate frames.

mod fd;
mod form;
mod metric;
mod triple;

pub use fd::{
    constant_field, coordinate_jacobian_fd, exterior_derivative_fd, hessian_fd, jacobian_fd, laplacian_2d,
    laplacian_3d, partial, FdOptions,
};
pub use form::{subsets, wedge, FormAtPoint, Frame};
pub use metric::{sylvester_positive, MetricAtPoint, Sylvester};
pub use triple::{triple_to_metric, TripleMetric, TRIPLE_ORIENTATION};
