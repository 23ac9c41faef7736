//! Good drawings of complete graphs: exact construction, crossing and k-edge
//! analysis, shellability certificates, and 2-page crossing minimization.

pub mod arrangement;
pub mod constructions;
pub mod drawing;
pub mod error;
pub mod geom;
pub mod goodness;
pub mod io;
pub mod kedges;
pub mod optimizer;
pub mod scalar;
pub mod shelling;
pub mod suite;
pub mod svg;

pub use arrangement::{boundary_vertices, induced_boundary_order, planarize, Arrangement, FaceRef};
pub use drawing::{ClassTag, Drawing, EdgeKey, Polyline, VertexId};
pub use error::{Error, Result};
pub use scalar::{Point, Scalar};
