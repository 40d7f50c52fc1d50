//! Polynomial differential forms on polytopal complexes.

pub mod bundle;
pub mod chain;
pub mod complex;
pub mod form;
pub mod homotopy;
pub mod poly;

pub use bundle::{circle_bundle_chern, ChernError, ChernResult, CircleBundle, FiberArc};
pub use chain::{integrate, stokes_check, Chain, ChainError, Simplex, StokesResult};
pub use complex::{validate_form, AffineMap, ComplexError, ComplexForm, FormError, Gluing, PolytopalComplex};
pub use form::{Form, FormFile};
pub use homotopy::{cone_homotopy, homotopy_defect, HomotopyError};
pub use poly::Poly;
