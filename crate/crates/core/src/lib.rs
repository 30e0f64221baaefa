//! Proximal operators of submodular penalties by parametric maximum flow.
//!
//! For a submodular `F` and `p ∈ (1, ∞]` the crate computes
//!
//! ```text
//! prox(z) = argmin_w ½‖z - w‖² + λ Ω_{F,p}(w)
//! ```
//!
//! by solving a separable problem over the base polytope of `F`. `F` is
//! written as a flow network ([`netrep`]), the separable problem becomes a
//! family of parametric minimum cuts ([`paraflow`]) solved with warm-started
//! preflow-push ([`maxflow`]), and the primal point follows in closed form
//! ([`prox`]).
//!
//! ```
//! use proxflow::prox::{prox, Exponent, ProxProblem};
//! use proxflow::setfn::{Edge, SetFunction};
//!
//! let f = SetFunction::graph_cut(2, vec![Edge::new(0, 1, 1.0)]).unwrap();
//! let pb = ProxProblem::new(vec![3.0, 1.0], 0.5, Exponent::Infinity, f).unwrap();
//! let w = prox(&pb).unwrap().w;
//! assert!((w[0] - 2.5).abs() < 1e-12 && (w[1] - 1.5).abs() < 1e-12);
//! ```

pub mod bench;
pub mod cli;
pub mod error;
pub mod generate;
pub mod io;
pub mod maxflow;
pub mod netrep;
pub mod oracle;
pub mod paraflow;
pub mod prox;
pub mod setfn;
pub mod solver;

pub use error::{Error, Result};
pub use prox::{prox, Exponent, ProxProblem, ProxSolution};
pub use setfn::SetFunction;
