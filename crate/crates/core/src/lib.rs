//! Exact mixed-volume (BKK) bounds for the number of planar embeddings of
//! Laman frameworks.

pub mod embed;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod mixed;
pub mod poly;
pub mod polytope;
pub mod rational;
pub mod report;

use graph::GraphError;
use mixed::MvError;
use polytope::GeomError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] io::ParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Poly(#[from] poly::PolyError),
    #[error(transparent)]
    Mv(#[from] MvError),
    #[error(transparent)]
    Embed(#[from] embed::EmbedError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("report invariant violated: {0}")]
    Report(String),
}

impl Error {
    /// Limits of the implementation rather than problems with the input.
    pub fn is_capability(&self) -> bool {
        let graph = |e: &GraphError| matches!(e, GraphError::TooLarge { .. });
        let geom = |e: &GeomError| matches!(e, GeomError::DimensionCap { .. });
        match self {
            Error::Graph(e) => graph(e),
            Error::Geom(e) => geom(e),
            Error::Mv(e) => match e {
                MvError::NonGenericLifting { .. } | MvError::RetriesExhausted { .. } | MvError::Timeout => true,
                MvError::Graph(g) => graph(g),
                MvError::Geom(g) => geom(g),
                _ => false,
            },
            _ => false,
        }
    }
}
