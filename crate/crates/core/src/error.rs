use thiserror::Error;

use crate::newick::ParseError;
use crate::taxa::TaxonId;
use crate::tree::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty restriction")]
    EmptyRestriction,
    #[error("vertex {0} is not a leaf")]
    NotALeaf(VertexId),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("taxon {0} does not label any leaf")]
    MissingTaxon(TaxonId),
    #[error("taxon {0} labels {1} leaves, expected exactly one")]
    AmbiguousTaxon(TaxonId, usize),
    #[error("tree is not singly-labeled")]
    NotSinglyLabeled,
    #[error("tree is not binary")]
    NotBinary,
    #[error("leaf labels are not contained in the reference tree")]
    LabelsNotContained,
    #[error("{0}-{1} is not an internal edge")]
    NotInternalEdge(VertexId, VertexId),
    #[error("{0}-{1} is not an edge")]
    NoSuchEdge(VertexId, VertexId),
    #[error("invalid refinement: {0}")]
    InvalidRefinement(String),
    #[error("taxon {taxon} has {left} copies in one tree and {right} in the other")]
    MultiplicityMismatch { taxon: TaxonId, left: usize, right: usize },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("empty profile")]
    EmptyProfile,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
