//! Species supertrees from multi-labeled gene trees.
//!
//! Given a profile of unrooted gene trees in which a species may label
//! several leaves, the library searches binary species trees for one that
//! minimizes the total Robinson-Foulds distance to the profile. Distances
//! between a gene tree and a candidate are computed by extending the
//! candidate with the gene tree's copy counts and comparing the two as
//! singly-labeled trees; the search scans whole SPR neighborhoods with
//! constant work per regraft.

pub mod error;
pub mod lca;
pub mod newick;
pub mod oracle;
pub mod profile;
pub mod rf;
pub mod search;
pub mod sim;
pub mod spr;
pub mod taxa;
pub mod tree;

pub use error::{Error, Result};
pub use newick::{parse_newick, write_newick, ParseError, TreeDocument};
pub use profile::Profile;
pub use taxa::{TaxonId, TaxonSet, TaxonTable};
pub use tree::{Cluster, MulTree, RootedTree, Split, UnrootedTree, VertexId};
