use crate::error::{Error, Result};
use crate::newick::parse_newick;
use crate::taxa::{TaxonSet, TaxonTable};
use crate::tree::MulTree;

/// The input gene trees together with the taxon table that names them.
#[derive(Clone, Debug)]
pub struct Profile {
    taxa: TaxonTable,
    trees: Vec<MulTree>,
}

impl Profile {
    pub fn new(taxa: TaxonTable, trees: Vec<MulTree>) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::EmptyProfile);
        }
        Ok(Profile { taxa, trees })
    }

    /// Reads one tree per `;` from Newick text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut taxa = TaxonTable::new();
        let doc = parse_newick(text, &mut taxa)?;
        Self::new(taxa, doc.trees)
    }

    pub fn taxa(&self) -> &TaxonTable {
        &self.taxa
    }

    pub fn trees(&self) -> &[MulTree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Union of all label sets; the leaf set of any supertree.
    pub fn label_universe(&self) -> TaxonSet {
        let mut all = TaxonSet::new();
        for t in &self.trees {
            all.union_with(&t.label_set());
        }
        all
    }
}
