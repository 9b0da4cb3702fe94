//! Newick reading and writing for (multi-labeled) unrooted trees.
//!
//! Branch lengths, internal node labels and `[...]` comments are accepted
//! and dropped. A bifurcating top level is read as an unrooted tree, so
//! `((a,b),(c,d));` and `(a,b,(c,d));` denote the same topology.

use thiserror::Error;

use crate::taxa::{TaxonId, TaxonTable};
use crate::tree::{MulTree, UnrootedTree, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Trees read from one Newick text, with the line each tree starts on.
#[derive(Clone, Debug, Default)]
pub struct TreeDocument {
    pub trees: Vec<MulTree>,
    pub source_lines: Vec<usize>,
}

impl TreeDocument {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    /// Skips whitespace and bracketed comments.
    fn skip_trivia(&mut self) -> Result<(), ParseError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('[') => {
                    let (line, column) = (self.line, self.column);
                    while let Some(c) = self.bump() {
                        if c == ']' {
                            break;
                        }
                    }
                    if self.chars.get(self.pos - 1) != Some(&']') {
                        return Err(ParseError {
                            line,
                            column,
                            message: "unterminated comment".into(),
                        });
                    }
                }
                _ => return Ok(()),
            }
        }
    }
}

const DELIMITERS: &[char] = &['(', ')', ',', ':', ';', '[', ']', '\''];

struct Builder {
    adj: Vec<Vec<VertexId>>,
    labels: Vec<Option<TaxonId>>,
}

impl Builder {
    fn node(&mut self, label: Option<TaxonId>) -> VertexId {
        self.adj.push(Vec::new());
        self.labels.push(label);
        self.adj.len() - 1
    }

    fn link(&mut self, a: VertexId, b: VertexId) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }
}

/// Parses every `;`-terminated tree in `text`, interning labels in `taxa`.
pub fn parse_newick(text: &str, taxa: &mut TaxonTable) -> Result<TreeDocument, ParseError> {
    let mut cur = Cursor::new(text);
    let mut doc = TreeDocument::default();
    loop {
        cur.skip_trivia()?;
        if cur.peek().is_none() {
            break;
        }
        let line = cur.line;
        let tree = parse_tree(&mut cur, taxa)?;
        doc.trees.push(tree);
        doc.source_lines.push(line);
    }
    Ok(doc)
}

/// Parses exactly one tree.
pub fn parse_single(text: &str, taxa: &mut TaxonTable) -> Result<MulTree, ParseError> {
    let mut doc = parse_newick(text, taxa)?;
    match doc.trees.len() {
        1 => Ok(doc.trees.pop().unwrap()),
        n => Err(ParseError {
            line: 1,
            column: 1,
            message: format!("expected one tree, found {n}"),
        }),
    }
}

fn parse_tree(cur: &mut Cursor, taxa: &mut TaxonTable) -> Result<MulTree, ParseError> {
    let mut b = Builder {
        adj: Vec::new(),
        labels: Vec::new(),
    };
    let start = (cur.line, cur.column);
    parse_subtree(cur, taxa, &mut b)?;
    cur.skip_trivia()?;
    match cur.peek() {
        Some(';') => {
            cur.bump();
        }
        Some(c) => return Err(cur.error(format!("unexpected '{c}', expected ';'"))),
        None => return Err(cur.error("missing ';'")),
    }
    if b.labels.iter().all(|l| l.is_none()) {
        return Err(ParseError {
            line: start.0,
            column: start.1,
            message: "tree has no leaves".into(),
        });
    }
    UnrootedTree::normalize(b.adj, b.labels)
        .map(MulTree::new)
        .map_err(|e| ParseError {
            line: start.0,
            column: start.1,
            message: e.to_string(),
        })
}

fn parse_subtree(cur: &mut Cursor, taxa: &mut TaxonTable, b: &mut Builder) -> Result<VertexId, ParseError> {
    cur.skip_trivia()?;
    if cur.peek() == Some('(') {
        cur.bump();
        let v = b.node(None);
        loop {
            let child = parse_subtree(cur, taxa, b)?;
            b.link(v, child);
            cur.skip_trivia()?;
            match cur.bump() {
                Some(',') => continue,
                Some(')') => break,
                Some(c) => return Err(cur.error(format!("unexpected '{c}' in child list"))),
                None => return Err(cur.error("unbalanced parentheses")),
            }
        }
        // Internal labels are ignored.
        cur.skip_trivia()?;
        read_label(cur)?;
        skip_length(cur)?;
        Ok(v)
    } else {
        let (line, column) = (cur.line, cur.column);
        let name = read_label(cur)?;
        match name {
            Some(name) if !name.is_empty() => {
                let id = taxa.intern(&name);
                skip_length(cur)?;
                Ok(b.node(Some(id)))
            }
            _ => match cur.peek() {
                Some(')') => Err(ParseError {
                    line,
                    column,
                    message: "unbalanced parentheses or empty label".into(),
                }),
                None => Err(ParseError {
                    line,
                    column,
                    message: "unexpected end of input".into(),
                }),
                _ => Err(ParseError {
                    line,
                    column,
                    message: "empty label".into(),
                }),
            },
        }
    }
}

fn read_label(cur: &mut Cursor) -> Result<Option<String>, ParseError> {
    cur.skip_trivia()?;
    if cur.peek() == Some('\'') {
        let (line, column) = (cur.line, cur.column);
        cur.bump();
        let mut s = String::new();
        loop {
            match cur.bump() {
                Some('\'') if cur.peek() == Some('\'') => {
                    cur.bump();
                    s.push('\'');
                }
                Some('\'') => return Ok(Some(s)),
                Some(c) => s.push(c),
                None => {
                    return Err(ParseError {
                        line,
                        column,
                        message: "unterminated quoted label".into(),
                    })
                }
            }
        }
    }
    let mut s = String::new();
    while let Some(c) = cur.peek() {
        if c.is_whitespace() || DELIMITERS.contains(&c) {
            break;
        }
        s.push(c);
        cur.bump();
    }
    Ok((!s.is_empty()).then_some(s))
}

fn skip_length(cur: &mut Cursor) -> Result<(), ParseError> {
    cur.skip_trivia()?;
    if cur.peek() != Some(':') {
        return Ok(());
    }
    cur.bump();
    cur.skip_trivia()?;
    let mut s = String::new();
    while let Some(c) = cur.peek() {
        if c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E') {
            s.push(c);
            cur.bump();
        } else {
            break;
        }
    }
    if s.parse::<f64>().is_err() {
        return Err(cur.error(format!("invalid branch length '{s}'")));
    }
    Ok(())
}

fn quote(name: &str) -> String {
    let needs = name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || DELIMITERS.contains(&c) || c == '"');
    if needs {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.to_string()
    }
}

/// Deterministic Newick for an unrooted (mul-)tree.
///
/// The top level is the internal neighbor of the leaf with the smallest name,
/// so it is a multifurcation whenever the tree has an internal vertex.
/// Children are ordered by the smallest name in their subtree.
pub fn write_newick(tree: &UnrootedTree, taxa: &TaxonTable) -> String {
    let name = |v: VertexId| taxa.name(tree.label(v).expect("leaf"));
    match tree.num_vertices() {
        1 => return format!("{};", quote(name(0))),
        2 => {
            let mut both = [quote(name(0)), quote(name(1))];
            both.sort();
            return format!("({},{});", both[0], both[1]);
        }
        _ => {}
    }
    let first = tree
        .leaves()
        .min_by(|&a, &b| name(a).cmp(name(b)).then(a.cmp(&b)))
        .unwrap();
    let root = tree.neighbors(first)[0];
    let (s, _) = render(tree, taxa, root, None);
    format!("{s};")
}

fn render<'t>(tree: &UnrootedTree, taxa: &'t TaxonTable, v: VertexId, from: Option<VertexId>) -> (String, &'t str) {
    if let Some(t) = tree.label(v) {
        let n = taxa.name(t);
        return (quote(n), n);
    }
    let mut parts: Vec<(String, &str)> = tree
        .neighbors(v)
        .iter()
        .filter(|&&u| Some(u) != from)
        .map(|&u| render(tree, taxa, u, Some(v)))
        .collect();
    parts.sort_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(&b.0)));
    let min = parts[0].1;
    let body: Vec<_> = parts.into_iter().map(|p| p.0).collect();
    (format!("({})", body.join(",")), min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str, taxa: &mut TaxonTable) -> MulTree {
        parse_single(s, taxa).unwrap()
    }

    #[test]
    fn rooted_top_level_is_unrooted() {
        let mut taxa = TaxonTable::new();
        let a = parse("((a,b),(c,d));", &mut taxa);
        let b = parse("(a,b,(c,d));", &mut taxa);
        assert_eq!(a.tree().num_vertices(), 6);
        assert_eq!(a.tree().splits().unwrap().len(), 1);
        assert!(a.tree().is_isomorphic(b.tree()).unwrap());
    }

    #[test]
    fn duplicate_labels_make_multree() {
        let mut taxa = TaxonTable::new();
        let t = parse("((a,b),(a,c));", &mut taxa);
        assert_eq!(t.multiplicity(taxa.get("a").unwrap()), 2);
        assert!(!t.tree().is_singly_labeled());
    }

    #[test]
    fn lengths_labels_comments_ignored() {
        let mut taxa = TaxonTable::new();
        let a = parse("((a:0.1,b):0.2,(c,d));", &mut taxa);
        let b = parse(" ( ( a , b )x:1e-3 [note], (c:2,d:3.5)y ) root ;\n", &mut taxa);
        assert_eq!(a.tree().splits().unwrap(), b.tree().splits().unwrap());
    }

    #[test]
    fn quoted_labels() {
        let mut taxa = TaxonTable::new();
        let t = parse("('x y',b_c,'it''s');", &mut taxa);
        assert_eq!(t.num_leaves(), 3);
        assert!(taxa.get("x y").is_some());
        assert!(taxa.get("b_c").is_some());
        assert!(taxa.get("it's").is_some());
        let out = write_newick(t.tree(), &taxa);
        assert_eq!(out, "(b_c,'it''s','x y');");
    }

    #[test]
    fn errors_carry_positions() {
        let mut taxa = TaxonTable::new();
        let e = parse_newick("((a,b),(c,d);", &mut taxa).unwrap_err();
        assert!(
            e.message.contains("expected ';'") || e.message.contains("unbalanced"),
            "{e}"
        );
        let e = parse_newick("(a,b,c)", &mut taxa).unwrap_err();
        assert_eq!(e.message, "missing ';'");
        let e = parse_newick("(a,,c);", &mut taxa).unwrap_err();
        assert_eq!((e.line, e.column, e.message.as_str()), (1, 4, "empty label"));
        let e = parse_newick("(a,b);\n(c,(d,e);", &mut taxa).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_newick("();", &mut taxa).unwrap_err();
        assert!(e.message.contains("empty label"), "{e}");
    }

    #[test]
    fn multi_tree_documents() {
        let mut taxa = TaxonTable::new();
        let doc = parse_newick("(a,b,c);\n\n((a,b),(c,d));\n", &mut taxa).unwrap();
        assert_eq!(doc.len(), 2);
        assert_eq!(doc.source_lines, vec![1, 3]);
    }

    #[test]
    fn writer_small_cases() {
        let mut taxa = TaxonTable::new();
        let t = parse("a;", &mut taxa);
        assert_eq!(write_newick(t.tree(), &taxa), "a;");
        let t = parse("(c,(b,a));", &mut taxa);
        assert_eq!(write_newick(t.tree(), &taxa), "(a,b,c);");
        let t = parse("((d,c),(b,a));", &mut taxa);
        assert_eq!(write_newick(t.tree(), &taxa), "(a,b,(c,d));");
        let t = parse("(b,a);", &mut taxa);
        assert_eq!(write_newick(t.tree(), &taxa), "(a,b);");
    }
}
