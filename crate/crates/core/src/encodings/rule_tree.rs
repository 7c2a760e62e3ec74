//! Boolean expression trees used as cellular-automaton local rules, and the
//! genetic-programming operators that vary them.
//!
//! Trees are stored in prefix order, so every subtree is a contiguous slice.
//! Depth counts levels: a lone terminal has depth 1.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use super::GenotypeError;
use crate::sbox::check_width;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Var(u8),
    Not,
    Xor,
    And,
    Or,
    Nand,
    Xnor,
    If,
}

impl Node {
    pub const FUNCTIONS: [Node; 7] = [
        Node::Not,
        Node::Xor,
        Node::And,
        Node::Or,
        Node::Nand,
        Node::Xnor,
        Node::If,
    ];

    pub fn arity(self) -> usize {
        match self {
            Node::Var(_) => 0,
            Node::Not => 1,
            Node::If => 3,
            _ => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Node::Var(_) => "v",
            Node::Not => "NOT",
            Node::Xor => "XOR",
            Node::And => "AND",
            Node::Or => "OR",
            Node::Nand => "NAND",
            Node::Xnor => "XNOR",
            Node::If => "IF",
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Var(j) => write!(f, "v{j}"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpCrossover {
    Simple,
    Uniform,
    SizeFair,
    OnePoint,
    ContextPreserving,
}

impl GpCrossover {
    pub const ALL: [GpCrossover; 5] = [
        Self::Simple,
        Self::Uniform,
        Self::SizeFair,
        Self::OnePoint,
        Self::ContextPreserving,
    ];
}

/// Attempts made by [`RuleTree::crossover`] before falling back to a copy of
/// the first parent.
pub const CROSSOVER_ATTEMPTS: usize = 10;

/// Per-node structural data for a prefix-coded tree.
#[derive(Debug, Clone)]
struct Shape {
    /// One past the last index of the subtree rooted here.
    end: Vec<usize>,
    /// Level of the node, root = 1.
    level: Vec<u32>,
    /// Levels spanned by the subtree rooted here.
    height: Vec<u32>,
}

impl Shape {
    fn of(nodes: &[Node]) -> Self {
        let len = nodes.len();
        let mut shape = Shape {
            end: vec![0; len],
            level: vec![0; len],
            height: vec![0; len],
        };
        shape.walk(nodes, 0, 1);
        shape
    }

    fn walk(&mut self, nodes: &[Node], i: usize, level: u32) -> usize {
        self.level[i] = level;
        let mut next = i + 1;
        let mut height = 0;
        for _ in 0..nodes[i].arity() {
            let child = next;
            next = self.walk(nodes, child, level + 1);
            height = height.max(self.height[child]);
        }
        self.end[i] = next;
        self.height[i] = height + 1;
        next
    }

    fn size(&self, i: usize) -> usize {
        self.end[i] - i
    }

    fn children(&self, nodes: &[Node], i: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(nodes[i].arity());
        let mut next = i + 1;
        for _ in 0..nodes[i].arity() {
            out.push(next);
            next = self.end[next];
        }
        out
    }
}

/// A Boolean function over terminals `v0 .. v(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleTree {
    n: u32,
    nodes: Vec<Node>,
}

impl RuleTree {
    /// Validates arity structure, terminal range and the depth bound `n`.
    pub fn new(n: u32, nodes: Vec<Node>) -> Result<Self, GenotypeError> {
        check_width(n)?;
        let mut open = 1usize;
        for (i, node) in nodes.iter().enumerate() {
            if open == 0 {
                return Err(GenotypeError::Malformed(format!(
                    "trailing nodes after index {i}"
                )));
            }
            if let Node::Var(j) = node {
                if u32::from(*j) >= n {
                    return Err(GenotypeError::Malformed(format!(
                        "terminal v{j} outside v0..v{}",
                        n - 1
                    )));
                }
            }
            open = open - 1 + node.arity();
        }
        if open != 0 || nodes.is_empty() {
            return Err(GenotypeError::Malformed("incomplete tree".into()));
        }
        let depth = Shape::of(&nodes).height[0];
        if depth > n {
            return Err(GenotypeError::DepthExceeded { depth, max: n });
        }
        Ok(Self { n, nodes })
    }

    pub fn var(n: u32, j: u8) -> Result<Self, GenotypeError> {
        Self::new(n, vec![Node::Var(j)])
    }

    /// Parses prefix notation such as `XOR v0 AND v1 v2`.
    pub fn parse(n: u32, text: &str) -> Result<Self, GenotypeError> {
        let nodes = text
            .split_whitespace()
            .map(|tok| {
                let upper = tok.to_ascii_uppercase();
                Ok(match upper.as_str() {
                    "NOT" => Node::Not,
                    "XOR" => Node::Xor,
                    "AND" => Node::And,
                    "OR" => Node::Or,
                    "NAND" => Node::Nand,
                    "XNOR" => Node::Xnor,
                    "IF" => Node::If,
                    _ => {
                        let idx = upper
                            .strip_prefix('V')
                            .and_then(|d| d.parse::<u8>().ok())
                            .ok_or_else(|| GenotypeError::Parse(format!("unknown token `{tok}`")))?;
                        Node::Var(idx)
                    }
                })
            })
            .collect::<Result<Vec<_>, GenotypeError>>()?;
        Self::new(n, nodes)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn depth(&self) -> u32 {
        Shape::of(&self.nodes).height[0]
    }

    /// Evaluates the rule for one assignment; bit `j` of `inputs` binds `vj`.
    pub fn eval(&self, inputs: u32) -> bool {
        fn go(nodes: &[Node], i: usize, inputs: u32) -> (bool, usize) {
            match nodes[i] {
                Node::Var(j) => (inputs >> j & 1 == 1, i + 1),
                Node::Not => {
                    let (a, next) = go(nodes, i + 1, inputs);
                    (!a, next)
                }
                Node::If => {
                    let (c, next) = go(nodes, i + 1, inputs);
                    let (t, next) = go(nodes, next, inputs);
                    let (e, next) = go(nodes, next, inputs);
                    (if c { t } else { e }, next)
                }
                op => {
                    let (a, next) = go(nodes, i + 1, inputs);
                    let (b, next) = go(nodes, next, inputs);
                    let v = match op {
                        Node::Xor => a ^ b,
                        Node::And => a & b,
                        Node::Or => a | b,
                        Node::Nand => !(a & b),
                        Node::Xnor => !(a ^ b),
                        _ => unreachable!(),
                    };
                    (v, next)
                }
            }
        }
        go(&self.nodes, 0, inputs).0
    }

    /// Random tree of at most `max_depth` levels, by the grow or full method.
    pub fn generate<R: Rng + ?Sized>(n: u32, max_depth: u32, full: bool, rng: &mut R) -> Vec<Node> {
        let mut nodes = Vec::new();
        grow_into(&mut nodes, n, max_depth.max(1), full, rng);
        nodes
    }

    /// Ramped half-and-half: depth uniform in `[2, n]`, grow or full with
    /// equal probability. The root is always a function node.
    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<Self, GenotypeError> {
        check_width(n)?;
        let depth = rng.gen_range(2..=n);
        let full = rng.gen_bool(0.5);
        let root = Node::FUNCTIONS[rng.gen_range(0..Node::FUNCTIONS.len())];
        let mut nodes = vec![root];
        for _ in 0..root.arity() {
            grow_into(&mut nodes, n, depth - 1, full, rng);
        }
        Ok(Self { n, nodes })
    }

    /// Subtree mutation: a uniformly chosen node is replaced by a grown tree
    /// that fits in the remaining depth.
    pub fn mutate<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let shape = Shape::of(&self.nodes);
        let i = rng.gen_range(0..self.nodes.len());
        let budget = self.n - shape.level[i] + 1;
        let fresh = Self::generate(self.n, budget, false, rng);
        Self {
            n: self.n,
            nodes: splice(&self.nodes, i, shape.end[i], &fresh),
        }
    }

    /// Applies `op`, redrawing up to [`CROSSOVER_ATTEMPTS`] times when the
    /// offspring is deeper than `n`, then falling back to a copy of `self`.
    pub fn crossover<R: Rng + ?Sized>(&self, other: &Self, op: GpCrossover, rng: &mut R) -> Self {
        assert_eq!(self.n, other.n, "parents differ in width");
        for _ in 0..CROSSOVER_ATTEMPTS {
            let nodes = match op {
                GpCrossover::Simple => simple(&self.nodes, &other.nodes, rng),
                GpCrossover::Uniform => uniform(&self.nodes, &other.nodes, rng),
                GpCrossover::SizeFair => size_fair(&self.nodes, &other.nodes, rng),
                GpCrossover::OnePoint => one_point(&self.nodes, &other.nodes, rng),
                GpCrossover::ContextPreserving => context_preserving(&self.nodes, &other.nodes, rng),
            };
            if Shape::of(&nodes).height[0] <= self.n {
                return Self { n: self.n, nodes };
            }
        }
        self.clone()
    }
}

impl fmt::Display for RuleTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, node) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{node}")?;
        }
        Ok(())
    }
}

fn grow_into<R: Rng + ?Sized>(out: &mut Vec<Node>, n: u32, depth: u32, full: bool, rng: &mut R) {
    let terminals = n as usize;
    let functions = Node::FUNCTIONS.len();
    let node = if depth <= 1 {
        Node::Var(rng.gen_range(0..n) as u8)
    } else if full {
        Node::FUNCTIONS[rng.gen_range(0..functions)]
    } else {
        let k = rng.gen_range(0..functions + terminals);
        if k < functions {
            Node::FUNCTIONS[k]
        } else {
            Node::Var((k - functions) as u8)
        }
    };
    out.push(node);
    for _ in 0..node.arity() {
        grow_into(out, n, depth - 1, full, rng);
    }
}

/// `base` with `base[start..end]` replaced by `donor`.
fn splice(base: &[Node], start: usize, end: usize, donor: &[Node]) -> Vec<Node> {
    let mut out = Vec::with_capacity(base.len() - (end - start) + donor.len());
    out.extend_from_slice(&base[..start]);
    out.extend_from_slice(donor);
    out.extend_from_slice(&base[end..]);
    out
}

/// Subtree crossover with uniformly chosen points in both parents.
pub fn simple<R: Rng + ?Sized>(p1: &[Node], p2: &[Node], rng: &mut R) -> Vec<Node> {
    let (s1, s2) = (Shape::of(p1), Shape::of(p2));
    let i = rng.gen_range(0..p1.len());
    let j = rng.gen_range(0..p2.len());
    splice(p1, i, s1.end[i], &p2[j..s2.end[j]])
}

/// Pairs of nodes in the common region of two trees: starting from the roots,
/// descend while both nodes have the same arity. The flag marks pairs whose
/// arities match (interior of the region).
fn common_region(p1: &[Node], s1: &Shape, p2: &[Node], s2: &Shape) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0usize)];
    while let Some((i, j)) = stack.pop() {
        let same = p1[i].arity() == p2[j].arity();
        out.push((i, j, same));
        if same {
            let pairs: Vec<_> = s1
                .children(p1, i)
                .into_iter()
                .zip(s2.children(p2, j))
                .collect();
            stack.extend(pairs.into_iter().rev());
        }
    }
    out
}

/// One-point crossover: a single point drawn from the common region.
pub fn one_point<R: Rng + ?Sized>(p1: &[Node], p2: &[Node], rng: &mut R) -> Vec<Node> {
    let (s1, s2) = (Shape::of(p1), Shape::of(p2));
    let region = common_region(p1, &s1, p2, &s2);
    let (i, j, _) = region[rng.gen_range(0..region.len())];
    splice(p1, i, s1.end[i], &p2[j..s2.end[j]])
}

/// Uniform crossover over the common region: interior nodes take either
/// parent's label with probability 1/2; on the boundary whole subtrees are
/// taken from either parent.
pub fn uniform<R: Rng + ?Sized>(p1: &[Node], p2: &[Node], rng: &mut R) -> Vec<Node> {
    #[allow(clippy::too_many_arguments)]
    fn build<R: Rng + ?Sized>(
        p1: &[Node],
        s1: &Shape,
        i: usize,
        p2: &[Node],
        s2: &Shape,
        j: usize,
        rng: &mut R,
        out: &mut Vec<Node>,
    ) {
        let take_second = rng.gen_bool(0.5);
        if p1[i].arity() != p2[j].arity() {
            if take_second {
                out.extend_from_slice(&p2[j..s2.end[j]]);
            } else {
                out.extend_from_slice(&p1[i..s1.end[i]]);
            }
            return;
        }
        out.push(if take_second { p2[j] } else { p1[i] });
        for (ci, cj) in s1.children(p1, i).into_iter().zip(s2.children(p2, j)) {
            build(p1, s1, ci, p2, s2, cj, rng, out);
        }
    }
    let (s1, s2) = (Shape::of(p1), Shape::of(p2));
    let mut out = Vec::with_capacity(p1.len().max(p2.len()));
    build(p1, &s1, 0, p2, &s2, 0, rng, &mut out);
    out
}

/// Size-fair crossover: the donated subtree has at most `1 + 2s` nodes, where
/// `s` is the size of the subtree it replaces.
pub fn size_fair<R: Rng + ?Sized>(p1: &[Node], p2: &[Node], rng: &mut R) -> Vec<Node> {
    let (s1, s2) = (Shape::of(p1), Shape::of(p2));
    let i = rng.gen_range(0..p1.len());
    let limit = 1 + 2 * s1.size(i);
    let candidates: Vec<usize> = (0..p2.len()).filter(|&j| s2.size(j) <= limit).collect();
    let j = candidates[rng.gen_range(0..candidates.len())];
    splice(p1, i, s1.end[i], &p2[j..s2.end[j]])
}

fn paths(nodes: &[Node], shape: &Shape) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new(); nodes.len()];
    for i in 0..nodes.len() {
        for (k, c) in shape.children(nodes, i).into_iter().enumerate() {
            let mut p = out[i].clone();
            p.push(k as u8);
            out[c] = p;
        }
    }
    out
}

/// Context-preserving crossover: both points share the same coordinates
/// (path of child indices from the root).
pub fn context_preserving<R: Rng + ?Sized>(p1: &[Node], p2: &[Node], rng: &mut R) -> Vec<Node> {
    let (s1, s2) = (Shape::of(p1), Shape::of(p2));
    let by_path: HashMap<Vec<u8>, usize> = paths(p2, &s2)
        .into_iter()
        .enumerate()
        .map(|(j, p)| (p, j))
        .collect();
    let matches: Vec<(usize, usize)> = paths(p1, &s1)
        .into_iter()
        .enumerate()
        .filter_map(|(i, p)| by_path.get(&p).map(|&j| (i, j)))
        .collect();
    let (i, j) = matches[rng.gen_range(0..matches.len())];
    splice(p1, i, s1.end[i], &p2[j..s2.end[j]])
}
