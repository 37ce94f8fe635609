//! All β-expansions of a point: expansion trees, the branching compactum
//! coding, uniqueness certificates, and the Thue–Morse apparatus.

mod thue_morse;

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{check_expansion_domain, quasi_greedy, EventuallyPeriodicSeq, Word};
use crate::numeric::{Beta, FieldValue};

pub use thue_morse::{
    estimate_unique_dim, komornik_loreti, komornik_loreti_bracket, thue_morse, tm_word,
    DimEstimate, DIM_LENGTH_CAP, KL_DIGITS_CAP,
};

/// Default cap on the number of nodes in an expansion tree.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// Default number of digits followed without a branch before a tail is
/// treated as unique.
pub const DEFAULT_GAMMA_HORIZON: usize = 256;

/// Digits that can start an expansion of a remainder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DigitOptions {
    pub zero: bool,
    pub one: bool,
}

impl DigitOptions {
    pub fn both(&self) -> bool {
        self.zero && self.one
    }

    pub fn digits(&self) -> impl Iterator<Item = u8> {
        let (z, o) = (self.zero, self.one);
        [(0u8, z), (1u8, o)].into_iter().filter(|p| p.1).map(|p| p.0)
    }

    /// The forced digit, when there is exactly one.
    pub fn forced(&self) -> Option<u8> {
        match (self.zero, self.one) {
            (true, false) => Some(0),
            (false, true) => Some(1),
            _ => None,
        }
    }
}

/// `0` is possible iff `βx <= 1/(β-1)`, `1` iff `x >= 1/β`. Both boundary
/// points are included.
pub fn digit_options(x: &FieldValue) -> Result<DigitOptions> {
    check_expansion_domain(x)?;
    let beta = x.beta();
    let t = x.mul_by_beta();
    Ok(DigitOptions {
        zero: beta.cmp_with_max(&t)? != Ordering::Greater,
        one: t.cmp_int(1)? != Ordering::Less,
    })
}

fn child_remainder(r: &FieldValue, d: u8) -> FieldValue {
    let t = r.mul_by_beta();
    if d == 1 {
        t.add_int(-1)
    } else {
        t
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TreeOptions {
    /// Merge nodes with equal exact remainders at the same depth.
    pub merge: bool,
    pub node_budget: usize,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions {
            merge: false,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub depth: usize,
    /// `x = val(path) + β^{-depth} · remainder`.
    pub remainder: FieldValue,
    /// Both digits are viable here.
    pub branch: bool,
    /// `(digit, child index)`.
    pub children: Vec<(u8, usize)>,
    /// Number of root paths reaching this node.
    pub multiplicity: BigUint,
}

/// All expansion prefixes of a point up to a fixed depth. Node 0 is the
/// root; nodes are stored depth by depth.
#[derive(Clone, Debug)]
pub struct BranchTree {
    pub x: FieldValue,
    pub depth: usize,
    pub merged: bool,
    pub nodes: Vec<TreeNode>,
}

pub fn expand_tree(x: &FieldValue, depth: usize) -> Result<BranchTree> {
    expand_tree_with(x, depth, TreeOptions::default())
}

pub fn expand_tree_with(x: &FieldValue, depth: usize, opts: TreeOptions) -> Result<BranchTree> {
    check_expansion_domain(x)?;
    let mut nodes = vec![TreeNode {
        depth: 0,
        remainder: x.clone(),
        branch: false,
        children: Vec::new(),
        multiplicity: BigUint::one(),
    }];
    let mut layer = vec![0usize];
    for level in 0..depth {
        let mut next = Vec::new();
        let mut index: HashMap<FieldValue, usize> = HashMap::new();
        for &id in &layer {
            let opts_here = digit_options(&nodes[id].remainder)?;
            nodes[id].branch = opts_here.both();
            for d in opts_here.digits() {
                let r = child_remainder(&nodes[id].remainder, d);
                let mult = nodes[id].multiplicity.clone();
                let existing = if opts.merge && r.is_exact() { index.get(&r).copied() } else { None };
                let child = match existing {
                    Some(c) => {
                        nodes[c].multiplicity += mult;
                        c
                    }
                    None => {
                        if nodes.len() >= opts.node_budget {
                            return Err(Error::NodeBudgetExceeded(opts.node_budget));
                        }
                        let c = nodes.len();
                        if opts.merge && r.is_exact() {
                            index.insert(r.clone(), c);
                        }
                        nodes.push(TreeNode {
                            depth: level + 1,
                            remainder: r,
                            branch: false,
                            children: Vec::new(),
                            multiplicity: mult,
                        });
                        next.push(c);
                        c
                    }
                };
                nodes[id].children.push((d, child));
            }
        }
        layer = next;
    }
    for &id in &layer {
        nodes[id].branch = digit_options(&nodes[id].remainder)?.both();
    }
    Ok(BranchTree {
        x: x.clone(),
        depth,
        merged: opts.merge,
        nodes,
    })
}

impl BranchTree {
    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(move |n| n.depth == self.depth)
    }

    /// Number of distinct depth-`n` prefixes.
    pub fn path_count(&self) -> BigUint {
        self.leaves().map(|n| n.multiplicity.clone()).sum()
    }

    /// Branch nodes strictly above the leaves.
    pub fn branch_nodes(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.branch && n.depth < self.depth)
            .count()
    }

    /// All depth-`n` prefixes, in lexicographic order.
    pub fn paths(&self) -> Vec<Word> {
        let mut out = Vec::new();
        let mut stack = vec![(0usize, Word::new())];
        while let Some((id, w)) = stack.pop() {
            let node = &self.nodes[id];
            if node.depth == self.depth {
                out.push(w);
                continue;
            }
            for &(d, c) in node.children.iter().rev() {
                let mut w2 = w.clone();
                w2.push(d);
                stack.push((c, w2));
            }
        }
        out
    }

    /// JSON rendering: nodes with decimal remainders, digit edges and
    /// branch flags.
    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| {
                serde_json::json!({
                    "id": id,
                    "depth": n.depth,
                    "remainder": n.remainder.to_decimal(20),
                    "branch": n.branch,
                    "paths": n.multiplicity.to_string(),
                })
            })
            .collect();
        let edges: Vec<_> = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(id, n)| {
                n.children
                    .iter()
                    .map(move |&(d, c)| serde_json::json!({"from": id, "to": c, "digit": d}))
            })
            .collect();
        serde_json::json!({
            "beta": self.x.beta().to_string(),
            "x": self.x.to_decimal(20),
            "depth": self.depth,
            "merged": self.merged,
            "path_count": self.path_count().to_string(),
            "nodes": nodes,
            "edges": edges,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph expansions {\n  node [shape=circle];\n");
        for (id, n) in self.nodes.iter().enumerate() {
            let shape = if n.branch { ", shape=doublecircle" } else { "" };
            s.push_str(&format!(
                "  n{id} [label=\"{}\"{shape}];\n",
                n.remainder.to_decimal(4)
            ));
        }
        for (id, n) in self.nodes.iter().enumerate() {
            for &(d, c) in &n.children {
                s.push_str(&format!("  n{id} -> n{c} [label=\"{d}\"];\n"));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Number of distinct expansion prefixes of length `depth`, merging equal
/// exact remainders level by level.
pub fn count_expansions(x: &FieldValue, depth: usize) -> Result<BigUint> {
    count_expansions_with(x, depth, DEFAULT_NODE_BUDGET)
}

pub fn count_expansions_with(x: &FieldValue, depth: usize, node_budget: usize) -> Result<BigUint> {
    check_expansion_domain(x)?;
    let mut layer: Vec<(FieldValue, BigUint)> = vec![(x.clone(), BigUint::one())];
    let mut total = 1usize;
    for _ in 0..depth {
        let mut next: Vec<(FieldValue, BigUint)> = Vec::new();
        let mut index: HashMap<FieldValue, usize> = HashMap::new();
        for (r, m) in &layer {
            for d in digit_options(r)?.digits() {
                let c = child_remainder(r, d);
                let existing = if c.is_exact() { index.get(&c).copied() } else { None };
                match existing {
                    Some(i) => next[i].1 += m,
                    None => {
                        if c.is_exact() {
                            index.insert(c.clone(), next.len());
                        }
                        next.push((c, m.clone()));
                    }
                }
            }
        }
        total += next.len();
        if total > node_budget {
            return Err(Error::NodeBudgetExceeded(node_budget));
        }
        layer = next;
    }
    Ok(layer.into_iter().map(|(_, m)| m).fold(BigUint::zero(), |a, b| a + b))
}

/// Counts branch nodes in the expansion tree of `x` above `depth`, stopping
/// as soon as `limit` are found.
pub fn count_branch_nodes(x: &FieldValue, depth: usize, limit: usize) -> Result<usize> {
    check_expansion_domain(x)?;
    let mut found = 0;
    let mut stack = vec![(x.clone(), 0usize)];
    while let Some((r, k)) = stack.pop() {
        if k == depth {
            continue;
        }
        let opts = digit_options(&r)?;
        if opts.both() {
            found += 1;
            if found >= limit {
                return Ok(found);
            }
        }
        for d in opts.digits() {
            stack.push((child_remainder(&r, d), k + 1));
        }
    }
    Ok(found)
}

/// How a Γ-prefix ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaTail {
    /// The requested number of choices was made.
    Open,
    /// The remaining expansion is unique (remainder cycle, zero or the
    /// maximal point), so the word is padded with `𝟎`.
    Unique,
    /// No branch within the digit horizon; padded with `𝟎` as if unique.
    Unresolved,
}

/// One prefix of the branching compactum, with the expansion prefix that
/// realizes it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaPrefix {
    /// Choice symbols: `1` for the lower branch (digit 0), `0` for the
    /// upper branch (digit 1).
    pub gamma: Word,
    /// Expansion digits up to and including the last choice made.
    pub path: Word,
    /// Depths of the branch points passed.
    pub branch_depths: Vec<usize>,
    pub tail: GammaTail,
}

enum Segment {
    Branch { r: FieldValue, forced: Word },
    Ends { forced: Word, tail: GammaTail },
}

/// Follows forced digits from `r` until a branch point, a certified unique
/// tail, or the horizon.
fn follow_forced(r: &FieldValue, horizon: usize) -> Result<Segment> {
    let mut r = r.clone();
    let mut forced = Word::new();
    let mut seen: HashSet<FieldValue> = HashSet::new();
    let exact = r.beta().is_algebraic();
    for _ in 0..horizon {
        if exact && !seen.insert(r.clone()) {
            return Ok(Segment::Ends { forced, tail: GammaTail::Unique });
        }
        let opts = digit_options(&r)?;
        match opts.forced() {
            None => return Ok(Segment::Branch { r, forced }),
            Some(d) => {
                forced.push(d);
                r = child_remainder(&r, d);
            }
        }
    }
    Ok(Segment::Ends { forced, tail: GammaTail::Unresolved })
}

/// The Γ-coding of all expansions of `x` to `gamma_depth` choices: at each
/// branch point the lower branch is coded `𝟏` and the upper one `𝟎`; a tail
/// without further branching is padded with `𝟎`. Sorted by Γ-word.
pub fn branching_compactum_prefix(
    x: &FieldValue,
    gamma_depth: usize,
    horizon: usize,
) -> Result<Vec<GammaPrefix>> {
    check_expansion_domain(x)?;
    let mut out = Vec::new();
    let mut stack = vec![(x.clone(), Word::new(), Word::new(), Vec::new())];
    while let Some((r, gamma, path, depths)) = stack.pop() {
        if gamma.len() == gamma_depth {
            out.push(GammaPrefix { gamma, path, branch_depths: depths, tail: GammaTail::Open });
            continue;
        }
        match follow_forced(&r, horizon)? {
            Segment::Ends { forced, tail } => {
                let pad = gamma_depth - gamma.len();
                out.push(GammaPrefix {
                    gamma: gamma.concat(&Word::zeros(pad)),
                    path: path.concat(&forced),
                    branch_depths: depths,
                    tail,
                });
            }
            Segment::Branch { r, forced } => {
                let at = path.len() + forced.len();
                for (d, symbol) in [(0u8, 1u8), (1, 0)] {
                    let mut g = gamma.clone();
                    g.push(symbol);
                    let mut p = path.concat(&forced);
                    p.push(d);
                    let mut ds = depths.clone();
                    ds.push(at);
                    stack.push((child_remainder(&r, d), g, p, ds));
                }
            }
        }
    }
    out.sort_by(|a, b| a.gamma.cmp(&b.gamma).then_with(|| a.path.cmp(&b.path)));
    Ok(out)
}

/// Whether every Γ-prefix of length `gamma_depth` is realized.
pub fn is_full_branching(x: &FieldValue, gamma_depth: usize, horizon: usize) -> Result<bool> {
    let prefixes = branching_compactum_prefix(x, gamma_depth, horizon)?;
    let distinct: HashSet<&Word> = prefixes.iter().map(|p| &p.gamma).collect();
    Ok(distinct.len() == 1usize << gamma_depth)
}

/// Outcome of [`is_unique_expansion`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum UniquenessVerdict {
    /// The single path reaches a cycle of exact remainders.
    UniqueCertified { expansion: EventuallyPeriodicSeq },
    /// A node with two digit options; `witness` is the path to it.
    Branches { depth: usize, witness: Word },
    Undetermined { horizon: usize },
}

impl fmt::Display for UniquenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniquenessVerdict::UniqueCertified { expansion } => {
                write!(f, "UNIQUE_CERTIFIED expansion={expansion}")
            }
            UniquenessVerdict::Branches { depth, witness } => {
                write!(f, "BRANCHES depth={depth} witness={witness}")
            }
            UniquenessVerdict::Undetermined { horizon } => write!(f, "UNDETERMINED horizon={horizon}"),
        }
    }
}

/// Follows the expansion tree of `x ∈ (0, 1/(β-1))` while it has a single
/// path. Uniqueness is certified only for algebraic bases, by an exact
/// remainder cycle.
pub fn is_unique_expansion(x: &FieldValue, horizon: usize) -> Result<UniquenessVerdict> {
    check_expansion_domain(x)?;
    let beta = x.beta();
    if x.sign_checked()? != Ordering::Greater || beta.cmp_with_max(x)? != Ordering::Less {
        return Err(Error::OutOfDomain("uniqueness is tested on (0, 1/(β-1))".into()));
    }
    let exact = beta.is_algebraic();
    let mut seen: HashMap<FieldValue, usize> = HashMap::new();
    let mut r = x.clone();
    let mut path = Word::new();
    for k in 0..horizon {
        if exact {
            if let Some(&j) = seen.get(&r) {
                let seq = EventuallyPeriodicSeq::new(path.prefix(j), path.slice(j..k))
                    .expect("nonempty period");
                return Ok(UniquenessVerdict::UniqueCertified { expansion: seq });
            }
            seen.insert(r.clone(), k);
        }
        let opts = digit_options(&r)?;
        match opts.forced() {
            None => return Ok(UniquenessVerdict::Branches { depth: k, witness: path }),
            Some(d) => {
                path.push(d);
                r = child_remainder(&r, d);
            }
        }
    }
    Ok(UniquenessVerdict::Undetermined { horizon })
}

/// Membership of an eventually periodic sequence in the two-sided
/// lexicographic set: every shift lies strictly between the inverted and
/// the plain quasi-greedy expansion of one. Exact when that expansion has a
/// known periodic form; otherwise decided on its certified prefix.
pub fn in_u_beta(seq: &EventuallyPeriodicSeq, beta: &Beta) -> Result<bool> {
    let q = quasi_greedy(beta);
    if let Some(a) = q.exact() {
        let abar = a.complement();
        return Ok((0..seq.orbit_len()).all(|k| {
            let s = seq.shift(k);
            abar.lex_cmp(&s) == Ordering::Less && s.lex_cmp(a) == Ordering::Less
        }));
    }
    let horizon = q.certified_len();
    if horizon == 0 {
        return Err(Error::QuasiGreedyUnavailable);
    }
    let a = q.prefix(horizon).expect("certified digits");
    let abar = a.complement();
    for k in 0..seq.orbit_len() {
        let s = seq.shift(k).prefix(horizon);
        match (abar.cmp(&s), s.cmp(&a)) {
            (Ordering::Less, Ordering::Less) => {}
            (Ordering::Equal, _) | (_, Ordering::Equal) => {
                return Err(Error::UndeterminedWithinHorizon(horizon))
            }
            _ => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
