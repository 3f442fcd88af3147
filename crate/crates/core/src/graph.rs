//! The x-type graph of an HG-matrix: pair edges `{2t, 2t+1}` plus x-edges
//! joining each column `g` to the column holding `g + x`. Every node has
//! degree two, so the graph splits into alternating cycles.

use std::fmt::Write as _;

use log::trace;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Vec, HgMatrix};

fn check_shift(g: &HgMatrix, x: Gf2Vec) -> Result<u32> {
    if x.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: x.dim(),
        });
    }
    if x.is_zero() {
        return Err(Error::ZeroShift);
    }
    Ok(x.bits())
}

#[inline]
pub(crate) fn x_partner(g: &HgMatrix, x: u32, i: usize) -> usize {
    g.index_of(g.raw(i) ^ x)
}

#[derive(Clone, Debug)]
pub struct XTypeGraph {
    shift: Gf2Vec,
    partner: Vec<usize>,
}

pub fn build_xtype_graph(g: &HgMatrix, x: Gf2Vec) -> Result<XTypeGraph> {
    let xb = check_shift(g, x)?;
    let partner = (0..g.len()).map(|i| x_partner(g, xb, i)).collect();
    Ok(XTypeGraph { shift: x, partner })
}

impl XTypeGraph {
    pub fn shift(&self) -> Gf2Vec {
        self.shift
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn x_partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    pub fn pair_partner(&self, i: usize) -> usize {
        i ^ 1
    }

    /// Always 2: one pair edge and one x-edge, parallel when they coincide.
    pub fn degree(&self, i: usize) -> usize {
        [self.pair_partner(i), self.x_partner(i)]
            .iter()
            .filter(|&&j| j != i)
            .count()
    }
}

/// Nodes in traversal order `c0 -p- c1 -x- c2 -p- c3 ... -x- c0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub nodes: Vec<usize>,
}

impl Cycle {
    /// Pair indices in traversal order.
    pub fn pairs(&self) -> Vec<usize> {
        self.nodes.iter().step_by(2).map(|&i| i / 2).collect()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePartition {
    pub cycles: Vec<Cycle>,
    /// Cycle id of every pair.
    pub membership: Vec<usize>,
}

impl CyclePartition {
    /// One line per cycle listing its pair indices in traversal order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for c in &self.cycles {
            let p: Vec<String> = c.pairs().iter().map(|t| t.to_string()).collect();
            let _ = writeln!(out, "{}", p.join(" "));
        }
        out
    }

    pub fn same_cycle(&self, a: usize, b: usize) -> bool {
        self.membership[a] == self.membership[b]
    }
}

/// Start at the lowest unvisited column, take the pair edge first.
pub fn cycle_partition(graph: &XTypeGraph) -> CyclePartition {
    let n = graph.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    let mut membership = vec![usize::MAX; n / 2];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let id = cycles.len();
        let mut nodes = Vec::new();
        let mut cur = start;
        loop {
            let p = cur ^ 1;
            seen[cur] = true;
            seen[p] = true;
            membership[cur / 2] = id;
            nodes.push(cur);
            nodes.push(p);
            cur = graph.x_partner(p);
            if cur == start {
                break;
            }
        }
        cycles.push(Cycle { nodes });
    }
    CyclePartition { cycles, membership }
}

/// A path whose first and last edges are x-edges, alternating in between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPath {
    pub nodes: Vec<usize>,
    pub shift: Gf2Vec,
}

impl GoodPath {
    /// Number of edges.
    pub fn edges(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn first(&self) -> usize {
        self.nodes[0]
    }

    pub fn last(&self) -> usize {
        self.nodes[self.nodes.len() - 1]
    }

    /// Edge distance between two nodes of the path.
    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        let ia = self.nodes.iter().position(|&i| i == a)?;
        let ib = self.nodes.iter().position(|&i| i == b)?;
        Some(ia.abs_diff(ib))
    }

    pub fn validate(&self, g: &HgMatrix) -> Result<()> {
        let x = check_shift(g, self.shift)?;
        validate_nodes(g, x, &self.nodes)
    }
}

fn validate_nodes(g: &HgMatrix, x: u32, nodes: &[usize]) -> Result<()> {
    let bad = |why: &str| Err(Error::InvalidPath(why.to_string()));
    if nodes.len() < 2 || !nodes.len().is_multiple_of(2) {
        return bad("node count must be even and at least 2");
    }
    let mut seen = vec![false; g.len()];
    for &i in nodes {
        if i >= g.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: g.len(),
            });
        }
        if std::mem::replace(&mut seen[i], true) {
            return bad("repeated node");
        }
    }
    for (k, w) in nodes.windows(2).enumerate() {
        if k % 2 == 0 {
            if g.raw(w[0]) ^ g.raw(w[1]) != x {
                return bad("expected an x-edge");
            }
        } else if w[1] != w[0] ^ 1 {
            return bad("expected a pair edge");
        }
    }
    Ok(())
}

/// Nodes of the cycle through pair `t` with the pair edge removed, from
/// `2t` to `2t+1`.
pub(crate) fn pair_path(g: &HgMatrix, x: u32, t: usize) -> Vec<usize> {
    let (a, b) = (2 * t, 2 * t + 1);
    let mut nodes = vec![a];
    let mut cur = a;
    loop {
        let nx = x_partner(g, x, cur);
        nodes.push(nx);
        if nx == b {
            return nodes;
        }
        cur = nx ^ 1;
        nodes.push(cur);
    }
}

pub fn good_path_between_pair(g: &HgMatrix, x: Gf2Vec, t: usize) -> Result<GoodPath> {
    let xb = check_shift(g, x)?;
    if t >= g.pairs() {
        return Err(Error::IndexOutOfRange {
            index: t,
            len: g.pairs(),
        });
    }
    Ok(GoodPath {
        nodes: pair_path(g, xb, t),
        shift: x,
    })
}

/// Add `x` to every column on the path. Consecutive x-edges `(s_{2i},
/// s_{2i+1})` hold vectors differing by `x`, so this swaps them.
pub(crate) fn reorder(g: &mut HgMatrix, x: u32, nodes: &[usize]) {
    debug_assert!(validate_nodes(g, x, nodes).is_ok());
    trace!(
        "F_x x={:#b} from {} to {} ({} nodes)",
        x,
        nodes[0],
        nodes[nodes.len() - 1],
        nodes.len()
    );
    for w in nodes.chunks(2) {
        g.swap(w[0], w[1]);
    }
}

pub fn apply_reordering(mut g: HgMatrix, path: &GoodPath) -> Result<HgMatrix> {
    path.validate(&g)?;
    reorder(&mut g, path.shift.bits(), &path.nodes);
    Ok(g)
}

/// Position in the pair path of the pair-`m` node nearest `2t+1`, as
/// `(column, index into path)`. Ties cannot happen but go to `2m+1`.
fn nearest_in_path(path: &[usize], m: usize) -> Option<(usize, usize)> {
    let last = path.len() - 1;
    let i0 = path.iter().position(|&i| i == 2 * m)?;
    let i1 = path.iter().position(|&i| i == 2 * m + 1)?;
    let (d0, d1) = (last - i0, last - i1);
    Some(if d0 < d1 {
        (2 * m, i0)
    } else {
        (2 * m + 1, i1)
    })
}

pub(crate) fn short_path_raw(g: &HgMatrix, x: u32, t: usize, m: usize) -> Result<Vec<usize>> {
    let path = pair_path(g, x, t);
    let (_, idx) = nearest_in_path(&path, m)
        .filter(|_| m != t)
        .ok_or_else(|| Error::Precondition(format!("pairs {t} and {m} do not share a cycle")))?;
    Ok(path[idx..].iter().rev().copied().collect())
}

/// The column `j ∈ {2m, 2m+1}` closer to `2t+1` along `P_x(g_{2t}, g_{2t+1})`.
pub fn find_short_path(g: &HgMatrix, x: Gf2Vec, t: usize, m: usize) -> Result<usize> {
    let xb = check_shift(g, x)?;
    if t >= g.pairs() || m >= g.pairs() {
        return Err(Error::IndexOutOfRange {
            index: t.max(m),
            len: g.pairs(),
        });
    }
    let path = pair_path(g, xb, t);
    nearest_in_path(&path, m)
        .filter(|_| m != t)
        .map(|(j, _)| j)
        .ok_or_else(|| Error::Precondition(format!("pairs {t} and {m} do not share a cycle")))
}

/// The good-path `P_x(g_{2t+1}, g_j)`: the tail of the pair path of `t`
/// reversed, starting at `2t+1` and ending at the pair-`m` column `j`.
pub fn short_subpath(g: &HgMatrix, x: Gf2Vec, t: usize, m: usize) -> Result<GoodPath> {
    let xb = check_shift(g, x)?;
    Ok(GoodPath {
        nodes: short_path_raw(g, xb, t, m)?,
        shift: x,
    })
}

/// Apply `F_x(g_{2t+1}, g_j)` for the `j` chosen by [`find_short_path`].
pub(crate) fn shift_pair_sums(g: &mut HgMatrix, x: u32, t: usize, m: usize) -> Result<()> {
    let nodes = short_path_raw(g, x, t, m)?;
    reorder(g, x, &nodes);
    Ok(())
}

/// Apply `F_x(g_{2t}, g_{2t+1})`; leaves every pair sum unchanged.
pub(crate) fn reorder_pair(g: &mut HgMatrix, x: u32, t: usize) {
    let nodes = pair_path(g, x, t);
    reorder(g, x, &nodes);
}
