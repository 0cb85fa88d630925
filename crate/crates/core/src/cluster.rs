//! Correlation distances and complete-linkage clustering.

use nalgebra::DMatrix;

use crate::corpus::ExchangeTotals;
use crate::error::{CitexError, Result};
use crate::linalg::pearson;

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    pub d: DMatrix<f64>,
}

/// `d_ij = 1 - rho_ij`, with `rho` the Pearson correlation of full rows
/// `i` and `j` of the exchange totals (diagonal entries included).
pub fn correlation_distance(t: &ExchangeTotals, labels: &[String]) -> Result<DistanceMatrix> {
    let m = &t.totals;
    let n = m.nrows();
    if labels.len() != n {
        return Err(CitexError::InvalidArgument(format!("{} labels for {n} journals", labels.len())));
    }
    let rows: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).iter().copied().collect()).collect();
    for (i, r) in rows.iter().enumerate() {
        if r.iter().all(|x| *x == r[0]) {
            return Err(CitexError::ConstantRow { journal: labels[i].clone() });
        }
    }
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let rho = pearson(&rows[i], &rows[j]).expect("rows are non-constant");
            let v = (1.0 - rho).clamp(0.0, 2.0);
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    Ok(DistanceMatrix { labels: labels.to_vec(), d })
}

/// Node ids: `0..n` are leaves, `n + k` is the cluster formed by merge `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub labels: Vec<String>,
    pub merges: Vec<Merge>,
    pub leaf_order: Vec<usize>,
}

impl Dendrogram {
    pub fn n_leaves(&self) -> usize {
        self.labels.len()
    }

    /// Leaves under node `id`, sorted.
    pub fn members(&self, id: usize) -> Vec<usize> {
        let n = self.n_leaves();
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(v) = stack.pop() {
            if v < n {
                out.push(v);
            } else {
                let m = &self.merges[v - n];
                stack.push(m.left);
                stack.push(m.right);
            }
        }
        out.sort_unstable();
        out
    }
}

struct Active {
    id: usize,
    rep: usize,
    size: usize,
}

/// Naive O(n³) agglomeration with the complete-linkage update
/// `d(a ∪ b, k) = max(d(a, k), d(b, k))`. Ties are broken by the smallest
/// pair of minimum leaf indices.
pub fn complete_linkage(dist: &DistanceMatrix) -> Dendrogram {
    let n = dist.d.nrows();
    let mut d = dist.d.clone();
    let mut active: Vec<Active> = (0..n).map(|i| Active { id: i, rep: i, size: 1 }).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    // `slot[k]` indexes rows of `d`; merged clusters reuse the lower slot.
    let mut slot: Vec<usize> = (0..n).collect();
    while active.len() > 1 {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for a in 0..active.len() {
            for b in (a + 1)..active.len() {
                let h = d[(slot[a], slot[b])];
                let key = {
                    let (x, y) = (active[a].rep, active[b].rep);
                    (x.min(y), x.max(y))
                };
                let better = match &best {
                    None => true,
                    Some((bh, bkey, _, _)) => h < *bh || (h == *bh && key < *bkey),
                };
                if better {
                    best = Some((h, key, a, b));
                }
            }
        }
        let (h, _, a, b) = best.expect("at least two clusters");
        let (sa, sb) = (slot[a], slot[b]);
        for k in 0..active.len() {
            if k != a && k != b {
                let v = d[(sa, slot[k])].max(d[(sb, slot[k])]);
                d[(sa, slot[k])] = v;
                d[(slot[k], sa)] = v;
            }
        }
        let (ca, cb) = (&active[a], &active[b]);
        let (left, right) = if ca.rep < cb.rep { (ca.id, cb.id) } else { (cb.id, ca.id) };
        let size = ca.size + cb.size;
        let rep = ca.rep.min(cb.rep);
        merges.push(Merge { left, right, height: h, size });
        active[a] = Active { id: n + merges.len() - 1, rep, size };
        active.remove(b);
        slot.remove(b);
    }
    let mut dend = Dendrogram {
        labels: dist.labels.clone(),
        merges,
        leaf_order: Vec::new(),
    };
    dend.leaf_order = match n {
        0 => Vec::new(),
        _ => traverse(&dend, 2 * n - 2),
    };
    dend
}

fn traverse(dend: &Dendrogram, root: usize) -> Vec<usize> {
    let n = dend.n_leaves();
    let mut out = Vec::with_capacity(n);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        if v < n {
            out.push(v);
        } else {
            let m = &dend.merges[v - n];
            stack.push(m.right);
            stack.push(m.left);
        }
    }
    out
}

/// Clusters formed by merges strictly below `h`, ordered by smallest member.
pub fn cut(dend: &Dendrogram, h: f64) -> Vec<Vec<usize>> {
    let n = dend.n_leaves();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut node_leaf: Vec<usize> = (0..n).collect();
    for m in &dend.merges {
        let (l, r) = (node_leaf[m.left], node_leaf[m.right]);
        node_leaf.push(l.min(r));
        if m.height < h {
            let (a, b) = (find(&mut parent, l), find(&mut parent, r));
            let (lo, hi) = (a.min(b), a.max(b));
            parent[hi] = lo;
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of_root = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index_of_root[r] == usize::MAX {
            index_of_root[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of_root[r]].push(i);
    }
    groups
}
