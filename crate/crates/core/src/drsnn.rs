//! Density-ratio based shared-nearest-neighbor (DRSNN) clustering.
//!
//! The minority class is clustered in four steps:
//!
//! * exact Euclidean k-NN lists ([`knn_lists`]);
//! * a sparse SNN graph with an edge between every mutual k-NN pair,
//!   weighted by the number of shared neighbors ([`snn_graph`]);
//! * an SNN density per point and its ratio to the density of the point's
//!   most similar neighbors ([`snn_density`], [`density_ratio`]);
//! * connected components of core points (ratio at least `drT`), with every
//!   remaining point attached to a core cluster ([`extract_clusters`]).
//!
//! No minority point is ever discarded as noise: Gaussian synthesis later
//! allocates samples over the whole minority set.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::Write;

use ndarray::{Array1, ArrayView2, Axis};

use crate::linalg::{euclidean, squared_euclidean};
use crate::par::map_indices;
use crate::{OhitError, Result};

/// Clusters smaller than this are merged into the nearest cluster.
pub const MIN_CLUSTER_SIZE: usize = 4;
pub const DEFAULT_DRT: f64 = 0.6;
const MIN_DEFAULT_K: usize = 5;

/// Exact k nearest neighbors of every point (self excluded).
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborTable {
    k: usize,
    requested_k: usize,
    neighbors: Vec<Vec<usize>>,
    distances: Vec<Vec<f64>>,
}

impl NeighborTable {
    pub fn k(&self) -> usize {
        self.k
    }

    /// The `k` the caller asked for, before clamping to `n - 1`.
    pub fn requested_k(&self) -> usize {
        self.requested_k
    }

    pub fn was_clamped(&self) -> bool {
        self.k != self.requested_k
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Neighbors of `p`, nearest first.
    pub fn neighbors(&self, p: usize) -> &[usize] {
        &self.neighbors[p]
    }

    pub fn distances(&self, p: usize) -> &[f64] {
        &self.distances[p]
    }

    pub fn contains(&self, p: usize, q: usize) -> bool {
        self.neighbors[p].contains(&q)
    }
}

/// Exact k-NN lists under Euclidean distance, ties broken by lower index.
///
/// `k >= n` is clamped to `n - 1` with a logged warning.
pub fn knn_lists(points: ArrayView2<'_, f64>, k: usize) -> Result<NeighborTable> {
    let n = points.nrows();
    if n < 2 {
        return Err(OhitError::InsufficientData { needed: 2, got: n });
    }
    if k == 0 {
        return Err(OhitError::Parameter("k must be at least 1".into()));
    }
    let eff_k = if k >= n {
        log::warn!("k = {k} is not below n = {n}; clamping to {}", n - 1);
        n - 1
    } else {
        k
    };

    let rows: Vec<(Vec<usize>, Vec<f64>)> = map_indices(n, |p| {
        let here = points.row(p);
        let mut cand: Vec<(f64, usize)> = (0..n)
            .filter(|&q| q != p)
            .map(|q| (squared_euclidean(here, points.row(q)), q))
            .collect();
        let by_dist = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if eff_k < cand.len() {
            cand.select_nth_unstable_by(eff_k - 1, by_dist);
            cand.truncate(eff_k);
        }
        cand.sort_by(by_dist);
        cand.into_iter().map(|(d2, q)| (q, d2.sqrt())).unzip()
    });
    let (neighbors, distances) = rows.into_iter().unzip();
    Ok(NeighborTable {
        k: eff_k,
        requested_k: k,
        neighbors,
        distances,
    })
}

/// Sparse symmetric shared-nearest-neighbor graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnnGraph {
    /// `adjacency[i]` holds `(j, weight)` sorted by `j`.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl SnnGraph {
    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Edge weight, or `None` when `i` and `j` are not mutual neighbors.
    pub fn weight(&self, i: usize, j: usize) -> Option<usize> {
        let adj = &self.adjacency[i];
        adj.binary_search_by_key(&j, |&(q, _)| q)
            .ok()
            .map(|pos| adj[pos].1)
    }

    /// `(neighbor, weight)` pairs of `i`, sorted by neighbor index.
    pub fn edges_of(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    /// Every edge once, as `(i, j, weight)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, adj)| {
            adj.iter()
                .filter(move |&&(j, _)| j > i)
                .map(move |&(j, w)| (i, j, w))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }
}

/// Builds the SNN graph: an edge joins every mutual k-NN pair and carries
/// `|NN(i) ∩ NN(j)|`.
pub fn snn_graph(nt: &NeighborTable) -> SnnGraph {
    let n = nt.len();
    let sorted: Vec<Vec<usize>> = nt
        .neighbors
        .iter()
        .map(|l| {
            let mut s = l.clone();
            s.sort_unstable();
            s
        })
        .collect();

    let adjacency = map_indices(n, |i| {
        let mut adj: Vec<(usize, usize)> = nt.neighbors[i]
            .iter()
            .filter(|&&j| sorted[j].binary_search(&i).is_ok())
            .map(|&j| (j, sorted_intersection(&sorted[i], &sorted[j])))
            .collect();
        adj.sort_unstable();
        adj
    });
    SnnGraph { adjacency }
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// SNN density: the sum of edge weights over each point's k-NN list.
pub fn snn_density(g: &SnnGraph, nt: &NeighborTable) -> Vec<f64> {
    map_indices(nt.len(), |p| {
        nt.neighbors(p)
            .iter()
            .map(|&q| g.weight(p, q).unwrap_or(0) as f64)
            .sum()
    })
}

/// Ratio of each point's density to the mean density of its `kappa`
/// neighbors with the highest SNN weight (ties by lower index).
///
/// A zero denominator yields `0` when the point's own density is zero and
/// `+inf` otherwise.
pub fn density_ratio(
    densities: &[f64],
    g: &SnnGraph,
    nt: &NeighborTable,
    kappa: usize,
) -> Result<Vec<f64>> {
    if kappa == 0 || kappa > nt.k() {
        return Err(OhitError::Parameter(format!(
            "kappa must lie in 1..={}, got {kappa}",
            nt.k()
        )));
    }
    Ok(map_indices(nt.len(), |p| {
        let mut ranked: Vec<(usize, usize)> = nt
            .neighbors(p)
            .iter()
            .map(|&q| (g.weight(p, q).unwrap_or(0), q))
            .collect();
        ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mean = ranked[..kappa]
            .iter()
            .map(|&(_, q)| densities[q])
            .sum::<f64>()
            / kappa as f64;
        if mean > 0.0 {
            densities[p] / mean
        } else if densities[p] > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }))
}

/// Partition of the minority set into modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterLabeling {
    /// Cluster id in `1..=m` per point.
    assignment: Vec<usize>,
    m: usize,
    core_flags: Vec<bool>,
    density_ratios: Vec<f64>,
}

impl ClusterLabeling {
    /// Everything in one cluster.
    pub fn single(n: usize) -> Self {
        Self {
            assignment: vec![1; n],
            m: 1,
            core_flags: vec![false; n],
            density_ratios: vec![f64::NAN; n],
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn num_clusters(&self) -> usize {
        self.m
    }

    pub fn core_flags(&self) -> &[bool] {
        &self.core_flags
    }

    pub fn density_ratios(&self) -> &[f64] {
        &self.density_ratios
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Member indices of cluster `id` (1-based), ascending.
    pub fn members(&self, id: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == id)
            .map(|(i, _)| i)
            .collect()
    }

    /// Sizes of clusters `1..=m`, in id order.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.m];
        for &c in &self.assignment {
            sizes[c - 1] += 1;
        }
        sizes
    }

    /// Writes `point_index, cluster_id, is_core, density_ratio` rows.
    pub fn write_dump<W: Write>(&self, mut w: W, delimiter: char) -> Result<()> {
        writeln!(
            w,
            "point_index{delimiter}cluster_id{delimiter}is_core{delimiter}density_ratio"
        )?;
        for (i, &c) in self.assignment.iter().enumerate() {
            writeln!(
                w,
                "{i}{delimiter}{c}{delimiter}{}{delimiter}{}",
                self.core_flags[i], self.density_ratios[i]
            )?;
        }
        Ok(())
    }
}

/// Relabels raw group keys to contiguous ids `1..=m`, numbered by each
/// group's lowest member index.
fn canonical_labels(raw: &[usize]) -> (Vec<usize>, usize) {
    let mut map = HashMap::new();
    let labels = raw
        .iter()
        .map(|r| {
            let next = map.len() + 1;
            *map.entry(*r).or_insert(next)
        })
        .collect();
    (labels, map.len())
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

fn centroid(points: ArrayView2<'_, f64>, members: &[usize]) -> Array1<f64> {
    points
        .select(Axis(0), members)
        .mean_axis(Axis(0))
        .expect("cluster is non-empty")
}

/// Merges every cluster smaller than `floor` into the cluster with the
/// nearest centroid, smallest clusters first.
fn merge_small_clusters(points: ArrayView2<'_, f64>, labels: &mut [usize], floor: usize) {
    loop {
        let (canon, m) = canonical_labels(labels);
        labels.copy_from_slice(&canon);
        if m <= 1 {
            return;
        }
        let members: Vec<Vec<usize>> = (1..=m)
            .map(|c| (0..labels.len()).filter(|&i| labels[i] == c).collect())
            .collect();
        let Some(small) = (0..m)
            .filter(|&c| members[c].len() < floor)
            .min_by_key(|&c| (members[c].len(), c))
        else {
            return;
        };
        let cents: Vec<Array1<f64>> = members.iter().map(|mm| centroid(points, mm)).collect();
        let target = (0..m)
            .filter(|&c| c != small)
            .map(|c| (euclidean(cents[small].view(), cents[c].view()), c))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, c)| c)
            .expect("m > 1");
        for &i in &members[small] {
            labels[i] = target + 1;
        }
    }
}

/// Core points are those with `ratio >= drt`; SNN-connected cores form
/// clusters, other points join their heaviest core neighbor, and points
/// without any core neighbor join the Euclidean-nearest core point.
/// Clusters below [`MIN_CLUSTER_SIZE`] are then merged away.
///
/// `drt = +inf` leaves no core point, which yields a single cluster.
pub fn extract_clusters(
    points: ArrayView2<'_, f64>,
    g: &SnnGraph,
    ratios: &[f64],
    drt: f64,
) -> Result<ClusterLabeling> {
    extract_clusters_with_floor(points, g, ratios, drt, MIN_CLUSTER_SIZE)
}

pub fn extract_clusters_with_floor(
    points: ArrayView2<'_, f64>,
    g: &SnnGraph,
    ratios: &[f64],
    drt: f64,
    min_cluster_size: usize,
) -> Result<ClusterLabeling> {
    if drt.is_nan() || drt <= 0.0 {
        return Err(OhitError::Parameter(format!(
            "drT must be positive, got {drt}"
        )));
    }
    let n = points.nrows();
    if g.len() != n || ratios.len() != n {
        return Err(OhitError::Contract(format!(
            "{} points, {} graph nodes, {} ratios",
            n,
            g.len(),
            ratios.len()
        )));
    }
    let core: Vec<bool> = ratios
        .iter()
        .map(|&r| drt.is_finite() && r >= drt)
        .collect();
    if !core.iter().any(|&c| c) {
        let mut out = ClusterLabeling::single(n);
        out.density_ratios = ratios.to_vec();
        return Ok(out);
    }

    let mut parent: Vec<usize> = (0..n).collect();
    for (i, j, _) in g.edges() {
        if core[i] && core[j] {
            union(&mut parent, i, j);
        }
    }

    let mut raw: Vec<Option<usize>> = (0..n)
        .map(|i| core[i].then(|| find(&mut parent, i)))
        .collect();

    for p in 0..n {
        if core[p] {
            continue;
        }
        raw[p] = g
            .edges_of(p)
            .iter()
            .filter(|&&(q, _)| core[q])
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|&(q, _)| find(&mut parent, q));
    }

    let core_idx: Vec<usize> = (0..n).filter(|&i| core[i]).collect();
    for (p, slot) in raw.iter_mut().enumerate() {
        if slot.is_some() {
            continue;
        }
        let nearest = core_idx
            .iter()
            .map(|&q| (squared_euclidean(points.row(p), points.row(q)), q))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, q)| q)
            .expect("at least one core point");
        *slot = Some(find(&mut parent, nearest));
    }

    let mut labels: Vec<usize> = raw.into_iter().map(|r| r.expect("all assigned")).collect();
    merge_small_clusters(points, &mut labels, min_cluster_size);
    let (assignment, m) = canonical_labels(&labels);
    Ok(ClusterLabeling {
        assignment,
        m,
        core_flags: core,
        density_ratios: ratios.to_vec(),
    })
}

/// DRSNN parameters. `None` picks the data-dependent default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrsnnParams {
    pub k: Option<usize>,
    pub kappa: Option<usize>,
    pub drt: f64,
    pub min_cluster_size: usize,
}

impl Default for DrsnnParams {
    fn default() -> Self {
        Self {
            k: None,
            kappa: None,
            drt: DEFAULT_DRT,
            min_cluster_size: MIN_CLUSTER_SIZE,
        }
    }
}

/// `ceil(sqrt(n))` clamped to `[5, n - 1]`.
pub fn default_k(n: usize) -> usize {
    let root = (n as f64).sqrt().ceil() as usize;
    root.max(MIN_DEFAULT_K).min(n.saturating_sub(1)).max(1)
}

impl DrsnnParams {
    /// Resolves defaults for `n` points: returns `(k, kappa)` with
    /// `k <= n - 1` and `kappa <= k`.
    pub fn resolve(&self, n: usize) -> Result<(usize, usize)> {
        let k = match self.k {
            Some(0) => return Err(OhitError::Parameter("k must be at least 1".into())),
            Some(k) => k,
            None => default_k(n),
        };
        let kappa = match self.kappa {
            Some(0) => return Err(OhitError::Parameter("kappa must be at least 1".into())),
            Some(kappa) if kappa > k => {
                return Err(OhitError::Parameter(format!(
                    "kappa = {kappa} exceeds k = {k}"
                )))
            }
            Some(kappa) => kappa,
            None => k,
        };
        let eff_k = k.min(n.saturating_sub(1)).max(1);
        Ok((eff_k, kappa.min(eff_k)))
    }
}

/// Clusters the minority matrix. Deterministic for a fixed input.
pub fn drsnn(points: ArrayView2<'_, f64>, params: &DrsnnParams) -> Result<ClusterLabeling> {
    let n = points.nrows();
    if n == 0 {
        return Err(OhitError::EmptyInput);
    }
    if params.drt.is_nan() || params.drt <= 0.0 {
        return Err(OhitError::Parameter(format!(
            "drT must be positive, got {}",
            params.drt
        )));
    }
    let (k, kappa) = params.resolve(n)?;
    if n == 1 {
        return Ok(ClusterLabeling::single(1));
    }
    let nt = knn_lists(points, k)?;
    let g = snn_graph(&nt);
    let dens = snn_density(&g, &nt);
    let ratios = density_ratio(&dens, &g, &nt, kappa)?;
    extract_clusters_with_floor(points, &g, &ratios, params.drt, params.min_cluster_size)
}

/// Adjusted Rand index between two labelings of the same points.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must cover the same points");
    let n = a.len();
    let comb2 = |x: usize| (x * x.saturating_sub(1)) as f64 / 2.0;
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    let mut rows: HashMap<usize, usize> = HashMap::new();
    let mut cols: HashMap<usize, usize> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&c| comb2(c)).sum();
    let sum_a: f64 = rows.values().map(|&c| comb2(c)).sum();
    let sum_b: f64 = cols.values().map(|&c| comb2(c)).sum();
    let expected = sum_a * sum_b / comb2(n);
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        // Both labelings trivial (all-one or all-singleton).
        return if a == b || rows.len() == cols.len() {
            1.0
        } else {
            0.0
        };
    }
    (index - expected) / (max - expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gaussian_blobs;
    use ndarray::{array, Array2};

    #[test]
    fn collinear_knn() {
        let x = array![[0.0], [1.0], [3.0]];
        let nt = knn_lists(x.view(), 1).unwrap();
        assert_eq!(nt.neighbors(0), [1]);
        assert_eq!(nt.neighbors(1), [0]);
        assert_eq!(nt.neighbors(2), [1]);
        assert_eq!(nt.distances(2), [2.0]);
    }

    #[test]
    fn knn_clamps_k() {
        let x = array![[0.0], [1.0], [2.0], [4.0]];
        let nt = knn_lists(x.view(), 5).unwrap();
        assert_eq!(nt.k(), 3);
        assert!(nt.was_clamped());
        for p in 0..4 {
            assert_eq!(nt.neighbors(p).len(), 3);
        }
    }

    #[test]
    fn knn_ties_prefer_lower_index() {
        let x = array![[0.0], [1.0], [-1.0], [2.0]];
        let nt = knn_lists(x.view(), 2).unwrap();
        assert_eq!(nt.neighbors(0), [1, 2]);
        // point 1 is equidistant from 0 and 3.
        assert_eq!(nt.neighbors(1), [0, 3]);
    }

    #[test]
    fn knn_rejects_degenerate() {
        assert!(knn_lists(array![[1.0]].view(), 1).is_err());
        assert!(knn_lists(array![[1.0], [2.0]].view(), 0).is_err());
    }

    #[test]
    fn mutual_edge_rule() {
        // 0 -> 1 and 1 -> 0 are mutual; 2 -> 1 but 1 does not point back.
        let x = array![[0.0], [1.0], [3.0]];
        let nt = knn_lists(x.view(), 1).unwrap();
        let g = snn_graph(&nt);
        assert_eq!(g.weight(0, 1), Some(0));
        assert_eq!(g.weight(1, 2), None);
        assert_eq!(g.weight(2, 1), None);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn clique_density_and_ratio() {
        // k + 1 points spread evenly on a simplex-like set: all mutual.
        let k = 4;
        let x = Array2::from_shape_fn((k + 1, k + 1), |(i, j)| if i == j { 1.0 } else { 0.0 });
        let nt = knn_lists(x.view(), k).unwrap();
        let g = snn_graph(&nt);
        for i in 0..=k {
            for j in 0..=k {
                if i != j {
                    assert_eq!(g.weight(i, j), Some(k - 1));
                }
            }
        }
        let dens = snn_density(&g, &nt);
        assert!(dens.iter().all(|&d| d == (k * (k - 1)) as f64));
        let dr = density_ratio(&dens, &g, &nt, 2).unwrap();
        assert!(dr.iter().all(|&r| r == 1.0));
    }

    #[test]
    fn isolated_point_has_zero_density_and_ratio() {
        let x = array![[0.0], [0.1], [0.2], [10.0]];
        let nt = knn_lists(x.view(), 1).unwrap();
        let g = snn_graph(&nt);
        let dens = snn_density(&g, &nt);
        assert_eq!(dens[3], 0.0);
        let dr = density_ratio(&dens, &g, &nt, 1).unwrap();
        assert_eq!(dr[3], 0.0);
    }

    #[test]
    fn kappa_bounds() {
        let x = array![[0.0], [1.0], [2.0]];
        let nt = knn_lists(x.view(), 2).unwrap();
        let g = snn_graph(&nt);
        let dens = snn_density(&g, &nt);
        assert!(density_ratio(&dens, &g, &nt, 3).is_err());
        assert!(density_ratio(&dens, &g, &nt, 0).is_err());
    }

    #[test]
    fn infinite_threshold_gives_one_cluster() {
        let (x, _) = gaussian_blobs(&[10, 10], 5, 20.0, 1);
        let nt = knn_lists(x.view(), 4).unwrap();
        let g = snn_graph(&nt);
        let dens = snn_density(&g, &nt);
        let dr = density_ratio(&dens, &g, &nt, 4).unwrap();
        let lab = extract_clusters(x.view(), &g, &dr, f64::INFINITY).unwrap();
        assert_eq!(lab.num_clusters(), 1);
        assert!(extract_clusters(x.view(), &g, &dr, 0.0).is_err());
    }

    #[test]
    fn single_point_input() {
        let lab = drsnn(array![[1.0, 2.0]].view(), &DrsnnParams::default()).unwrap();
        assert_eq!(lab.num_clusters(), 1);
        assert_eq!(lab.assignment(), [1]);
    }

    #[test]
    fn tiny_clusters_are_merged() {
        let mut labels = vec![1, 1, 1, 1, 1, 2, 2];
        let x = array![[0.0], [0.1], [0.2], [0.3], [0.4], [5.0], [5.1]];
        merge_small_clusters(x.view(), &mut labels, 4);
        assert!(labels.iter().all(|&l| l == 1));
    }

    #[test]
    fn default_k_rule() {
        assert_eq!(default_k(40), 7);
        assert_eq!(default_k(9), 5);
        assert_eq!(default_k(4), 3);
        assert_eq!(default_k(2), 1);
        assert_eq!(default_k(1000), 32);
    }

    #[test]
    fn params_resolution() {
        let p = DrsnnParams {
            k: Some(5),
            kappa: Some(6),
            ..Default::default()
        };
        assert!(p.resolve(100).is_err());
        let p = DrsnnParams {
            k: Some(10),
            kappa: Some(8),
            ..Default::default()
        };
        assert_eq!(p.resolve(6).unwrap(), (5, 5));
    }

    #[test]
    fn ari_basics() {
        assert_eq!(adjusted_rand_index(&[1, 1, 2, 2], &[5, 5, 3, 3]), 1.0);
        assert!(adjusted_rand_index(&[1, 1, 2, 2], &[1, 2, 1, 2]) < 0.0);
        assert_eq!(adjusted_rand_index(&[1, 1, 1], &[2, 2, 2]), 1.0);
    }

    #[test]
    fn dump_format() {
        let lab = ClusterLabeling::single(2);
        let mut out = Vec::new();
        lab.write_dump(&mut out, ',').unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "point_index,cluster_id,is_core,density_ratio\n0,1,false,NaN\n1,1,false,NaN\n"
        );
    }
}
