//! Modularity scoring and Louvain community detection.
//!
//! Directed graphs are symmetrized (reciprocal weights summed) before
//! scoring or optimizing, so everything here works on an undirected weighted
//! view of the graph.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, NodeId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CommunityError {
    #[error("modularity is undefined for a graph without edges")]
    UndefinedModularity,
    #[error("node `{0}` has no community assignment")]
    Unassigned(NodeId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition<F> {
    /// Node to community id; ids are dense from 0.
    pub assignment: BTreeMap<NodeId, usize>,
    pub community_count: usize,
    pub modularity: F,
}

impl<F> Partition<F> {
    /// Members of each community, indexed by community id.
    pub fn communities(&self) -> Vec<Vec<&NodeId>> {
        let mut out = vec![Vec::new(); self.community_count];
        for (node, &c) in &self.assignment {
            out[c].push(node);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LouvainParams<F> {
    pub resolution: F,
    pub seed: u64,
    /// Smallest modularity increase that counts as an improving move.
    pub min_gain: F,
    /// Maximum number of aggregation levels.
    pub max_passes: usize,
    /// Independent runs drawn from the same seeded stream; the best one wins.
    pub restarts: usize,
}

impl<F: Scalar> Default for LouvainParams<F> {
    fn default() -> Self {
        LouvainParams { resolution: F::one(), seed: 42, min_gain: F::lit(1e-7), max_passes: 50, restarts: 4 }
    }
}

/// Largest graph (in nodes) that gets Kernighan-Lin refinement; a pass costs
/// `O(n * (n + m))`.
pub const KL_REFINE_LIMIT: usize = 500;

/// Undirected weighted graph over dense indices. Self-loop weight `w` at a
/// node contributes `2w` to its degree.
#[derive(Debug, Clone)]
struct WeightedAdjacency<F> {
    neighbors: Vec<Vec<(usize, F)>>,
    self_loops: Vec<F>,
    degrees: Vec<F>,
    /// Sum of degrees, i.e. twice the total edge weight.
    two_m: F,
}

impl<F: Scalar> WeightedAdjacency<F> {
    fn from_graph(g: &Graph, index: &BTreeMap<&NodeId, usize>) -> Self {
        let n = index.len();
        let mut pairs: Vec<BTreeMap<usize, F>> = vec![BTreeMap::new(); n];
        for (s, t, e) in g.edges() {
            let (a, b) = (index[s], index[t]);
            let w = F::from_count(e.weight);
            for (x, y) in [(a, b), (b, a)] {
                let slot = pairs[x].entry(y).or_insert_with(F::zero);
                *slot = *slot + w;
            }
        }
        let neighbors = pairs.into_iter().map(|m| m.into_iter().collect()).collect();
        Self::from_parts(neighbors, vec![F::zero(); n])
    }

    fn from_parts(neighbors: Vec<Vec<(usize, F)>>, self_loops: Vec<F>) -> Self {
        let degrees: Vec<F> = neighbors
            .iter()
            .zip(&self_loops)
            .map(|(adj, &s)| adj.iter().map(|&(_, w)| w).sum::<F>() + s + s)
            .collect();
        let two_m = degrees.iter().copied().sum();
        WeightedAdjacency { neighbors, self_loops, degrees, two_m }
    }

    fn len(&self) -> usize {
        self.neighbors.len()
    }

    /// Modularity of a community assignment over this graph's indices.
    fn modularity(&self, community: &[usize], resolution: F) -> F {
        let count = community.iter().copied().max().map_or(0, |c| c + 1);
        let mut internal = vec![F::zero(); count];
        let mut total = vec![F::zero(); count];
        for i in 0..self.len() {
            let c = community[i];
            total[c] = total[c] + self.degrees[i];
            internal[c] = internal[c] + self.self_loops[i] + self.self_loops[i];
            for &(j, w) in &self.neighbors[i] {
                if community[j] == c {
                    internal[c] = internal[c] + w;
                }
            }
        }
        internal
            .iter()
            .zip(&total)
            .map(|(&inside, &tot)| {
                let frac = tot / self.two_m;
                inside / self.two_m - resolution * frac * frac
            })
            .sum()
    }

    /// Local moving phase starting from `initial` (dense ids). Returns the
    /// renumbered community of each node and whether any node moved.
    ///
    /// Candidates are the communities of a node's neighbours plus one empty
    /// community, so a node can also leave its community to stand alone.
    fn local_moves(&self, initial: Vec<usize>, params: &LouvainParams<F>, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut community = initial;
        let mut totals = vec![F::zero(); n];
        let mut sizes = vec![0usize; n];
        for (i, &c) in community.iter().enumerate() {
            totals[c] = totals[c] + self.degrees[i];
            sizes[c] += 1;
        }
        let mut empty: BTreeSet<usize> = (0..n).filter(|&c| sizes[c] == 0).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let gamma = params.resolution;
        let two_m = self.two_m;
        let two = F::lit(2.0);
        let mut links = vec![F::zero(); n];
        let mut touched: Vec<usize> = Vec::new();
        let mut is_touched = vec![false; n];
        let mut any_move = false;

        loop {
            let mut moved = false;
            for &i in &order {
                let k_i = self.degrees[i];
                let own = community[i];
                for &(j, w) in &self.neighbors[i] {
                    let c = community[j];
                    if !is_touched[c] {
                        is_touched[c] = true;
                        touched.push(c);
                    }
                    links[c] = links[c] + w;
                }
                totals[own] = totals[own] - k_i;
                sizes[own] -= 1;
                if sizes[own] == 0 {
                    empty.insert(own);
                }
                // An empty community scores a gain of exactly zero.
                if let Some(&c) = empty.iter().find(|&&c| c != own) {
                    if !is_touched[c] {
                        is_touched[c] = true;
                        touched.push(c);
                    }
                }

                let gain = |c: usize, link: F| link - gamma * totals[c] * k_i / two_m;
                let stay = gain(own, links[own]);
                touched.sort_unstable();
                let mut best: Option<(usize, F)> = None;
                for &c in &touched {
                    if c == own {
                        continue;
                    }
                    let g = gain(c, links[c]);
                    // Ascending ids: strict `>` keeps the lowest id on ties.
                    if best.is_none_or(|(_, bg)| g > bg) {
                        best = Some((c, g));
                    }
                }
                let target = match best {
                    Some((c, g)) if g > stay && two * (g - stay) / two_m >= params.min_gain => c,
                    _ => own,
                };
                totals[target] = totals[target] + k_i;
                sizes[target] += 1;
                empty.remove(&target);
                if target != own {
                    community[i] = target;
                    moved = true;
                }
                for &c in &touched {
                    links[c] = F::zero();
                    is_touched[c] = false;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            any_move = true;
        }
        (renumber(&community), any_move)
    }

    /// Kernighan-Lin style refinement: each step applies the best single-node
    /// move among unlocked nodes even when it lowers modularity, then locks
    /// the node. The best partition seen along the pass is kept. Passes
    /// repeat while they improve modularity by at least `min_gain`.
    fn kl_refine(&self, initial: Vec<usize>, params: &LouvainParams<F>) -> (Vec<usize>, bool) {
        let n = self.len();
        let gamma = params.resolution;
        let two_m = self.two_m;
        let two = F::lit(2.0);
        let mut best_partition = initial;
        let mut improved_any = false;

        loop {
            let mut community = best_partition.clone();
            let mut totals = vec![F::zero(); n];
            let mut sizes = vec![0usize; n];
            for (i, &c) in community.iter().enumerate() {
                totals[c] = totals[c] + self.degrees[i];
                sizes[c] += 1;
            }
            let mut locked = vec![false; n];
            let mut links = vec![F::zero(); n];
            let mut touched: Vec<usize> = Vec::new();
            let mut running = F::zero();
            let mut best_gain = F::zero();
            let mut moves: Vec<(usize, usize)> = Vec::new();
            let mut best_len = 0;

            for _ in 0..n {
                let mut best: Option<(F, usize, usize)> = None;
                let empty = (0..n).find(|&c| sizes[c] == 0);
                for i in (0..n).filter(|&i| !locked[i]) {
                    let own = community[i];
                    let k_i = self.degrees[i];
                    for &(j, w) in &self.neighbors[i] {
                        let c = community[j];
                        if links[c] == F::zero() {
                            touched.push(c);
                        }
                        links[c] = links[c] + w;
                    }
                    if let (true, Some(c)) = (sizes[own] > 1, empty) {
                        touched.push(c);
                    }
                    let own_tot = totals[own] - k_i;
                    let stay = links[own] - gamma * own_tot * k_i / two_m;
                    for &c in &touched {
                        if c == own {
                            continue;
                        }
                        let delta = two * (links[c] - gamma * totals[c] * k_i / two_m - stay) / two_m;
                        // Ties go to the lowest node, then the lowest community.
                        let better = match best {
                            None => true,
                            Some((bd, bi, bc)) => delta > bd || (delta == bd && bi == i && c < bc),
                        };
                        if better {
                            best = Some((delta, i, c));
                        }
                    }
                    for c in touched.drain(..) {
                        links[c] = F::zero();
                    }
                }
                let Some((delta, i, target)) = best else { break };
                let own = community[i];
                totals[own] = totals[own] - self.degrees[i];
                sizes[own] -= 1;
                totals[target] = totals[target] + self.degrees[i];
                sizes[target] += 1;
                community[i] = target;
                locked[i] = true;
                moves.push((i, target));
                running = running + delta;
                if running - best_gain >= params.min_gain {
                    best_gain = running;
                    best_len = moves.len();
                }
            }
            if best_len == 0 {
                break;
            }
            for &(i, target) in &moves[..best_len] {
                best_partition[i] = target;
            }
            best_partition = renumber(&best_partition);
            improved_any = true;
        }
        (best_partition, improved_any)
    }

    /// Collapse communities into super-nodes.
    fn aggregate(&self, community: &[usize]) -> Self {
        let count = community.iter().copied().max().map_or(0, |c| c + 1);
        let mut pairs: Vec<BTreeMap<usize, F>> = vec![BTreeMap::new(); count];
        let mut self_loops = vec![F::zero(); count];
        for i in 0..self.len() {
            let ci = community[i];
            self_loops[ci] = self_loops[ci] + self.self_loops[i];
            for &(j, w) in &self.neighbors[i] {
                if j < i {
                    continue;
                }
                let cj = community[j];
                if ci == cj {
                    self_loops[ci] = self_loops[ci] + w;
                } else {
                    let e = pairs[ci].entry(cj).or_insert_with(F::zero);
                    *e = *e + w;
                    let e = pairs[cj].entry(ci).or_insert_with(F::zero);
                    *e = *e + w;
                }
            }
        }
        let neighbors = pairs.into_iter().map(|m| m.into_iter().collect()).collect();
        Self::from_parts(neighbors, self_loops)
    }
}

/// One multilevel run: coarsen by local moves, then refine top-down and
/// coarsen again until no level improves.
fn single_run<F: Scalar>(base: &WeightedAdjacency<F>, params: &LouvainParams<F>, rng: &mut ChaCha8Rng) -> Vec<usize> {
    // levels[l] is the graph at level l; maps[l] sends base nodes to its nodes.
    let identity: Vec<usize> = (0..base.len()).collect();
    let mut levels = vec![base.clone()];
    let mut maps = vec![identity.clone()];
    let mut flat = identity;
    let mut coarsened = false;
    for _ in 0..params.max_passes.max(1) {
        let top = levels.last().expect("at least the base level");
        let singletons = (0..top.len()).collect();
        let (community, moved) = top.local_moves(singletons, params, rng);
        if moved {
            for c in flat.iter_mut() {
                *c = community[*c];
            }
            levels.push(top.aggregate(&community));
            maps.push(flat.clone());
            coarsened = true;
            continue;
        }
        if !coarsened {
            break;
        }
        // Refine from the coarsest level down so whole groups can move.
        let mut improved = false;
        for l in (0..levels.len()).rev() {
            let graph = &levels[l];
            let mut part = vec![0; graph.len()];
            for (b, &node) in maps[l].iter().enumerate() {
                part[node] = flat[b];
            }
            let (mut refined, mut moved) = graph.local_moves(renumber(&part), params, rng);
            if graph.len() <= KL_REFINE_LIMIT {
                let (kl, kl_moved) = graph.kl_refine(refined, params);
                refined = kl;
                moved |= kl_moved;
            }
            if moved {
                improved = true;
                for (b, &node) in maps[l].iter().enumerate() {
                    flat[b] = refined[node];
                }
            }
        }
        if !improved {
            break;
        }
        flat = renumber(&flat);
        levels = vec![base.clone(), base.aggregate(&flat)];
        maps = vec![(0..base.len()).collect(), flat.clone()];
        coarsened = false;
    }

    flat
}

/// Relabel to dense ids in order of first appearance.
fn renumber(community: &[usize]) -> Vec<usize> {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    community
        .iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect()
}

fn node_index(g: &Graph) -> BTreeMap<&NodeId, usize> {
    g.node_ids().enumerate().map(|(i, id)| (id, i)).collect()
}

/// Newman-Girvan modularity with resolution `resolution`.
pub fn modularity<F: Scalar>(
    g: &Graph,
    assignment: &BTreeMap<NodeId, usize>,
    resolution: F,
) -> Result<F, CommunityError> {
    if g.total_weight() == 0 {
        return Err(CommunityError::UndefinedModularity);
    }
    let index = node_index(g);
    let adjacency = WeightedAdjacency::<F>::from_graph(g, &index);
    let raw: Vec<usize> = index
        .keys()
        .map(|id| assignment.get(*id).copied().ok_or_else(|| CommunityError::Unassigned((*id).clone())))
        .collect::<Result<_, _>>()?;
    Ok(adjacency.modularity(&renumber(&raw), resolution))
}

/// Louvain modularity optimization.
///
/// Each level shuffles the node visit order with a generator seeded from
/// `params.seed`, moves nodes greedily until no move gains at least
/// `params.min_gain`, then aggregates communities into super-nodes. Once
/// aggregation stalls, every level from the coarsest down to the original
/// graph gets another round of moves starting from the current partition,
/// followed by Kernighan-Lin refinement on levels up to [`KL_REFINE_LIMIT`]
/// nodes. If anything moved, coarsening resumes from the refined partition.
/// At most `max_passes` phases run. The whole procedure repeats
/// `params.restarts` times on one random stream and the partition with the
/// highest modularity is kept.
///
/// Equal gains resolve to the lowest community id, so the output is a pure
/// function of the graph and the parameters.
///
/// Community ids in the result are assigned in order of each community's
/// smallest node id.
pub fn louvain<F: Scalar>(g: &Graph, params: &LouvainParams<F>) -> Result<Partition<F>, CommunityError> {
    if g.total_weight() == 0 {
        return Err(CommunityError::UndefinedModularity);
    }
    let index = node_index(g);
    let base = WeightedAdjacency::<F>::from_graph(g, &index);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut best: Option<(Vec<usize>, F)> = None;
    for _ in 0..params.restarts.max(1) {
        let flat = renumber(&single_run(&base, params, &mut rng));
        let q = base.modularity(&flat, params.resolution);
        if best.as_ref().is_none_or(|(_, bq)| q > *bq) {
            best = Some((flat, q));
        }
    }
    let (flat, modularity) = best.expect("at least one run");
    let community_count = flat.iter().copied().max().map_or(0, |c| c + 1);
    let assignment = index.keys().map(|id| ((*id).clone(), flat[index[*id]])).collect();
    Ok(Partition { assignment, community_count, modularity })
}
