//! Force-directed 2-D layout with Barnes-Hut repulsion.
//!
//! Every pair of nodes repels with magnitude `repulsion * m_i * m_j / d`
//! where `m = 1 + weighted degree`. Edges attract with `attraction * w * d`
//! (spring) or `attraction * w * ln(1 + d)` (LinLog). Positions follow the
//! normalized force with an adaptive step: a trial step that raises the
//! total energy is rejected and the step halved, an accepted one grows the
//! step by 10%. The recorded energy trace is therefore non-increasing.

pub mod quadtree;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::{DegreeMode, Graph, NodeId};
use crate::scalar::Scalar;
pub use quadtree::{exact_repulsion, quadtree_force, QuadTree, Repulsion};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<F> {
    pub x: F,
    pub y: F,
}

impl<F: Scalar> Point<F> {
    pub fn new(x: F, y: F) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Point { x: F::zero(), y: F::zero() }
    }

    pub fn norm(self) -> F {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> F {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<F: Scalar> Add for Point<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl<F: Scalar> Sub for Point<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl<F: Scalar> Mul<F> for Point<F> {
    type Output = Self;
    fn mul(self, k: F) -> Self {
        Point::new(self.x * k, self.y * k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AttractionModel {
    #[default]
    Spring,
    LinLog,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutParams<F> {
    pub iterations: usize,
    pub repulsion_strength: F,
    pub attraction_strength: F,
    pub attraction_model: AttractionModel,
    /// Barnes-Hut opening angle in `[0, 1]`; 0 means exact summation.
    pub theta: F,
    /// Largest single-node displacement of the first step.
    pub initial_step: F,
    pub seed: u64,
    /// Stop once the mean displacement of an accepted step falls below this.
    pub convergence_tol: F,
    /// Linear pull towards the origin, `gravity * m * |x|`. Off by default.
    pub gravity: F,
}

impl<F: Scalar> Default for LayoutParams<F> {
    fn default() -> Self {
        LayoutParams {
            iterations: 300,
            repulsion_strength: F::one(),
            attraction_strength: F::one(),
            attraction_model: AttractionModel::Spring,
            theta: F::lit(0.7),
            initial_step: F::one(),
            seed: 42,
            convergence_tol: F::lit(1e-4),
            gravity: F::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutResult<F> {
    pub positions: BTreeMap<NodeId, Point<F>>,
    /// Energy after each iteration.
    pub energy_trace: Vec<F>,
    pub iterations_run: usize,
    pub converged: bool,
}

impl<F: Scalar> LayoutResult<F> {
    pub fn final_energy(&self) -> F {
        self.energy_trace.last().copied().unwrap_or_else(F::zero)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LayoutError {
    #[error("no initial position for node `{0}`")]
    MissingPosition(NodeId),
    #[error("theta must lie in [0, 1], got {0}")]
    Theta(f64),
}

/// Seeded initial positions, uniform on a disc of radius `sqrt(n)`. A single
/// node sits at the origin.
pub fn initial_positions<F: Scalar>(g: &Graph, seed: u64) -> BTreeMap<NodeId, Point<F>> {
    let n = g.node_count();
    if n == 1 {
        return g.node_ids().map(|id| (id.clone(), Point::origin())).collect();
    }
    let radius = (n as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    g.node_ids()
        .map(|id| {
            let r = radius * rng.gen::<f64>().sqrt();
            let a = std::f64::consts::TAU * rng.gen::<f64>();
            (id.clone(), Point::new(F::lit(r * a.cos()), F::lit(r * a.sin())))
        })
        .collect()
}

struct System<'p, F> {
    params: &'p LayoutParams<F>,
    masses: Vec<F>,
    /// Undirected edges with reciprocal weights summed.
    springs: Vec<(usize, usize, F)>,
}

impl<F: Scalar> System<'_, F> {
    fn attraction(&self, d: F, w: F) -> (F, F) {
        let k = self.params.attraction_strength * w;
        match self.params.attraction_model {
            AttractionModel::Spring => (k * d, k * d * d / F::lit(2.0)),
            AttractionModel::LinLog => {
                let l = d.ln_1p();
                (k * l, k * ((F::one() + d) * l - d))
            }
        }
    }

    /// Net force on every node and the total energy.
    fn evaluate(&self, pos: &[Point<F>]) -> (Vec<Point<F>>, F) {
        let bodies: Vec<(Point<F>, F)> = pos.iter().copied().zip(self.masses.iter().copied()).collect();
        let tree = QuadTree::build(&bodies);
        let (theta, kr) = (self.params.theta, self.params.repulsion_strength);
        let repulsion: Vec<Repulsion<F>> =
            (0..pos.len()).into_par_iter().map(|i| tree.repulsion_on(i, theta, kr)).collect();

        let mut forces: Vec<Point<F>> = repulsion.iter().map(|r| r.force).collect();
        // Each pair is seen from both ends.
        let mut energy = repulsion.iter().map(|r| r.potential).sum::<F>() / F::lit(2.0);
        for &(i, j, w) in &self.springs {
            let delta = pos[j] - pos[i];
            let d = delta.norm();
            let (magnitude, potential) = self.attraction(d, w);
            energy = energy + potential;
            if d > F::zero() {
                let f = delta * (magnitude / d);
                forces[i] = forces[i] + f;
                forces[j] = forces[j] - f;
            }
        }
        if self.params.gravity > F::zero() {
            for (i, p) in pos.iter().enumerate() {
                let k = self.params.gravity * self.masses[i];
                let r = p.norm();
                energy = energy + k * r * r / F::lit(2.0);
                forces[i] = forces[i] - *p * k;
            }
        }
        (forces, energy)
    }
}

/// Lay out `g` from seeded initial positions.
///
/// # Panics
/// If `params.theta` lies outside `[0, 1]`.
pub fn force_layout<F: Scalar>(g: &Graph, params: &LayoutParams<F>) -> LayoutResult<F> {
    let initial = initial_positions(g, params.seed);
    force_layout_from(g, params, &initial).expect("valid layout parameters")
}

/// Lay out `g` starting from `initial`, which must cover every node.
pub fn force_layout_from<F: Scalar>(
    g: &Graph,
    params: &LayoutParams<F>,
    initial: &BTreeMap<NodeId, Point<F>>,
) -> Result<LayoutResult<F>, LayoutError> {
    if !(params.theta >= F::zero() && params.theta <= F::one()) {
        return Err(LayoutError::Theta(params.theta.to_f64().unwrap_or(f64::NAN)));
    }
    let ids: Vec<&NodeId> = g.node_ids().collect();
    let index: BTreeMap<&NodeId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut pos: Vec<Point<F>> = ids
        .iter()
        .map(|&id| initial.get(id).copied().ok_or_else(|| LayoutError::MissingPosition(id.clone())))
        .collect::<Result<_, _>>()?;

    let masses: Vec<F> = ids
        .iter()
        .map(|id| F::one() + F::from_count(g.weighted_degree(id, DegreeMode::Total).unwrap_or(0)))
        .collect();
    let mut pair_weights: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for (s, t, e) in g.edges() {
        let (a, b) = (index[s], index[t]);
        *pair_weights.entry((a.min(b), a.max(b))).or_default() += e.weight;
    }
    let springs = pair_weights.into_iter().map(|((a, b), w)| (a, b, F::from_count(w))).collect();
    let system = System { params, masses, springs };

    let n = F::from_count(pos.len() as u64);
    let mut trace = Vec::new();
    let mut converged = false;
    if !pos.is_empty() {
        let (mut forces, mut energy) = system.evaluate(&pos);
        let mut step = params.initial_step;
        for _ in 0..params.iterations {
            let fmax = forces.iter().map(|f| f.norm()).fold(F::zero(), F::max);
            if fmax == F::zero() {
                trace.push(energy);
                converged = true;
                break;
            }
            let scale = step / fmax;
            let trial: Vec<Point<F>> = pos.iter().zip(&forces).map(|(&p, &f)| p + f * scale).collect();
            let (trial_forces, trial_energy) = system.evaluate(&trial);
            if trial_energy <= energy {
                let mean_shift = forces.iter().map(|f| f.norm() * scale).sum::<F>() / n;
                pos = trial;
                forces = trial_forces;
                energy = trial_energy;
                step = step * F::lit(1.1);
                trace.push(energy);
                if mean_shift < params.convergence_tol {
                    converged = true;
                    break;
                }
            } else {
                step = step * F::lit(0.5);
                trace.push(energy);
                // Any further step would move nodes less than the tolerance.
                if step < params.convergence_tol {
                    converged = true;
                    break;
                }
            }
        }
    }

    Ok(LayoutResult {
        positions: ids.into_iter().cloned().zip(pos).collect(),
        iterations_run: trace.len(),
        energy_trace: trace,
        converged,
    })
}
