//! Barnes-Hut quadtree for the `1/d` repulsion between weighted points.
//!
//! Far cells are summarized at their center of mass. Writing positions as
//! complex numbers, the `1/d` force is the conjugate gradient of
//! `sum m_j log(z - w_j)`, whose expansion about the center of mass `c` is
//! `M log u - a2 / (2 u^2) - a3 / (3 u^3) - ...` with `u = z - c` and
//! `a_k = sum m_j (w_j - c)^k`. Cells keep `a2` and `a3` as well as the mass,
//! which cuts the truncation error of the plain monopole by an order of
//! magnitude at the same opening angle.

use num_complex::Complex;

use super::Point;
use crate::scalar::Scalar;

/// Past this depth leaves hold every remaining body (coincident points).
const MAX_DEPTH: usize = 48;

#[derive(Debug, Clone)]
struct Cell<F> {
    center: Point<F>,
    half: F,
    mass: F,
    /// Mass-weighted position sum; the center of mass once the tree is built.
    com: Point<F>,
    /// Second and third moments about the center of mass.
    a2: Complex<F>,
    a3: Complex<F>,
    children: Option<[usize; 4]>,
    bodies: Vec<usize>,
}

impl<F: Scalar> Cell<F> {
    fn new(center: Point<F>, half: F) -> Self {
        Cell {
            center,
            half,
            mass: F::zero(),
            com: Point::origin(),
            a2: Complex::new(F::zero(), F::zero()),
            a3: Complex::new(F::zero(), F::zero()),
            children: None,
            bodies: Vec::new(),
        }
    }
}

/// Repulsion felt by one body: force vector and potential energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Repulsion<F> {
    pub force: Point<F>,
    pub potential: F,
}

/// Quadtree over `(position, mass)` bodies.
///
/// A body at distance `d` with mass `m` pushes a query of mass `q` away with
/// magnitude `strength * q * m / d`; the matching potential is
/// `-strength * q * m * ln d`.
#[derive(Debug, Clone)]
pub struct QuadTree<F> {
    cells: Vec<Cell<F>>,
    bodies: Vec<(Point<F>, F)>,
}

impl<F: Scalar> QuadTree<F> {
    pub fn build(bodies: &[(Point<F>, F)]) -> Self {
        let mut tree = QuadTree { cells: Vec::new(), bodies: bodies.to_vec() };
        if bodies.is_empty() {
            return tree;
        }
        let (mut lo, mut hi) = (bodies[0].0, bodies[0].0);
        for (p, _) in bodies {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let two = F::lit(2.0);
        let center = Point::new((lo.x + hi.x) / two, (lo.y + hi.y) / two);
        let half = ((hi.x - lo.x).max(hi.y - lo.y) / two).max(F::epsilon()) * F::lit(1.0 + 1e-9);
        tree.cells.push(Cell::new(center, half));
        for i in 0..bodies.len() {
            tree.insert(0, i, 0);
        }
        for cell in &mut tree.cells {
            if cell.mass > F::zero() {
                cell.com = Point::new(cell.com.x / cell.mass, cell.com.y / cell.mass);
            }
        }
        for &(p, m) in bodies {
            let mut at = 0;
            loop {
                let cell = &mut tree.cells[at];
                let d = Complex::new(p.x - cell.com.x, p.y - cell.com.y);
                let d2 = d * d;
                cell.a2 = cell.a2 + d2 * m;
                cell.a3 = cell.a3 + d2 * d * m;
                match cell.children {
                    Some(children) => at = children[Self::quadrant(cell, p)],
                    None => break,
                }
            }
        }
        tree
    }

    fn quadrant(cell: &Cell<F>, p: Point<F>) -> usize {
        ((p.x >= cell.center.x) as usize) | (((p.y >= cell.center.y) as usize) << 1)
    }

    fn insert(&mut self, mut at: usize, body: usize, mut depth: usize) {
        let (p, m) = self.bodies[body];
        loop {
            let cell = &mut self.cells[at];
            cell.mass = cell.mass + m;
            cell.com = Point::new(cell.com.x + p.x * m, cell.com.y + p.y * m);
            match cell.children {
                Some(children) => {
                    at = children[Self::quadrant(cell, p)];
                    depth += 1;
                }
                None if cell.bodies.is_empty() || depth >= MAX_DEPTH => {
                    cell.bodies.push(body);
                    return;
                }
                None => {
                    self.split(at);
                    // Push the resident body down one level, then retry here.
                    let resident = std::mem::take(&mut self.cells[at].bodies);
                    for r in resident {
                        let (rp, rm) = self.bodies[r];
                        let child = self.cells[at].children.unwrap()[Self::quadrant(&self.cells[at], rp)];
                        let c = &mut self.cells[child];
                        c.mass = c.mass + rm;
                        c.com = Point::new(c.com.x + rp.x * rm, c.com.y + rp.y * rm);
                        c.bodies.push(r);
                    }
                    let cell = &self.cells[at];
                    at = cell.children.unwrap()[Self::quadrant(cell, p)];
                    depth += 1;
                }
            }
        }
    }

    fn split(&mut self, at: usize) {
        let (center, half) = (self.cells[at].center, self.cells[at].half);
        let q = half / F::lit(2.0);
        let first = self.cells.len();
        for k in 0..4 {
            let dx = if k & 1 == 1 { q } else { -q };
            let dy = if k & 2 == 2 { q } else { -q };
            self.cells.push(Cell::new(Point::new(center.x + dx, center.y + dy), q));
        }
        self.cells[at].children = Some([first, first + 1, first + 2, first + 3]);
    }

    /// Approximate repulsion on body `query` (excluded from its own sum).
    ///
    /// A cell is replaced by its multipole expansion about the center of mass
    /// when `width / distance < theta`, where distance is measured from the
    /// query to the nearest point of the cell. `theta = 0` sums every pair
    /// exactly.
    pub fn repulsion_on(&self, query: usize, theta: F, strength: F) -> Repulsion<F> {
        let (p, q_mass) = self.bodies[query];
        let mut force = Point::origin();
        let mut potential = F::zero();
        if self.cells.is_empty() {
            return Repulsion { force, potential };
        }
        let pair = |src: Point<F>, mass: F| {
            let dx = p.x - src.x;
            let dy = p.y - src.y;
            let d2 = dx * dx + dy * dy;
            if d2 > F::zero() {
                let k = strength * q_mass * mass;
                (Point::new(k * dx / d2, k * dy / d2), -k * d2.ln() / F::lit(2.0))
            } else {
                (Point::origin(), F::zero())
            }
        };
        let mut stack = vec![0usize];
        while let Some(at) = stack.pop() {
            let cell = &self.cells[at];
            if cell.mass == F::zero() {
                continue;
            }
            match cell.children {
                None => {
                    for &b in &cell.bodies {
                        if b != query {
                            let (bp, bm) = self.bodies[b];
                            let (f, e) = pair(bp, bm);
                            force = force + f;
                            potential = potential + e;
                        }
                    }
                }
                Some(children) => {
                    let dx = p.x - cell.com.x;
                    let dy = p.y - cell.com.y;
                    let dist = (dx * dx + dy * dy).sqrt();
                    let width = cell.half + cell.half;
                    // Distance to the nearest point of the cell, so a center of
                    // mass near the far edge cannot make a close cell look far.
                    let gx = ((p.x - cell.center.x).abs() - cell.half).max(F::zero());
                    let gy = ((p.y - cell.center.y).abs() - cell.half).max(F::zero());
                    let gap = gx.hypot(gy);
                    if gap > F::zero() && dist > F::zero() && width < theta * gap {
                        let u = Complex::new(dx, dy);
                        let (u2, k) = (u * u, strength * q_mass);
                        let inv = u.inv();
                        let inv3 = inv * inv * inv;
                        let grad = inv * cell.mass + cell.a2 * inv3 + cell.a3 * inv3 * inv;
                        force = Point::new(force.x + k * grad.re, force.y - k * grad.im);
                        let corr = cell.a2 / (u2 * F::lit(2.0)) + cell.a3 / (u2 * u * F::lit(3.0));
                        potential = potential - k * (cell.mass * dist.ln() - corr.re);
                    } else {
                        stack.extend(children.iter().rev());
                    }
                }
            }
        }
        Repulsion { force, potential }
    }
}

/// Exact `O(n)` repulsion on body `query`, summed in index order.
pub fn exact_repulsion<F: Scalar>(bodies: &[(Point<F>, F)], query: usize, strength: F) -> Repulsion<F> {
    let (p, q_mass) = bodies[query];
    let mut force = Point::origin();
    let mut potential = F::zero();
    for (i, &(b, m)) in bodies.iter().enumerate() {
        if i == query {
            continue;
        }
        let dx = p.x - b.x;
        let dy = p.y - b.y;
        let d2 = dx * dx + dy * dy;
        if d2 > F::zero() {
            let k = strength * q_mass * m;
            force = Point::new(force.x + k * dx / d2, force.y + k * dy / d2);
            potential = potential - k * d2.ln() / F::lit(2.0);
        }
    }
    Repulsion { force, potential }
}

/// Force on a free query point (not one of the bodies) of unit mass.
pub fn quadtree_force<F: Scalar>(bodies: &[(Point<F>, F)], query: Point<F>, theta: F) -> Point<F> {
    let mut all = bodies.to_vec();
    all.push((query, F::one()));
    let tree = QuadTree::build(&all);
    tree.repulsion_on(all.len() - 1, theta, F::one()).force
}
