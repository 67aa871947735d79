use rand::seq::SliceRandom;
use rand::Rng;

use super::GenError;
use crate::graph::{local_density, Graph};

/// Sorted adjacency as a dense boolean matrix, for the edge-editing
/// generators.
struct Matrix {
    n: usize,
    bits: Vec<bool>,
}

impl Matrix {
    fn new(n: usize) -> Self {
        Self {
            n,
            bits: vec![false; n * n],
        }
    }

    fn get(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.n + v]
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        self.bits[u * self.n + v] = on;
        self.bits[v * self.n + u] = on;
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| self.get(u, v))
            .collect()
    }

    fn graph(&self) -> Graph {
        Graph::from_edges(self.n, self.edges()).expect("matrix indices in range")
    }
}

fn check_probability(p: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GenError::InvalidSpec(format!(
            "edge probability {p} outside [0, 1]"
        )))
    }
}

/// `G(n, p)` made triangle-free: triangles `a < b < c` are scanned in
/// lexicographic order and each one still present loses its edge `bc`.
pub fn triangle_free_gnp<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    rng: &mut R,
) -> Result<Graph, GenError> {
    check_probability(p)?;
    let mut m = Matrix::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                m.set(u, v, true);
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if !m.get(a, b) {
                continue;
            }
            for c in b + 1..n {
                if m.get(a, c) && m.get(b, c) {
                    m.set(b, c, false);
                }
            }
        }
    }
    Ok(m.graph())
}

/// Random bipartite graph between `0..left` and `left..left+right`.
pub fn bipartite_random<R: Rng + ?Sized>(
    left: usize,
    right: usize,
    p: f64,
    rng: &mut R,
) -> Result<Graph, GenError> {
    check_probability(p)?;
    let mut edges = Vec::new();
    for u in 0..left {
        for v in left..left + right {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(left + right, edges).expect("indices in range"))
}

/// Default number of pairings tried by [`regular_triangle_free`].
pub const DEFAULT_ATTEMPTS: u64 = 10_000;

/// A `degree`-regular triangle-free graph from the configuration model,
/// redrawn until the pairing is simple and triangle-free.
pub fn regular_triangle_free<R: Rng + ?Sized>(
    n: usize,
    degree: usize,
    attempts: u64,
    rng: &mut R,
) -> Result<Graph, GenError> {
    if (n * degree) % 2 == 1 || n <= degree {
        return Err(GenError::InvalidSpec(format!(
            "need n * degree even and n > degree, got n = {n}, degree = {degree}"
        )));
    }
    let mut points: Vec<usize> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    'attempt: for _ in 0..attempts {
        points.shuffle(rng);
        let mut m = Matrix::new(n);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || m.get(u, v) {
                continue 'attempt;
            }
            m.set(u, v, true);
        }
        let g = m.graph();
        if g.is_triangle_free() {
            debug_assert!(g.is_regular(degree));
            return Ok(g);
        }
    }
    Err(GenError::Exhausted {
        what: "configuration-model pairings",
        attempts,
    })
}

/// Adds random edges inside neighbourhoods of `base` while the measured
/// local density stays at most `target`.
pub fn raise_density<R: Rng + ?Sized>(
    base: &Graph,
    target: f64,
    rng: &mut R,
) -> Result<Graph, GenError> {
    if !(target >= 0.0 && target.is_finite()) {
        return Err(GenError::InvalidSpec(format!(
            "density target {target} must be finite and non-negative"
        )));
    }
    let n = base.n();
    let mut m = Matrix::new(n);
    for (u, v) in base.edges() {
        m.set(u, v, true);
    }
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for w in 0..n {
        let nb = base.neighbors(w);
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                if !m.get(x, y) {
                    candidates.push((x, y));
                }
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    candidates.shuffle(rng);
    for (x, y) in candidates {
        m.set(x, y, true);
        if local_density(&m.graph()).local_density_f64() > target {
            m.set(x, y, false);
        }
    }
    Ok(m.graph())
}
