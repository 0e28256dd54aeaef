use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ModuleDiagram;
use crate::exactla::{Field, Matrix};
use crate::poset::Poset;

/// Shape of the random poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Elements in layers; relations only go up, mostly between adjacent layers.
    Layered,
    /// A randomly oriented tree: the Hasse diagram has no undirected cycle.
    Tree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomParams {
    pub max_elements: usize,
    /// Bound on every `dim F(p)`; atoms that would exceed it are dropped.
    pub max_dim: usize,
    /// Number of indicator summands attempted.
    pub atoms: usize,
    pub max_layers: usize,
    pub shape: Shape,
    /// Change basis at every element by a random invertible matrix.
    pub conjugate: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams { max_elements: 8, max_dim: 3, atoms: 3, max_layers: 4, shape: Shape::Layered, conjugate: true }
    }
}

/// A random functor on a random poset, deterministic in `seed`.
///
/// The functor is a direct sum of indicators of convex subsets (upper sets,
/// lower sets, or intersections of the two): 1-dimensional on the subset,
/// identities between its elements and zero elsewhere. Any convex subset
/// gives a functor, since an interval between two members stays inside it.
pub fn random_instance<F: Field>(field: &F, seed: u64, params: &RandomParams) -> ModuleDiagram<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poset = match params.shape {
        Shape::Layered => layered_poset(&mut rng, params),
        Shape::Tree => tree_poset(&mut rng, params),
    };
    let n = poset.len();

    let mut members: Vec<Vec<bool>> = Vec::new();
    let mut dims = vec![0usize; n];
    if n > 0 {
        for _ in 0..params.atoms {
            for _attempt in 0..8 {
                let set = random_convex(&mut rng, &poset);
                let fits = (0..n).all(|p| !set[p] || dims[p] < params.max_dim);
                if set.iter().any(|&b| b) && fits {
                    for p in 0..n {
                        dims[p] += usize::from(set[p]);
                    }
                    members.push(set);
                    break;
                }
            }
        }
    }

    // pos[t][p]: coordinate of atom t in F(p).
    let mut next = vec![0usize; n];
    let pos: Vec<Vec<usize>> = members
        .iter()
        .map(|set| {
            (0..n)
                .map(|p| {
                    if set[p] {
                        next[p] += 1;
                        next[p] - 1
                    } else {
                        usize::MAX
                    }
                })
                .collect()
        })
        .collect();
    let mut maps: Vec<Matrix<F>> = poset
        .covers()
        .iter()
        .map(|&(a, b)| {
            let mut m = Matrix::zeros(field, dims[a], dims[b]);
            for (t, set) in members.iter().enumerate() {
                if set[a] && set[b] {
                    m.set(pos[t][a], pos[t][b], field.one());
                }
            }
            m
        })
        .collect();

    if params.conjugate {
        let change: Vec<(Matrix<F>, Matrix<F>)> = dims.iter().map(|&d| random_invertible(&mut rng, field, d)).collect();
        for (m, &(a, b)) in maps.iter_mut().zip(poset.covers()) {
            *m = change[a].0.mul(m).mul(&change[b].1);
        }
    }
    ModuleDiagram::new(poset, field, dims, maps).expect("indicator sums are functors")
}

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn layered_poset(rng: &mut ChaCha8Rng, params: &RandomParams) -> Poset {
    let max = params.max_elements.max(1);
    let n = rng.random_range(max.div_ceil(2)..=max);
    let most = params.max_layers.clamp(1, n);
    let layers = rng.random_range(most.min(2)..=most);
    let mut layer: Vec<usize> = (0..n).map(|i| if i < layers { i } else { rng.random_range(0..layers) }).collect();
    layer.sort_unstable();

    let mut edges = vec![vec![false; n]; n];
    for b in 0..n {
        let mut adjacent = false;
        for a in 0..n {
            if layer[a] < layer[b] {
                let p = if layer[a] + 1 == layer[b] { 0.45 } else { 0.12 };
                if rng.random_bool(p) {
                    edges[a][b] = true;
                    adjacent |= layer[a] + 1 == layer[b];
                }
            }
        }
        if layer[b] > 0 && !adjacent && rng.random_bool(0.8) {
            let prev: Vec<usize> = (0..n).filter(|&a| layer[a] + 1 == layer[b]).collect();
            edges[prev[rng.random_range(0..prev.len())]][b] = true;
        }
    }

    // Strict reachability; indices are already a topological order.
    let mut reach = edges.clone();
    for b in 0..n {
        for a in (0..b).rev() {
            if edges[a][b] {
                for row in reach.iter_mut().take(a) {
                    if row[a] {
                        row[b] = true;
                    }
                }
            }
        }
    }
    let mut covers = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if edges[a][b] && !(0..n).any(|c| reach[a][c] && reach[c][b]) {
                covers.push((format!("x{a}"), format!("x{b}")));
            }
        }
    }
    Poset::new(&ids(n), &covers).expect("layered DAG with reduced edges")
}

fn tree_poset(rng: &mut ChaCha8Rng, params: &RandomParams) -> Poset {
    let n = rng.random_range(1..=params.max_elements.max(1));
    let covers: Vec<(String, String)> = (1..n)
        .map(|i| {
            let j = rng.random_range(0..i);
            if rng.random_bool(0.5) {
                (format!("x{j}"), format!("x{i}"))
            } else {
                (format!("x{i}"), format!("x{j}"))
            }
        })
        .collect();
    Poset::new(&ids(n), &covers).expect("oriented trees are posets with these covers")
}

fn random_convex(rng: &mut ChaCha8Rng, poset: &Poset) -> Vec<bool> {
    let n = poset.len();
    let generators = |rng: &mut ChaCha8Rng| -> Vec<usize> {
        let mut g: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.25)).collect();
        if g.is_empty() {
            g.push(rng.random_range(0..n));
        }
        g
    };
    let up = |g: &[usize]| -> Vec<bool> { (0..n).map(|q| g.iter().any(|&x| poset.leq(x, q))).collect() };
    let down = |g: &[usize]| -> Vec<bool> { (0..n).map(|q| g.iter().any(|&x| poset.leq(q, x))).collect() };
    match rng.random_range(0..3) {
        0 => up(&generators(rng)),
        1 => down(&generators(rng)),
        _ => {
            let (u, d) = (up(&generators(rng)), down(&generators(rng)));
            u.iter().zip(&d).map(|(&a, &b)| a && b).collect()
        }
    }
}

/// A random invertible `d x d` matrix and its inverse.
fn random_invertible<F: Field>(rng: &mut ChaCha8Rng, field: &F, d: usize) -> (Matrix<F>, Matrix<F>) {
    loop {
        let data = (0..d * d).map(|_| field.sample(rng)).collect();
        let m = Matrix::from_vec(field, d, d, data).expect("square data");
        if let Some(inv) = m.inverse() {
            return (m, inv);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rationals};

    #[test]
    fn deterministic_in_seed() {
        let p = RandomParams::default();
        assert_eq!(random_instance(&Rationals, 9, &p), random_instance(&Rationals, 9, &p));
    }

    #[test]
    fn respects_bounds() {
        let f5 = PrimeField::new(5).unwrap();
        let p = RandomParams { max_elements: 10, max_dim: 2, atoms: 6, ..RandomParams::default() };
        for seed in 0..40 {
            let f = random_instance(&f5, seed, &p);
            assert!(f.poset().len() <= 10 && !f.poset().is_empty());
            assert!(f.dims().iter().all(|&d| d <= 2));
            f.validate_functor().unwrap();
        }
    }

    #[test]
    fn trees_are_filtered_trees() {
        let p = RandomParams { shape: Shape::Tree, ..RandomParams::default() };
        for seed in 0..30 {
            assert!(random_instance(&Rationals, seed, &p).poset().is_filtered_tree());
        }
    }

    #[test]
    fn zero_atoms_give_the_zero_functor() {
        let p = RandomParams { atoms: 0, ..RandomParams::default() };
        let f = random_instance(&Rationals, 1, &p);
        assert!(f.dims().iter().all(|&d| d == 0));
        assert!(f.higher_limits(None).unwrap().is_empty());
    }

    #[test]
    fn single_whole_upper_set_is_constant() {
        // With one element every nonempty convex set is the whole poset.
        let p = RandomParams { max_elements: 1, atoms: 1, conjugate: false, ..RandomParams::default() };
        let f = random_instance(&Rationals, 3, &p);
        assert_eq!(f.dims(), &[1]);
    }
}
