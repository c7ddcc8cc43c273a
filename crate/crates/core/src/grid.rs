//! Finite subsets of `N^d` (1-based) under the product order.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Ideal,
    Convex,
    Arbitrary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridShape {
    pub dim: usize,
    pub cells: Vec<Vec<u32>>,
    pub kind: GridKind,
}

impl GridShape {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Contained in some hyperplane `{x_i = 1}`.
    pub fn in_coordinate_hyperplane(&self) -> bool {
        (0..self.dim).any(|i| self.cells.iter().all(|c| c[i] == 1))
    }

    pub fn poset(&self) -> Poset {
        grid_poset(&self.cells)
    }
}

#[derive(Debug, Clone)]
pub struct GridReport {
    pub convex: bool,
    pub ideal: bool,
    pub poset: Poset,
}

impl GridReport {
    pub fn kind(&self) -> GridKind {
        if self.ideal {
            GridKind::Ideal
        } else if self.convex {
            GridKind::Convex
        } else {
            GridKind::Arbitrary
        }
    }
}

pub fn cell_label(c: &[u32]) -> String {
    let parts: Vec<String> = c.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn grid_poset(cells: &[Vec<u32>]) -> Poset {
    let labels = cells.iter().map(|c| cell_label(c)).collect();
    let mut pairs = Vec::new();
    for (i, a) in cells.iter().enumerate() {
        for (j, b) in cells.iter().enumerate() {
            if i != j && leq(a, b) {
                pairs.push((i, j));
            }
        }
    }
    Poset::from_relations(labels, &pairs).expect("product order is a partial order")
}

fn validate(points: &[Vec<u32>]) -> Result<usize> {
    let dim = points.first().map_or(0, Vec::len);
    let mut seen = HashSet::new();
    for (index, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::ArityMismatch {
                index,
                expected: dim,
                found: p.len(),
            });
        }
        if p.iter().any(|&v| v == 0) {
            return Err(Error::DomainError(format!(
                "point {} has a non-positive coordinate",
                cell_label(p)
            )));
        }
        if !seen.insert(p.clone()) {
            return Err(Error::DuplicateLabel(cell_label(p)));
        }
    }
    Ok(dim)
}

/// Convexity and ideal tests in `N^d` plus the induced poset.
///
/// Convexity uses the unit-step criterion: whenever `x < z` are both in the
/// set, every `x + e_i` with `x_i < z_i` must be in the set. Iterating this
/// walks to any `y` with `x <= y <= z`, so it is equivalent to the
/// interval definition.
pub fn is_convex_in_grid(points: &[Vec<u32>]) -> Result<GridReport> {
    let dim = validate(points)?;
    let set: HashSet<&[u32]> = points.iter().map(Vec::as_slice).collect();
    let mut step = vec![0u32; dim];

    let ideal = points.iter().all(|p| {
        (0..dim).all(|i| {
            if p[i] == 1 {
                return true;
            }
            step.copy_from_slice(p);
            step[i] -= 1;
            set.contains(step.as_slice())
        })
    });

    let mut convex = true;
    'outer: for x in points {
        for z in points {
            if x == z || !leq(x, z) {
                continue;
            }
            for i in 0..dim {
                if x[i] < z[i] {
                    step.copy_from_slice(x);
                    step[i] += 1;
                    if !set.contains(step.as_slice()) {
                        convex = false;
                        break 'outer;
                    }
                }
            }
        }
    }

    Ok(GridReport {
        convex,
        ideal,
        poset: grid_poset(points),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[u32]]) -> Vec<Vec<u32>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    /// Interval definition checked over the bounding box.
    fn convex_brute(points: &[Vec<u32>]) -> bool {
        let dim = points[0].len();
        let set: HashSet<&[u32]> = points.iter().map(Vec::as_slice).collect();
        let hi: Vec<u32> = (0..dim)
            .map(|i| points.iter().map(|p| p[i]).max().unwrap())
            .collect();
        let mut y = vec![1u32; dim];
        loop {
            let between = points.iter().any(|x| {
                points
                    .iter()
                    .any(|z| x != z && leq(x, &y) && leq(&y, z) && x != &y && z != &y)
            });
            if between && !set.contains(y.as_slice()) {
                return false;
            }
            let mut i = 0;
            loop {
                if i == dim {
                    return true;
                }
                y[i] += 1;
                if y[i] <= hi[i] {
                    break;
                }
                y[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn young_21_is_ideal() {
        let r = is_convex_in_grid(&pts(&[&[1, 1], &[1, 2], &[2, 1]])).unwrap();
        assert!(r.ideal && r.convex);
    }

    #[test]
    fn skew_shape_is_convex_not_ideal() {
        let r = is_convex_in_grid(&pts(&[&[1, 2], &[2, 1], &[2, 2]])).unwrap();
        assert!(r.convex && !r.ideal);
        assert_eq!(r.kind(), GridKind::Convex);
    }

    #[test]
    fn diagonal_pair_is_not_convex() {
        // (1,2) and (2,1) lie strictly between (1,1) and (2,2).
        let p = pts(&[&[1, 1], &[2, 2]]);
        let r = is_convex_in_grid(&p).unwrap();
        assert!(!r.convex);
        assert_eq!(convex_brute(&p), r.convex);
    }

    #[test]
    fn arity_mismatch() {
        assert!(matches!(
            is_convex_in_grid(&pts(&[&[1, 1], &[1]])),
            Err(Error::ArityMismatch { index: 1, .. })
        ));
    }

    #[test]
    fn step_criterion_matches_interval_definition() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let dim = rng.gen_range(1..=3);
            let mut set = HashSet::new();
            for _ in 0..rng.gen_range(1..8) {
                set.insert((0..dim).map(|_| rng.gen_range(1..=3)).collect::<Vec<u32>>());
            }
            let p: Vec<Vec<u32>> = set.into_iter().collect();
            assert_eq!(is_convex_in_grid(&p).unwrap().convex, convex_brute(&p), "{p:?}");
        }
    }
}
