use std::collections::HashMap;

use super::{Filtration, Interval, PersistenceDiagram};

const NONE: usize = usize::MAX;

/// Standard column reduction of the boundary matrix over GF(2), in
/// filtration order, with clearing.
///
/// Paired simplices `(σ, τ)` give `[value(σ), value(τ))` in dimension
/// `dim(σ)`; unpaired simplices give essential intervals. Dimensions below
/// `f.max_dim` are reported (the top dimension has no cofaces in the
/// filtration). Zero-length intervals are dropped.
pub fn persistent_homology(f: &Filtration) -> PersistenceDiagram {
    let n = f.simplices.len();
    let index: HashMap<&[usize], usize> = f
        .simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.vertices.as_slice(), i))
        .collect();

    let top = f.simplices.iter().map(|s| s.dim()).max().unwrap_or(0);
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pivot_of_row = vec![NONE; n];
    let mut cleared = vec![false; n];
    let mut face = Vec::with_capacity(top + 1);

    // Clearing: reducing dimension d first zeroes every column of
    // dimension d-1 that shows up as a pivot.
    for dim in (1..=top).rev() {
        for j in 0..n {
            let simplex = &f.simplices[j];
            if simplex.dim() != dim || cleared[j] {
                continue;
            }
            let mut col: Vec<usize> = (0..simplex.vertices.len())
                .map(|drop| {
                    face.clear();
                    face.extend(
                        simplex
                            .vertices
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != drop)
                            .map(|(_, &v)| v),
                    );
                    index[face.as_slice()]
                })
                .collect();
            col.sort_unstable();
            while let Some(&low) = col.last() {
                let owner = pivot_of_row[low];
                if owner == NONE {
                    break;
                }
                col = symmetric_difference(&col, &columns[owner]);
            }
            if let Some(&low) = col.last() {
                pivot_of_row[low] = j;
                cleared[low] = true;
            }
            columns[j] = col;
        }
    }

    let mut intervals = Vec::new();
    for (j, simplex) in f.simplices.iter().enumerate() {
        let dim = simplex.dim();
        if dim >= f.max_dim {
            continue;
        }
        let killer = pivot_of_row[j];
        let death = if killer != NONE {
            f.simplices[killer].value
        } else if columns[j].is_empty() {
            f64::INFINITY
        } else {
            // negative simplex: it kills a class, it does not create one
            continue;
        };
        if death > simplex.value {
            intervals.push(Interval::new(dim, simplex.value, death));
        }
    }
    PersistenceDiagram::new(intervals)
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
