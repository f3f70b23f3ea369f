use std::cmp::{Ordering, Reverse};
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::hash::{Hash, Hasher};

use super::{Interval, MaxEps, PersistenceDiagram, PersistenceError};
use crate::cloud::PointCloud;

/// A triangle keyed in filtration order: `(value, vertices)`.
#[derive(Debug, Clone, Copy)]
struct Triangle {
    value: f64,
    vertices: [u32; 3],
}

impl PartialEq for Triangle {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Triangle {}

impl Hash for Triangle {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.to_bits().hash(state);
        self.vertices.hash(state);
    }
}

impl PartialOrd for Triangle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Triangle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.vertices.cmp(&other.vertices))
    }
}

struct Edge {
    value: f64,
    a: usize,
    b: usize,
}

struct Complex {
    n: usize,
    dist: Vec<f64>,
    eps: f64,
}

impl Complex {
    fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    fn coface(&self, e: &Edge, w: usize) -> Option<Triangle> {
        if w == e.a || w == e.b {
            return None;
        }
        let (da, db) = (self.d(e.a, w), self.d(e.b, w));
        if da > self.eps || db > self.eps {
            return None;
        }
        let mut v = [e.a as u32, e.b as u32, w as u32];
        v.sort_unstable();
        Some(Triangle {
            value: e.value.max(da).max(db),
            vertices: v,
        })
    }

    fn push_coboundary(&self, e: &Edge, heap: &mut BinaryHeap<Reverse<Triangle>>) {
        for w in 0..self.n {
            if let Some(t) = self.coface(e, w) {
                heap.push(Reverse(t));
            }
        }
    }
}

/// Pops the earliest triangle with odd multiplicity, leaving it in the heap.
fn pivot(heap: &mut BinaryHeap<Reverse<Triangle>>) -> Option<Triangle> {
    while let Some(Reverse(t)) = heap.pop() {
        if heap.peek().is_some_and(|Reverse(u)| *u == t) {
            heap.pop();
        } else {
            heap.push(Reverse(t));
            return Some(t);
        }
    }
    None
}

/// Dimension 0 and 1 persistence of the Rips filtration of `cloud`, equal
/// to `persistent_homology(&rips_filtration(cloud, 2, max_eps))`.
///
/// Dimension 0 comes from Kruskal's algorithm over the sorted edges. For
/// dimension 1 the coboundary matrix (edges against triangles, both in
/// reverse filtration order) is reduced with coboundaries generated on the
/// fly. Edges that merged components in dimension 0 are cleared.
pub fn rips_persistence(cloud: &PointCloud, max_eps: MaxEps) -> Result<PersistenceDiagram, PersistenceError> {
    if cloud.is_empty() {
        return Err(PersistenceError::EmptyCloud);
    }
    let eps = max_eps.resolve(cloud)?;
    let n = cloud.len();
    let cx = Complex {
        n,
        dist: cloud.distance_matrix(),
        eps,
    };

    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let value = cx.d(a, b);
            if value <= eps {
                edges.push(Edge { value, a, b });
            }
        }
    }
    edges.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.a.cmp(&y.a)).then(x.b.cmp(&y.b)));

    let mut intervals = Vec::new();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut merging = vec![false; edges.len()];
    for (k, e) in edges.iter().enumerate() {
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
            merging[k] = true;
            if e.value > 0.0 {
                intervals.push(Interval::new(0, 0.0, e.value));
            }
        }
    }
    let components = (0..n).filter(|&v| find(&mut parent, v) == v).count();
    intervals.extend((0..components).map(|_| Interval::new(0, 0.0, f64::INFINITY)));

    // pivot triangle -> combination of edges whose coboundary reduces to it
    let mut reduced: HashMap<Triangle, Vec<usize>> = HashMap::new();
    let mut heap = BinaryHeap::new();
    for k in (0..edges.len()).rev() {
        if merging[k] {
            continue;
        }
        let e = &edges[k];
        // Fast path: the earliest coface is a fresh pivot (apparent pair).
        let earliest = (0..n).filter_map(|w| cx.coface(e, w)).min();
        let Some(first) = earliest else {
            intervals.push(Interval::new(1, e.value, f64::INFINITY));
            continue;
        };
        if let Entry::Vacant(slot) = reduced.entry(first) {
            if first.value > e.value {
                intervals.push(Interval::new(1, e.value, first.value));
            }
            slot.insert(vec![k]);
            continue;
        }

        heap.clear();
        cx.push_coboundary(e, &mut heap);
        let mut combo = vec![k];
        let death = loop {
            match pivot(&mut heap) {
                None => break None,
                Some(t) => match reduced.get(&t) {
                    Some(other) => {
                        for &o in other {
                            cx.push_coboundary(&edges[o], &mut heap);
                        }
                        combo.extend_from_slice(other);
                    }
                    None => {
                        combo.sort_unstable();
                        reduce_mod2(&mut combo);
                        reduced.insert(t, combo);
                        break Some(t.value);
                    }
                },
            }
        };
        match death {
            Some(d) if d > e.value => intervals.push(Interval::new(1, e.value, d)),
            Some(_) => {}
            None => intervals.push(Interval::new(1, e.value, f64::INFINITY)),
        }
    }
    Ok(PersistenceDiagram::new(intervals))
}

/// Drops pairs of equal entries from a sorted list.
fn reduce_mod2(v: &mut Vec<usize>) {
    let mut out = Vec::with_capacity(v.len());
    for &x in v.iter() {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    *v = out;
}
