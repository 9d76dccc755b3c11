use crate::instance::{Instance, DEPOT};

/// Precomputed distances and normalizers for one instance.
///
/// Travel time equals Euclidean distance; nothing is rounded.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    n: usize,
    dist: Vec<f64>,
    /// Largest pairwise distance.
    pub max_dist: f64,
    /// Largest `due - ready` over all nodes, depot included.
    pub biggest_tw: f64,
    /// Earliest `ready` over customers.
    pub ftw: f64,
}

impl Geometry {
    pub fn new(inst: &Instance) -> Self {
        let n = inst.len();
        let mut dist = vec![0.0; n * n];
        let mut max_dist = 0.0f64;
        for (i, a) in inst.nodes.iter().enumerate() {
            for (j, b) in inst.nodes.iter().enumerate().skip(i + 1) {
                let d = (a.x - b.x).hypot(a.y - b.y);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
                max_dist = max_dist.max(d);
            }
        }
        let biggest_tw = inst
            .nodes
            .iter()
            .map(|n| n.window_len())
            .fold(0.0, f64::max);
        let ftw = inst
            .nodes
            .iter()
            .skip(DEPOT + 1)
            .map(|n| n.ready)
            .fold(f64::INFINITY, f64::min);
        Geometry {
            n,
            dist,
            max_dist,
            biggest_tw,
            ftw,
        }
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Row `i` of the distance matrix.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// An instance together with its geometry. Immutable and shareable across searches.
#[derive(Debug, Clone)]
pub struct Problem {
    pub instance: Instance,
    pub geometry: Geometry,
}

impl Problem {
    pub fn new(instance: Instance) -> Self {
        let geometry = Geometry::new(&instance);
        Problem { instance, geometry }
    }

    pub fn n(&self) -> usize {
        self.instance.len()
    }
}
