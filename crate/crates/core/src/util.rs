use sha2::{Digest, Sha256};

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Short stable hex fingerprint of a byte string.
pub fn fingerprint(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

/// Relative tolerance used for every comparison of real-valued weights.
pub fn weight_eps(scale: f64) -> f64 {
    1e-9 * scale.abs().max(1.0)
}

pub fn weights_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= weight_eps(a.abs().max(b.abs()))
}
