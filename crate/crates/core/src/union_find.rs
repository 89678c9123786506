//! Disjoint sets, optionally tracking a parity bit relative to the root.

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    // parity of the path from a node to its parent
    parity: Vec<bool>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
            parity: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Returns the root of `x` and the parity of `x` relative to it.
    pub fn find(&mut self, x: usize) -> (usize, bool) {
        // two passes keep this iterative on long chains
        let mut root = x;
        let mut acc = false;
        while self.parent[root] != root {
            acc ^= self.parity[root];
            root = self.parent[root];
        }
        let mut node = x;
        let mut to_root = acc;
        while self.parent[node] != node {
            let next = self.parent[node];
            let next_parity = to_root ^ self.parity[node];
            self.parent[node] = root;
            self.parity[node] = to_root;
            node = next;
            to_root = next_parity;
        }
        (root, acc)
    }

    pub fn root(&mut self, x: usize) -> usize {
        self.find(x).0
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        self.union_with_parity(a, b, false)
            .is_ok_and(|merged| merged)
    }

    /// Joins `a` and `b` demanding `parity(a) ^ parity(b) == relative`.
    ///
    /// Returns `Ok(true)` if two sets were merged, `Ok(false)` if they were
    /// already joined consistently and `Err(())` on a parity conflict.
    #[allow(clippy::result_unit_err)]
    pub fn union_with_parity(&mut self, a: usize, b: usize, relative: bool) -> Result<bool, ()> {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return if pa ^ pb == relative {
                Ok(false)
            } else {
                Err(())
            };
        }
        let (child, parent) = if self.rank[ra] < self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        if self.rank[child] == self.rank[parent] {
            self.rank[parent] += 1;
        }
        self.parent[child] = parent;
        self.parity[child] = pa ^ pb ^ relative;
        Ok(true)
    }

    pub fn count_sets(&mut self) -> usize {
        (0..self.len()).filter(|&x| self.root(x) == x).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_counts() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert_eq!(uf.count_sets(), 3);
        assert_eq!(uf.root(0), uf.root(1));
        assert_ne!(uf.root(0), uf.root(3));
    }

    #[test]
    fn parity_conflict_on_odd_cycle() {
        let mut uf = UnionFind::new(3);
        uf.union_with_parity(0, 1, true).unwrap();
        uf.union_with_parity(1, 2, true).unwrap();
        assert_eq!(uf.union_with_parity(0, 2, false), Ok(false));
        assert_eq!(uf.union_with_parity(0, 2, true), Err(()));
    }

    #[test]
    fn parity_survives_path_compression() {
        let mut uf = UnionFind::new(6);
        for i in 0..5 {
            uf.union_with_parity(i, i + 1, true).unwrap();
        }
        for i in 0..6 {
            let (_, p0) = uf.find(0);
            let (_, pi) = uf.find(i);
            assert_eq!(p0 ^ pi, i % 2 == 1);
        }
    }
}
