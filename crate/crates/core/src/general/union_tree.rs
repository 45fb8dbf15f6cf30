/// Parent forest resolving `first` references after blossom collapses.
///
/// Every odd vertex starts as its own root. When a blossom with nearest
/// common ancestor `p` collapses, each odd vertex that turned even is attached
/// below `p`, so any `first` reference into the collapsed set resolves to `p`.
#[derive(Debug, Clone)]
pub struct UnionTree {
    parent: Vec<usize>,
}

impl UnionTree {
    pub fn new(size: usize) -> Self {
        UnionTree {
            parent: (0..size).collect(),
        }
    }

    pub fn resolve(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = v;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Attaches the tree rooted at `subtree` below `new_parent`.
    pub fn attach(&mut self, subtree: usize, new_parent: usize) {
        debug_assert_eq!(self.parent[subtree], subtree, "attach expects a root");
        self.parent[subtree] = new_parent;
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.parent[v] == v
    }
}
