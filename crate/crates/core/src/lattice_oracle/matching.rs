//! Assigning separator elements to qudits of equal dimension within a radius, by maximum
//! bipartite matching (Hopcroft–Karp).

use std::collections::VecDeque;

/// A perfect matching (`assignment[a]` is the qudit of element `a`), or a set violating
/// Hall's condition: elements with fewer acceptable qudits than members, or qudits with fewer
/// acceptable elements than members when there are more qudits than elements can cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HallOutcome {
    Perfect(Vec<usize>),
    ElementDeficit(Vec<usize>),
    DofDeficit(Vec<usize>),
}

const NONE: usize = usize::MAX;

struct Matcher<'a> {
    adj: &'a [Vec<usize>],
    left_mate: Vec<usize>,
    right_mate: Vec<usize>,
    dist: Vec<usize>,
}

impl Matcher<'_> {
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for u in 0..self.adj.len() {
            if self.left_mate[u] == NONE {
                self.dist[u] = 0;
                queue.push_back(u);
            } else {
                self.dist[u] = NONE;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                match self.right_mate[v] {
                    NONE => found = true,
                    w if self.dist[w] == NONE => {
                        self.dist[w] = self.dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        found
    }

    fn dfs(&mut self, u: usize) -> bool {
        for i in 0..self.adj[u].len() {
            let v = self.adj[u][i];
            let w = self.right_mate[v];
            if w == NONE || (self.dist[w] == self.dist[u] + 1 && self.dfs(w)) {
                self.left_mate[u] = v;
                self.right_mate[v] = u;
                return true;
            }
        }
        self.dist[u] = NONE;
        false
    }

    fn run(adj: &[Vec<usize>], right: usize) -> Matcher<'_> {
        let mut m = Matcher { adj, left_mate: vec![NONE; adj.len()], right_mate: vec![NONE; right], dist: vec![NONE; adj.len()] };
        while m.bfs() {
            for u in 0..adj.len() {
                if m.left_mate[u] == NONE {
                    m.dfs(u);
                }
            }
        }
        m
    }

    /// Left vertices reachable by alternating paths from an unmatched left vertex; their
    /// neighbourhood is matched into the set minus that vertex, so it is a Hall violator.
    fn witness(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.adj.len()];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                let w = self.right_mate[v];
                if w != NONE && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..self.adj.len()).filter(|&u| seen[u]).collect()
    }
}

/// Elements and qudits are `(location, dimension)` pairs; a pair is acceptable when the
/// dimensions agree and `dist(location_a, location_j) ≤ radius`.
pub fn hall_matching(
    elements: &[(usize, u32)],
    dofs: &[(usize, u32)],
    radius: usize,
    dist: impl Fn(usize, usize) -> usize,
) -> HallOutcome {
    let adj: Vec<Vec<usize>> = elements
        .iter()
        .map(|&(la, da)| (0..dofs.len()).filter(|&j| dofs[j].1 == da && dist(la, dofs[j].0) <= radius).collect())
        .collect();
    let m = Matcher::run(&adj, dofs.len());
    if let Some(root) = (0..elements.len()).find(|&u| m.left_mate[u] == NONE) {
        return HallOutcome::ElementDeficit(m.witness(root));
    }
    if elements.len() < dofs.len() {
        let mut radj = vec![Vec::new(); dofs.len()];
        for (a, ns) in adj.iter().enumerate() {
            for &j in ns {
                radj[j].push(a);
            }
        }
        let rm = Matcher::run(&radj, elements.len());
        let root = (0..dofs.len()).find(|&j| rm.left_mate[j] == NONE).expect("more qudits than elements");
        return HallOutcome::DofDeficit(rm.witness(root));
    }
    HallOutcome::Perfect(m.left_mate)
}
