//! Maximum-cardinality bipartite matching (Hopcroft-Karp) and extraction of a
//! Hall-condition violator from a maximum matching.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::model::{DirectedRelation, ObjectId};

const UNREACHED: u32 = u32::MAX;

/// Dense index view of a bipartite graph. Left and right are indexed
/// separately, so an object may sit on both sides.
struct Bipartite<'a> {
    left: Vec<&'a ObjectId>,
    right: Vec<&'a ObjectId>,
    adj: Vec<Vec<usize>>,
}

impl<'a> Bipartite<'a> {
    fn new(
        left: &'a BTreeSet<ObjectId>,
        right: &'a BTreeSet<ObjectId>,
        edges: &'a DirectedRelation,
    ) -> Self {
        let left: Vec<_> = left.iter().collect();
        let right: Vec<_> = right.iter().collect();
        let li: HashMap<_, _> = left.iter().enumerate().map(|(i, o)| (*o, i)).collect();
        let ri: HashMap<_, _> = right.iter().enumerate().map(|(i, o)| (*o, i)).collect();
        let mut adj = vec![Vec::new(); left.len()];
        for (s, t) in edges {
            if let (Some(&x), Some(&y)) = (li.get(s), ri.get(t)) {
                adj[x].push(y);
            }
        }
        Self { left, right, adj }
    }
}

struct State {
    mate_l: Vec<Option<usize>>,
    mate_r: Vec<Option<usize>>,
}

impl State {
    fn bfs(&self, adj: &[Vec<usize>]) -> (Vec<u32>, bool) {
        let mut dist = vec![UNREACHED; self.mate_l.len()];
        let mut queue = VecDeque::new();
        for (x, m) in self.mate_l.iter().enumerate() {
            if m.is_none() {
                dist[x] = 0;
                queue.push_back(x);
            }
        }
        let mut found_free = false;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                match self.mate_r[y] {
                    None => found_free = true,
                    Some(z) if dist[z] == UNREACHED => {
                        dist[z] = dist[x] + 1;
                        queue.push_back(z);
                    }
                    Some(_) => {}
                }
            }
        }
        (dist, found_free)
    }

    fn dfs(
        &mut self,
        x: usize,
        adj: &[Vec<usize>],
        dist: &mut [u32],
        cursor: &mut [usize],
    ) -> bool {
        while cursor[x] < adj[x].len() {
            let y = adj[x][cursor[x]];
            cursor[x] += 1;
            let ok = match self.mate_r[y] {
                None => true,
                Some(z) => dist[z] == dist[x] + 1 && self.dfs(z, adj, dist, cursor),
            };
            if ok {
                self.mate_l[x] = Some(y);
                self.mate_r[y] = Some(x);
                return true;
            }
        }
        // dead end for this phase
        dist[x] = UNREACHED;
        false
    }
}

fn solve(graph: &Bipartite<'_>) -> State {
    let mut st = State {
        mate_l: vec![None; graph.left.len()],
        mate_r: vec![None; graph.right.len()],
    };
    loop {
        let (mut dist, found_free) = st.bfs(&graph.adj);
        if !found_free {
            break;
        }
        let mut cursor = vec![0; graph.left.len()];
        let mut augmented = false;
        for x in 0..graph.left.len() {
            if st.mate_l[x].is_none() && st.dfs(x, &graph.adj, &mut dist, &mut cursor) {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }
    st
}

/// Returns a maximum-cardinality matching contained in `edges`. Edges with an
/// endpoint outside `left` x `right` are ignored.
///
/// Runs in O(E * sqrt(V)).
pub fn max_matching(
    left: &BTreeSet<ObjectId>,
    right: &BTreeSet<ObjectId>,
    edges: &DirectedRelation,
) -> DirectedRelation {
    let graph = Bipartite::new(left, right, edges);
    let st = solve(&graph);
    to_relation(&graph, &st)
}

fn to_relation(graph: &Bipartite<'_>, st: &State) -> DirectedRelation {
    DirectedRelation::from_pairs(
        st.mate_l
            .iter()
            .enumerate()
            .filter_map(|(x, m)| m.map(|y| (graph.left[x].clone(), graph.right[y].clone()))),
    )
}

/// Outcome of asking for a matching that saturates the left side.
pub(crate) enum Saturation {
    Perfect(DirectedRelation),
    /// A left subset whose neighbourhood is strictly smaller than itself.
    Deficient(BTreeSet<ObjectId>),
}

/// Looks for a left-saturating matching; on failure returns the left vertices
/// reachable by alternating paths from an unmatched left vertex, which form a
/// Hall violator.
pub(crate) fn saturate_left(
    left: &BTreeSet<ObjectId>,
    right: &BTreeSet<ObjectId>,
    edges: &DirectedRelation,
) -> Saturation {
    let graph = Bipartite::new(left, right, edges);
    let st = solve(&graph);
    if st.mate_l.iter().all(Option::is_some) {
        return Saturation::Perfect(to_relation(&graph, &st));
    }
    let mut seen = vec![false; graph.left.len()];
    let mut queue = VecDeque::new();
    for (x, m) in st.mate_l.iter().enumerate() {
        if m.is_none() {
            seen[x] = true;
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in &graph.adj[x] {
            // maximality: every reachable right vertex is matched
            let z = st.mate_r[y].expect("augmenting path after maximum matching");
            if !seen[z] {
                seen[z] = true;
                queue.push_back(z);
            }
        }
    }
    Saturation::Deficient(
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(x, _)| graph.left[x].clone())
            .collect(),
    )
}

/// Targets reachable in `edges` from any object of `set`.
pub fn neighbors<'a>(
    set: &BTreeSet<ObjectId>,
    edges: &'a DirectedRelation,
) -> BTreeSet<&'a ObjectId> {
    edges
        .pairs()
        .filter(|(s, _)| set.contains(s))
        .map(|(_, t)| t)
        .collect()
}
