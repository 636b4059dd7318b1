//! Small undirected graphs keyed by arbitrary node labels, with BFS
//! distances and DOT export.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;

#[derive(Debug, Clone)]
pub struct Graph<K> {
    keys: Vec<K>,
    index: HashMap<K, usize>,
    adj: Vec<Vec<usize>>,
}

impl<K: Clone + Eq + Hash> Default for Graph<K> {
    fn default() -> Self {
        Graph {
            keys: Vec::new(),
            index: HashMap::new(),
            adj: Vec::new(),
        }
    }
}

impl<K: Clone + Eq + Hash> Graph<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, key: K) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.keys.len();
        self.keys.push(key.clone());
        self.index.insert(key, i);
        self.adj.push(Vec::new());
        i
    }

    pub fn add_edge(&mut self, a: K, b: K) {
        let ia = self.add_node(a);
        let ib = self.add_node(b);
        if ia != ib && !self.adj[ia].contains(&ib) {
            self.adj[ia].push(ib);
            self.adj[ib].push(ia);
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.keys.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn node_index(&self, key: &K) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn key(&self, i: usize) -> &K {
        &self.keys[i]
    }

    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, a: &K, b: &K) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&ia), Some(&ib)) => self.adj[ia].contains(&ib),
            _ => false,
        }
    }

    /// BFS distances from `start`; unreachable nodes get `None`.
    pub fn distances_from(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.keys.len()];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: &K, b: &K) -> Option<usize> {
        let ia = self.node_index(a)?;
        let ib = self.node_index(b)?;
        self.distances_from(ia)[ib]
    }

    /// Least distance from any node of `sources` to any node of `targets`.
    pub fn min_distance_between(&self, sources: &[usize], targets: &[usize]) -> Option<usize> {
        let mut dist = vec![None; self.keys.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        let target: Vec<bool> = {
            let mut t = vec![false; self.keys.len()];
            for &i in targets {
                t[i] = true;
            }
            t
        };
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if target[u] {
                return Some(du);
            }
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        None
    }

    pub fn is_connected(&self) -> bool {
        if self.keys.is_empty() {
            return true;
        }
        self.distances_from(0).iter().all(Option::is_some)
    }

    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for i in 0..self.keys.len() {
            for d in self.distances_from(i) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// DOT rendering with node labels produced by `label`.
    pub fn to_dot(&self, name: &str, label: impl Fn(&K) -> String) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {name} {{");
        for (i, k) in self.keys.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape_dot(&label(k)));
        }
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    let _ = writeln!(out, "  n{i} -- n{j};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// A directed graph on the same keyed-node representation, used for
/// orientation patterns where 2-cycles are the object of interest.
#[derive(Debug, Clone)]
pub struct Digraph<K> {
    keys: Vec<K>,
    index: HashMap<K, usize>,
    succ: Vec<Vec<usize>>,
}

impl<K: Clone + Eq + Hash> Default for Digraph<K> {
    fn default() -> Self {
        Digraph {
            keys: Vec::new(),
            index: HashMap::new(),
            succ: Vec::new(),
        }
    }
}

impl<K: Clone + Eq + Hash> Digraph<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, key: K) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.keys.len();
        self.keys.push(key.clone());
        self.index.insert(key, i);
        self.succ.push(Vec::new());
        i
    }

    pub fn add_arc(&mut self, from: K, to: K) {
        let ia = self.add_node(from);
        let ib = self.add_node(to);
        if !self.succ[ia].contains(&ib) {
            self.succ[ia].push(ib);
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    pub fn has_arc(&self, from: &K, to: &K) -> bool {
        match (self.index.get(from), self.index.get(to)) {
            (Some(&ia), Some(&ib)) => self.succ[ia].contains(&ib),
            _ => false,
        }
    }

    /// A pair with arcs in both directions, if any.
    pub fn find_two_cycle(&self) -> Option<(K, K)> {
        for (i, succ) in self.succ.iter().enumerate() {
            for &j in succ {
                if j > i && self.succ[j].contains(&i) {
                    return Some((self.keys[i].clone(), self.keys[j].clone()));
                }
            }
        }
        None
    }

    pub fn to_dot(&self, name: &str, label: impl Fn(&K) -> String) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        for (i, k) in self.keys.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape_dot(&label(k)));
        }
        for (i, succ) in self.succ.iter().enumerate() {
            for &j in succ {
                let _ = writeln!(out, "  n{i} -> n{j};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_distances() {
        let mut g = Graph::new();
        for i in 0..4u32 {
            g.add_edge(i, i + 1);
        }
        assert_eq!(g.num_nodes(), 5);
        assert_eq!(g.num_edges(), 4);
        assert_eq!(g.distance(&0, &4), Some(4));
        assert_eq!(g.diameter(), Some(4));
        g.add_node(99);
        assert!(!g.is_connected());
        assert_eq!(g.distance(&0, &99), None);
        assert_eq!(g.diameter(), None);
    }

    #[test]
    fn multi_source_distance() {
        let mut g = Graph::new();
        for i in 0..6u32 {
            g.add_edge(i, (i + 1) % 6);
        }
        let s = [g.node_index(&0).unwrap()];
        let t = [g.node_index(&3).unwrap(), g.node_index(&2).unwrap()];
        assert_eq!(g.min_distance_between(&s, &t), Some(2));
    }

    #[test]
    fn two_cycle_detection() {
        let mut d = Digraph::new();
        d.add_arc("a", "b");
        d.add_arc("b", "c");
        assert_eq!(d.find_two_cycle(), None);
        d.add_arc("c", "b");
        assert_eq!(d.find_two_cycle(), Some(("b", "c")));
    }

    #[test]
    fn dot_output_shape() {
        let mut g = Graph::new();
        g.add_edge("x", "y");
        let dot = g.to_dot("g", |k| k.to_string());
        assert!(dot.starts_with("graph g {"));
        assert!(dot.contains("n0 -- n1;"));
    }
}
