use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

/// Default number of upward hops explored from each side.
pub const DEFAULT_HOP_CAP: u32 = 5;

/// Hypernym hierarchy over synset ids.
#[derive(Debug, Clone, PartialEq)]
pub struct SynsetGraph {
    nodes: BTreeSet<String>,
    parents: BTreeMap<String, Vec<String>>,
    blocklist: BTreeSet<String>,
    hop_cap: u32,
}

impl Default for SynsetGraph {
    fn default() -> Self {
        SynsetGraph {
            nodes: BTreeSet::new(),
            parents: BTreeMap::new(),
            blocklist: BTreeSet::new(),
            hop_cap: DEFAULT_HOP_CAP,
        }
    }
}

/// Hop counts from each side up to the chosen common subsumer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsumerDistance {
    pub from_a: u32,
    pub from_b: u32,
}

impl SynsetGraph {
    /// Parses `child<TAB>parent` edge lines followed by an optional
    /// `#blocklist:` section listing one generic synset per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut graph = SynsetGraph::default();
        let mut in_blocklist = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if line.eq_ignore_ascii_case("#blocklist:") {
                in_blocklist = true;
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            if in_blocklist {
                graph.blocklist.insert(line.to_string());
                graph.nodes.insert(line.to_string());
                continue;
            }
            let (child, parent) = line.split_once('\t').ok_or_else(|| Error::Resource {
                resource: "synset graph".into(),
                line: lineno + 1,
                message: "expected `child<TAB>parent`".into(),
            })?;
            graph.add_edge(child.trim(), parent.trim());
        }
        graph.check_acyclic()?;
        Ok(graph)
    }

    pub fn add_edge(&mut self, child: &str, parent: &str) {
        self.nodes.insert(child.to_string());
        self.nodes.insert(parent.to_string());
        let ps = self.parents.entry(child.to_string()).or_default();
        if !ps.iter().any(|p| p == parent) {
            ps.push(parent.to_string());
        }
    }

    pub fn block(&mut self, id: &str) {
        self.nodes.insert(id.to_string());
        self.blocklist.insert(id.to_string());
    }

    pub fn with_hop_cap(mut self, cap: u32) -> Self {
        self.hop_cap = cap;
        self
    }

    pub fn hop_cap(&self) -> u32 {
        self.hop_cap
    }

    pub fn contains(&self, id: &str) -> bool {
        self.nodes.contains(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn check_acyclic(&self) -> Result<()> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state: HashMap<&str, u8> = HashMap::new();
        for start in &self.nodes {
            if state.get(start.as_str()).copied().unwrap_or(0) != 0 {
                continue;
            }
            let mut stack: Vec<(&str, usize)> = vec![(start.as_str(), 0)];
            state.insert(start, 1);
            while let Some((node, next)) = stack.pop() {
                let parents = self.parents.get(node).map(Vec::as_slice).unwrap_or(&[]);
                if let Some(p) = parents.get(next) {
                    stack.push((node, next + 1));
                    match state.get(p.as_str()).copied().unwrap_or(0) {
                        0 => {
                            state.insert(p, 1);
                            stack.push((p, 0));
                        }
                        1 => {
                            return Err(Error::Resource {
                                resource: "synset graph".into(),
                                line: 0,
                                message: format!("cycle through `{p}`"),
                            })
                        }
                        _ => {}
                    }
                } else {
                    state.insert(node, 2);
                }
            }
        }
        Ok(())
    }

    /// Minimal hop count from any synset in `start` to each reachable
    /// ancestor, without entering blocklisted synsets.
    fn ancestors(&self, start: &[String]) -> BTreeMap<&str, u32> {
        let mut dist: BTreeMap<&str, u32> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for s in start {
            if let Some(id) = self.nodes.get(s) {
                if !self.blocklist.contains(id) && !dist.contains_key(id.as_str()) {
                    dist.insert(id, 0);
                    queue.push_back(id.as_str());
                }
            }
        }
        while let Some(node) = queue.pop_front() {
            let d = dist[node];
            if d == self.hop_cap {
                continue;
            }
            for p in self.parents.get(node).into_iter().flatten() {
                if self.blocklist.contains(p) || dist.contains_key(p.as_str()) {
                    continue;
                }
                dist.insert(p, d + 1);
                queue.push_back(p);
            }
        }
        dist
    }

    /// Upward distance to the least common subsumer of two synset sets.
    ///
    /// Among non-generic common ancestors within the hop cap, picks the one
    /// minimizing `max(n, m)`, then `n + m`, then the subsumer id.
    pub fn least_common_subsumer_distance(
        &self,
        a: &[String],
        b: &[String],
    ) -> Result<Option<SubsumerDistance>> {
        for id in a.iter().chain(b) {
            if !self.nodes.contains(id) {
                return Err(Error::UnknownSynset(id.clone()));
            }
        }
        if a.iter().any(|x| b.contains(x)) {
            return Ok(Some(SubsumerDistance { from_a: 0, from_b: 0 }));
        }
        let up_a = self.ancestors(a);
        let up_b = self.ancestors(b);
        let best = up_a
            .iter()
            .filter_map(|(id, &n)| up_b.get(id).map(|&m| (n.max(m), n + m, *id, n, m)))
            .min();
        Ok(best.map(|(_, _, _, n, m)| SubsumerDistance { from_a: n, from_b: m }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> SynsetGraph {
        SynsetGraph::parse(
            "cat.n.01\tfeline.n.01\nfeline.n.01\tcarnivore.n.01\n\
             dog.n.01\tcanine.n.02\ncanine.n.02\tcarnivore.n.01\n\
             carnivore.n.01\tanimal.n.01\nanimal.n.01\tentity.n.01\n\
             rock.n.01\tentity.n.01\n#blocklist:\nentity.n.01\n",
        )
        .unwrap()
    }

    fn ids(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn feline_is_one_hop_above_cat() {
        let d = toy()
            .least_common_subsumer_distance(&ids(&["cat.n.01"]), &ids(&["feline.n.01"]))
            .unwrap()
            .unwrap();
        assert_eq!((d.from_a, d.from_b), (1, 0));
    }

    #[test]
    fn dog_and_cat_meet_at_carnivore() {
        let d = toy()
            .least_common_subsumer_distance(&ids(&["dog.n.01"]), &ids(&["cat.n.01"]))
            .unwrap()
            .unwrap();
        assert_eq!((d.from_a, d.from_b), (2, 2));
    }

    #[test]
    fn identical_sets_are_zero_hops() {
        let d = toy()
            .least_common_subsumer_distance(&ids(&["cat.n.01"]), &ids(&["cat.n.01"]))
            .unwrap()
            .unwrap();
        assert_eq!((d.from_a, d.from_b), (0, 0));
    }

    #[test]
    fn generic_subsumers_are_never_used() {
        let r = toy()
            .least_common_subsumer_distance(&ids(&["rock.n.01"]), &ids(&["cat.n.01"]))
            .unwrap();
        assert_eq!(r, None);
    }

    #[test]
    fn hop_cap_limits_search() {
        let g = toy().with_hop_cap(1);
        let r = g
            .least_common_subsumer_distance(&ids(&["dog.n.01"]), &ids(&["cat.n.01"]))
            .unwrap();
        assert_eq!(r, None);
    }

    #[test]
    fn unknown_synset_is_an_error() {
        let r = toy().least_common_subsumer_distance(&ids(&["unicorn.n.01"]), &ids(&["cat.n.01"]));
        assert!(matches!(r, Err(Error::UnknownSynset(id)) if id == "unicorn.n.01"));
    }

    #[test]
    fn cycles_are_rejected() {
        assert!(SynsetGraph::parse("a\tb\nb\tc\nc\ta\n").is_err());
    }

    #[test]
    fn swapping_sides_swaps_hops() {
        let g = toy();
        for (a, b) in [("dog.n.01", "feline.n.01"), ("cat.n.01", "animal.n.01")] {
            let ab = g.least_common_subsumer_distance(&ids(&[a]), &ids(&[b])).unwrap().unwrap();
            let ba = g.least_common_subsumer_distance(&ids(&[b]), &ids(&[a])).unwrap().unwrap();
            assert_eq!((ab.from_a, ab.from_b), (ba.from_b, ba.from_a));
        }
    }
}
