//! Folded subgroup automata (Stallings graphs) for finitely generated
//! subgroups of a free group, plus bounded-radius malnormality and
//! normalizer scans.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::words::{enumerate_ball, Letter, Word, WordError};

/// Anything with decidable membership inside a free group.
pub trait Subgroup {
    fn rank(&self) -> usize;

    fn contains(&self, w: &Word) -> Result<bool, WordError>;

    /// Every element of the subgroup of length at most `max_len`, in
    /// length-lexicographic order.
    fn elements_up_to(&self, max_len: usize) -> Vec<Word>;

    /// Shortest nontrivial element, if the subgroup is nontrivial.
    fn shortest_nontrivial(&self) -> Option<Word>;
}

fn rank_check(expected: usize, w: &Word) -> Result<(), WordError> {
    if w.rank() == expected {
        Ok(())
    } else {
        Err(WordError::RankMismatch {
            left: expected,
            right: w.rank(),
        })
    }
}

/// Group index of a subgroup: finite (number of cosets) or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Index {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
        }
    }
}

/// A folded, core-trimmed, canonically numbered subgroup graph. Vertex 0 is
/// the basepoint; vertex numbering follows breadth-first search from the
/// basepoint with letters tried in alphabet order, so two builds of the same
/// subgroup compare equal.
#[derive(Debug, Clone)]
pub struct SubgroupGraph {
    rank: usize,
    adjacency: Vec<BTreeMap<Letter, usize>>,
    generators: Vec<Word>,
}

/// Graphs compare by labelled structure, not by the generators they came from.
impl PartialEq for SubgroupGraph {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.adjacency == other.adjacency
    }
}

impl Eq for SubgroupGraph {}

struct Folder {
    parent: Vec<usize>,
    edges: Vec<Vec<(Letter, usize)>>,
}

impl Folder {
    fn find(&mut self, v: usize) -> usize {
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

    fn add_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.edges.push(Vec::new());
        self.parent.len() - 1
    }

    fn add_edge(&mut self, from: usize, letter: Letter, to: usize) {
        self.edges[from].push((letter, to));
        self.edges[to].push((letter.inverse(), from));
    }

    /// Identifies clashing edge pairs until every vertex is deterministic.
    fn fold(&mut self) {
        let mut pending: VecDeque<usize> = (0..self.parent.len()).collect();
        while let Some(v) = pending.pop_front() {
            let v = self.find(v);
            let mut seen: BTreeMap<Letter, usize> = BTreeMap::new();
            let edges = std::mem::take(&mut self.edges[v]);
            let mut kept = Vec::with_capacity(edges.len());
            let mut merge = None;
            for (letter, target) in edges {
                let target = self.find(target);
                match seen.get(&letter) {
                    Some(&existing) if existing == target => {}
                    Some(&existing) => {
                        if merge.is_none() {
                            merge = Some((existing, target));
                        }
                        kept.push((letter, target));
                    }
                    None => {
                        seen.insert(letter, target);
                        kept.push((letter, target));
                    }
                }
            }
            self.edges[v] = kept;
            if let Some((x, y)) = merge {
                let (x, y) = (self.find(x), self.find(y));
                if x != y {
                    let (keep, gone) = if x < y { (x, y) } else { (y, x) };
                    self.parent[gone] = keep;
                    let moved = std::mem::take(&mut self.edges[gone]);
                    self.edges[keep].extend(moved);
                    pending.push_back(keep);
                }
                pending.push_back(self.find(v));
            }
        }
    }
}

impl SubgroupGraph {
    /// Builds the folded graph of the subgroup generated by `generators`.
    pub fn build(rank: usize, generators: &[Word]) -> Result<SubgroupGraph, WordError> {
        for g in generators {
            rank_check(rank, g)?;
        }
        let mut folder = Folder {
            parent: Vec::new(),
            edges: Vec::new(),
        };
        let base = folder.add_vertex();
        for g in generators.iter().filter(|g| !g.is_identity()) {
            let letters = g.letters();
            let mut current = base;
            for (i, &letter) in letters.iter().enumerate() {
                let next = if i + 1 == letters.len() {
                    base
                } else {
                    folder.add_vertex()
                };
                folder.add_edge(current, letter, next);
                current = next;
            }
        }
        folder.fold();

        let mut adjacency: BTreeMap<usize, BTreeMap<Letter, usize>> = BTreeMap::new();
        for v in 0..folder.parent.len() {
            if folder.find(v) != v {
                continue;
            }
            let edges = folder.edges[v].clone();
            let map = adjacency.entry(v).or_default();
            for (letter, target) in edges {
                let target = folder.find(target);
                map.insert(letter, target);
            }
        }
        let base = folder.find(base);
        trim_hair(&mut adjacency, base);
        let adjacency = canonical_numbering(&adjacency, base);
        Ok(SubgroupGraph {
            rank,
            adjacency,
            generators: generators.to_vec(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of directed edges (each geometric edge counted once).
    pub fn edge_count(&self) -> usize {
        self.adjacency
            .iter()
            .map(|m| m.keys().filter(|l| !l.is_inverse()).count())
            .sum()
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    /// Target of the edge leaving `vertex` with `letter`, if present.
    pub fn step(&self, vertex: usize, letter: Letter) -> Option<usize> {
        self.adjacency.get(vertex)?.get(&letter).copied()
    }

    /// Endpoint of the path spelled by `w` from the basepoint.
    pub fn read(&self, w: &Word) -> Option<usize> {
        w.letters()
            .iter()
            .try_fold(0usize, |v, &letter| self.step(v, letter))
    }

    pub fn index(&self) -> Index {
        let directions = 2 * self.rank;
        if self
            .adjacency
            .iter()
            .all(|edges| edges.len() == directions)
        {
            Index::Finite(self.adjacency.len())
        } else {
            Index::Infinite
        }
    }

    /// A free basis read off a breadth-first spanning tree.
    pub fn free_basis(&self) -> Vec<Word> {
        let n = self.adjacency.len();
        let mut tree_path: Vec<Option<Word>> = vec![None; n];
        tree_path[0] = Some(Word::identity(self.rank));
        let mut tree_edges = BTreeSet::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for (&letter, &t) in &self.adjacency[v] {
                if tree_path[t].is_none() {
                    let path = tree_path[v].as_ref().unwrap();
                    let single = Word::from_letters([letter], self.rank).unwrap();
                    tree_path[t] = Some(path.mul_same_rank(&single));
                    tree_edges.insert((v, letter));
                    tree_edges.insert((t, letter.inverse()));
                    queue.push_back(t);
                }
            }
        }
        let mut basis = Vec::new();
        for (v, edges) in self.adjacency.iter().enumerate() {
            for (&letter, &t) in edges {
                if letter.is_inverse() || tree_edges.contains(&(v, letter)) {
                    continue;
                }
                let single = Word::from_letters([letter], self.rank).unwrap();
                let to_v = tree_path[v].as_ref().unwrap();
                let from_t = tree_path[t].as_ref().unwrap().invert();
                basis.push(to_v.mul_same_rank(&single).mul_same_rank(&from_t));
            }
        }
        basis
    }
}

fn trim_hair(adjacency: &mut BTreeMap<usize, BTreeMap<Letter, usize>>, base: usize) {
    loop {
        let leaf = adjacency
            .iter()
            .find(|(&v, edges)| v != base && edges.len() <= 1)
            .map(|(&v, _)| v);
        let Some(v) = leaf else { break };
        let edges = adjacency.remove(&v).unwrap_or_default();
        for (letter, target) in edges {
            if let Some(map) = adjacency.get_mut(&target) {
                map.remove(&letter.inverse());
            }
        }
    }
}

fn canonical_numbering(
    adjacency: &BTreeMap<usize, BTreeMap<Letter, usize>>,
    base: usize,
) -> Vec<BTreeMap<Letter, usize>> {
    let mut number: BTreeMap<usize, usize> = BTreeMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([base]);
    number.insert(base, 0);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &t in adjacency[&v].values() {
            if !number.contains_key(&t) {
                number.insert(t, number.len());
                queue.push_back(t);
            }
        }
    }
    order
        .iter()
        .map(|v| {
            adjacency[v]
                .iter()
                .map(|(&letter, t)| (letter, number[t]))
                .collect()
        })
        .collect()
}

impl Subgroup for SubgroupGraph {
    fn rank(&self) -> usize {
        self.rank
    }

    fn contains(&self, w: &Word) -> Result<bool, WordError> {
        rank_check(self.rank, w)?;
        Ok(self.read(w) == Some(0))
    }

    fn elements_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut found = vec![Word::identity(self.rank)];
        let mut stack: Vec<(usize, Vec<Letter>)> = vec![(0, Vec::new())];
        while let Some((v, path)) = stack.pop() {
            if path.len() == max_len {
                continue;
            }
            for (&letter, &t) in &self.adjacency[v] {
                if path.last() == Some(&letter.inverse()) {
                    continue;
                }
                let mut next = path.clone();
                next.push(letter);
                if t == 0 {
                    found.push(Word::from_letters(next.iter().copied(), self.rank).unwrap());
                }
                stack.push((t, next));
            }
        }
        found.sort();
        found
    }

    fn shortest_nontrivial(&self) -> Option<Word> {
        // a shortest reduced loop runs out along a path, once round a cycle and back
        let bound = 3 * self.adjacency.len();
        self.elements_up_to(bound).into_iter().nth(1)
    }
}

/// The cyclic subgroup generated by a single word, with closed-form membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSubgroup {
    generator: Word,
    root: Option<(Word, usize)>,
}

impl CyclicSubgroup {
    pub fn new(generator: Word) -> CyclicSubgroup {
        let root = generator.root_power().ok();
        CyclicSubgroup { generator, root }
    }

    pub fn generator(&self) -> &Word {
        &self.generator
    }

    /// The exponent `n` with `w = generatorⁿ`, if `w` lies in the subgroup.
    pub fn exponent_of(&self, w: &Word) -> Result<Option<i64>, WordError> {
        rank_check(self.generator.rank(), w)?;
        if w.is_identity() {
            return Ok(Some(0));
        }
        let Some((root, step)) = &self.root else {
            return Ok(None);
        };
        let (w_root, w_exp) = w.root_power()?;
        let signed = if &w_root == root {
            w_exp as i64
        } else if w_root == root.invert() {
            -(w_exp as i64)
        } else {
            return Ok(None);
        };
        let step = *step as i64;
        Ok((signed % step == 0).then_some(signed / step))
    }
}

impl Subgroup for CyclicSubgroup {
    fn rank(&self) -> usize {
        self.generator.rank()
    }

    fn contains(&self, w: &Word) -> Result<bool, WordError> {
        Ok(self.exponent_of(w)?.is_some())
    }

    fn elements_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut found = vec![Word::identity(self.rank())];
        if !self.generator.is_identity() {
            let mut n = 1;
            loop {
                let pos = self.generator.pow(n);
                if pos.len() > max_len {
                    break;
                }
                found.push(self.generator.pow(-n));
                found.push(pos);
                n += 1;
            }
        }
        found.sort();
        found
    }

    fn shortest_nontrivial(&self) -> Option<Word> {
        if self.generator.is_identity() {
            None
        } else {
            let inv = self.generator.invert();
            Some(std::cmp::min(self.generator.clone(), inv))
        }
    }
}

/// One solution of `x·g·x⁻¹ = g'` with `x ∉ G` and `g, g' ∈ G`, `g ≠ e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub x: String,
    pub g: String,
    pub conjugate: String,
}

/// Result of a bounded malnormality scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MalnormalScan {
    pub radius: usize,
    /// Length bound on `g`; equal to `2·radius + 2`.
    pub element_window: usize,
    pub window_formula: &'static str,
    pub violations: Vec<Violation>,
}

/// Length bound on subgroup elements used by [`malnormal_violations`].
pub fn malnormal_window(radius: usize) -> usize {
    2 * radius + 2
}

/// Scans every `x ∉ G` with `|x| ≤ radius` against every nontrivial `g ∈ G`
/// with `|g| ≤ 2·radius + 2`, reporting each conjugate that lands back in `G`.
pub fn malnormal_violations<S: Subgroup>(group: &S, radius: usize) -> Result<MalnormalScan, WordError> {
    let window = malnormal_window(radius);
    let elements: Vec<Word> = group
        .elements_up_to(window)
        .into_iter()
        .filter(|g| !g.is_identity())
        .collect();
    let mut violations = Vec::new();
    for x in enumerate_ball(group.rank(), radius) {
        if group.contains(&x)? {
            continue;
        }
        for g in &elements {
            let conj = g.conjugate(&x)?;
            if group.contains(&conj)? {
                violations.push(Violation {
                    x: x.to_string(),
                    g: g.to_string(),
                    conjugate: conj.to_string(),
                });
            }
        }
    }
    Ok(MalnormalScan {
        radius,
        element_window: window,
        window_formula: "|g| <= 2*radius + 2",
        violations,
    })
}

/// All `x` with `|x| ≤ radius`, `x ∉ Gp(a)`, normalizing `Gp(aᵖ)`.
pub fn normalizer_scan(a: &Word, power: usize, radius: usize) -> Result<Vec<Word>, WordError> {
    if a.is_identity() {
        return Err(WordError::Identity);
    }
    let whole = CyclicSubgroup::new(a.clone());
    let ap = a.pow(power as i64);
    let sub = CyclicSubgroup::new(ap.clone());
    let mut found = Vec::new();
    for x in enumerate_ball(a.rank(), radius) {
        if whole.contains(&x)? {
            continue;
        }
        let forward = ap.conjugate(&x)?;
        let backward = ap.conjugate(&x.invert())?;
        if sub.contains(&forward)? && sub.contains(&backward)? {
            found.push(x);
        }
    }
    Ok(found)
}

/// Parses a comma-separated subgroup literal such as `"aa,ab,ba"`.
pub fn parse_generators(text: &str, rank: usize) -> Result<Vec<Word>, WordError> {
    let mut offset = 0;
    let mut out = Vec::new();
    for piece in text.split(',') {
        let parsed = Word::parse(piece, rank).map_err(|e| match e {
            WordError::Parse { position, message } => WordError::Parse {
                position: position + offset,
                message,
            },
            other => other,
        })?;
        out.push(parsed);
        offset += piece.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn graph(gens: &str) -> SubgroupGraph {
        SubgroupGraph::build(2, &parse_generators(gens, 2).unwrap()).unwrap()
    }

    #[test]
    fn single_loop() {
        let g = graph("a");
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 1);
        assert!(g.contains(&w("aaa")).unwrap());
        assert_eq!(g.index(), Index::Infinite);
    }

    #[test]
    fn mod_two_kernel() {
        let g = graph("aa,ab,ba");
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.index(), Index::Finite(2));
        assert!(!g.contains(&w("b")).unwrap());
        assert!(g.contains(&w("Ab")).unwrap());
    }

    #[test]
    fn trivial_and_whole() {
        let trivial = SubgroupGraph::build(2, &[]).unwrap();
        assert_eq!(trivial.vertex_count(), 1);
        assert!(trivial.contains(&Word::identity(2)).unwrap());
        assert!(!trivial.contains(&w("a")).unwrap());
        assert_eq!(graph("a,b").index(), Index::Finite(1));
    }

    #[test]
    fn hair_is_trimmed() {
        // ⟨aba⁻¹⟩ folds to a loop b with a hair a; the basepoint keeps it
        let g = graph("abA");
        assert_eq!(g.vertex_count(), 2);
        let g = graph("ab,aB");
        // ⟨ab, ab⁻¹⟩ = ⟨ab, b²⟩
        assert!(g.contains(&w("bb")).unwrap());
        assert!(!g.contains(&w("b")).unwrap());
    }

    #[test]
    fn rank_mismatch() {
        let g = graph("a");
        let three = Word::parse("c", 3).unwrap();
        assert!(matches!(g.contains(&three), Err(WordError::RankMismatch { .. })));
    }

    #[test]
    fn free_basis_generates() {
        let g = graph("aa,ab,ba");
        let basis = g.free_basis();
        assert_eq!(basis.len(), 3);
        let rebuilt = SubgroupGraph::build(2, &basis).unwrap();
        assert_eq!(rebuilt, g);
    }

    #[test]
    fn cyclic_membership() {
        let c = CyclicSubgroup::new(w("aa"));
        assert!(c.contains(&w("AAAA")).unwrap());
        assert!(!c.contains(&w("a")).unwrap());
        assert_eq!(c.exponent_of(&w("AAAAAA")).unwrap(), Some(-3));
        let conj = CyclicSubgroup::new(w("bab"));
        assert!(conj.contains(&w("babbab")).unwrap());
        assert!(!conj.contains(&w("ba")).unwrap());
    }

    #[test]
    fn malnormality_windows() {
        let scan = malnormal_violations(&graph("a"), 3).unwrap();
        assert!(scan.violations.is_empty());
        let scan = malnormal_violations(&graph("bb"), 1).unwrap();
        assert!(scan.violations.contains(&Violation {
            x: "b".into(),
            g: "bb".into(),
            conjugate: "bb".into()
        }));
        assert!(!malnormal_violations(&graph("aa,ab,ba"), 2)
            .unwrap()
            .violations
            .is_empty());
    }

    #[test]
    fn normalizers() {
        for p in 1..=3 {
            assert!(normalizer_scan(&w("a"), p, 2).unwrap().is_empty());
        }
        assert!(normalizer_scan(&w("bb"), 1, 1).unwrap().contains(&w("b")));
        assert_eq!(normalizer_scan(&Word::identity(2), 1, 1), Err(WordError::Identity));
    }

    #[test]
    fn subgroup_literal_positions() {
        match parse_generators("aa,a1", 2) {
            Err(WordError::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
    }
}
