//! The vertex graph of an invariant polygon, taken modulo `v ~ −v`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::words::{Letter, Word};

/// `±A` or `±B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedGen {
    pub letter: Letter,
    pub negative: bool,
}

impl fmt::Display for SignedGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { '-' } else { '+' };
        let l = match self.letter {
            Letter::A => 'A',
            Letter::B => 'B',
        };
        write!(f, "{sign}{l}")
    }
}

impl std::str::FromStr for SignedGen {
    type Err = String;
    fn from_str(s: &str) -> Result<SignedGen, String> {
        let negative = match s.chars().next() {
            Some('+') => false,
            Some('-') => true,
            _ => return Err(format!("bad generator {s:?}")),
        };
        let letter = match &s[1..] {
            "A" => Letter::A,
            "B" => Letter::B,
            _ => return Err(format!("bad generator {s:?}")),
        };
        Ok(SignedGen { letter, negative })
    }
}

impl Serialize for SignedGen {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignedGen {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<SignedGen, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Edge `(from, gen, to)`: `gen(v_from) = v_to` for polygon vertices
/// `from, to < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub gen: SignedGen,
    pub to: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VertexGraph {
    pub nodes: usize,
    pub edges: Vec<Edge>,
}

/// A cycle of the graph with the product word it spells.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphCycle {
    pub nodes: Vec<usize>,
    /// Letters in matrix-product order (the last generator applied first).
    pub word: Word,
}

impl VertexGraph {
    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == node)
    }

    pub fn edge(&self, from: usize, letter: Letter) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| e.from == from && e.gen.letter == letter)
    }

    /// Strongly connected components (Tarjan).
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        struct State<'a> {
            g: &'a VertexGraph,
            index: Vec<Option<usize>>,
            low: Vec<usize>,
            on_stack: Vec<bool>,
            stack: Vec<usize>,
            next: usize,
            out: Vec<Vec<usize>>,
        }
        fn visit(s: &mut State, v: usize) {
            s.index[v] = Some(s.next);
            s.low[v] = s.next;
            s.next += 1;
            s.stack.push(v);
            s.on_stack[v] = true;
            let succ: Vec<usize> = s.g.out_edges(v).map(|e| e.to).collect();
            for w in succ {
                match s.index[w] {
                    None => {
                        visit(s, w);
                        s.low[v] = s.low[v].min(s.low[w]);
                    }
                    Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                    _ => {}
                }
            }
            if Some(s.low[v]) == s.index[v] {
                let mut comp = Vec::new();
                while let Some(w) = s.stack.pop() {
                    s.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                s.out.push(comp);
            }
        }
        let n = self.nodes;
        let mut s = State {
            g: self,
            index: vec![None; n],
            low: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::new(),
            next: 0,
            out: Vec::new(),
        };
        for v in 0..n {
            if s.index[v].is_none() {
                visit(&mut s, v);
            }
        }
        s.out
    }

    /// Components that support an infinite path.
    pub fn recurrent_components(&self) -> Vec<Vec<usize>> {
        self.strongly_connected_components()
            .into_iter()
            .filter(|c| c.len() > 1 || self.out_edges(c[0]).any(|e| e.to == c[0]))
            .collect()
    }

    /// The component as a simple cycle, if every node has exactly one edge
    /// staying inside it.
    pub fn as_simple_cycle(&self, comp: &[usize]) -> Option<GraphCycle> {
        let inside = |e: &&Edge| comp.binary_search(&e.to).is_ok();
        let mut nodes = Vec::with_capacity(comp.len());
        let mut applied = Vec::with_capacity(comp.len());
        let mut cur = comp[0];
        for _ in 0..comp.len() {
            let mut it = self.out_edges(cur).filter(inside);
            let e = it.next()?;
            if it.next().is_some() {
                return None;
            }
            nodes.push(cur);
            applied.push(e.gen.letter);
            cur = e.to;
        }
        if cur != comp[0] {
            return None;
        }
        applied.reverse();
        Some(GraphCycle { nodes, word: Word::new(applied).ok()? })
    }
}

/// True iff every recurrent component of the graph is a simple cycle
/// spelling (up to rotation) one of `cycles`, and each of `cycles` is
/// spelled by exactly one component. Every infinite path then ends up
/// winding a single declared cycle, so any primitive product other than a
/// rotation of a declared word eventually maps the polygon into its
/// interior.
pub fn uniqueness_check(graph: &VertexGraph, cycles: &[Word]) -> bool {
    let mut classes: Vec<Word> = cycles.iter().map(|c| c.canonical()).collect();
    classes.sort();
    classes.dedup();
    let mut hits = vec![0usize; classes.len()];
    for comp in graph.recurrent_components() {
        let Some(cycle) = graph.as_simple_cycle(&comp) else {
            return false;
        };
        match classes.iter().position(|c| *c == cycle.word.canonical()) {
            Some(k) => hits[k] += 1,
            None => return false,
        }
    }
    hits.iter().all(|&h| h == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    fn e(from: usize, g: &str, to: usize) -> Edge {
        Edge { from, gen: g.parse().unwrap(), to }
    }

    /// The two 6-cycles and side chains of the explicit example, numbered
    /// from zero (v_k ↦ k − 1).
    pub(crate) fn paper_graph() -> VertexGraph {
        let edges = vec![
            e(3, "+B", 12),
            e(12, "-B", 5),
            e(5, "+A", 1),
            e(1, "+B", 10),
            e(10, "+A", 7),
            e(7, "-A", 3),
            e(5, "+B", 14),
            e(8, "+A", 4),
            e(4, "+A", 0),
            e(0, "+B", 9),
            e(9, "+A", 6),
            e(6, "+B", 15),
            e(15, "+B", 8),
            e(6, "+A", 2),
            e(2, "+B", 11),
            e(4, "+B", 13),
        ];
        VertexGraph { nodes: 16, edges }
    }

    #[test]
    fn paper_graph_is_unique() {
        let g = paper_graph();
        let rec = g.recurrent_components();
        assert_eq!(rec.len(), 2);
        for c in &rec {
            assert_eq!(c.len(), 6);
        }
        assert!(uniqueness_check(&g, &[w("aababb"), w("bbabaa")]));
        // a declared cycle that is not present
        assert!(!uniqueness_check(&g, &[w("aababb"), w("bbabaa"), w("ab")]));
        // an undeclared cycle
        assert!(!uniqueness_check(&g, &[w("aababb")]));
    }

    #[test]
    fn cycle_word_orientation() {
        let g = paper_graph();
        let comp = g
            .recurrent_components()
            .into_iter()
            .find(|c| c.contains(&3))
            .unwrap();
        let cyc = g.as_simple_cycle(&comp).unwrap();
        assert!(cyc.word.is_rotation_of(&w("aababb")));
    }

    #[test]
    fn branching_recurrence_fails() {
        // node 0 lies on two distinct cycles 0→1→0 and 0→2→0
        let g = VertexGraph {
            nodes: 3,
            edges: vec![e(0, "+A", 1), e(1, "+B", 0), e(0, "+B", 2), e(2, "+B", 0)],
        };
        assert!(!uniqueness_check(&g, &[w("ab"), w("bb")]));
    }

    #[test]
    fn single_declared_cycle() {
        let g = VertexGraph {
            nodes: 7,
            edges: vec![
                e(0, "+B", 1),
                e(1, "-B", 2),
                e(2, "+A", 3),
                e(3, "+B", 4),
                e(4, "+A", 5),
                e(5, "-A", 0),
                e(2, "+B", 6),
            ],
        };
        assert!(uniqueness_check(&g, &[w("aababb")]));
    }

    #[test]
    fn generator_text_round_trip() {
        for s in ["+A", "-A", "+B", "-B"] {
            assert_eq!(s.parse::<SignedGen>().unwrap().to_string(), s);
        }
        assert!("A".parse::<SignedGen>().is_err());
    }
}
