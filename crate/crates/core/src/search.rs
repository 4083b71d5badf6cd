//! Breadth-first reachability search on the mutation graph.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{check_index, Error, Result};
use crate::matrix::{IntMatrix, Seed};
use crate::tracker::{mutate_delta_raw, DeltaVector, Sign};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MutationSequence {
    pub steps: Vec<usize>,
}

impl MutationSequence {
    pub fn new(steps: Vec<usize>) -> Self {
        MutationSequence { steps }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        self.steps.iter().try_for_each(|&k| check_index(k, n))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn reversed(&self) -> MutationSequence {
        MutationSequence { steps: self.steps.iter().rev().copied().collect() }
    }

    /// Seeds visited along the sequence, `B_0 = seed, …, B_L`.
    pub fn seeds(&self, seed: &Seed) -> Result<Vec<Seed>> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(seed.clone());
        for &k in &self.steps {
            let next = out.last().expect("nonempty").mutate(k)?;
            out.push(next);
        }
        Ok(out)
    }
}

impl fmt::Display for MutationSequence {
    /// 1-based, in application order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|k| format!("μ{}", k + 1)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Targets {
    Plus,
    Minus,
    #[default]
    Both,
}

impl Targets {
    pub fn accepts(self, sign: Sign) -> bool {
        match self {
            Targets::Both => true,
            Targets::Plus => sign == Sign::Plus,
            Targets::Minus => sign == Sign::Minus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_depth: usize,
    pub targets: Targets,
    /// Cap on the number of distinct states visited.
    pub max_states: usize,
    /// Worker threads for frontier expansion; 1 keeps everything on the
    /// calling thread.
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_depth: 24, targets: Targets::Both, max_states: 1_000_000, jobs: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub sequence: MutationSequence,
    pub sign: Sign,
    pub vertex: usize,
    /// `m` in `μ(ε) = ±m·e_i`.
    pub multiplicity: BigInt,
    pub explored: usize,
}

fn encode_int(out: &mut Vec<u8>, x: &BigInt) {
    let bytes = x.to_signed_bytes_le();
    out.push(bytes.len() as u8);
    out.extend_from_slice(&bytes);
}

pub(crate) fn encode_state(b: &IntMatrix, rows: &[&[BigInt]]) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 * b.entries().len());
    for x in b.entries() {
        encode_int(&mut out, x);
    }
    for row in rows {
        for x in row.iter() {
            encode_int(&mut out, x);
        }
    }
    out
}

struct Node<S> {
    state: S,
    parent: usize,
    last: Option<usize>,
}

/// Generic level-synchronous BFS. Children of a level are generated (in
/// parallel when `jobs > 1`) and then merged in frontier order, so the first
/// goal found is the lexicographically smallest shortest sequence.
pub(crate) fn bfs<S, G>(
    start: S,
    n: usize,
    opts: &SearchOptions,
    step: impl Fn(&S, usize) -> Result<S> + Sync,
    encode: impl Fn(&S) -> Vec<u8> + Sync,
    goal: impl Fn(&S) -> Option<G>,
) -> Result<(MutationSequence, G, usize)>
where
    S: Send + Sync,
{
    if let Some(g) = goal(&start) {
        return Ok((MutationSequence::default(), g, 1));
    }
    let mut visited: HashSet<Vec<u8>> = HashSet::new();
    visited.insert(encode(&start));
    // Ancestry is kept as (parent, vertex) pairs; full states only live in
    // the current frontier.
    let mut trail: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX)];
    let mut frontier = vec![Node { state: start, parent: 0, last: None }];

    let pool = if opts.jobs > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().ok()
    } else {
        None
    };

    let expand = |node: &Node<S>| -> Result<Vec<(usize, S, Vec<u8>)>> {
        let mut kids = Vec::with_capacity(n);
        for k in 0..n {
            if node.last == Some(k) {
                continue;
            }
            let s = step(&node.state, k)?;
            let key = encode(&s);
            kids.push((k, s, key));
        }
        Ok(kids)
    };

    for _depth in 0..opts.max_depth {
        let children: Vec<Result<Vec<(usize, S, Vec<u8>)>>> = match &pool {
            Some(p) => p.install(|| frontier.par_iter().map(&expand).collect()),
            None => frontier.iter().map(&expand).collect(),
        };
        let mut next = Vec::new();
        for (node, kids) in frontier.iter().zip(children) {
            for (k, s, key) in kids? {
                if !visited.insert(key) {
                    continue;
                }
                trail.push((node.parent, k));
                let id = trail.len() - 1;
                if let Some(g) = goal(&s) {
                    return Ok((reconstruct(&trail, id), g, visited.len()));
                }
                if visited.len() >= opts.max_states {
                    return Err(Error::NotReachable {
                        max_depth: opts.max_depth,
                        explored: visited.len(),
                    });
                }
                next.push(Node { state: s, parent: id, last: Some(k) });
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Err(Error::NotReachable { max_depth: opts.max_depth, explored: visited.len() })
}

fn reconstruct(trail: &[(usize, usize)], mut id: usize) -> MutationSequence {
    let mut steps = Vec::new();
    while id != 0 {
        let (parent, k) = trail[id];
        steps.push(k);
        id = parent;
    }
    steps.reverse();
    MutationSequence { steps }
}

/// Shortest mutation sequence taking `eps` to `±m·e_i` with the sign allowed
/// by `opts.targets`.
pub fn search_to_sign(seed: &Seed, eps: &DeltaVector, opts: &SearchOptions) -> Result<SearchOutcome> {
    let n = seed.n();
    if eps.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "weight of length {} on a seed with {n} vertices",
            eps.len()
        )));
    }
    if eps.is_zero() {
        return Err(Error::PreconditionViolated("weight is zero".into()));
    }
    let start = (seed.b().clone(), eps.0.clone());
    let step = |(b, d): &(IntMatrix, Vec<BigInt>), k: usize| -> Result<(IntMatrix, Vec<BigInt>)> {
        let d2 = mutate_delta_raw(b, d, k);
        let b2 = Seed::new(b.clone())?.mutate(k)?.into_matrix();
        Ok((b2, d2))
    };
    let encode = |(b, d): &(IntMatrix, Vec<BigInt>)| encode_state(b, &[d.as_slice()]);
    let goal = |(_, d): &(IntMatrix, Vec<BigInt>)| {
        DeltaVector(d.clone())
            .as_signed_unit_multiple()
            .filter(|(_, sign, _)| opts.targets.accepts(*sign))
    };
    let (sequence, (vertex, sign, multiplicity), explored) = bfs(start, n, opts, step, encode, goal)?;
    if multiplicity != BigInt::from(1) {
        log::warn!(
            "weight reaches {}{}·e_{}; projecting along the primitive vector",
            sign.symbol(),
            multiplicity,
            vertex + 1
        );
    }
    Ok(SearchOutcome { sequence, sign, vertex, multiplicity, explored })
}
