use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Largest quiver the oracle accepts.
pub const MAX_VERTICES: usize = 6;

/// How a positive entry `b_ij` of an exchange matrix is read as arrows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArrowConvention {
    /// `b_ij > 0` means `b_ij` arrows `i → j`.
    RowToColumn,
    /// `b_ij > 0` means `b_ij` arrows `j → i`.
    ColumnToRow,
}

impl ArrowConvention {
    pub fn other(self) -> Self {
        match self {
            ArrowConvention::RowToColumn => ArrowConvention::ColumnToRow,
            ArrowConvention::ColumnToRow => ArrowConvention::RowToColumn,
        }
    }
}

impl fmt::Display for ArrowConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrowConvention::RowToColumn => write!(f, "b_ij = #(i->j) - #(j->i)"),
            ArrowConvention::ColumnToRow => write!(f, "b_ij = #(j->i) - #(i->j)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    pub n: usize,
    /// `(source, target)` per arrow.
    pub arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(n: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        for &(s, t) in &arrows {
            if s >= n || t >= n {
                return Err(Error::IndexOutOfRange { index: s.max(t), size: n });
            }
        }
        Ok(Quiver { n, arrows })
    }

    pub fn from_b(b: &IntMatrix, convention: ArrowConvention) -> Result<Self> {
        if !b.is_skew_symmetric() {
            return Err(Error::PreconditionViolated("exchange matrix is not skew-symmetric".into()));
        }
        let n = b.rows();
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let x = b.get(i, j);
                if !x.is_positive() {
                    continue;
                }
                let count = x.to_usize().ok_or(Error::TooLarge { total: usize::MAX, cap: 0 })?;
                let arrow = match convention {
                    ArrowConvention::RowToColumn => (i, j),
                    ArrowConvention::ColumnToRow => (j, i),
                };
                arrows.extend(std::iter::repeat_n(arrow, count));
            }
        }
        Ok(Quiver { n, arrows })
    }

    pub fn to_b(&self, convention: ArrowConvention) -> IntMatrix {
        let mut b = IntMatrix::zeros(self.n, self.n);
        for &(s, t) in &self.arrows {
            let (i, j) = match convention {
                ArrowConvention::RowToColumn => (s, t),
                ArrowConvention::ColumnToRow => (t, s),
            };
            let up = b.get(i, j) + 1;
            let down = b.get(j, i) - 1;
            b.set(i, j, up);
            b.set(j, i, down);
        }
        b
    }

    /// Topological order of the vertices, or `None` if there is an oriented
    /// cycle (loops included).
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indegree = vec![0usize; self.n];
        for &(_, t) in &self.arrows {
            indegree[t] += 1;
        }
        let mut ready: Vec<usize> = (0..self.n).rev().filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &(s, t) in &self.arrows {
                if s == v {
                    indegree[t] -= 1;
                    if indegree[t] == 0 {
                        ready.push(t);
                    }
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }
}

/// A path as its source vertex and arrow indices in travel order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

/// Path basis of the path algebra of an acyclic quiver.
///
/// The indecomposable projective at `i` has `P_i(x)` spanned by paths
/// `i → x`; a path `p: v → u` gives the map `P_u → P_v`, `q ↦ p·q`, so
/// `Hom(P_u, P_v)` has the paths `v → u` as a basis.
#[derive(Clone, Debug)]
pub struct PathAlgebra {
    quiver: Quiver,
    convention: ArrowConvention,
    paths: Vec<Vec<Vec<Path>>>,
    lookup: HashMap<(usize, Vec<usize>), usize>,
}

impl PathAlgebra {
    pub fn new(quiver: Quiver, convention: ArrowConvention) -> Result<Self> {
        if quiver.n > MAX_VERTICES {
            return Err(Error::PreconditionViolated(format!(
                "quiver has {} vertices; the oracle handles at most {MAX_VERTICES}",
                quiver.n
            )));
        }
        quiver.topological_order().ok_or(Error::CyclicQuiver)?;
        let n = quiver.n;
        let mut paths = vec![vec![Vec::new(); n]; n];
        for s in 0..n {
            let mut stack = vec![Path { source: s, target: s, arrows: Vec::new() }];
            while let Some(p) = stack.pop() {
                for (a, &(from, to)) in quiver.arrows.iter().enumerate() {
                    if from == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(a);
                        stack.push(Path { source: s, target: to, arrows });
                    }
                }
                paths[s][p.target].push(p);
            }
        }
        let mut lookup = HashMap::new();
        for row in paths.iter_mut() {
            for list in row.iter_mut() {
                list.sort_by(|a, b| a.arrows.len().cmp(&b.arrows.len()).then(a.arrows.cmp(&b.arrows)));
                for (idx, p) in list.iter().enumerate() {
                    lookup.insert((p.source, p.arrows.clone()), idx);
                }
            }
        }
        Ok(PathAlgebra { quiver, convention, paths, lookup })
    }

    pub fn from_b(b: &IntMatrix, convention: ArrowConvention) -> Result<Self> {
        PathAlgebra::new(Quiver::from_b(b, convention)?, convention)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn n(&self) -> usize {
        self.quiver.n
    }

    pub fn convention(&self) -> ArrowConvention {
        self.convention
    }

    pub fn exchange_matrix(&self) -> IntMatrix {
        self.quiver.to_b(self.convention)
    }

    /// Paths `s → t`.
    pub fn paths(&self, s: usize, t: usize) -> &[Path] {
        &self.paths[s][t]
    }

    pub fn total_paths(&self) -> usize {
        self.paths.iter().flatten().map(Vec::len).sum()
    }

    /// Index of the concatenation `p·q` in the basis of paths
    /// `p.source → q.target`.
    pub fn concat_index(&self, p: &Path, q: &Path) -> usize {
        debug_assert_eq!(p.target, q.source);
        let mut arrows = p.arrows.clone();
        arrows.extend_from_slice(&q.arrows);
        self.lookup[&(p.source, arrows)]
    }

    /// Index of `p·α` for an arrow `α` leaving `p.target`.
    pub fn extend_index(&self, p: &Path, arrow: usize) -> usize {
        let mut arrows = p.arrows.clone();
        arrows.push(arrow);
        self.lookup[&(p.source, arrows)]
    }

    /// A fingerprint for checking that two presentations share an algebra.
    pub(crate) fn id(&self) -> (usize, Vec<(usize, usize)>) {
        (self.quiver.n, self.quiver.arrows.clone())
    }
}
