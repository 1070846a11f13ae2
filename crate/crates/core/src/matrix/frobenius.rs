//! Irreducibility and the Frobenius normal form.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use super::dense::Matrix;
use super::spectral::{block_radius, SpectralOptions, SpectralRadius};
use crate::error::MatrixError;
use crate::scalar::Scalar;

/// Strongly connected components (Tarjan), each sorted ascending.
pub fn strongly_connected_components(graph: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State {
        next: usize,
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        comps: Vec<Vec<usize>>,
    }

    fn visit(v: usize, graph: &[Vec<usize>], st: &mut State) {
        st.index[v] = Some(st.next);
        st.low[v] = st.next;
        st.next += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for &w in &graph[v] {
            match st.index[w] {
                None => {
                    visit(w, graph, st);
                    st.low[v] = st.low[v].min(st.low[w]);
                }
                Some(iw) if st.on_stack[w] => st.low[v] = st.low[v].min(iw),
                _ => {}
            }
        }
        if Some(st.low[v]) == st.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().expect("tarjan stack underflow");
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            st.comps.push(comp);
        }
    }

    let n = graph.len();
    let mut st = State {
        next: 0,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.index[v].is_none() {
            visit(v, graph, &mut st);
        }
    }
    st.comps
}

/// Components in topological order of the condensation (sources first),
/// ties broken by the smallest original index.
pub fn ordered_components(graph: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let comps = strongly_connected_components(graph);
    let mut comp_of = vec![0; graph.len()];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    let k = comps.len();
    let mut succ = vec![Vec::new(); k];
    let mut indegree = vec![0usize; k];
    for (v, targets) in graph.iter().enumerate() {
        for &w in targets {
            let (a, b) = (comp_of[v], comp_of[w]);
            if a != b && !succ[a].contains(&b) {
                succ[a].push(b);
                indegree[b] += 1;
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<(usize, usize)>> = (0..k)
        .filter(|&c| indegree[c] == 0)
        .map(|c| Reverse((comps[c][0], c)))
        .collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse((_, c))) = ready.pop() {
        order.push(c);
        for &b in &succ[c] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.push(Reverse((comps[b][0], b)));
            }
        }
    }
    order.into_iter().map(|c| comps[c].clone()).collect()
}

/// True when the support digraph is strongly connected.
///
/// A 1x1 zero matrix is reported reducible.
pub fn is_irreducible<T: Scalar>(m: &Matrix<T>) -> Result<bool, MatrixError> {
    if m.dim() == 0 {
        return Err(MatrixError::Empty);
    }
    m.check_nonnegative()?;
    if m.dim() == 1 {
        return Ok(m.get(0, 0).is_positive());
    }
    Ok(strongly_connected_components(&m.support_graph()).len() == 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusBlock {
    /// Original indices, ascending.
    pub indices: Vec<usize>,
    pub irreducible: bool,
    pub spectral_radius: SpectralRadius,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusForm {
    /// `permutation[k]` is the original index placed at position `k`.
    pub permutation: Vec<usize>,
    pub blocks: Vec<FrobeniusBlock>,
    /// `max_j λ(A_jj)`.
    pub spectral_radius: SpectralRadius,
}

impl FrobeniusForm {
    /// Block containing original index `i`.
    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.indices.contains(&i))
    }

    pub fn permuted<T: Scalar>(&self, m: &Matrix<T>) -> Matrix<T> {
        m.permuted(&self.permutation)
    }
}

pub fn frobenius_normal_form<T: Scalar>(m: &Matrix<T>) -> Result<FrobeniusForm, MatrixError> {
    frobenius_normal_form_with(m, &SpectralOptions::default())
}

pub fn frobenius_normal_form_with<T: Scalar>(
    m: &Matrix<T>,
    opts: &SpectralOptions,
) -> Result<FrobeniusForm, MatrixError> {
    if m.dim() == 0 {
        return Err(MatrixError::Empty);
    }
    m.check_nonnegative()?;
    let comps = ordered_components(&m.support_graph());
    let mut blocks = Vec::with_capacity(comps.len());
    for indices in comps {
        let sub = m.principal_submatrix(&indices);
        let irreducible = indices.len() > 1 || sub.get(0, 0).is_positive();
        let spectral_radius = block_radius(&sub, opts)?;
        blocks.push(FrobeniusBlock {
            indices,
            irreducible,
            spectral_radius,
        });
    }
    let spectral_radius = SpectralRadius::max_of(blocks.iter().map(|b| &b.spectral_radius));
    let permutation = blocks.iter().flat_map(|b| b.indices.iter().copied()).collect();
    Ok(FrobeniusForm {
        permutation,
        blocks,
        spectral_radius,
    })
}
