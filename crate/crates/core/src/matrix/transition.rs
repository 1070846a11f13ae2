//! Transition matrices of multicurves and the obstruction verdict.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::dense::Matrix;
use super::frobenius::{frobenius_normal_form, FrobeniusForm};
use super::spectral::{
    beta_over_family, leading_eigenvector, smallest_halving_power, spectral_radius, Beta, Eigenvector,
    SpectralRadius,
};
use crate::covering::{CoveringSpec, CurveId};
use crate::error::{MatrixError, SpecError};
use crate::scalar::format_rational;
use crate::{ratio, Rational};

/// `A_Γ` together with its curve basis.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    pub basis: Vec<CurveId>,
    pub entries: Matrix<Rational>,
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, id: &CurveId) -> Option<usize> {
        self.basis.iter().position(|c| c == id)
    }

    /// Principal submatrix on `ids`, in the given order.
    pub fn restrict(&self, ids: &[CurveId]) -> TransitionMatrix {
        let idx: Vec<usize> = ids.iter().filter_map(|c| self.index_of(c)).collect();
        TransitionMatrix {
            basis: idx.iter().map(|&i| self.basis[i].clone()).collect(),
            entries: self.entries.principal_submatrix(&idx),
        }
    }

    pub fn spectral_radius(&self) -> Result<SpectralRadius, MatrixError> {
        if self.basis.is_empty() {
            return Ok(SpectralRadius::max_of([]));
        }
        spectral_radius(&self.entries)
    }
}

impl Serialize for TransitionMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            basis: &'a [CurveId],
            entries: Vec<Vec<String>>,
        }
        Repr {
            basis: &self.basis,
            entries: self
                .entries
                .rows()
                .take(self.basis.len())
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
        }
        .serialize(s)
    }
}

/// Entry `(i, j)` is `Σ_α 1/d_{i,j,α}` over the components of `f^{-1}(γ_j)`
/// homotopic to `γ_i`.
pub fn build_transition_matrix(spec: &CoveringSpec, gamma: &[CurveId]) -> Result<TransitionMatrix, SpecError> {
    let mut seen = BTreeSet::new();
    for id in gamma {
        if !seen.insert(id) {
            return Err(SpecError::DuplicateCurve(id.clone()));
        }
    }
    let n = gamma.len();
    let mut m = Matrix::<Rational>::zeros(n);
    for (j, id) in gamma.iter().enumerate() {
        let comps = spec.components(id)?;
        let mut sum = 0;
        for c in comps {
            if c.degree == 0 || c.degree > spec.degree {
                return Err(SpecError::BadComponentDegree {
                    curve: id.clone(),
                    degree: c.degree,
                });
            }
            sum += c.degree;
            if let Some(t) = c.target.curve() {
                if spec.curve(t).is_none() {
                    return Err(SpecError::UnknownCurve(t.clone()));
                }
                if let Some(i) = gamma.iter().position(|g| g == t) {
                    let v = m.get(i, j) + ratio(1, c.degree as i64);
                    m.set(i, j, v);
                }
            }
        }
        if sum != spec.degree {
            return Err(SpecError::DegreeSum {
                curve: id.clone(),
                sum,
                degree: spec.degree,
            });
        }
    }
    Ok(TransitionMatrix {
        basis: gamma.to_vec(),
        entries: m,
    })
}

/// First curve of `gamma` with a non-peripheral lift outside `gamma`.
pub fn first_unstable(spec: &CoveringSpec, gamma: &[CurveId]) -> Result<Option<CurveId>, SpecError> {
    for id in gamma {
        if spec.lifts(id)?.any(|t| !gamma.contains(t)) {
            return Ok(Some(id.clone()));
        }
    }
    Ok(None)
}

pub fn is_f_stable(spec: &CoveringSpec, gamma: &[CurveId]) -> Result<bool, SpecError> {
    Ok(first_unstable(spec, gamma)?.is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Depth {
    Finite(usize),
    Infinite,
}

impl Depth {
    pub fn is_finite(&self) -> bool {
        matches!(self, Depth::Finite(_))
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(k) => write!(f, "{k}"),
            Depth::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Depth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Depth::Finite(k) => s.serialize_u64(*k as u64),
            Depth::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DepthDecomposition {
    pub matrix: TransitionMatrix,
    /// Depth of each basis curve, in basis order.
    pub depths: Vec<(CurveId, Depth)>,
    pub gamma_ob: Vec<CurveId>,
    pub gamma_0: Vec<CurveId>,
    pub gamma_inf: Vec<CurveId>,
    /// Indices refer to `matrix.basis`.
    pub frobenius: FrobeniusForm,
    pub lambda: SpectralRadius,
    pub lambda_0: SpectralRadius,
    pub lambda_inf: SpectralRadius,
    pub max_depth: Option<usize>,
}

impl DepthDecomposition {
    pub fn depth(&self, id: &CurveId) -> Option<Depth> {
        self.depths.iter().find(|(c, _)| c == id).map(|(_, d)| *d)
    }

    /// Basis order `Γ∞` then `Γ₀`, in which `A_Γ` is block lower-triangular.
    pub fn block_order(&self) -> Vec<CurveId> {
        self.gamma_inf.iter().chain(&self.gamma_0).cloned().collect()
    }

    pub fn a_0(&self) -> TransitionMatrix {
        self.matrix.restrict(&self.gamma_0)
    }

    pub fn a_inf(&self) -> TransitionMatrix {
        self.matrix.restrict(&self.gamma_inf)
    }
}

/// Splits an f-stable multicurve into finite and infinite depth parts.
pub fn depth_decomposition(spec: &CoveringSpec, gamma: &[CurveId]) -> Result<DepthDecomposition, MatrixError> {
    if gamma.is_empty() {
        return Err(MatrixError::Empty);
    }
    if let Some(bad) = first_unstable(spec, gamma)? {
        return Err(MatrixError::NotFStable(bad));
    }
    let matrix = build_transition_matrix(spec, gamma)?;
    let frobenius = frobenius_normal_form(&matrix.entries)?;
    let n = gamma.len();

    let mut depth = vec![Depth::Infinite; n];
    let mut queue = VecDeque::new();
    let mut ob = vec![false; n];
    for block in &frobenius.blocks {
        if block.spectral_radius.at_least_one() {
            for &i in &block.indices {
                ob[i] = true;
                depth[i] = Depth::Finite(0);
                queue.push_back(i);
            }
        }
    }
    let graph = matrix.entries.support_graph();
    while let Some(j) = queue.pop_front() {
        let Depth::Finite(k) = depth[j] else { unreachable!() };
        for &i in &graph[j] {
            if depth[i] == Depth::Infinite {
                depth[i] = Depth::Finite(k + 1);
                queue.push_back(i);
            }
        }
    }

    let pick = |keep: &dyn Fn(usize) -> bool| -> Vec<CurveId> {
        (0..n).filter(|&i| keep(i)).map(|i| gamma[i].clone()).collect()
    };
    let gamma_ob = pick(&|i| ob[i]);
    let gamma_0 = pick(&|i| depth[i].is_finite());
    let gamma_inf = pick(&|i| !depth[i].is_finite());
    let lambda = frobenius.spectral_radius.clone();
    let lambda_0 = matrix.restrict(&gamma_0).spectral_radius()?;
    let lambda_inf = matrix.restrict(&gamma_inf).spectral_radius()?;
    let max_depth = depth
        .iter()
        .filter_map(|d| match d {
            Depth::Finite(k) => Some(*k),
            Depth::Infinite => None,
        })
        .max();
    Ok(DepthDecomposition {
        depths: gamma.iter().cloned().zip(depth).collect(),
        matrix,
        gamma_ob,
        gamma_0,
        gamma_inf,
        frobenius,
        lambda,
        lambda_0,
        lambda_inf,
        max_depth,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PerronBlock {
    pub curves: Vec<CurveId>,
    pub eigenvector: Eigenvector,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionVerdict {
    pub basis: Vec<CurveId>,
    pub lambda: SpectralRadius,
    pub f_stable: bool,
    pub is_obstruction: bool,
    pub decomposition: Option<DepthDecomposition>,
    /// Least `m` with `‖A_{Γ∞}^m‖ < 1/2`, when `Γ∞` is non-empty.
    pub halving_power: Option<usize>,
    /// Perron vector of the irreducible block attaining `λ`.
    pub perron: Option<PerronBlock>,
}

pub const HALVING_CAP: usize = 10_000;

pub fn obstruction_verdict(spec: &CoveringSpec, gamma: &[CurveId]) -> Result<ObstructionVerdict, MatrixError> {
    let matrix = build_transition_matrix(spec, gamma)?;
    let f_stable = is_f_stable(spec, gamma)?;
    if gamma.is_empty() {
        return Ok(ObstructionVerdict {
            basis: vec![],
            lambda: matrix.spectral_radius()?,
            f_stable,
            is_obstruction: false,
            decomposition: None,
            halving_power: None,
            perron: None,
        });
    }
    let frobenius = frobenius_normal_form(&matrix.entries)?;
    let lambda = frobenius.spectral_radius.clone();
    let is_obstruction = f_stable && lambda.at_least_one();
    let decomposition = if f_stable {
        Some(depth_decomposition(spec, gamma)?)
    } else {
        None
    };
    let halving_power = match &decomposition {
        Some(d) if !d.gamma_inf.is_empty() => Some(smallest_halving_power(&d.a_inf().entries, HALVING_CAP)?),
        _ => None,
    };
    let perron = frobenius
        .blocks
        .iter()
        .filter(|b| b.irreducible)
        .max_by(|a, b| a.spectral_radius.value.total_cmp(&b.spectral_radius.value))
        .map(|b| -> Result<PerronBlock, MatrixError> {
            Ok(PerronBlock {
                curves: b.indices.iter().map(|&i| gamma[i].clone()).collect(),
                eigenvector: leading_eigenvector(&matrix.entries.principal_submatrix(&b.indices))?,
            })
        })
        .transpose()?;
    Ok(ObstructionVerdict {
        basis: gamma.to_vec(),
        lambda,
        f_stable,
        is_obstruction,
        decomposition,
        halving_power,
        perron,
    })
}

/// Quantities of the full curve universe that feed the constants of the
/// iteration: `β` over irreducible blocks with `λ >= 1`, the halving power
/// `m` of `A_{Γ∞}` and the largest finite depth `M`.
#[derive(Clone, Debug, Serialize)]
pub struct UniverseSummary {
    pub beta: Beta,
    pub m: usize,
    pub max_depth: usize,
}

pub fn universe_summary(spec: &CoveringSpec) -> Result<UniverseSummary, MatrixError> {
    let universe = spec.universe();
    let fallback = UniverseSummary {
        beta: Beta {
            value: 1.0,
            exact: Some(ratio(1, 1)),
        },
        m: 1,
        max_depth: 0,
    };
    if universe.is_empty() || !is_f_stable(spec, &universe)? {
        return Ok(fallback);
    }
    let d = depth_decomposition(spec, &universe)?;
    let family: Vec<Matrix<Rational>> = d
        .frobenius
        .blocks
        .iter()
        .filter(|b| b.irreducible && b.spectral_radius.at_least_one())
        .map(|b| d.matrix.entries.principal_submatrix(&b.indices))
        .collect();
    let beta = if family.is_empty() {
        fallback.beta
    } else {
        beta_over_family(&family)?
    };
    let m = if d.gamma_inf.is_empty() {
        1
    } else {
        smallest_halving_power(&d.a_inf().entries, HALVING_CAP)?
    };
    Ok(UniverseSummary {
        beta,
        m,
        max_depth: d.max_depth.unwrap_or(0),
    })
}

/// Whether every entry of `m` is `Σ 1/d_α` for component degrees with
/// `Σ d_α <= d`.
pub fn entries_are_reciprocal_sums(m: &Matrix<Rational>, degree: u32) -> bool {
    fn representable(x: &Rational, budget: u32, smallest: u32) -> bool {
        if x.is_zero() {
            return true;
        }
        (smallest..=budget).any(|k| {
            let r = ratio(1, k as i64);
            &r <= x && representable(&(x - &r), budget - k, k)
        })
    }
    m.entries().iter().all(|x| representable(x, degree, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::canned;

    fn ids(names: &[&str]) -> Vec<CurveId> {
        names.iter().map(|&n| n.into()).collect()
    }

    #[test]
    fn canned_matrices() {
        let levy = canned("levy_cycle").unwrap();
        let a = build_transition_matrix(&levy, &ids(&["gamma1"])).unwrap();
        assert_eq!(a.entries, Matrix::from_ratios(&[&[(1, 1)]]).unwrap());
        let swap = canned("swap").unwrap();
        let a = build_transition_matrix(&swap, &ids(&["gamma1", "gamma2"])).unwrap();
        assert_eq!(a.entries, Matrix::from_ratios(&[&[(0, 1), (1, 2)], &[(1, 2), (0, 1)]]).unwrap());
        let doubling = canned("doubling").unwrap();
        let a = build_transition_matrix(&doubling, &ids(&["gamma1"])).unwrap();
        assert_eq!(a.entries, Matrix::from_ratios(&[&[(2, 1)]]).unwrap());
    }

    #[test]
    fn unknown_and_duplicate_curves() {
        let levy = canned("levy_cycle").unwrap();
        assert_eq!(
            build_transition_matrix(&levy, &ids(&["nope"])),
            Err(SpecError::UnknownCurve("nope".into()))
        );
        assert_eq!(
            build_transition_matrix(&levy, &ids(&["gamma1", "gamma1"])),
            Err(SpecError::DuplicateCurve("gamma1".into()))
        );
    }

    #[test]
    fn stability() {
        assert!(is_f_stable(&canned("levy_cycle").unwrap(), &ids(&["gamma1"])).unwrap());
        assert!(!is_f_stable(&canned("swap").unwrap(), &ids(&["gamma1"])).unwrap());
    }

    #[test]
    fn two_block_depths() {
        let spec = canned("two_block").unwrap();
        let d = depth_decomposition(&spec, &spec.universe()).unwrap();
        assert_eq!(d.depth(&"g1".into()), Some(Depth::Finite(0)));
        assert_eq!(d.depth(&"g2".into()), Some(Depth::Finite(1)));
        assert_eq!(d.depth(&"g3".into()), Some(Depth::Infinite));
        assert_eq!(d.gamma_inf, ids(&["g3"]));
        assert_eq!(d.lambda_inf.exact, Some(ratio(1, 2)));
        assert_eq!(d.lambda_0.exact, Some(ratio(1, 1)));
        assert_eq!(d.block_order(), ids(&["g3", "g1", "g2"]));
    }

    #[test]
    fn unstable_decomposition_is_rejected() {
        let spec = canned("swap").unwrap();
        assert_eq!(
            depth_decomposition(&spec, &ids(&["gamma1"])).unwrap_err(),
            MatrixError::NotFStable("gamma1".into())
        );
    }

    #[test]
    fn verdicts() {
        let v = obstruction_verdict(&canned("levy_cycle").unwrap(), &ids(&["gamma1"])).unwrap();
        assert!(v.is_obstruction);
        assert_eq!(v.lambda.exact, Some(ratio(1, 1)));
        let spec = canned("swap").unwrap();
        let v = obstruction_verdict(&spec, &spec.universe()).unwrap();
        assert!(!v.is_obstruction);
        assert_eq!(v.lambda.exact, Some(ratio(1, 2)));
        let v = obstruction_verdict(&canned("doubling").unwrap(), &ids(&["gamma1"])).unwrap();
        assert_eq!(v.lambda.exact, Some(ratio(2, 1)));
        assert!(v.is_obstruction);
    }

    #[test]
    fn reciprocal_sums() {
        let m = Matrix::from_ratios(&[&[(3, 2), (0, 1)], &[(1, 3), (2, 1)]]).unwrap();
        assert!(entries_are_reciprocal_sums(&m, 3));
        assert!(!entries_are_reciprocal_sums(&m, 2));
    }
}
