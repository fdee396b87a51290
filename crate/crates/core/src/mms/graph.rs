use serde::{Deserialize, Serialize};

use super::MmsError;
use crate::exactmath::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    /// Codimension of the blown-up centre `B_{i−1}`.
    pub codim: u32,
    /// Multiplicity of the fiber's strict transform along `B_{i−1}`.
    pub mu: u32,
    pub in_fiber: bool,
}

/// The blow-up DAG. Vertices are numbered from 1; the chain arrows
/// `i → i−1` are implicit and need not be listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct ResolutionGraph {
    vertices: Vec<Vertex>,
    /// `out[i]` lists `j < i` with `i → j`, 1-based, sorted.
    out: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<Vertex>,
    #[serde(default)]
    arrows: Vec<(usize, usize)>,
}

impl TryFrom<GraphJson> for ResolutionGraph {
    type Error = MmsError;

    fn try_from(g: GraphJson) -> Result<Self, Self::Error> {
        ResolutionGraph::new(g.vertices, &g.arrows)
    }
}

impl From<ResolutionGraph> for GraphJson {
    fn from(g: ResolutionGraph) -> Self {
        GraphJson {
            arrows: g.extra_arrows(),
            vertices: g.vertices,
        }
    }
}

impl ResolutionGraph {
    /// Validates the vertex data and the arrow list (each arrow `(i, j)`
    /// means `i → j` and needs `i > j`).
    pub fn new(vertices: Vec<Vertex>, arrows: &[(usize, usize)]) -> Result<Self, MmsError> {
        let k = vertices.len();
        if k == 0 {
            return Err(MmsError::Graph("graph has no vertices".into()));
        }
        for (idx, v) in vertices.iter().enumerate() {
            let i = idx + 1;
            if v.codim < 2 {
                return Err(MmsError::Graph(format!("vertex {i}: codimension {} < 2", v.codim)));
            }
            if idx > 0 && v.codim > vertices[idx - 1].codim {
                return Err(MmsError::Graph(format!("vertex {i}: codimension increases along the chain")));
            }
            if i == 1 {
                if !(1..=2).contains(&v.mu) {
                    return Err(MmsError::Graph("vertex 1: mu must be 1 or 2".into()));
                }
                if !v.in_fiber {
                    return Err(MmsError::Graph("vertex 1 must lie in the fiber".into()));
                }
            } else {
                if v.mu > 1 {
                    return Err(MmsError::Graph(format!("vertex {i}: mu must be 0 or 1")));
                }
                if (v.mu == 1) != v.in_fiber {
                    return Err(MmsError::Graph(format!("vertex {i}: mu = 0 exactly when the centre leaves the fiber")));
                }
                if v.in_fiber && !vertices[idx - 1].in_fiber {
                    return Err(MmsError::Graph(format!("vertex {i}: centres in the fiber must form a prefix")));
                }
            }
        }
        let mut out = vec![Vec::new(); k + 1];
        for i in 2..=k {
            out[i].push(i - 1);
        }
        for &(i, j) in arrows {
            if i <= j {
                return Err(MmsError::Graph(format!("arrow {i} -> {j} does not decrease the index")));
            }
            if i > k || j == 0 {
                return Err(MmsError::Graph(format!("arrow {i} -> {j} leaves the vertex range 1..{k}")));
            }
            if !out[i].contains(&j) {
                out[i].push(j);
            }
        }
        for o in &mut out {
            o.sort_unstable();
        }
        Ok(Self { vertices, out })
    }

    /// A chain with the given codimensions, `μ = (mu1, 1, …)` and every
    /// centre in the fiber.
    pub fn chain(codims: &[u32], mu1: u32) -> Result<Self, MmsError> {
        let vs = codims
            .iter()
            .enumerate()
            .map(|(i, &c)| Vertex {
                codim: c,
                mu: if i == 0 { mu1 } else { 1 },
                in_fiber: true,
            })
            .collect();
        Self::new(vs, &[])
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// 1-based.
    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i - 1]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn has_arrow(&self, i: usize, j: usize) -> bool {
        i < self.out.len() && self.out[i].contains(&j)
    }

    /// Targets of arrows leaving `i`.
    pub fn arrows_from(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    /// Sources of arrows entering `j`.
    pub fn arrows_into(&self, j: usize) -> Vec<usize> {
        (j + 1..=self.len()).filter(|&i| self.has_arrow(i, j)).collect()
    }

    /// Arrows that are not chain arrows.
    pub fn extra_arrows(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for i in 1..=self.len() {
            for &j in &self.out[i] {
                if j + 1 != i {
                    v.push((i, j));
                }
            }
        }
        v
    }

    pub fn delta(&self, i: usize) -> u32 {
        self.vertex(i).codim - 1
    }

    /// `N`: the last centre inside the fiber.
    pub fn n_fiber(&self) -> usize {
        self.vertices.iter().rposition(|v| v.in_fiber).map_or(0, |p| p + 1)
    }

    /// `L`: the last centre of codimension at least 3 (0 if none).
    pub fn l_top(&self) -> usize {
        self.vertices.iter().rposition(|v| v.codim >= 3).map_or(0, |p| p + 1)
    }

    /// `S`: the last centre of codimension at least 4 (0 if none).
    pub fn s_top(&self) -> usize {
        self.vertices.iter().rposition(|v| v.codim >= 4).map_or(0, |p| p + 1)
    }

    pub fn index_class(&self, i: usize) -> IndexClass {
        let v = self.vertex(i);
        match v.codim {
            c if c >= 4 => IndexClass::Small,
            3 if v.in_fiber => IndexClass::MiddlePlus,
            3 => IndexClass::MiddleMinus,
            _ => IndexClass::Upper,
        }
    }

    /// `p_i`: number of directed paths from vertex `K` to `i`.
    pub fn path_counts(&self) -> Result<Vec<u64>, MmsError> {
        let k = self.len();
        let mut p = vec![0u64; k + 1];
        p[k] = 1;
        for i in (1..=k).rev() {
            for &j in &self.out[i] {
                p[j] = p[j]
                    .checked_add(p[i])
                    .ok_or_else(|| MmsError::Graph("path count overflows u64".into()))?;
            }
        }
        Ok(p[1..].to_vec())
    }

    pub fn partition_sums(&self) -> Result<PartitionSums, MmsError> {
        let p = self.path_counts()?;
        let mut s = PartitionSums {
            n_fiber: self.n_fiber(),
            l_top: self.l_top(),
            s_top: self.s_top(),
            ..PartitionSums::default()
        };
        for i in 1..=self.len() {
            let pi = p[i - 1];
            match self.index_class(i) {
                IndexClass::Small => s.sigma_s += pi,
                IndexClass::MiddlePlus => s.sigma_m_plus += pi,
                IndexClass::MiddleMinus => s.sigma_m_minus += pi,
                IndexClass::Upper => s.sigma_u += pi,
            }
            if (2..=s.n_fiber.min(s.l_top)).contains(&i) {
                s.sigma_f += pi;
            }
        }
        s.sigma_l = s.sigma_s + s.sigma_m_plus + s.sigma_m_minus;
        Ok(s)
    }

    /// Noether–Fano in path form: `Σ p_i ν_i > n Σ p_i δ_i`.
    pub fn noether_fano(&self, nu: &[Rational], n: &Rational) -> Result<NoetherFano, MmsError> {
        if nu.len() != self.len() {
            return Err(MmsError::Data(format!("expected {} multiplicities, got {}", self.len(), nu.len())));
        }
        if nu.iter().any(|x| x < &Rational::from_integer(0.into())) {
            return Err(MmsError::Data("multiplicities must be nonnegative".into()));
        }
        let p = self.path_counts()?;
        let mut lhs = Rational::from_integer(0.into());
        let mut weight = 0u64;
        for (i, nu_i) in nu.iter().enumerate() {
            lhs += nu_i * Rational::from_integer(p[i].into());
            weight += p[i] * u64::from(self.delta(i + 1));
        }
        let rhs = n * Rational::from_integer(weight.into());
        let excess = &lhs - &rhs;
        Ok(NoetherFano {
            holds: excess > Rational::from_integer(0.into()),
            lhs,
            rhs,
            excess,
        })
    }

    /// `(n Σ p_i δ_i + e)² / Σ p_i`, the quadratic lower bound.
    pub fn quadratic_lower_bound(&self, n: &Rational, e: &Rational) -> Result<Rational, MmsError> {
        if e < &Rational::from_integer(0.into()) {
            return Err(MmsError::Data("e must be nonnegative".into()));
        }
        let p = self.path_counts()?;
        let weight: u64 = p.iter().enumerate().map(|(i, pi)| pi * u64::from(self.delta(i + 1))).sum();
        let total: u64 = p.iter().sum();
        let num = n * Rational::from_integer(weight.into()) + e;
        Ok(&num * &num / Rational::from_integer(total.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexClass {
    /// codim ≥ 4
    Small,
    /// codim 3, in the fiber
    MiddlePlus,
    /// codim 3, outside the fiber
    MiddleMinus,
    /// codim 2
    Upper,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSums {
    pub sigma_s: u64,
    pub sigma_m_plus: u64,
    pub sigma_m_minus: u64,
    pub sigma_u: u64,
    pub sigma_l: u64,
    pub sigma_f: u64,
    pub n_fiber: usize,
    pub l_top: usize,
    pub s_top: usize,
}

impl PartitionSums {
    pub fn sigma_m(&self) -> u64 {
        self.sigma_m_plus + self.sigma_m_minus
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoetherFano {
    pub holds: bool,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub lhs: Rational,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub rhs: Rational,
    /// `e = lhs − rhs`.
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub excess: Rational,
}
