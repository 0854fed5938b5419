//! Generalized Coxeter-Dynkin diagrams and the symmetric Gram forms they encode.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::linalg::{dot, signature, IMat, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    Single,
    DottedSingle,
    Double,
    DottedDouble,
}

impl EdgeKind {
    /// Off-diagonal Gram entry encoded by the edge.
    pub fn gram_entry(self) -> i64 {
        match self {
            EdgeKind::Single => -1,
            EdgeKind::DottedSingle => 1,
            EdgeKind::Double => -2,
            EdgeKind::DottedDouble => 2,
        }
    }

    pub fn from_entry(v: i64) -> Option<EdgeKind> {
        match v {
            -1 => Some(EdgeKind::Single),
            1 => Some(EdgeKind::DottedSingle),
            -2 => Some(EdgeKind::Double),
            2 => Some(EdgeKind::DottedDouble),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize, EdgeKind)>,
}

impl Diagram {
    pub fn validate(&self) -> Result<()> {
        let labels: HashSet<&String> = self.vertices.iter().collect();
        if labels.len() != self.vertices.len() {
            return Err(Error::MalformedDiagram("duplicate vertex label".into()));
        }
        let mut seen = HashSet::new();
        for &(i, j, _) in &self.edges {
            if i >= self.vertices.len() || j >= self.vertices.len() {
                return Err(Error::MalformedDiagram(format!(
                    "edge ({i},{j}) out of range"
                )));
            }
            if i == j {
                return Err(Error::MalformedDiagram(format!("self-edge at {i}")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::MalformedDiagram(format!("duplicate edge ({i},{j})")));
            }
        }
        Ok(())
    }

    /// Reads the diagram off a Gram matrix with twos on the diagonal.
    pub fn from_gram(labels: Vec<String>, g: &IMat) -> Result<Diagram> {
        let n = g.rows();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = g.get(i, j);
                if v == 0 {
                    continue;
                }
                let kind = EdgeKind::from_entry(v).ok_or_else(|| {
                    Error::MalformedDiagram(format!("entry {v} has no edge kind"))
                })?;
                edges.push((i, j, kind));
            }
        }
        Ok(Diagram {
            vertices: labels,
            edges,
        })
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(i, j, _)| {
                if i == v {
                    Some(j)
                } else if j == v {
                    Some(i)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Dynkin diagram of a finite simply-laced type in Bourbaki numbering.
    pub fn dynkin(family: char, n: usize) -> Result<Diagram> {
        let path = |k: usize| (0..k.saturating_sub(1)).map(|i| (i, i + 1, EdgeKind::Single));
        let edges: Vec<(usize, usize, EdgeKind)> = match (family, n) {
            ('A', n) if n >= 1 => path(n).collect(),
            ('D', n) if n >= 4 => {
                let mut e: Vec<_> = path(n - 1).collect();
                e.push((n - 3, n - 1, EdgeKind::Single));
                e
            }
            ('E', n) if (6..=8).contains(&n) => {
                // 1-3-4-...-n with 2 attached to 4
                let mut e = vec![(0, 2, EdgeKind::Single), (1, 3, EdgeKind::Single)];
                for i in 2..n - 1 {
                    e.push((i, i + 1, EdgeKind::Single));
                }
                e
            }
            _ => return Err(Error::UnsupportedType(format!("{family}{n}"))),
        };
        Ok(Diagram {
            vertices: (1..=n).map(|i| i.to_string()).collect(),
            edges,
        })
    }

    /// Generalized diagram of a tubular type: a star with centre `1`, arms of
    /// lengths `weights[i] - 1` labelled `(i,j)`, and a second centre `1*`
    /// tied to `1` by a dotted double edge and to the first vertex of each arm.
    pub fn tubular_star(weights: &[usize]) -> Diagram {
        let mut vertices = vec!["1".to_string(), "1*".to_string()];
        let mut edges = vec![(0, 1, EdgeKind::DottedDouble)];
        for (i, &p) in weights.iter().enumerate() {
            let mut prev: Option<usize> = None;
            for j in 1..p {
                let idx = vertices.len();
                vertices.push(format!("({},{})", i + 1, j));
                match prev {
                    None => {
                        edges.push((0, idx, EdgeKind::Single));
                        edges.push((1, idx, EdgeKind::Single));
                    }
                    Some(q) => edges.push((q, idx, EdgeKind::Single)),
                }
                prev = Some(idx);
            }
        }
        Diagram { vertices, edges }
    }

    /// Built-in diagrams by name: `A3`, `D4`, `E8` (finite) and
    /// `D4.1.1` .. `E8.1.1` (tubular).
    pub fn named(name: &str) -> Result<Diagram> {
        let weights: Option<&[usize]> = match name {
            "D4.1.1" => Some(&[2, 2, 2, 2]),
            "E6.1.1" => Some(&[3, 3, 3]),
            "E7.1.1" => Some(&[4, 4, 2]),
            "E8.1.1" => Some(&[6, 3, 2]),
            _ => None,
        };
        if let Some(w) = weights {
            return Ok(Diagram::tubular_star(w));
        }
        let mut chars = name.chars();
        let family = chars
            .next()
            .ok_or_else(|| Error::UnsupportedType(name.into()))?;
        let n: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnsupportedType(name.into()))?;
        Diagram::dynkin(family, n)
    }
}

/// Symmetric integer matrix with twos on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GramForm {
    matrix: IMat,
}

impl GramForm {
    pub fn new(matrix: IMat) -> Result<GramForm> {
        if !matrix.is_square() {
            return Err(Error::MalformedDiagram("Gram matrix not square".into()));
        }
        let n = matrix.rows();
        for i in 0..n {
            if matrix.get(i, i) != 2 {
                return Err(Error::MalformedDiagram(format!(
                    "diagonal entry {i} is not 2"
                )));
            }
            for j in 0..n {
                let v = matrix.get(i, j);
                if v != matrix.get(j, i) {
                    return Err(Error::MalformedDiagram("Gram matrix not symmetric".into()));
                }
                if i != j && v.abs() > 2 {
                    return Err(Error::MalformedDiagram(format!("entry ({i},{j}) = {v}")));
                }
            }
        }
        Ok(GramForm { matrix })
    }

    /// `finite` padded with `k` radical directions, i.e. the form on
    /// `(alpha_1..alpha_n, a, b)`. The diagonal is zero on the radical, which
    /// is the one place the twos-on-the-diagonal rule does not apply.
    pub fn radical_extension(finite: &IMat, k: usize) -> Result<GramForm> {
        let base = GramForm::new(finite.clone())?;
        let n = base.dim();
        let mut m = IMat::zeros(n + k, n + k);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, finite.get(i, j));
            }
        }
        Ok(GramForm { matrix: m })
    }

    pub fn matrix(&self) -> &IMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    fn check(&self, x: &LatticeVector) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(())
    }

    pub fn bilinear(&self, x: &LatticeVector, y: &LatticeVector) -> Result<i64> {
        self.check(x)?;
        self.check(y)?;
        Ok(dot(&x.0, &self.matrix.mul_vec(&y.0)))
    }

    /// `x - (x|root) root`; the root must have norm 2.
    pub fn reflect(&self, root: &LatticeVector, x: &LatticeVector) -> Result<LatticeVector> {
        let norm = self.bilinear(root, root)?;
        if norm != 2 {
            return Err(Error::NotARoot(norm));
        }
        let k = self.bilinear(x, root)?;
        Ok(x.sub(&root.scale(k)))
    }

    pub fn signature(&self) -> Signature {
        signature(&self.matrix)
    }
}

pub fn gram_from_diagram(d: &Diagram) -> Result<GramForm> {
    d.validate()?;
    let n = d.vertices.len();
    let mut m = IMat::zeros(n, n);
    for i in 0..n {
        m.set(i, i, 2);
    }
    for &(i, j, kind) in &d.edges {
        m.set(i, j, kind.gram_entry());
        m.set(j, i, kind.gram_entry());
    }
    GramForm::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let d = Diagram {
            vertices: vec!["x".into()],
            edges: vec![],
        };
        assert_eq!(
            gram_from_diagram(&d).unwrap().matrix().to_rows(),
            vec![vec![2]]
        );
    }

    #[test]
    fn a2_path() {
        let g = gram_from_diagram(&Diagram::dynkin('A', 2).unwrap()).unwrap();
        assert_eq!(g.matrix().to_rows(), vec![vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn duplicate_edge_rejected() {
        let d = Diagram {
            vertices: vec!["x".into(), "y".into()],
            edges: vec![(0, 1, EdgeKind::Single), (1, 0, EdgeKind::Double)],
        };
        assert!(matches!(
            gram_from_diagram(&d),
            Err(Error::MalformedDiagram(_))
        ));
    }

    #[test]
    fn tubular_centre_pair_is_dotted_double() {
        let d = Diagram::named("D4.1.1").unwrap();
        let g = gram_from_diagram(&d).unwrap();
        let one = d.vertices.iter().position(|v| v == "1").unwrap();
        let star = d.vertices.iter().position(|v| v == "1*").unwrap();
        assert_eq!(g.matrix().get(one, star), 2);
        assert_eq!(d.vertices.len(), 6);
    }

    #[test]
    fn json_shape() {
        let d = Diagram::dynkin('A', 2).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"vertices":["1","2"],"edges":[[0,1,"single"]]}"#);
    }

    #[test]
    fn reflection_basics() {
        let g = gram_from_diagram(&Diagram::dynkin('A', 2).unwrap()).unwrap();
        let a = LatticeVector(vec![1, 0]);
        assert_eq!(g.reflect(&a, &a).unwrap(), a.neg());
        assert!(matches!(
            g.reflect(&LatticeVector(vec![1, 1, 0]), &a),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            g.reflect(&LatticeVector(vec![2, 0]), &a),
            Err(Error::NotARoot(8))
        ));
    }
}
