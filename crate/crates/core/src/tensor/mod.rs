//! Dense tensors, a seeded tensor store, and diagram evaluation.
//!
//! Every diagram evaluates to a tensor whose axes are its input ports then
//! its output ports. Dual wires share the dimension of their space.

mod eval;
mod oracle;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{Space, WireType};

pub use eval::eval_diagram;
pub use oracle::{closed_form_parasitic_adjunct, oracle_cost, oracle_eval, ORACLE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("no tensor for generator `{0}`")]
    MissingGenerator(String),
    #[error("tensor `{name}` has shape {found}, expected {expected}")]
    ShapeMismatch {
        name: String,
        expected: String,
        found: String,
    },
    #[error("no dimension for space {0}")]
    MissingDim(String),
    #[error("data length {found} does not match shape size {expected}")]
    DataLength { expected: usize, found: usize },
    #[error("tensor entry {0} is not finite")]
    NonFinite(usize),
    #[error("exhaustive evaluation needs {0} terms, above the limit")]
    TooExpensive(u128),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    pub shape: Vec<(String, usize)>,
    pub data: Vec<f64>,
}

pub(crate) fn abs(x: f64) -> f64 {
    if x < 0.0 {
        -x
    } else {
        x
    }
}

impl Tensor {
    pub fn new(shape: Vec<(String, usize)>, data: Vec<f64>) -> Result<Tensor, TensorError> {
        let expected = shape.iter().map(|(_, d)| *d).product::<usize>();
        if data.len() != expected {
            return Err(TensorError::DataLength {
                expected,
                found: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|x| !x.is_finite()) {
            return Err(TensorError::NonFinite(i));
        }
        Ok(Tensor { shape, data })
    }

    pub fn scalar(v: f64) -> Tensor {
        Tensor {
            shape: Vec::new(),
            data: alloc::vec![v],
        }
    }

    pub fn zeros(shape: Vec<(String, usize)>) -> Tensor {
        let n = shape.iter().map(|(_, d)| *d).product();
        Tensor {
            shape,
            data: alloc::vec![0.0; n],
        }
    }

    /// The identity matrix on a space of dimension `dim`.
    pub fn identity(space: &str, dim: usize) -> Tensor {
        let mut t = Tensor::zeros(alloc::vec![(space.to_string(), dim), (space.to_string(), dim)]);
        for i in 0..dim {
            t.data[i * dim + i] = 1.0;
        }
        t
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.shape.iter().map(|(_, d)| *d).collect()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        let mut off = 0;
        for (k, &i) in idx.iter().enumerate() {
            off = off * self.shape[k].1 + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let off = self.offset(idx);
        self.data[off] = v;
    }

    /// `self ⊗ other`, axes of `self` first.
    pub fn outer(&self, other: &Tensor) -> Tensor {
        let mut shape = self.shape.clone();
        shape.extend(other.shape.iter().cloned());
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Tensor { shape, data }
    }

    /// Axis `k` of the result is axis `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        let shape: Vec<(String, usize)> = perm.iter().map(|&p| self.shape[p].clone()).collect();
        let mut out = Tensor::zeros(shape);
        let dims = self.dims();
        let mut idx = alloc::vec![0usize; dims.len()];
        let mut tgt = alloc::vec![0usize; dims.len()];
        for &v in &self.data {
            for (k, &p) in perm.iter().enumerate() {
                tgt[k] = idx[p];
            }
            out.set(&tgt, v);
            odometer(&mut idx, &dims);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| if abs(*x) > m { abs(*x) } else { m })
    }
}

/// Advances a row-major multi-index; returns false after the last one.
pub(crate) fn odometer(idx: &mut [usize], dims: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dims[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// `max|a - b| / max|b|`, or the absolute difference when `b` is zero.
pub fn rel_error(a: &Tensor, b: &Tensor) -> f64 {
    if a.data.len() != b.data.len() {
        return f64::INFINITY;
    }
    let diff = a
        .data
        .iter()
        .zip(&b.data)
        .fold(0.0, |m, (x, y)| if abs(x - y) > m { abs(x - y) } else { m });
    let scale = b.max_abs();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (s, d)) in self.shape.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}:{d}")?;
        }
        f.write_str("] ")?;
        write!(f, "{:?}", self.data)
    }
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Named tensors plus the dimension of every space.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TensorStore {
    pub dims: BTreeMap<String, usize>,
    pub seed: u64,
    pub tensors: BTreeMap<String, Tensor>,
    /// Fill missing tensors from the seed instead of failing.
    pub generate: bool,
}

impl TensorStore {
    /// An empty generating store.
    pub fn seeded(dims: &[(&str, usize)], seed: u64) -> TensorStore {
        TensorStore {
            dims: dims.iter().map(|(s, d)| (s.to_string(), *d)).collect(),
            seed,
            tensors: BTreeMap::new(),
            generate: true,
        }
    }

    pub fn dim(&self, space: &Space) -> Result<usize, TensorError> {
        self.dims
            .get(space.name())
            .copied()
            .ok_or_else(|| TensorError::MissingDim(space.name().to_string()))
    }

    pub fn shape_of(&self, t: &WireType) -> Result<Vec<(String, usize)>, TensorError> {
        t.0.iter()
            .map(|w| Ok((w.space.name().to_string(), self.dim(&w.space)?)))
            .collect()
    }

    /// Uniform `[0, 1)` entries determined by the seed and `name`.
    pub fn random(&self, name: &str, shape: Vec<(String, usize)>) -> Tensor {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(name));
        let n: usize = shape.iter().map(|(_, d)| *d).product();
        let data = (0..n).map(|_| rng.gen::<f64>()).collect();
        Tensor { shape, data }
    }

    /// Materialises every missing tensor of the given generators.
    pub fn fill(&mut self, generators: &[(String, Vec<(String, usize)>)]) {
        for (name, shape) in generators {
            if !self.tensors.contains_key(name) {
                let t = self.random(name, shape.clone());
                self.tensors.insert(name.clone(), t);
            }
        }
    }

    /// The tensor for a generator with the given leg shape.
    pub fn lookup(&self, name: &str, shape: &[(String, usize)]) -> Result<Tensor, TensorError> {
        match self.tensors.get(name) {
            Some(t) => {
                let same = t.shape.len() == shape.len()
                    && t.shape.iter().zip(shape).all(|(a, b)| a.1 == b.1 && a.0 == b.0);
                if same {
                    Ok(t.clone())
                } else {
                    Err(TensorError::ShapeMismatch {
                        name: name.to_string(),
                        expected: show_shape(shape),
                        found: show_shape(&t.shape),
                    })
                }
            }
            None if self.generate => Ok(self.random(name, shape.to_vec())),
            None => Err(TensorError::MissingGenerator(name.to_string())),
        }
    }
}

pub(crate) fn show_shape(shape: &[(String, usize)]) -> String {
    let parts: Vec<String> = shape.iter().map(|(s, d)| alloc::format!("{s}:{d}")).collect();
    alloc::format!("[{}]", parts.join(", "))
}
