//! Agent parameters: seven blocks stored in one flat buffer.
//!
//! Layout (row-major matrices), with `p` the embedding width:
//!
//! | block  | shape | role                    |
//! |--------|-------|-------------------------|
//! | theta1 | p     | node-state input        |
//! | theta2 | p×p   | neighbor aggregation    |
//! | theta3 | p×p   | edge-weight aggregation |
//! | theta4 | p     | edge-weight lift        |
//! | theta5 | 2p    | readout                 |
//! | theta6 | p×p   | global pooling head     |
//! | theta7 | p×p   | node head               |
//!
//! The flat order doubles as the model-file order and the coordinate order
//! used by finite-difference checks.

use crate::error::{Error, Result};
use crate::rng::Rng;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

const MODEL_HEADER: &str = "gtcut-model v1";

#[derive(Debug, Clone, PartialEq)]
pub struct AgentParams {
    p: usize,
    rounds: usize,
    data: Vec<f64>,
}

/// Gradients with the same layout as [`AgentParams`].
#[derive(Debug, Clone)]
pub struct AgentGrads {
    pub(crate) p: usize,
    pub(crate) data: Vec<f64>,
}

pub(crate) fn block_len(p: usize) -> usize {
    4 * p + 4 * p * p
}

impl AgentParams {
    /// Uniform init on `[−1/√p, +1/√p]`, deterministic in `seed`.
    pub fn init(p: usize, rounds: usize, seed: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::Config("embedding width must be ≥ 1".into()));
        }
        let scale = 1.0 / (p as f64).sqrt();
        let mut rng = Rng::from_seed(seed);
        let data = (0..block_len(p))
            .map(|_| (2.0 * rng.next_f64() - 1.0) * scale)
            .collect();
        Ok(AgentParams { p, rounds, data })
    }

    pub fn from_flat(p: usize, rounds: usize, data: Vec<f64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::Config("embedding width must be ≥ 1".into()));
        }
        if data.len() != block_len(p) {
            return Err(Error::InvalidInput(format!(
                "expected {} parameters for width {p}, got {}",
                block_len(p),
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite parameter {bad}")));
        }
        Ok(AgentParams { p, rounds, data })
    }

    pub fn width(&self) -> usize {
        self.p
    }

    /// Message-passing rounds (the `T` of the model file).
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn as_flat_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn coordinate_count(&self) -> usize {
        self.data.len()
    }

    fn o1(&self) -> usize {
        0
    }
    fn o2(&self) -> usize {
        self.p
    }
    fn o3(&self) -> usize {
        self.p + self.p * self.p
    }
    fn o4(&self) -> usize {
        self.p + 2 * self.p * self.p
    }
    fn o5(&self) -> usize {
        2 * self.p + 2 * self.p * self.p
    }
    fn o6(&self) -> usize {
        4 * self.p + 2 * self.p * self.p
    }
    fn o7(&self) -> usize {
        4 * self.p + 3 * self.p * self.p
    }

    pub fn theta1(&self) -> &[f64] {
        &self.data[self.o1()..self.o2()]
    }
    pub fn theta2(&self) -> &[f64] {
        &self.data[self.o2()..self.o3()]
    }
    pub fn theta3(&self) -> &[f64] {
        &self.data[self.o3()..self.o4()]
    }
    pub fn theta4(&self) -> &[f64] {
        &self.data[self.o4()..self.o5()]
    }
    pub fn theta5(&self) -> &[f64] {
        &self.data[self.o5()..self.o6()]
    }
    pub fn theta6(&self) -> &[f64] {
        &self.data[self.o6()..self.o7()]
    }
    pub fn theta7(&self) -> &[f64] {
        &self.data[self.o7()..]
    }

    /// One SGD step: `θ ← θ − lr·g`.
    pub fn gradient_step(&mut self, grads: &AgentGrads, lr: f64) {
        debug_assert_eq!(self.data.len(), grads.data.len());
        for (w, g) in self.data.iter_mut().zip(&grads.data) {
            *w -= lr * g;
        }
    }

    /// Writes the versioned text model format.
    pub fn save<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{MODEL_HEADER}")?;
        writeln!(out, "p {} T {}", self.p, self.rounds)?;
        for x in &self.data {
            writeln!(out, "{x}")?;
        }
        Ok(())
    }

    pub fn save_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.save(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load<R: Read>(source: R) -> Result<Self> {
        let mut lines = BufReader::new(source).lines();
        let header = lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::ModelLoad("empty model file".into()))?;
        if header.trim() != MODEL_HEADER {
            return Err(Error::ModelLoad(format!(
                "unsupported model version line `{header}` (expected `{MODEL_HEADER}`)"
            )));
        }
        let dims = lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::ModelLoad("missing dimension line".into()))?;
        let parts: Vec<&str> = dims.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "p" || parts[2] != "T" {
            return Err(Error::ModelLoad(format!("malformed dimension line `{dims}`")));
        }
        let p: usize = parts[1]
            .parse()
            .map_err(|_| Error::ModelLoad(format!("bad width `{}`", parts[1])))?;
        let rounds: usize = parts[3]
            .parse()
            .map_err(|_| Error::ModelLoad(format!("bad round count `{}`", parts[3])))?;
        if p == 0 {
            return Err(Error::ModelLoad("width must be ≥ 1".into()));
        }

        let expected = block_len(p);
        let mut data = Vec::with_capacity(expected);
        for line in lines {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let x: f64 = t
                .parse()
                .map_err(|_| Error::ModelLoad(format!("bad parameter value `{t}`")))?;
            if !x.is_finite() {
                return Err(Error::ModelLoad(format!("non-finite parameter `{t}`")));
            }
            data.push(x);
        }
        if data.len() != expected {
            return Err(Error::ModelLoad(format!(
                "expected {expected} parameters for width {p}, found {}",
                data.len()
            )));
        }
        Ok(AgentParams { p, rounds, data })
    }

    pub fn load_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::load(File::open(path)?)
    }
}

impl AgentGrads {
    pub fn zeros(p: usize) -> Self {
        AgentGrads {
            p,
            data: vec![0.0; block_len(p)],
        }
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn o1(&self) -> usize {
        0
    }
    pub(crate) fn o2(&self) -> usize {
        self.p
    }
    pub(crate) fn o3(&self) -> usize {
        self.p + self.p * self.p
    }
    pub(crate) fn o4(&self) -> usize {
        self.p + 2 * self.p * self.p
    }
    pub(crate) fn o5(&self) -> usize {
        2 * self.p + 2 * self.p * self.p
    }
    pub(crate) fn o6(&self) -> usize {
        4 * self.p + 2 * self.p * self.p
    }
    pub(crate) fn o7(&self) -> usize {
        4 * self.p + 3 * self.p * self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_is_deterministic_and_scaled() {
        let a = AgentParams::init(16, 3, 7).unwrap();
        let b = AgentParams::init(16, 3, 7).unwrap();
        assert_eq!(a, b);
        let bound = 1.0 / 4.0;
        assert!(a.as_flat().iter().all(|x| x.abs() <= bound));
        assert_ne!(a, AgentParams::init(16, 3, 8).unwrap());
    }

    #[test]
    fn block_views_partition_the_buffer() {
        let p = 5;
        let a = AgentParams::init(p, 2, 1).unwrap();
        let total = a.theta1().len()
            + a.theta2().len()
            + a.theta3().len()
            + a.theta4().len()
            + a.theta5().len()
            + a.theta6().len()
            + a.theta7().len();
        assert_eq!(total, a.coordinate_count());
        assert_eq!(a.theta1().len(), p);
        assert_eq!(a.theta2().len(), p * p);
        assert_eq!(a.theta5().len(), 2 * p);
    }

    #[test]
    fn save_load_round_trip_is_bit_exact() {
        let a = AgentParams::init(8, 4, 99).unwrap();
        let mut buf = Vec::new();
        a.save(&mut buf).unwrap();
        let b = AgentParams::load(buf.as_slice()).unwrap();
        assert_eq!(a.width(), b.width());
        assert_eq!(a.rounds(), b.rounds());
        for (x, y) in a.as_flat().iter().zip(b.as_flat()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let text = "gtcut-model v99\np 2 T 1\n";
        assert!(matches!(
            AgentParams::load(text.as_bytes()),
            Err(Error::ModelLoad(_))
        ));
    }

    #[test]
    fn hand_built_small_model_loads() {
        // p=2, T=1 needs 4·2 + 4·4 = 24 values.
        let mut text = String::from("gtcut-model v1\np 2 T 1\n");
        for i in 0..24 {
            text.push_str(&format!("{}\n", i as f64 * 0.5));
        }
        let m = AgentParams::load(text.as_bytes()).unwrap();
        assert_eq!(m.width(), 2);
        assert_eq!(m.rounds(), 1);
        assert_eq!(m.theta1(), &[0.0, 0.5]);
        assert_eq!(m.theta2(), &[1.0, 1.5, 2.0, 2.5]);
        assert_eq!(m.theta7().last(), Some(&11.5));
    }

    #[test]
    fn wrong_count_and_nonfinite_are_rejected() {
        let short = "gtcut-model v1\np 2 T 1\n1.0\n";
        assert!(AgentParams::load(short.as_bytes()).is_err());
        let mut bad = String::from("gtcut-model v1\np 2 T 1\n");
        for _ in 0..23 {
            bad.push_str("0\n");
        }
        bad.push_str("inf\n");
        assert!(AgentParams::load(bad.as_bytes()).is_err());
    }

    #[test]
    fn gradient_step_moves_parameters() {
        let mut a = AgentParams::init(4, 1, 3).unwrap();
        let before = a.as_flat().to_vec();
        let mut g = AgentGrads::zeros(4);
        g.data[0] = 2.0;
        a.gradient_step(&g, 0.5);
        assert_eq!(a.as_flat()[0], before[0] - 1.0);
        assert_eq!(a.as_flat()[1], before[1]);
    }
}
