//! Sparse QUBO models over binary variables, energy evaluation, and the
//! equivalent Ising-convention form.
//!
//! A model stores one coefficient per unordered variable pair `{i, j}`
//! plus a constant offset. Diagonal entries act as linear terms because
//! binary variables satisfy `x*x == x`. Enumeration always reports the
//! canonical upper-triangular key `(i, j)` with `i <= j`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Binary assignment, one `0`/`1` entry per variable.
pub type Assignment = Vec<u8>;

/// Quadratic unconstrained binary optimization model: minimize
/// `offset + sum_{i<=j} q[i][j] x[i] x[j]` over `x` in `{0,1}^n`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuboModel {
    n: usize,
    /// `adj[i]` maps neighbor `j` to the coefficient of the normalized
    /// pair `(min(i,j), max(i,j))`; the diagonal entry holds the linear
    /// term. Off-diagonal coefficients are mirrored into both endpoint
    /// rows so a single-flip delta only touches one row.
    adj: Vec<BTreeMap<usize, f64>>,
    offset: f64,
}

impl QuboModel {
    /// Model over `n` variables with no terms and zero offset.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            adj: vec![BTreeMap::new(); n],
            offset: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn add_offset(&mut self, c: f64) {
        self.offset += c;
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.n {
            return Err(Error::IndexOutOfRange { index, n: self.n });
        }
        Ok(())
    }

    fn check_assignment(&self, bits: &[u8]) -> Result<()> {
        if bits.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: bits.len(),
            });
        }
        Ok(())
    }

    /// Accumulates `w` onto the coefficient of the unordered pair
    /// `{i, j}`; the stored key is normalized to `i <= j`.
    pub fn add_term(&mut self, i: usize, j: usize, w: f64) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        if !w.is_finite() {
            return Err(Error::NonFiniteCoefficient { i, j, value: w });
        }
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        *self.adj[lo].entry(hi).or_insert(0.0) += w;
        if lo != hi {
            *self.adj[hi].entry(lo).or_insert(0.0) += w;
        }
        Ok(())
    }

    /// Coefficient stored for the unordered pair `{i, j}`, 0 when absent.
    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        self.adj
            .get(i)
            .and_then(|row| row.get(&j))
            .copied()
            .unwrap_or(0.0)
    }

    /// Stored terms as `(i, j, w)` with `i <= j`, ascending by key.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.range(i..).map(move |(&j, &w)| (i, j, w)))
    }

    pub fn num_terms(&self) -> usize {
        self.terms().count()
    }

    /// Linear coefficient of variable `i` (the diagonal entry).
    pub fn linear(&self, i: usize) -> f64 {
        self.coefficient(i, i)
    }

    /// Off-diagonal neighbors of variable `i` as `(j, w)` pairs.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adj[i]
            .iter()
            .filter(move |&(&j, _)| j != i)
            .map(|(&j, &w)| (j, w))
    }

    /// Energy `offset + sum q[i][j] x[i] x[j]` of a binary assignment.
    pub fn energy(&self, bits: &[u8]) -> Result<f64> {
        self.check_assignment(bits)?;
        let mut e = self.offset;
        for (i, row) in self.adj.iter().enumerate() {
            if bits[i] == 0 {
                continue;
            }
            for (&j, &w) in row.range(i..) {
                if bits[j] != 0 {
                    e += w;
                }
            }
        }
        Ok(e)
    }

    /// Energy change from flipping bit `i`, computed in time proportional
    /// to the degree of variable `i`.
    pub fn flip_delta(&self, bits: &[u8], i: usize) -> Result<f64> {
        self.check_assignment(bits)?;
        self.check_index(i)?;
        Ok(self.flip_delta_raw(bits, i))
    }

    pub(crate) fn flip_delta_raw(&self, bits: &[u8], i: usize) -> f64 {
        let mut field = 0.0;
        for (&j, &w) in &self.adj[i] {
            if j == i || bits[j] != 0 {
                field += w;
            }
        }
        (1.0 - 2.0 * f64::from(bits[i])) * field
    }

    /// Adds `weight * (sum_k c_k x_k + constant)^2` expanded into linear
    /// and quadratic terms, with the constant part folded into the offset.
    pub fn add_squared(
        &mut self,
        coeffs: &[(usize, f64)],
        constant: f64,
        weight: f64,
    ) -> Result<()> {
        for (k, &(i, ci)) in coeffs.iter().enumerate() {
            self.add_term(i, i, weight * ci * (ci + 2.0 * constant))?;
            for &(j, cj) in &coeffs[k + 1..] {
                self.add_term(i, j, 2.0 * weight * ci * cj)?;
            }
        }
        self.offset += weight * constant * constant;
        Ok(())
    }

    /// Equivalent Ising model under the substitution `x = (1 + s) / 2`:
    /// for every assignment, the Ising energy of the spin image equals
    /// the QUBO energy.
    pub fn to_ising(&self) -> IsingModel {
        let mut ising = IsingModel::new(self.n);
        ising.offset = self.offset;
        for (i, j, w) in self.terms() {
            if i == j {
                ising.h[i] += w / 2.0;
                ising.offset += w / 2.0;
            } else {
                *ising.couplings.entry((i, j)).or_insert(0.0) += w / 4.0;
                ising.h[i] += w / 4.0;
                ising.h[j] += w / 4.0;
                ising.offset += w / 4.0;
            }
        }
        ising
    }

    /// Inverse of [`QuboModel::to_ising`] under `s = 2x - 1`.
    pub fn from_ising(ising: &IsingModel) -> Self {
        let mut model = Self::new(ising.n());
        model.offset = ising.offset;
        for (i, &hi) in ising.h.iter().enumerate() {
            if hi != 0.0 {
                model.add_term(i, i, 2.0 * hi).expect("index in range");
                model.offset -= hi;
            }
        }
        for (&(i, j), &jij) in &ising.couplings {
            if jij != 0.0 {
                model.add_term(i, j, 4.0 * jij).expect("index in range");
                model.add_term(i, i, -2.0 * jij).expect("index in range");
                model.add_term(j, j, -2.0 * jij).expect("index in range");
                model.offset += jij;
            }
        }
        model
    }

    /// Serializes as a `qubo <n> <offset>` header followed by one
    /// `i j w` line per stored term. Values use the shortest decimal
    /// form that round-trips to the same double.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "qubo {} {}", self.n, self.offset).expect("write to string");
        for (i, j, w) in self.terms() {
            writeln!(out, "{} {} {}", i, j, w).expect("write to string");
        }
        out
    }

    /// Parses the text form produced by [`QuboModel::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let mut model = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let fields: Vec<&str> = raw.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            match &mut model {
                None => {
                    if fields.len() != 3 || fields[0] != "qubo" {
                        return Err(parse_err(
                            line,
                            "expected header `qubo <n> <offset>`".into(),
                        ));
                    }
                    let n: usize = fields[1]
                        .parse()
                        .map_err(|e| parse_err(line, format!("bad variable count: {e}")))?;
                    let offset: f64 = fields[2]
                        .parse()
                        .map_err(|e| parse_err(line, format!("bad offset: {e}")))?;
                    if !offset.is_finite() {
                        return Err(parse_err(line, "offset must be finite".into()));
                    }
                    let mut m = QuboModel::new(n);
                    m.offset = offset;
                    model = Some(m);
                }
                Some(m) => {
                    if fields.len() != 3 {
                        return Err(parse_err(line, "expected term line `i j w`".into()));
                    }
                    let i: usize = fields[0]
                        .parse()
                        .map_err(|e| parse_err(line, format!("bad index i: {e}")))?;
                    let j: usize = fields[1]
                        .parse()
                        .map_err(|e| parse_err(line, format!("bad index j: {e}")))?;
                    let w: f64 = fields[2]
                        .parse()
                        .map_err(|e| parse_err(line, format!("bad coefficient: {e}")))?;
                    m.add_term(i, j, w)
                        .map_err(|e| parse_err(line, e.to_string()))?;
                }
            }
        }
        model.ok_or_else(|| parse_err(1, "missing `qubo <n> <offset>` header".into()))
    }

    /// Seeded random model with each upper-triangular coefficient present
    /// with probability `density`, uniform in [-1, 1). Fixture generator
    /// for tests and benchmarks.
    pub fn random(n: usize, density: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut model = Self::new(n);
        for i in 0..n {
            for j in i..n {
                if rng.random::<f64>() < density {
                    let w = rng.random_range(-1.0..1.0);
                    model.add_term(i, j, w).expect("index in range");
                }
            }
        }
        model
    }
}

/// Ising model with linear fields `h`, strictly upper-triangular
/// couplings `J`, and a constant offset, over spins in `{-1, +1}`:
/// `offset + sum h[i] s[i] + sum_{i<j} J[i][j] s[i] s[j]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IsingModel {
    h: Vec<f64>,
    couplings: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl IsingModel {
    pub fn new(n: usize) -> Self {
        Self {
            h: vec![0.0; n],
            couplings: BTreeMap::new(),
            offset: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn add_offset(&mut self, c: f64) {
        self.offset += c;
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }

    /// Coupling stored for the unordered pair `{i, j}`, 0 when absent.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.couplings.get(&key).copied().unwrap_or(0.0)
    }

    /// Stored couplings as `(i, j, w)` with `i < j`, ascending by key.
    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.couplings.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    pub fn add_field(&mut self, i: usize, w: f64) -> Result<()> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        if !w.is_finite() {
            return Err(Error::NonFiniteCoefficient { i, j: i, value: w });
        }
        self.h[i] += w;
        Ok(())
    }

    /// Accumulates a coupling for distinct `i`, `j`; the key is
    /// normalized to `i < j`.
    pub fn add_coupling(&mut self, i: usize, j: usize, w: f64) -> Result<()> {
        let n = self.n();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        if i == j {
            return Err(Error::InvalidParameter(format!(
                "Ising coupling requires distinct indices, got ({i}, {j})"
            )));
        }
        if !w.is_finite() {
            return Err(Error::NonFiniteCoefficient { i, j, value: w });
        }
        let key = if i < j { (i, j) } else { (j, i) };
        *self.couplings.entry(key).or_insert(0.0) += w;
        Ok(())
    }

    /// Energy of a spin configuration with entries in `{-1, +1}`.
    pub fn energy(&self, spins: &[i8]) -> Result<f64> {
        if spins.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: spins.len(),
            });
        }
        debug_assert!(spins.iter().all(|&s| s == 1 || s == -1));
        let mut e = self.offset;
        for (i, &hi) in self.h.iter().enumerate() {
            e += hi * f64::from(spins[i]);
        }
        for (&(i, j), &w) in &self.couplings {
            e += w * f64::from(spins[i]) * f64::from(spins[j]);
        }
        Ok(e)
    }
}

/// Spin image `s = 2x - 1` of a binary assignment.
pub fn spins_from_bits(bits: &[u8]) -> Vec<i8> {
    bits.iter().map(|&b| 2 * (b as i8) - 1).collect()
}
