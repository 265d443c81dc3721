//! One-dimensional binary cellular automata on a ring and the majority-task
//! interaction between a rule and an initial condition.
//!
//! Neighborhoods are read left to right: the cell at offset `-r` is the most
//! significant bit of the rule-table index, the cell at offset `+r` the least.

use std::fmt;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Largest supported radius; keeps a rule table within 128 entries.
pub const MAX_RADIUS: usize = 3;
/// Largest supported lattice; a lattice is packed into one machine word.
pub const MAX_LATTICE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaConfig {
    /// Lattice length in cells.
    pub n: usize,
    /// Neighborhood radius.
    pub r: usize,
    /// Maximum synchronous updates per interaction.
    pub max_steps: usize,
}

impl CaConfig {
    /// Lattice of `n` cells, radius `r`, and the default step budget of `2n`.
    pub fn new(n: usize, r: usize) -> Result<Self> {
        Self::with_max_steps(n, r, 2 * n)
    }

    pub fn with_max_steps(n: usize, r: usize, max_steps: usize) -> Result<Self> {
        let config = CaConfig { n, r, max_steps };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n % 2 == 0 {
            return Err(Error::config(format!("lattice length {} must be odd", self.n)));
        }
        if self.r > MAX_RADIUS {
            return Err(Error::config(format!(
                "radius {} exceeds the supported maximum {MAX_RADIUS}",
                self.r
            )));
        }
        if self.n < self.neighborhood() {
            return Err(Error::config(format!(
                "lattice length {} is shorter than the neighborhood 2r+1 = {}",
                self.n,
                self.neighborhood()
            )));
        }
        if self.n > MAX_LATTICE {
            return Err(Error::config(format!(
                "lattice length {} exceeds the supported maximum {MAX_LATTICE}",
                self.n
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::config("max_steps must be at least 1"));
        }
        Ok(())
    }

    pub fn neighborhood(&self) -> usize {
        2 * self.r + 1
    }

    /// Length of a rule table, `2^(2r+1)`.
    pub fn rule_len(&self) -> usize {
        rule_len(self.r)
    }
}

impl Default for CaConfig {
    fn default() -> Self {
        CaConfig {
            n: 9,
            r: 2,
            max_steps: 18,
        }
    }
}

pub fn rule_len(r: usize) -> usize {
    1 << (2 * r + 1)
}

/// Lattice state, circular.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice(pub BitString);

impl Lattice {
    pub fn cells(&self) -> &BitString {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The strict majority bit. Ties (even length) resolve to 0.
    pub fn majority(&self) -> bool {
        2 * self.0.count_ones() > self.0.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        let ones = self.0.count_ones();
        ones == 0 || ones == self.0.len()
    }

    pub(crate) fn pack(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, b)| acc | ((b as u64) << i))
    }

    pub(crate) fn unpack(cells: u64, n: usize) -> Self {
        Lattice(BitString::from_bits(
            (0..n).map(|i| (cells >> i) & 1 == 1).collect(),
        ))
    }
}

impl From<BitString> for Lattice {
    fn from(bits: BitString) -> Self {
        Lattice(bits)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice({})", self.0)
    }
}

/// Rule table indexed by the neighborhood bits, leftmost neighbor most significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RuleTable(pub BitString);

impl RuleTable {
    pub fn outputs(&self) -> &BitString {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rule mapping every neighborhood to `bit`.
    pub fn constant(r: usize, bit: bool) -> Self {
        let len = rule_len(r);
        RuleTable(if bit {
            BitString::ones(len)
        } else {
            BitString::zeros(len)
        })
    }

    /// Rule whose output is the center cell, i.e. the identity map.
    pub fn identity(r: usize) -> Self {
        let len = rule_len(r);
        RuleTable(BitString::from_bits(
            (0..len).map(|idx| (idx >> r) & 1 == 1).collect(),
        ))
    }

    /// Local majority vote over the `2r+1` neighborhood.
    pub fn local_majority(r: usize) -> Self {
        let len = rule_len(r);
        RuleTable(BitString::from_bits(
            (0..len)
                .map(|idx: usize| idx.count_ones() as usize > r)
                .collect(),
        ))
    }

    pub(crate) fn pack(&self) -> u128 {
        self.0
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, b)| acc | ((b as u128) << i))
    }
}

impl From<BitString> for RuleTable {
    fn from(bits: BitString) -> Self {
        RuleTable(bits)
    }
}

impl fmt::Debug for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RuleTable({})", self.0)
    }
}

fn check_lengths(lattice_len: usize, rule_len_actual: usize, r: usize) -> Result<()> {
    if r > MAX_RADIUS {
        return Err(Error::config(format!("radius {r} is not supported")));
    }
    if rule_len_actual != rule_len(r) {
        return Err(Error::config(format!(
            "rule table has {rule_len_actual} entries, radius {r} needs {}",
            rule_len(r)
        )));
    }
    if lattice_len < 2 * r + 1 || lattice_len > MAX_LATTICE {
        return Err(Error::config(format!(
            "lattice length {lattice_len} is incompatible with radius {r}"
        )));
    }
    Ok(())
}

/// One synchronous update of the whole ring.
pub fn ca_step(lattice: &Lattice, rule: &RuleTable, r: usize) -> Result<Lattice> {
    check_lengths(lattice.len(), rule.len(), r)?;
    let n = lattice.len();
    let next = step_packed(lattice.pack(), rule.pack(), n, r);
    Ok(Lattice::unpack(next, n))
}

/// Returns `true` iff the rule settles `ic` into the homogeneous fixed point of its
/// majority bit after between 1 and `config.max_steps` updates. The initial
/// condition itself is never judged, only states the rule produced, and a
/// homogeneous state the rule does not keep fixed never counts.
pub fn interact(rule: &RuleTable, ic: &Lattice, config: &CaConfig) -> Result<bool> {
    config.validate()?;
    if ic.len() != config.n {
        return Err(Error::config(format!(
            "initial condition has {} cells, expected {}",
            ic.len(),
            config.n
        )));
    }
    check_lengths(ic.len(), rule.len(), config.r)?;
    Ok(interact_packed(rule.pack(), ic.pack(), config))
}

/// Cell `i` lives in bit `i`; rule output for neighborhood index `k` lives in bit `k`.
#[inline]
pub(crate) fn step_packed(cells: u64, rule: u128, n: usize, r: usize) -> u64 {
    let width = 2 * r + 1;
    let mask = (1usize << width) - 1;
    let cell = |i: usize| ((cells >> i) & 1) as usize;

    let mut idx = 0usize;
    for offset in 0..width {
        idx = (idx << 1) | cell((offset + n - r) % n);
    }
    let mut out = 0u64;
    for i in 0..n {
        out |= (((rule >> idx) & 1) as u64) << i;
        let mut incoming = i + 1 + r;
        if incoming >= n {
            incoming -= n;
        }
        idx = ((idx << 1) | cell(incoming)) & mask;
    }
    out
}

#[inline]
pub(crate) fn interact_packed(rule: u128, ic: u64, config: &CaConfig) -> bool {
    let n = config.n;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let target = if 2 * ic.count_ones() as usize > n { full } else { 0 };
    // The target must be a fixed point; a rule that only passes through it does not classify.
    let last = (1u32 << (2 * config.r + 1)) - 1;
    let fixed = if target == 0 {
        rule & 1 == 0
    } else {
        (rule >> last) & 1 == 1
    };
    if !fixed {
        return false;
    }

    let mut state = ic;
    for _ in 0..config.max_steps {
        let next = step_packed(state, rule, n, config.r);
        if next == target {
            return true;
        }
        if next == state {
            return false;
        }
        state = next;
    }
    false
}
