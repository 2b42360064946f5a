//! Random negation-free programs and the statistics of their smallest
//! nontrivial splitting sets as the rules-to-variables ratio grows.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atoms::{AtomId, SymbolTable};
use crate::program::{Program, Rule};
use crate::split::{min_splitting_set, SplitGoal};

/// Atoms per generated rule.
pub const ATOMS_PER_RULE: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExperimentError {
    #[error("need at least {ATOMS_PER_RULE} variables, got {0}")]
    TooFewVars(u32),
    #[error("invalid ratio: {0}")]
    InvalidRatio(String),
    #[error("invalid sweep range: {0}")]
    InvalidRange(String),
    #[error("program {index} at ratio {ratio} has no nonempty splitting set")]
    NoSplittingSet { ratio: Ratio, index: usize },
}

/// A positive rational, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

const fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Ratio, ExperimentError> {
        if den == 0 {
            return Err(ExperimentError::InvalidRatio(format!("{num}/0")));
        }
        let g = gcd(num, den).max(1);
        Ok(Ratio { num: num / g, den: den / g })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }


    /// `round(self × n)`, halves rounded up.
    pub fn scale_round(self, n: u64) -> u64 {
        (2 * self.num * n + self.den) / (2 * self.den)
    }
}

impl core::ops::Add for Ratio {
    type Output = Ratio;

    fn add(self, other: Ratio) -> Ratio {
        let den = self.den / gcd(self.den, other.den) * other.den;
        Ratio::new(self.num * (den / self.den) + other.num * (den / other.den), den).expect("nonzero denominator")
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

/// Decimal with at least two places when the denominator divides a power
/// of ten (`4.25`, `2.00`), else `num/den`.
impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(places) = (0..=18u32).find(|&k| 10u64.pow(k) % self.den == 0) else {
            return write!(f, "{}/{}", self.num, self.den);
        };
        let places = places.max(2);
        let unit = 10u64.pow(places);
        let scaled = self.num as u128 * unit as u128 / self.den as u128;
        let unit = unit as u128;
        write!(f, "{}.{:0width$}", scaled / unit, scaled % unit, width = places as usize)
    }
}

/// Accepts `4`, `4.25` and `17/4`.
impl FromStr for Ratio {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Ratio, ExperimentError> {
        let bad = || ExperimentError::InvalidRatio(String::from(s));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            return Ratio::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Ratio::new(int.checked_mul(den).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?, den)
    }
}

/// Which subsets of a rule's three atoms may form its head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HeadPolicy {
    /// One of the 7 nonempty subsets, uniformly.
    #[default]
    NonEmpty,
    /// One of all 8 subsets; an empty head makes an integrity rule.
    All8,
}

impl fmt::Display for HeadPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeadPolicy::NonEmpty => "nonempty",
            HeadPolicy::All8 => "all-8",
        })
    }
}

impl FromStr for HeadPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nonempty" => Ok(HeadPolicy::NonEmpty),
            "all-8" | "all8" => Ok(HeadPolicy::All8),
            _ => Err(format!("unknown head policy `{s}` (expected nonempty or all-8)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub num_vars: u32,
    /// Rules per variable; the program gets `round(ratio × num_vars)` rules.
    pub ratio: Ratio,
    pub seed: u64,
    pub head_policy: HeadPolicy,
}

impl GenConfig {
    pub fn num_rules(&self) -> usize {
        self.ratio.scale_round(self.num_vars as u64) as usize
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if (self.num_vars as usize) < ATOMS_PER_RULE {
            return Err(ExperimentError::TooFewVars(self.num_vars));
        }
        Ok(())
    }
}

/// The shared symbol table `x1 .. xN` for a generated program.
pub fn variables(num_vars: u32) -> Arc<SymbolTable> {
    let mut t = SymbolTable::new();
    for i in 1..=num_vars {
        t.intern(&format!("x{i}"));
    }
    Arc::new(t)
}

/// A random program with no negation: every rule picks three distinct
/// variables, puts a random subset of them in the head (per the head
/// policy) and the rest in the positive body.
pub fn gen_random_program(cfg: &GenConfig) -> Result<Program, ExperimentError> {
    cfg.validate()?;
    let symbols = variables(cfg.num_vars);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rules = (0..cfg.num_rules())
        .map(|_| {
            let picked: Vec<AtomId> = sample(&mut rng, cfg.num_vars as usize, ATOMS_PER_RULE)
                .into_iter()
                .map(AtomId::from)
                .collect();
            let head_mask: u8 = match cfg.head_policy {
                HeadPolicy::NonEmpty => rng.gen_range(1..8),
                HeadPolicy::All8 => rng.gen_range(0..8),
            };
            let in_head = |i: &usize| head_mask >> i & 1 == 1;
            let head = (0..ATOMS_PER_RULE).filter(in_head).map(|i| picked[i]);
            let body = (0..ATOMS_PER_RULE).filter(|i| !in_head(i)).map(|i| picked[i]);
            Rule::new(head, body, [])
        })
        .collect();
    Ok(Program::new(symbols, rules))
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of program `program_index` at sweep point `ratio_index`:
/// `mix64(mix64(master ^ mix64(ratio_index)) ^ program_index)`.
pub fn point_seed(master: u64, ratio_index: u64, program_index: u64) -> u64 {
    mix64(mix64(master ^ mix64(ratio_index)) ^ program_index)
}

/// `from, from + step, ...` up to and including `to`.
pub fn ratio_points(from: Ratio, to: Ratio, step: Ratio) -> Result<Vec<Ratio>, ExperimentError> {
    if step.is_zero() {
        return Err(ExperimentError::InvalidRange(String::from("step must be positive")));
    }
    if from > to {
        return Err(ExperimentError::InvalidRange(format!("{from} > {to}")));
    }
    let mut out = Vec::new();
    let mut r = from;
    while r <= to {
        out.push(r);
        r = r + step;
    }
    Ok(out)
}

/// Size of a smallest nonempty splitting set.
pub fn min_split_size(p: &Program) -> Option<usize> {
    min_splitting_set(p, &SplitGoal::NonEmpty)
        .expect("the nonempty goal cannot fail")
        .map(|s| s.len())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub ratio: Ratio,
    pub mean_min_split_size: f64,
    pub median_min_split_size: f64,
    pub samples: usize,
    pub min: usize,
    pub max: usize,
}

/// Mean and median of one point's sizes. `sizes` must be nonempty.
pub fn summarize(ratio: Ratio, sizes: &[usize]) -> SweepPoint {
    assert!(!sizes.is_empty(), "no samples");
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0
    };
    let mean = sorted.iter().sum::<usize>() as f64 / n as f64;
    SweepPoint {
        ratio,
        mean_min_split_size: mean,
        median_min_split_size: median,
        samples: n,
        min: sorted[0],
        max: sorted[n - 1],
    }
}

/// The generator configuration for one program of a sweep.
pub fn sweep_config(num_vars: u32, ratio: Ratio, master: u64, ratio_index: usize, program_index: usize, head_policy: HeadPolicy) -> GenConfig {
    GenConfig { num_vars, ratio, seed: point_seed(master, ratio_index as u64, program_index as u64), head_policy }
}

/// Generate and measure one program of a sweep.
pub fn measure(cfg: &GenConfig, program_index: usize) -> Result<usize, ExperimentError> {
    let p = gen_random_program(cfg)?;
    min_split_size(&p).ok_or(ExperimentError::NoSplittingSet { ratio: cfg.ratio, index: program_index })
}

/// One sweep point, evaluated sequentially.
pub fn measure_point(num_vars: u32, ratio: Ratio, ratio_index: usize, per_point: usize, master: u64, head_policy: HeadPolicy) -> Result<SweepPoint, ExperimentError> {
    let sizes = (0..per_point)
        .map(|i| measure(&sweep_config(num_vars, ratio, master, ratio_index, i, head_policy), i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(summarize(ratio, &sizes))
}
