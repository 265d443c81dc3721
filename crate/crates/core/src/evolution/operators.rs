//! Genetic operators shared by both populations.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: BitString,
    pub fitness: f64,
}

impl Individual {
    pub fn new(genome: BitString) -> Self {
        Individual {
            genome,
            fitness: 0.0,
        }
    }
}

/// Breeding knobs for one population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreedParams {
    pub elite_fraction: f64,
    pub mutation_rate: f64,
    /// Slope of the linear ranking: rank `k` (1 = worst) has weight `1 + rank_bias * (k - 1)`.
    /// `1.0` makes selection probability proportional to rank, `0.0` is uniform.
    pub rank_bias: f64,
}

impl Default for BreedParams {
    fn default() -> Self {
        BreedParams {
            elite_fraction: 0.2,
            mutation_rate: 0.01,
            rank_bias: 1.0,
        }
    }
}

impl BreedParams {
    /// Number of elites for a population of `size`: `floor(elite_fraction * size)`.
    pub fn elite_count(&self, size: usize) -> usize {
        ((self.elite_fraction * size as f64) + 1e-9).floor().min(size as f64) as usize
    }
}

/// `size` distinct, uniformly random genomes of `genome_len` bits.
pub fn init_population_unique<R: Rng + ?Sized>(
    size: usize,
    genome_len: usize,
    rng: &mut R,
) -> Result<Vec<Individual>> {
    let fits = genome_len >= usize::BITS as usize || size <= (1usize << genome_len);
    if !fits {
        return Err(Error::config(format!(
            "cannot draw {size} distinct genomes from a space of 2^{genome_len}"
        )));
    }
    if genome_len <= 20 {
        // Small spaces: sample distinct codes without replacement.
        let space = 1usize << genome_len;
        return Ok(index::sample(rng, space, size)
            .into_iter()
            .map(|code| Individual::new(BitString::from_u64(code as u64, genome_len)))
            .collect());
    }
    let mut seen = HashSet::with_capacity(size);
    let mut population = Vec::with_capacity(size);
    while population.len() < size {
        let genome = BitString::random(genome_len, rng);
        if seen.insert(genome.clone()) {
            population.push(Individual::new(genome));
        }
    }
    Ok(population)
}

/// Linear rank selection over a fixed fitness vector.
///
/// Construction draws one tie-break key per individual, so equal fitness values
/// are ordered uniformly at random.
#[derive(Debug, Clone)]
pub struct RankSelector {
    /// Individual indices from worst to best.
    order: Vec<usize>,
    /// Cumulative weights aligned with `order`.
    cumulative: Vec<f64>,
}

impl RankSelector {
    pub fn new<R: Rng + ?Sized>(fitness: &[f64], rank_bias: f64, rng: &mut R) -> Self {
        let keys: Vec<u64> = fitness.iter().map(|_| rng.gen()).collect();
        let mut order: Vec<usize> = (0..fitness.len()).collect();
        order.sort_by(|&a, &b| {
            fitness[a]
                .total_cmp(&fitness[b])
                .then(keys[a].cmp(&keys[b]))
        });
        let mut total = 0.0;
        let cumulative = (0..order.len())
            .map(|k| {
                total += 1.0 + rank_bias * k as f64;
                total
            })
            .collect();
        RankSelector { order, cumulative }
    }

    /// Individual indices from best to worst.
    pub fn best_first(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().rev().copied()
    }

    pub fn select<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().expect("empty population");
        let u = rng.gen::<f64>() * total;
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.order[k.min(self.order.len() - 1)]
    }
}

/// Samples one parent, probability proportional to rank (worst = 1).
pub fn linear_rank_select<'a, R: Rng + ?Sized>(population: &'a [Individual], rng: &mut R) -> &'a Individual {
    let fitness: Vec<f64> = population.iter().map(|i| i.fitness).collect();
    let selector = RankSelector::new(&fitness, 1.0, rng);
    &population[selector.select(rng)]
}

/// Children `a[..cut] + b[cut..]` and `b[..cut] + a[cut..]`.
pub fn crossover_at(a: &BitString, b: &BitString, cut: usize) -> Result<(BitString, BitString)> {
    if a.len() != b.len() {
        return Err(Error::usage(format!(
            "crossover parents differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if cut > a.len() {
        return Err(Error::usage(format!("cut point {cut} beyond length {}", a.len())));
    }
    let splice = |x: &BitString, y: &BitString| {
        BitString::from_bits(x.as_slice()[..cut].iter().chain(&y.as_slice()[cut..]).copied().collect())
    };
    Ok((splice(a, b), splice(b, a)))
}

/// One-point crossover with the cut drawn uniformly from `1..len`.
/// Length-1 parents are returned unchanged without touching the RNG.
pub fn one_point_crossover<R: Rng + ?Sized>(
    a: &BitString,
    b: &BitString,
    rng: &mut R,
) -> Result<(BitString, BitString)> {
    if a.len() != b.len() {
        return crossover_at(a, b, 0);
    }
    if a.len() <= 1 {
        return Ok((a.clone(), b.clone()));
    }
    let cut = rng.gen_range(1..a.len());
    crossover_at(a, b, cut)
}

/// Flips each bit independently with probability `rate`.
pub fn mutate<R: Rng + ?Sized>(genome: &BitString, rate: f64, rng: &mut R) -> BitString {
    let rate = rate.clamp(0.0, 1.0);
    let mut out = genome.clone();
    for i in 0..out.len() {
        if rng.gen_bool(rate) {
            out.flip(i);
        }
    }
    out
}

/// Elites are copied unchanged, the rest of the population is bred from rank-selected parents.
///
/// RNG consumption order: tie-break keys for the ranking, then per mating: parent one,
/// parent two, cut point, mutation of child one, mutation of child two.
pub fn next_generation<R: Rng + ?Sized>(
    population: &[Individual],
    params: &BreedParams,
    rng: &mut R,
) -> Vec<Individual> {
    let size = population.len();
    let fitness: Vec<f64> = population.iter().map(|i| i.fitness).collect();
    let selector = RankSelector::new(&fitness, params.rank_bias, rng);

    let mut next: Vec<Individual> = selector
        .best_first()
        .take(params.elite_count(size))
        .map(|i| population[i].clone())
        .collect();

    while next.len() < size {
        let a = &population[selector.select(rng)].genome;
        let b = &population[selector.select(rng)].genome;
        let (c1, c2) = one_point_crossover(a, b, rng).expect("population genomes share one length");
        let c1 = mutate(&c1, params.mutation_rate, rng);
        let c2 = mutate(&c2, params.mutation_rate, rng);
        next.push(Individual::new(c1));
        if next.len() < size {
            next.push(Individual::new(c2));
        }
    }
    next
}
