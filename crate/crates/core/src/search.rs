//! Enumeration of Riesz and orthogonal finite pairs in `Z_N^d`.
//!
//! Small groups (`N^d ≤ 16`) are searched exhaustively; larger ones are
//! sampled with a seeded ChaCha generator so that runs are reproducible.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::DualBasis;
use crate::error::{Error, Result};
use crate::finite::{build_evaluation_matrix, classify_finite_pair, FiniteClassification, FiniteSet};
use crate::kind::PairKind;
use crate::linalg;
use crate::tolerance::Tolerances;

/// Largest group order that is searched exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchQuery {
    #[serde(rename = "N")]
    pub modulus: u64,
    #[serde(rename = "d")]
    pub dimension: usize,
    #[serde(rename = "k")]
    pub cardinality: usize,
    /// Pairs of at least this kind are reported.
    pub target: PairKind,
    pub max_results: Option<usize>,
    #[serde(with = "optional_millis")]
    pub time_budget: Option<Duration>,
    pub seed: u64,
    /// Number of random candidates drawn when the group is too large to exhaust.
    pub samples: usize,
    /// Report only canonical representatives of translation classes of `A` and `J`.
    pub canonical_only: bool,
}

impl SearchQuery {
    pub fn new(modulus: u64, dimension: usize, cardinality: usize, target: PairKind) -> Self {
        SearchQuery {
            modulus,
            dimension,
            cardinality,
            target,
            max_results: None,
            time_budget: None,
            seed: 0,
            samples: 10_000,
            canonical_only: false,
        }
    }

    pub fn group_order(&self) -> Option<u64> {
        self.modulus.checked_pow(self.dimension as u32)
    }

    fn validate(&self) -> Result<u64> {
        if self.modulus == 0 || self.dimension == 0 || self.cardinality == 0 {
            return Err(Error::InvalidArgument("N, d and k must be positive".into()));
        }
        if self.target < PairKind::RieszBasis {
            return Err(Error::InvalidArgument(format!(
                "search targets riesz-basis or orthogonal-basis, not {}",
                self.target
            )));
        }
        let order = self
            .group_order()
            .ok_or_else(|| Error::InvalidArgument("N^d overflows".into()))?;
        if self.cardinality as u64 > order {
            return Err(Error::InvalidArgument(format!(
                "k = {} exceeds N^d = {order}",
                self.cardinality
            )));
        }
        Ok(order)
    }
}

mod optional_millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_some(&(d.as_millis() as u64)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        Ok(Option::<u64>::deserialize(d)?.map(Duration::from_millis))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    #[serde(rename = "A")]
    pub a: FiniteSet,
    #[serde(rename = "J")]
    pub j: FiniteSet,
    pub classification: FiniteClassification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub mode: SearchMode,
    pub seed: u64,
    /// Candidate pairs that were classified.
    pub examined: usize,
    /// The time budget ran out before every candidate was examined.
    pub partial: bool,
    /// `max_results` cut the list short.
    pub truncated: bool,
    pub hits: Vec<SearchHit>,
}

fn decode(index: u64, modulus: u64, dimension: usize) -> Vec<i64> {
    let mut rest = index;
    let mut p = vec![0i64; dimension];
    for x in p.iter_mut().rev() {
        *x = (rest % modulus) as i64;
        rest /= modulus;
    }
    p
}

fn k_subsets(order: u64, k: usize) -> Vec<Vec<u64>> {
    fn rec(start: u64, order: u64, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let needed = (k - cur.len()) as u64;
        for x in start..=order - needed {
            cur.push(x);
            rec(x + 1, order, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, order, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn to_set(indices: &[u64], modulus: u64, dimension: usize) -> FiniteSet {
    let points = indices.iter().map(|&i| decode(i, modulus, dimension)).collect();
    FiniteSet::new(modulus, dimension, points).expect("distinct indices decode to distinct points")
}

fn sorted_points(s: &FiniteSet) -> Vec<Vec<i64>> {
    let mut pts = s.points().to_vec();
    pts.sort();
    pts
}

/// Lexicographically smallest sorted point list among the translates `S - s`, `s ∈ S`.
pub fn canonical_form(s: &FiniteSet) -> FiniteSet {
    s.points()
        .iter()
        .map(|p| {
            let neg: Vec<i64> = p.iter().map(|x| -x).collect();
            let t = s.translate(&neg).expect("translate of a valid set");
            FiniteSet::new(t.modulus(), t.dimension(), sorted_points(&t)).expect("valid")
        })
        .min_by(|x, y| x.points().cmp(y.points()))
        .expect("nonempty set")
}

pub fn is_canonical(s: &FiniteSet) -> bool {
    sorted_points(s) == canonical_form(s).points()
}

fn classify_candidate(a: &FiniteSet, j: &FiniteSet, target: PairKind, tol: &Tolerances) -> Option<SearchHit> {
    let c = classify_finite_pair(a, j, tol).ok()?;
    (c.kind >= target).then(|| SearchHit {
        a: a.clone(),
        j: j.clone(),
        classification: c,
    })
}

/// All (or sampled) `k`-subset pairs of at least the target kind, in canonical order.
pub fn enumerate_pairs(q: &SearchQuery) -> Result<SearchOutcome> {
    let order = q.validate()?;
    let tol = Tolerances::default();
    let start = Instant::now();
    let out_of_time = || q.time_budget.is_some_and(|b| start.elapsed() > b);

    let (mode, candidates): (SearchMode, Vec<(FiniteSet, FiniteSet)>) = if order <= EXHAUSTIVE_LIMIT {
        let mut sets: Vec<FiniteSet> = k_subsets(order, q.cardinality)
            .iter()
            .map(|idx| to_set(idx, q.modulus, q.dimension))
            .collect();
        if q.canonical_only {
            sets.retain(is_canonical);
        }
        let pairs = sets
            .iter()
            .flat_map(|a| sets.iter().map(move |j| (a.clone(), j.clone())))
            .collect();
        (SearchMode::Exhaustive, pairs)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
        let mut seen = BTreeSet::new();
        let mut pairs = Vec::new();
        for _ in 0..q.samples {
            let mut draw = || {
                let mut idx: Vec<u64> = sample(&mut rng, order as usize, q.cardinality)
                    .into_iter()
                    .map(|i| i as u64)
                    .collect();
                idx.sort_unstable();
                let s = to_set(&idx, q.modulus, q.dimension);
                if q.canonical_only {
                    canonical_form(&s)
                } else {
                    s
                }
            };
            let (a, j) = (draw(), draw());
            if seen.insert((a.points().to_vec(), j.points().to_vec())) {
                pairs.push((a, j));
            }
        }
        (SearchMode::Random, pairs)
    };

    // independent shards; hits are re-sorted after merging
    let shards: Vec<(usize, bool, Vec<SearchHit>)> = candidates
        .par_chunks(candidates.len().div_ceil(rayon::current_num_threads() * 4).max(1))
        .map(|chunk| {
            let mut hits = Vec::new();
            let mut examined = 0;
            for (a, j) in chunk {
                if out_of_time() {
                    return (examined, true, hits);
                }
                examined += 1;
                hits.extend(classify_candidate(a, j, q.target, &tol));
            }
            (examined, false, hits)
        })
        .collect();

    let examined = shards.iter().map(|s| s.0).sum();
    let partial = shards.iter().any(|s| s.1);
    let mut hits: Vec<SearchHit> = shards.into_iter().flat_map(|s| s.2).collect();
    hits.sort_by(|x, y| (sorted_points(&x.a), sorted_points(&x.j)).cmp(&(sorted_points(&y.a), sorted_points(&y.j))));
    let truncated = q.max_results.is_some_and(|m| hits.len() > m);
    if let Some(m) = q.max_results {
        hits.truncate(m);
    }
    Ok(SearchOutcome {
        mode,
        seed: q.seed,
        examined,
        partial,
        truncated,
        hits,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HadamardReport {
    pub square: bool,
    /// `FᴴF = kI` within the unitarity tolerance.
    pub hadamard: bool,
    pub self_dual: bool,
    pub unitarity_defect: f64,
}

pub fn hadamard_report(a: &FiniteSet, j: &FiniteSet) -> Result<HadamardReport> {
    let f = build_evaluation_matrix(a, j)?;
    let tol = Tolerances::default();
    let defect = linalg::gram_deviation(&f.entries, j.len() as f64);
    if !f.is_square() {
        return Ok(HadamardReport {
            square: false,
            hadamard: false,
            self_dual: false,
            unitarity_defect: defect,
        });
    }
    let self_dual = DualBasis::new(a, j).map(|d| d.is_self_dual()).unwrap_or(false);
    Ok(HadamardReport {
        square: true,
        hadamard: defect < tol.unitarity,
        self_dual,
        unitarity_defect: defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::check_mutual_orthogonality;

    fn line(n: u64, v: &[i64]) -> FiniteSet {
        FiniteSet::line(n, v).unwrap()
    }

    fn contains(out: &SearchOutcome, a: &[i64], j: &[i64]) -> bool {
        out.hits.iter().any(|h| {
            sorted_points(&h.a) == sorted_points(&line(h.a.modulus(), a))
                && sorted_points(&h.j) == sorted_points(&line(h.j.modulus(), j))
        })
    }

    #[test]
    fn n4_orthogonal_pairs() {
        let out = enumerate_pairs(&SearchQuery::new(4, 1, 2, PairKind::OrthogonalBasis)).unwrap();
        assert_eq!(out.mode, SearchMode::Exhaustive);
        assert_eq!(out.examined, 36);
        assert!(contains(&out, &[0, 2], &[0, 1]));
        assert!(contains(&out, &[0, 2], &[0, 3]));
        for h in &out.hits {
            assert!(check_mutual_orthogonality(&h.a, &h.j).unwrap());
        }

        let mut q = SearchQuery::new(4, 1, 2, PairKind::OrthogonalBasis);
        q.canonical_only = true;
        let canon = enumerate_pairs(&q).unwrap();
        assert!(contains(&canon, &[0, 2], &[0, 1]));
        assert!(!contains(&canon, &[0, 2], &[0, 3]));
        assert!(canon.hits.len() < out.hits.len());
    }

    #[test]
    fn singletons_are_all_orthogonal() {
        let out = enumerate_pairs(&SearchQuery::new(5, 1, 1, PairKind::OrthogonalBasis)).unwrap();
        assert_eq!(out.hits.len(), 25);
    }

    #[test]
    fn n3_has_no_orthogonal_pairs_of_size_two() {
        // oracle: |1 + ω^{Δa·Δj}|² = 2 + 2cos(2πΔaΔj/3) never vanishes for Δa, Δj ∈ {1, 2}
        for da in 1..3i64 {
            for dj in 1..3i64 {
                let c = (2.0 * std::f64::consts::PI * (da * dj) as f64 / 3.0).cos();
                assert!((2.0 + 2.0 * c).abs() > 0.5);
            }
        }
        let out = enumerate_pairs(&SearchQuery::new(3, 1, 2, PairKind::OrthogonalBasis)).unwrap();
        assert!(out.hits.is_empty());
        assert_eq!(out.examined, 9);
        // they are all Riesz
        let out = enumerate_pairs(&SearchQuery::new(3, 1, 2, PairKind::RieszBasis)).unwrap();
        assert_eq!(out.hits.len(), 9);
    }

    #[test]
    fn random_mode_is_reproducible() {
        let mut q = SearchQuery::new(5, 2, 5, PairKind::OrthogonalBasis);
        q.samples = 400;
        q.seed = 7;
        let first = enumerate_pairs(&q).unwrap();
        let second = enumerate_pairs(&q).unwrap();
        assert_eq!(first.mode, SearchMode::Random);
        assert_eq!(first, second);
        assert!(first.examined <= 400);
    }

    #[test]
    fn budget_and_limits() {
        let mut q = SearchQuery::new(4, 2, 2, PairKind::RieszBasis);
        q.max_results = Some(3);
        let out = enumerate_pairs(&q).unwrap();
        assert_eq!(out.hits.len(), 3);
        assert!(out.truncated);

        q.max_results = None;
        q.time_budget = Some(Duration::ZERO);
        let out = enumerate_pairs(&q).unwrap();
        assert!(out.partial);

        assert!(enumerate_pairs(&SearchQuery::new(3, 1, 4, PairKind::RieszBasis)).is_err());
        assert!(enumerate_pairs(&SearchQuery::new(3, 1, 2, PairKind::Frame)).is_err());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonical_form(&line(4, &[0, 3])).points(), line(4, &[0, 1]).points());
        assert_eq!(canonical_form(&line(6, &[5, 2])).points(), line(6, &[0, 3]).points());
        assert!(is_canonical(&line(4, &[2, 0])));
    }

    #[test]
    fn hadamard_examples() {
        let r = hadamard_report(&line(4, &[0, 2]), &line(4, &[0, 1])).unwrap();
        assert!(r.hadamard && r.self_dual);
        let r = hadamard_report(&line(5, &[0, 2]), &line(5, &[0, 1])).unwrap();
        assert!(!r.hadamard && !r.self_dual);
        let r = hadamard_report(&line(5, &[3]), &line(5, &[4])).unwrap();
        assert!(r.hadamard && r.self_dual);
        let r = hadamard_report(&line(5, &[0]), &line(5, &[0, 1])).unwrap();
        assert!(!r.square);
    }
}
