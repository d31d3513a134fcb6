//! Parabolic bundles, degrees, and the existence criterion for logarithmic
//! connections compatible with the parabolic structure.
//!
//! The parabolic degree of a bundle with weights p_i/r at each marked point
//! is deg E + Σ_points Σ_i p_i/r.  A line admits a compatible connection iff
//! its parabolic degree vanishes.  In higher rank the obstruction is tested
//! decomposition by decomposition: for every way of writing the bundle as a
//! direct sum and every character of the corresponding block-diagonal
//! subgroup, the paired degree must vanish.  For split bundles the direct
//! sums are exactly the groupings of the line summands, so the search is an
//! enumeration of set partitions.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::parabolic::ParabolicLocalDatum;
use crate::rational::Rational;

/// One marked point with its weights.
#[derive(Clone, Debug)]
pub struct PointDatum {
    pub label: String,
    pub datum: ParabolicLocalDatum,
}

/// A parabolic bundle: rank, degree, and weights at finitely many points.
#[derive(Clone, Debug)]
pub struct ParabolicBundle {
    rank: usize,
    degree: i64,
    points: Vec<PointDatum>,
}

impl ParabolicBundle {
    pub fn new(rank: usize, degree: i64, mut points: Vec<PointDatum>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidBundle("rank must be positive".into()));
        }
        for pt in &points {
            if pt.datum.n() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: pt.datum.n() });
            }
        }
        points.sort_by(|a, b| a.label.cmp(&b.label));
        if let Some(w) = points.windows(2).find(|w| w[0].label == w[1].label) {
            return Err(Error::InvalidBundle(format!("duplicate point label '{}'", w[0].label)));
        }
        Ok(ParabolicBundle { rank, degree, points })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn points(&self) -> &[PointDatum] {
        &self.points
    }

    /// deg E + Σ_points Σ_i p_i / r.
    pub fn par_deg(&self) -> Rational {
        let mut total = Rational::from_integer(self.degree.into());
        for pt in &self.points {
            let r = i64::from(pt.datum.r());
            for &w in pt.datum.weights() {
                total += Rational::new(i64::from(w).into(), r.into());
            }
        }
        total
    }
}

/// Existence answer for a line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineReport {
    pub par_deg: Rational,
    pub exists: bool,
}

/// A parabolic line admits a compatible logarithmic connection iff its
/// parabolic degree vanishes.
pub fn line_connection_exists(bundle: &ParabolicBundle) -> Result<LineReport> {
    if bundle.rank() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: bundle.rank() });
    }
    let par_deg = bundle.par_deg();
    let exists = par_deg.is_zero();
    Ok(LineReport { par_deg, exists })
}

/// One line summand of a split bundle.  Weights absent from the map are
/// zero at that point.
#[derive(Clone, Debug)]
pub struct LineData {
    pub label: String,
    pub degree: i64,
    pub weights: BTreeMap<String, Rational>,
}

/// A direct sum of parabolic lines.
#[derive(Clone, Debug)]
pub struct SplitBundle {
    lines: Vec<LineData>,
    points: Vec<String>,
}

impl SplitBundle {
    pub fn new(lines: Vec<LineData>) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::InvalidBundle("at least one line summand is required".into()));
        }
        let mut labels: Vec<&str> = lines.iter().map(|l| l.label.as_str()).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidBundle(format!("duplicate line label '{}'", w[0])));
        }
        let mut points: Vec<String> = Vec::new();
        for line in &lines {
            for (pt, w) in &line.weights {
                if w < &Rational::zero() || w >= &Rational::one() {
                    return Err(Error::InvalidWeights(format!(
                        "weight {w} of line '{}' at point '{pt}' is outside [0, 1)",
                        line.label
                    )));
                }
                if !points.contains(pt) {
                    points.push(pt.clone());
                }
            }
        }
        points.sort_unstable();
        Ok(SplitBundle { lines, points })
    }

    pub fn lines(&self) -> &[LineData] {
        &self.lines
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn rank(&self) -> usize {
        self.lines.len()
    }

    fn weight_of(&self, line: &LineData, point: &str) -> Rational {
        line.weights.get(point).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn line_par_deg(&self, index: usize) -> Rational {
        let line = &self.lines[index];
        let mut total = Rational::from_integer(line.degree.into());
        for pt in &self.points {
            total += self.weight_of(line, pt);
        }
        total
    }

    /// The ambient parabolic bundle: per point, the line weights sorted
    /// decreasingly over the least common denominator.
    pub fn ambient(&self) -> Result<ParabolicBundle> {
        let degree = self.lines.iter().map(|l| l.degree).sum();
        let mut points = Vec::with_capacity(self.points.len());
        for pt in &self.points {
            let mut weights: Vec<Rational> =
                self.lines.iter().map(|l| self.weight_of(l, pt)).collect();
            weights.sort();
            weights.reverse();
            let mut r: i64 = 1;
            for w in &weights {
                let den = w.denom().to_i64().ok_or_else(|| {
                    Error::InvalidWeights(format!("weight {w} at point '{pt}' is too fine"))
                })?;
                r = r.lcm(&den);
            }
            let p = weights
                .iter()
                .map(|w| {
                    let num = (w * Rational::from_integer(r.into()))
                        .to_integer()
                        .to_u32()
                        .expect("weights lie in [0, 1)");
                    Ok(num)
                })
                .collect::<Result<Vec<u32>>>()?;
            let r = u32::try_from(r)
                .map_err(|_| Error::InvalidWeights(format!("denominator {r} is too large")))?;
            points.push(PointDatum { label: pt.clone(), datum: ParabolicLocalDatum::new(r, p)? });
        }
        ParabolicBundle::new(self.rank(), degree, points)
    }
}

/// One block of a direct-sum decomposition, carrying the multiset of
/// weights it absorbs at each point.
#[derive(Clone, Debug)]
pub struct LeviBlock {
    pub name: String,
    pub rank: usize,
    pub degree: i64,
    pub weights: BTreeMap<String, Vec<Rational>>,
}

impl LeviBlock {
    /// Parabolic degree of the block's determinant line.
    pub fn par_deg(&self) -> Rational {
        let mut total = Rational::from_integer(self.degree.into());
        for ws in self.weights.values() {
            for w in ws {
                total += w.clone();
            }
        }
        total
    }
}

/// A candidate way of writing the bundle as a direct sum, together with any
/// characters beyond the per-block determinants that should be reported.
#[derive(Clone, Debug)]
pub struct LeviDecomposition {
    pub name: String,
    pub blocks: Vec<LeviBlock>,
    pub extra_characters: Vec<Vec<i64>>,
}

impl LeviDecomposition {
    /// Structural compatibility with the ambient bundle: ranks and degrees
    /// add up, and the weight multisets match point by point.
    pub fn validate(&self, ambient: &ParabolicBundle) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidDecomposition(format!(
                "decomposition '{}' has no blocks",
                self.name
            )));
        }
        let rank: usize = self.blocks.iter().map(|b| b.rank).sum();
        if rank != ambient.rank() {
            return Err(Error::InvalidDecomposition(format!(
                "decomposition '{}' has total rank {rank}, the bundle has rank {}",
                self.name,
                ambient.rank()
            )));
        }
        let degree: i64 = self.blocks.iter().map(|b| b.degree).sum();
        if degree != ambient.degree() {
            return Err(Error::InvalidDecomposition(format!(
                "decomposition '{}' has total degree {degree}, the bundle has degree {}",
                self.name,
                ambient.degree()
            )));
        }
        for pt in ambient.points() {
            let r = i64::from(pt.datum.r());
            let mut want: Vec<Rational> = pt
                .datum
                .weights()
                .iter()
                .map(|&w| Rational::new(i64::from(w).into(), r.into()))
                .collect();
            want.sort();
            let mut got: Vec<Rational> = Vec::new();
            for b in &self.blocks {
                let ws = b.weights.get(&pt.label).cloned().unwrap_or_default();
                if ws.len() != b.rank {
                    return Err(Error::InvalidDecomposition(format!(
                        "block '{}' lists {} weights at point '{}', its rank is {}",
                        b.name,
                        ws.len(),
                        pt.label,
                        b.rank
                    )));
                }
                got.extend(ws);
            }
            got.sort();
            if got != want {
                return Err(Error::InvalidDecomposition(format!(
                    "decomposition '{}' does not reproduce the weights at point '{}'",
                    self.name, pt.label
                )));
            }
        }
        for ch in &self.extra_characters {
            if ch.len() != self.blocks.len() {
                return Err(Error::InvalidDecomposition(format!(
                    "character {ch:?} has {} entries, decomposition '{}' has {} blocks",
                    ch.len(),
                    self.name,
                    self.blocks.len()
                )));
            }
        }
        Ok(())
    }

    /// Builds the decomposition grouping the lines of a split bundle by the
    /// given partition (0-based line indices).
    pub fn from_split(split: &SplitBundle, partition: &[Vec<usize>]) -> Self {
        let mut blocks = Vec::with_capacity(partition.len());
        for part in partition {
            let names: Vec<&str> = part.iter().map(|&i| split.lines()[i].label.as_str()).collect();
            let mut weights: BTreeMap<String, Vec<Rational>> = BTreeMap::new();
            for pt in split.points() {
                let mut ws: Vec<Rational> = part
                    .iter()
                    .map(|&i| split.weight_of(&split.lines()[i], pt))
                    .collect();
                ws.sort();
                ws.reverse();
                weights.insert(pt.clone(), ws);
            }
            blocks.push(LeviBlock {
                name: names.join("+"),
                rank: part.len(),
                degree: part.iter().map(|&i| split.lines()[i].degree).sum(),
                weights,
            });
        }
        let name = blocks.iter().map(|b| b.name.clone()).collect::<Vec<_>>().join(" | ");
        LeviDecomposition { name, blocks, extra_characters: Vec::new() }
    }
}

/// The one-block decomposition of any bundle.
pub fn trivial_decomposition(ambient: &ParabolicBundle) -> LeviDecomposition {
    let mut weights = BTreeMap::new();
    for pt in ambient.points() {
        let r = i64::from(pt.datum.r());
        let ws = pt
            .datum
            .weights()
            .iter()
            .map(|&w| Rational::new(i64::from(w).into(), r.into()))
            .collect();
        weights.insert(pt.label.clone(), ws);
    }
    LeviDecomposition {
        name: "full".into(),
        blocks: vec![LeviBlock {
            name: "full".into(),
            rank: ambient.rank(),
            degree: ambient.degree(),
            weights,
        }],
        extra_characters: Vec::new(),
    }
}

/// All set partitions of {0, …, k−1}, each block ordered, blocks ordered by
/// first element, partitions in restricted-growth order.
pub fn set_partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
    fn extend(codes: &mut Vec<usize>, max: usize, k: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if codes.len() == k {
            let blocks = max + 1;
            let mut partition = vec![Vec::new(); blocks];
            for (i, &b) in codes.iter().enumerate() {
                partition[b].push(i);
            }
            out.push(partition);
            return;
        }
        for b in 0..=max + 1 {
            codes.push(b);
            extend(codes, max.max(b), k, out);
            codes.pop();
        }
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut codes = vec![0];
    extend(&mut codes, 0, k, &mut out);
    out
}

/// Every grouping of the line summands, as decompositions.  Exhaustive, so
/// the rank is capped.
pub fn enumerate_split_decompositions(split: &SplitBundle) -> Result<Vec<LeviDecomposition>> {
    const LIMIT: usize = 4;
    if split.rank() > LIMIT {
        return Err(Error::RankTooLarge(split.rank()));
    }
    Ok(set_partitions(split.rank())
        .iter()
        .map(|partition| LeviDecomposition::from_split(split, partition))
        .collect())
}

/// Degree of the line associated to a character (c_1, …, c_k) of the
/// block-diagonal subgroup: Σ c_b · par_deg(block_b).
pub fn character_line_degree(decomposition: &LeviDecomposition, character: &[i64]) -> Rational {
    assert_eq!(character.len(), decomposition.blocks.len(), "character length mismatch");
    let mut total = Rational::zero();
    for (c, b) in character.iter().zip(&decomposition.blocks) {
        total += Rational::from_integer((*c).into()) * b.par_deg();
    }
    total
}

/// One evaluated (decomposition, character) pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionCheck {
    pub decomposition: String,
    pub character: Vec<i64>,
    pub degree: Rational,
}

/// Outcome of the existence criterion over a family of decompositions.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub checks: Vec<CriterionCheck>,
    pub warning: Option<String>,
}

impl CriterionReport {
    pub fn failures(&self) -> impl Iterator<Item = &CriterionCheck> {
        self.checks.iter().filter(|c| !c.degree.is_zero())
    }

    pub fn connection_exists(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Flags parameter ranges the existence criterion is not stated for.
pub fn hypothesis_warning(genus: Option<u32>, points: usize) -> Option<String> {
    match genus {
        Some(g) if g >= 1 => None,
        _ if points >= 2 => None,
        Some(_) => Some(format!(
            "genus 0 with {points} marked point(s): the existence criterion assumes at least two marked points on a rational curve"
        )),
        None => Some(format!(
            "genus not given and only {points} marked point(s): the existence criterion assumes at least two marked points on a rational curve"
        )),
    }
}

/// Evaluates every (decomposition, character) pair: the per-block
/// determinant characters always, then any extra characters.  A compatible
/// connection exists iff no paired degree is nonzero.
pub fn weil_atiyah_check(
    ambient: &ParabolicBundle,
    decompositions: &[LeviDecomposition],
    genus: Option<u32>,
) -> Result<CriterionReport> {
    let mut checks = Vec::new();
    for d in decompositions {
        d.validate(ambient)?;
        let k = d.blocks.len();
        for b in 0..k {
            let mut character = vec![0i64; k];
            character[b] = 1;
            let degree = character_line_degree(d, &character);
            checks.push(CriterionCheck { decomposition: d.name.clone(), character, degree });
        }
        for ch in &d.extra_characters {
            let degree = character_line_degree(d, ch);
            checks.push(CriterionCheck {
                decomposition: d.name.clone(),
                character: ch.clone(),
                degree,
            });
        }
    }
    Ok(CriterionReport { checks, warning: hypothesis_warning(genus, ambient.points().len()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn point(label: &str, r: u32, p: Vec<u32>) -> PointDatum {
        PointDatum { label: label.into(), datum: ParabolicLocalDatum::new(r, p).unwrap() }
    }

    #[test]
    fn par_deg_sums_weights() {
        let b = ParabolicBundle::new(4, -1, vec![point("q", 4, vec![3, 1, 1, 0])]).unwrap();
        assert_eq!(b.par_deg(), rat(1, 4));
    }

    #[test]
    fn line_criterion() {
        let b = ParabolicBundle::new(
            1,
            -1,
            vec![point("a", 2, vec![1]), point("b", 2, vec![1])],
        )
        .unwrap();
        let report = line_connection_exists(&b).unwrap();
        assert_eq!(report, LineReport { par_deg: rat_int(0), exists: true });

        let b = ParabolicBundle::new(1, -1, vec![point("a", 2, vec![1])]).unwrap();
        assert!(!line_connection_exists(&b).unwrap().exists);

        let b = ParabolicBundle::new(2, 0, vec![point("a", 2, vec![1, 0])]).unwrap();
        assert!(matches!(
            line_connection_exists(&b),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        assert_eq!(set_partitions(1).len(), 1);
        assert_eq!(set_partitions(2).len(), 2);
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(4).len(), 15);
        // the finest partition of 3 is present
        assert!(set_partitions(3).contains(&vec![vec![0], vec![1], vec![2]]));
    }

    fn two_lines(d1: i64, d2: i64, w1: Rational, w2: Rational) -> SplitBundle {
        SplitBundle::new(vec![
            LineData {
                label: "L1".into(),
                degree: d1,
                weights: BTreeMap::from([("q".to_string(), w1)]),
            },
            LineData {
                label: "L2".into(),
                degree: d2,
                weights: BTreeMap::from([("q".to_string(), w2)]),
            },
        ])
        .unwrap()
    }

    #[test]
    fn split_ambient_collects_weights() {
        let split = two_lines(0, -1, rat(1, 2), rat(1, 3));
        let ambient = split.ambient().unwrap();
        assert_eq!(ambient.rank(), 2);
        assert_eq!(ambient.degree(), -1);
        let pt = &ambient.points()[0];
        assert_eq!(pt.datum.r(), 6);
        assert_eq!(pt.datum.weights(), &[3, 2]);
    }

    #[test]
    fn obstructed_split_bundle_has_a_witness() {
        // par-degs (1/2, -1/2): total zero, but the fine decomposition fails
        let split = two_lines(0, -1, rat(1, 2), rat(1, 2));
        assert_eq!(split.line_par_deg(0), rat(1, 2));
        assert_eq!(split.line_par_deg(1), rat(-1, 2));

        let ambient = split.ambient().unwrap();
        let decomps = enumerate_split_decompositions(&split).unwrap();
        assert_eq!(decomps.len(), 2);
        let report = weil_atiyah_check(&ambient, &decomps, Some(0)).unwrap();
        assert!(!report.connection_exists());
        let witness = report.failures().next().unwrap();
        assert_eq!(witness.decomposition, "L1 | L2");
        assert_eq!(witness.character, vec![1, 0]);
        assert_eq!(witness.degree, rat(1, 2));
        // single marked point on a rational curve: outside the hypotheses
        assert!(report.warning.is_some());
    }

    #[test]
    fn balanced_split_bundle_passes() {
        let split = two_lines(-1, -1, rat(1, 2), rat(1, 2));
        // make both lines parabolically flat with a second point
        let mut lines = split.lines().to_vec();
        for l in &mut lines {
            l.weights.insert("s".into(), rat(1, 2));
        }
        let split = SplitBundle::new(lines).unwrap();
        let ambient = split.ambient().unwrap();
        let decomps = enumerate_split_decompositions(&split).unwrap();
        let report = weil_atiyah_check(&ambient, &decomps, Some(0)).unwrap();
        assert!(report.connection_exists());
        assert!(report.warning.is_none());
    }

    #[test]
    fn validation_catches_mismatched_decompositions() {
        let split = two_lines(0, -1, rat(1, 2), rat(1, 2));
        let ambient = split.ambient().unwrap();
        let mut decomp = trivial_decomposition(&ambient);
        decomp.blocks[0].degree = 0;
        assert!(matches!(
            weil_atiyah_check(&ambient, &[decomp], None),
            Err(Error::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn rank_cap_is_enforced() {
        let lines: Vec<LineData> = (0..5)
            .map(|i| LineData { label: format!("L{i}"), degree: 0, weights: BTreeMap::new() })
            .collect();
        let split = SplitBundle::new(lines).unwrap();
        assert!(matches!(enumerate_split_decompositions(&split), Err(Error::RankTooLarge(5))));
    }

    #[test]
    fn hypothesis_warnings() {
        assert!(hypothesis_warning(Some(0), 1).is_some());
        assert!(hypothesis_warning(None, 0).is_some());
        assert!(hypothesis_warning(Some(0), 2).is_none());
        assert!(hypothesis_warning(Some(1), 0).is_none());
        assert!(hypothesis_warning(None, 2).is_none());
    }
}
