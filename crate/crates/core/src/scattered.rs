//! Countable ordinals below `ω^ω` (plus `ω^ω` itself), the
//! Cantor–Bendixson derivative of ordinal spaces `[0, β]`, and embeddings
//! of those spaces into `[0, 1]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{Point2, PointCloud};

/// One `ω^exponent · coefficient` summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: u32,
    pub coefficient: u64,
}

/// An ordinal in Cantor normal form, or the single marker `ω^ω`.
///
/// `Cnf` terms have strictly decreasing exponents and positive
/// coefficients; the empty list is `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CnfOrdinal {
    Cnf(Vec<Term>),
    OmegaOmega,
}

impl CnfOrdinal {
    pub fn zero() -> Self {
        CnfOrdinal::Cnf(Vec::new())
    }

    pub fn natural(n: u64) -> Self {
        Self::monomial(0, n)
    }

    /// `ω^exponent · coefficient`.
    pub fn monomial(exponent: u32, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Self::zero();
        }
        CnfOrdinal::Cnf(vec![Term {
            exponent,
            coefficient,
        }])
    }

    pub fn omega_pow(exponent: u32) -> Self {
        Self::monomial(exponent, 1)
    }

    /// Builds from terms in any order, normalizing by ordinal addition.
    pub fn from_terms(terms: &[(u32, u64)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, &(e, c)| {
            acc.checked_add(&Self::monomial(e, c))
                .expect("finite CNF sum")
        })
    }

    pub fn terms(&self) -> Option<&[Term]> {
        match self {
            CnfOrdinal::Cnf(t) => Some(t),
            CnfOrdinal::OmegaOmega => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CnfOrdinal::Cnf(t) if t.is_empty())
    }

    /// Leading exponent; `None` for `0` and for `ω^ω`.
    pub fn degree(&self) -> Option<u32> {
        self.terms()?.first().map(|t| t.exponent)
    }

    /// Limit ordinals: nonzero with no finite last summand.
    pub fn is_limit(&self) -> bool {
        match self {
            CnfOrdinal::OmegaOmega => true,
            CnfOrdinal::Cnf(t) => t.last().is_some_and(|t| t.exponent > 0),
        }
    }

    /// True iff `self = ω^k · δ` for some `δ`, i.e. every exponent is `≥ k`.
    pub fn divisible_by_omega_pow(&self, k: u32) -> bool {
        match self {
            CnfOrdinal::OmegaOmega => true,
            CnfOrdinal::Cnf(t) => t.iter().all(|t| t.exponent >= k),
        }
    }

    /// Largest multiple of `ω^k` that is `≤ self`.
    pub fn floor_to_omega_pow(&self, k: u32) -> Self {
        match self {
            CnfOrdinal::OmegaOmega => CnfOrdinal::OmegaOmega,
            CnfOrdinal::Cnf(t) => {
                CnfOrdinal::Cnf(t.iter().copied().filter(|t| t.exponent >= k).collect())
            }
        }
    }

    /// Ordinal sum `self + rhs`; `None` if the result is not below `ω^ω`
    /// (other than `ω^ω` itself as `0 + ω^ω`).
    pub fn checked_add(&self, rhs: &Self) -> Option<Self> {
        match (self, rhs) {
            (_, CnfOrdinal::Cnf(b)) if b.is_empty() => Some(self.clone()),
            (CnfOrdinal::Cnf(_), CnfOrdinal::OmegaOmega) => Some(CnfOrdinal::OmegaOmega),
            (CnfOrdinal::OmegaOmega, _) => None,
            (CnfOrdinal::Cnf(a), CnfOrdinal::Cnf(b)) => {
                let lead = b[0];
                let mut out: Vec<Term> = a
                    .iter()
                    .copied()
                    .take_while(|t| t.exponent > lead.exponent)
                    .collect();
                let mut rest = b.iter().copied();
                match a.iter().find(|t| t.exponent == lead.exponent) {
                    Some(t) => {
                        rest.next();
                        out.push(Term {
                            exponent: lead.exponent,
                            coefficient: t.coefficient.checked_add(lead.coefficient)?,
                        });
                    }
                    None => {}
                }
                out.extend(rest);
                Some(CnfOrdinal::Cnf(out))
            }
        }
    }
}

/// Lexicographic comparison of CNF terms; `ω^ω` above everything else.
pub fn cnf_compare(a: &CnfOrdinal, b: &CnfOrdinal) -> Ordering {
    match (a, b) {
        (CnfOrdinal::OmegaOmega, CnfOrdinal::OmegaOmega) => Ordering::Equal,
        (CnfOrdinal::OmegaOmega, _) => Ordering::Greater,
        (_, CnfOrdinal::OmegaOmega) => Ordering::Less,
        (CnfOrdinal::Cnf(x), CnfOrdinal::Cnf(y)) => {
            for (s, t) in x.iter().zip(y) {
                let ord = s
                    .exponent
                    .cmp(&t.exponent)
                    .then(s.coefficient.cmp(&t.coefficient));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            x.len().cmp(&y.len())
        }
    }
}

impl Ord for CnfOrdinal {
    fn cmp(&self, other: &Self) -> Ordering {
        cnf_compare(self, other)
    }
}

impl PartialOrd for CnfOrdinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CnfOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = match self {
            CnfOrdinal::OmegaOmega => return f.write_str("w^w"),
            CnfOrdinal::Cnf(t) if t.is_empty() => return f.write_str("0"),
            CnfOrdinal::Cnf(t) => t,
        };
        for (i, t) in terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match (t.exponent, t.coefficient) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for CnfOrdinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `w^a*c + ... + c0`. `ω` may stand in for `w`, `w` alone is
/// `w^1`, and `w^w` is the `ω^ω` marker. Summands in non-descending order
/// are combined by ordinal addition.
impl FromStr for CnfOrdinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('ω', "w");
        let err = |m: String| Error::OrdinalSyntax(format!("{m} in `{s}`"));
        if s.trim().is_empty() {
            return Err(err("empty ordinal".into()));
        }
        let nat = |t: &str, what: &str| -> Result<u64> {
            t.trim().parse::<u64>().map_err(|_| {
                err(format!(
                    "expected a natural number for {what}, got `{}`",
                    t.trim()
                ))
            })
        };
        let mut acc = CnfOrdinal::zero();
        for part in s.split('+') {
            let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            let summand = if part == "w^w" {
                CnfOrdinal::OmegaOmega
            } else if let Some(rest) = part.strip_prefix('w') {
                let (pow, coef) = match rest.split_once('*') {
                    Some((p, c)) => (p, nat(c, "a coefficient")?),
                    None => (rest, 1),
                };
                let exponent = match pow.strip_prefix('^') {
                    Some(e) => u32::try_from(nat(e, "an exponent")?)
                        .map_err(|_| err(format!("exponent `{e}` is too large")))?,
                    None if pow.is_empty() => 1,
                    None => return Err(err(format!("unexpected `{pow}` after w"))),
                };
                CnfOrdinal::monomial(exponent, coef)
            } else {
                CnfOrdinal::natural(nat(&part, "a finite summand")?)
            };
            acc = acc
                .checked_add(&summand)
                .ok_or_else(|| err("only w^w itself is supported at or above w^w".into()))?;
        }
        Ok(acc)
    }
}

/// The subspace of `[0, β]` left after `level` Cantor–Bendixson
/// derivatives: all of `[0, β]` at level 0, and the positive multiples of
/// `ω^level` that are `≤ β` afterwards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdinalSpace {
    pub beta: CnfOrdinal,
    pub level: u32,
}

impl OrdinalSpace {
    pub fn new(beta: CnfOrdinal) -> Self {
        OrdinalSpace { beta, level: 0 }
    }

    pub fn contains(&self, gamma: &CnfOrdinal) -> bool {
        if gamma > &self.beta {
            return false;
        }
        self.level == 0 || (!gamma.is_zero() && gamma.divisible_by_omega_pow(self.level))
    }

    pub fn is_empty(&self) -> bool {
        self.level > 0 && self.beta.floor_to_omega_pow(self.level).is_zero()
    }

    /// No accumulation points, i.e. the next derivative is empty.
    pub fn is_discrete(&self) -> bool {
        cb_derivative(self).is_empty()
    }
}

/// Accumulation points of `X`: a point of `[0, β]` is a limit of smaller
/// points exactly when it is a limit ordinal, and among multiples of `ω^k`
/// the limits are the multiples of `ω^{k+1}`.
pub fn cb_derivative(x: &OrdinalSpace) -> OrdinalSpace {
    OrdinalSpace {
        beta: x.beta.floor_to_omega_pow(x.level + 1),
        level: x.level + 1,
    }
}

/// Cantor–Bendixson height of `[0, β]`: the leading exponent for finite
/// CNF, and `ω` for `ω^ω`.
pub fn height(beta: &CnfOrdinal) -> CnfOrdinal {
    match beta {
        CnfOrdinal::OmegaOmega => CnfOrdinal::omega_pow(1),
        b => CnfOrdinal::natural(b.degree().map_or(0, u64::from)),
    }
}

/// Counts derivatives until the space is discrete; `None` if that does not
/// happen within `max_steps`.
pub fn height_by_derivation(beta: &CnfOrdinal, max_steps: u32) -> Option<u32> {
    let mut x = OrdinalSpace::new(beta.clone());
    for steps in 0..=max_steps {
        if x.is_discrete() {
            return Some(steps);
        }
        x = cb_derivative(&x);
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FractalClass {
    /// Limit height: cannot be a topological fractal.
    ObstructedLimitHeight,
    /// No obstruction from the height; this is not a positive claim.
    Unobstructed,
}

pub fn classify_topological_fractal(beta: &CnfOrdinal) -> FractalClass {
    if height(beta).is_limit() {
        FractalClass::ObstructedLimitHeight
    } else {
        FractalClass::Unobstructed
    }
}

/// Upper bound on embedded points.
pub const MAX_EMBED_POINTS: usize = 2_000_000;

/// Embeds `[0, β]` into `[0, 1]` on the x-axis, truncating every
/// `ω`-sequence to its first `depth` elements.
///
/// The embedding reverses order: `β` sits at the left end and `0` at `1`,
/// and every limit ordinal is the limit of the coordinates of the points
/// below it. For `ω^ω` the space is the union of blocks `B_n ≅ ω^n + 1`,
/// `n = 1..=depth`, with `B_n` inside `[1/(n+1), 1/n]`, plus `ω^ω` at `0`.
/// Labels are the CNF strings of the ordinals.
pub fn embed_in_unit_interval(beta: &CnfOrdinal, depth: usize) -> Result<PointCloud> {
    if depth == 0 {
        return Err(Error::InvalidArgument(
            "embedding depth must be >= 1".into(),
        ));
    }
    let mut out = Vec::new();
    match beta {
        CnfOrdinal::Cnf(_) => {
            check_size(beta, depth)?;
            closed_interval(beta, depth, 0.0, 1.0, &mut out);
        }
        CnfOrdinal::OmegaOmega => {
            for n in 1..=depth as u32 {
                let top = CnfOrdinal::omega_pow(n);
                check_size(&top, depth)?;
                let (a, b) = (1.0 / (n as f64 + 1.0), 1.0 / n as f64);
                let m = (b - a) / 4.0;
                let mut block = Vec::new();
                closed_interval(&top, depth, a + m, b - m, &mut block);
                if n >= 2 {
                    // (ω^{n-1}, ω^n]; block 1 is all of [0, ω]
                    let floor = CnfOrdinal::omega_pow(n - 1);
                    block.retain(|(g, _)| g > &floor);
                }
                out.extend(block);
            }
            out.push((CnfOrdinal::OmegaOmega, 0.0));
        }
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    let gap = out
        .windows(2)
        .map(|w| w[1].1 - w[0].1)
        .fold(f64::INFINITY, f64::min);
    if !(gap > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} collapses distinct ordinals to the same coordinate"
        )));
    }
    let resolution = if gap.is_finite() { gap } else { 1.0 };
    let (points, labels) = out
        .into_iter()
        .map(|(g, x)| (Point2::new(x, 0.0), g.to_string()))
        .unzip();
    PointCloud::labeled(points, labels, resolution)
}

fn check_size(beta: &CnfOrdinal, depth: usize) -> Result<()> {
    let terms = beta.terms().unwrap_or(&[]);
    let mut total: u128 = 1;
    for t in terms {
        let block = (depth as u128).saturating_pow(t.exponent);
        total = total.saturating_add(block.saturating_mul(t.coefficient as u128));
    }
    if total > MAX_EMBED_POINTS as u128 {
        return Err(Error::InvalidArgument(format!(
            "embedding {beta} at depth {depth} needs about {total} points (limit {MAX_EMBED_POINTS})"
        )));
    }
    Ok(())
}

/// `[0, β]` into `[lo, hi]` with `0` at `hi` and `β` at `lo`.
fn closed_interval(
    beta: &CnfOrdinal,
    depth: usize,
    lo: f64,
    hi: f64,
    out: &mut Vec<(CnfOrdinal, f64)>,
) {
    let terms = beta.terms().expect("finite CNF").to_vec();
    let copies: u64 = terms.iter().map(|t| t.coefficient).sum();
    let slot = (hi - lo) / copies.max(1) as f64;
    let mut start = CnfOrdinal::zero();
    let mut k = 0u64;
    for t in terms {
        for _ in 0..t.coefficient {
            let top = hi - k as f64 * slot;
            half_open(&start, t.exponent, depth, top - slot, top, out);
            start = start
                .checked_add(&CnfOrdinal::omega_pow(t.exponent))
                .expect("below w^w");
            k += 1;
        }
    }
    out.push((beta.clone(), lo));
}

/// `[α, α + ω^e)` into `(lo, hi]`, with `α` at `hi` and the missing
/// supremum at `lo`.
fn half_open(
    alpha: &CnfOrdinal,
    e: u32,
    depth: usize,
    lo: f64,
    hi: f64,
    out: &mut Vec<(CnfOrdinal, f64)>,
) {
    if e == 0 {
        out.push((alpha.clone(), hi));
        return;
    }
    let w = hi - lo;
    let step = CnfOrdinal::omega_pow(e - 1);
    let mut start = alpha.clone();
    for j in 0..depth {
        let (a, b) = (lo + w / (j as f64 + 2.0), lo + w / (j as f64 + 1.0));
        // Piece 0 keeps its top at `hi` so that `α` lands there.
        let top = if j == 0 { b } else { b - (b - a) / 4.0 };
        half_open(&start, e - 1, depth, a + (b - a) / 4.0, top, out);
        start = start.checked_add(&step).expect("below w^w");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn o(s: &str) -> CnfOrdinal {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        for s in [
            "0",
            "7",
            "w",
            "w + 1",
            "w*5 + 3",
            "w^2",
            "w^2*2 + w*5",
            "w^9*9",
            "w^w",
        ] {
            assert_eq!(o(s).to_string(), s);
        }
        assert_eq!(o("ω^3"), CnfOrdinal::omega_pow(3));
        assert_eq!(o("3 + w"), o("w"));
        assert_eq!(o("w + w^2"), o("w^2"));
        assert_eq!(o("w*2 + w*3"), o("w*5"));
        assert_eq!(o(" w^1*1 + 0 "), o("w"));
        for bad in ["", "x", "w^", "w^-1", "w*", "w^2*", "w^w + 1", "w^3w"] {
            assert!(
                matches!(bad.parse::<CnfOrdinal>(), Err(Error::OrdinalSyntax(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(cnf_compare(&o("w^2"), &o("w*5 + 3")), Ordering::Greater);
        assert_eq!(cnf_compare(&o("w + 1"), &o("w + 1")), Ordering::Equal);
        assert_eq!(
            cnf_compare(&CnfOrdinal::OmegaOmega, &o("w^9*9")),
            Ordering::Greater
        );
        assert!(o("w") < o("w + 1"));
        assert!(o("w*2") > o("w + 100"));
        assert!(o("0") < o("1"));
    }

    #[test]
    fn derivative_examples() {
        let d = cb_derivative(&OrdinalSpace::new(o("w")));
        assert_eq!(
            d,
            OrdinalSpace {
                beta: o("w"),
                level: 1
            }
        );
        assert!(d.contains(&o("w")));
        assert!(!d.contains(&o("0")));
        assert!(!d.contains(&o("3")));
        assert_eq!(
            cb_derivative(&OrdinalSpace::new(o("w^2"))),
            OrdinalSpace {
                beta: o("w^2"),
                level: 1
            }
        );
        let finite = cb_derivative(&OrdinalSpace::new(o("5")));
        assert!(finite.is_empty());
        assert!(OrdinalSpace::new(o("5")).is_discrete());
    }

    #[test]
    fn heights() {
        assert_eq!(height(&o("w")), o("1"));
        assert_eq!(height(&o("w^3")), o("3"));
        assert_eq!(height(&CnfOrdinal::OmegaOmega), o("w"));
        assert_eq!(height(&o("0")), o("0"));
        assert_eq!(height(&o("7")), o("0"));
        for n in 0..=9 {
            let b = CnfOrdinal::omega_pow(n);
            assert_eq!(height(&b), CnfOrdinal::natural(n as u64));
            assert_eq!(height_by_derivation(&b, 100), Some(n));
            assert_eq!(classify_topological_fractal(&b), FractalClass::Unobstructed);
        }
        assert_eq!(height_by_derivation(&CnfOrdinal::OmegaOmega, 100), None);
        assert_eq!(
            classify_topological_fractal(&CnfOrdinal::OmegaOmega),
            FractalClass::ObstructedLimitHeight
        );
        assert_eq!(
            classify_topological_fractal(&o("7")),
            FractalClass::Unobstructed
        );
    }

    /// Is `γ ∈ S` a limit of smaller points of `S`? Checked directly: for
    /// the fundamental sequence `γ_j → γ`, each `[γ_j, γ)` must meet `S`.
    /// Candidates are `γ_j` and `γ_j + ω^i·c` for small `i`, `c`.
    fn accumulates(gamma: &CnfOrdinal, in_s: &dyn Fn(&CnfOrdinal) -> bool) -> bool {
        let terms = gamma.terms().unwrap();
        let Some(last) = terms.last() else {
            return false;
        };
        if last.exponent == 0 {
            return false;
        }
        let mut head = terms.to_vec();
        let l = head.len() - 1;
        head[l].coefficient -= 1;
        head.retain(|t| t.coefficient > 0);
        let alpha = CnfOrdinal::Cnf(head);
        (1..=12).all(|j| {
            let gj = alpha
                .checked_add(&CnfOrdinal::monomial(last.exponent - 1, j))
                .unwrap();
            std::iter::once(gj.clone())
                .chain((0..last.exponent).flat_map(|i| {
                    let gj = gj.clone();
                    (1..=3).map(move |c| gj.checked_add(&CnfOrdinal::monomial(i, c)).unwrap())
                }))
                .any(|cand| &cand < gamma && in_s(&cand))
        })
    }

    fn oracle_member(beta: &CnfOrdinal, k: u32, gamma: &CnfOrdinal) -> bool {
        if k == 0 {
            return gamma <= beta;
        }
        oracle_member(beta, k - 1, gamma) && accumulates(gamma, &|g| oracle_member(beta, k - 1, g))
    }

    fn arb_below(beta: CnfOrdinal) -> impl Strategy<Value = CnfOrdinal> {
        proptest::collection::vec((0u32..4, 0u64..4), 0..4).prop_map(move |ts| {
            let g = CnfOrdinal::from_terms(&ts);
            if g <= beta {
                g
            } else {
                beta.floor_to_omega_pow(ts.len() as u32 % 4)
            }
        })
    }

    #[test]
    fn derivative_matches_limit_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for beta in ["w", "w*3", "w^2", "w^2*2 + w*5", "w^3"].map(o) {
            let mut x = OrdinalSpace::new(beta.clone());
            for k in 0..=3 {
                for _ in 0..1000 {
                    let ts: Vec<(u32, u64)> = (0..rng.random_range(0..4))
                        .map(|_| (rng.random_range(0..4), rng.random_range(0..4)))
                        .collect();
                    let mut g = CnfOrdinal::from_terms(&ts);
                    if g > beta {
                        g = beta.floor_to_omega_pow(rng.random_range(0..4));
                    }
                    let expect = oracle_member(&beta, k, &g);
                    assert_eq!(x.contains(&g), expect, "beta {beta}, k {k}, gamma {g}");
                    let divides =
                        k == 0 || (g.divisible_by_omega_pow(k) && g >= CnfOrdinal::omega_pow(k));
                    assert_eq!(expect, divides && g <= beta);
                }
                x = cb_derivative(&x);
            }
        }
    }

    #[test]
    fn height_is_number_of_derivatives() {
        for deg in 0..=5u32 {
            for tail in [&[][..], &[(0u32, 3u64)], &[(1, 2), (0, 1)]] {
                let mut ts = vec![(deg, 2u64)];
                ts.extend(tail.iter().filter(|t| t.0 < deg));
                let b = CnfOrdinal::from_terms(&ts);
                assert_eq!(height_by_derivation(&b, 50), Some(deg), "{b}");
                assert_eq!(height(&b), CnfOrdinal::natural(deg as u64));
            }
        }
    }

    fn assert_order_reversing(c: &PointCloud) {
        let labels = c.labels().unwrap();
        let mut pairs: Vec<(f64, CnfOrdinal)> = c
            .points()
            .iter()
            .zip(labels)
            .map(|(p, l)| (p.x, o(l)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pairs.windows(2) {
            assert!(w[0].0 < w[1].0);
            assert!(
                w[0].1 > w[1].1,
                "{} at {} vs {} at {}",
                w[0].1,
                w[0].0,
                w[1].1,
                w[1].0
            );
        }
    }

    #[test]
    fn embed_convergent_sequence() {
        let c = embed_in_unit_interval(&o("w"), 10).unwrap();
        assert_eq!(c.len(), 11);
        let i = c.labels().unwrap().iter().position(|l| l == "w").unwrap();
        assert_eq!(c.points()[i].x, 0.0);
        assert_order_reversing(&c);
        for p in c.points() {
            assert!((0.0..=1.0).contains(&p.x) && p.y == 0.0);
        }
    }

    #[test]
    fn embed_general_cnf() {
        for (s, d) in [("7", 3), ("w^2*2 + w*5 + 3", 6), ("w^3", 5), ("w + 1", 4)] {
            let c = embed_in_unit_interval(&o(s), d).unwrap();
            assert_order_reversing(&c);
        }
        assert_eq!(embed_in_unit_interval(&o("7"), 3).unwrap().len(), 8);
        assert!(embed_in_unit_interval(&o("w^9"), 10).is_err());
        assert!(embed_in_unit_interval(&o("w"), 0).is_err());
    }

    #[test]
    fn embed_omega_omega_blocks() {
        let depth = 4;
        let c = embed_in_unit_interval(&CnfOrdinal::OmegaOmega, depth).unwrap();
        assert_order_reversing(&c);
        let labels = c.labels().unwrap();
        let mut spans = Vec::new();
        for n in 1..=depth as u32 {
            let lo = if n == 1 {
                o("0")
            } else {
                CnfOrdinal::omega_pow(n - 1)
            };
            let hi = CnfOrdinal::omega_pow(n);
            let xs: Vec<f64> = c
                .points()
                .iter()
                .zip(labels)
                .filter(|(_, l)| {
                    let g = o(l);
                    (g > lo || (n == 1 && g == lo)) && g <= hi
                })
                .map(|(p, _)| p.x)
                .collect();
            let (min, max) = xs
                .iter()
                .fold((f64::MAX, f64::MIN), |a, &x| (a.0.min(x), a.1.max(x)));
            assert!(
                min >= 1.0 / (n as f64 + 1.0) && max <= 1.0 / n as f64,
                "block {n}"
            );
            let block: Vec<CnfOrdinal> = labels
                .iter()
                .map(|l| o(l))
                .filter(|g| g > &lo && g <= &hi)
                .collect();
            let top = block.iter().max().unwrap();
            assert_eq!(height(top), CnfOrdinal::natural(n as u64));
            spans.push((min, max));
        }
        for w in spans.windows(2) {
            let gap = w[0].0 - w[1].1;
            let smaller = (w[0].1 - w[0].0).min(w[1].1 - w[1].0);
            assert!(gap >= 0.5 * smaller, "gap {gap} vs span {smaller}");
        }
        assert_eq!(
            c.points()[c.labels().unwrap().iter().position(|l| l == "w^w").unwrap()].x,
            0.0
        );
    }

    proptest! {
        #[test]
        fn compare_is_consistent_with_addition(a in arb_below(o("w^4")), b in arb_below(o("w^4"))) {
            let s = a.checked_add(&b).unwrap();
            prop_assert!(s >= b);
            if !b.is_zero() {
                prop_assert!(s > a);
            }
            prop_assert_eq!(cnf_compare(&a, &b), cnf_compare(&b, &a).reverse());
            prop_assert_eq!(o(&a.to_string()), a);
        }
    }
}
