//! Disjoint families of half-plane horoballs with a location index.
//!
//! Two horoballs tangent to `ℝ` at `ξ, ξ'` with diameters `D, D'` have
//! disjoint interiors exactly when `(ξ − ξ')² ≥ D·D'`, which is what the
//! certificate checks in rational arithmetic.

use std::fmt;
use std::path::Path;

use num::integer::gcd;
use num::{BigRational, One, Signed};
use serde_json::json;
use thiserror::Error;

use crate::hyperbolic::{HPoint, HalfPlaneHoroball, HyperbolicError, InfinityHoroball};
use crate::rational::{self, from_int, from_ratio};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("{0} must be at least 1")]
    Domain(&'static str),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("family is not disjoint: {}", describe(.0))]
    NotDisjoint(Vec<Violation>),
    #[error("basepoint i lies inside the horoball at {0}")]
    BasepointInside(String),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn describe(v: &[Violation]) -> String {
    let shown: Vec<String> = v.iter().take(5).map(|x| x.to_string()).collect();
    let more = if v.len() > 5 {
        format!(" and {} more", v.len() - 5)
    } else {
        String::new()
    };
    format!("{}{more}", shown.join(", "))
}

/// How a family came to be.
#[derive(Clone, Debug, PartialEq)]
pub enum Generation {
    Ford { qmax: u64 },
    UserFile { path: String },
    Explicit,
    Rescaled { parent: Box<Generation>, s: f64 },
}

impl fmt::Display for Generation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generation::Ford { qmax } => write!(f, "ford({qmax})"),
            Generation::UserFile { path } => write!(f, "file({path})"),
            Generation::Explicit => write!(f, "explicit"),
            Generation::Rescaled { parent, s } => write!(f, "rescaled({parent}, {s})"),
        }
    }
}

/// A pair of members whose interiors overlap. `None` stands for the
/// horoball at `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub first: String,
    pub second: Option<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.second {
            Some(b) => write!(f, "{} overlaps {}", self.first, b),
            None => write!(f, "{} overlaps the horoball at infinity", self.first),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Disjoint { pairs_checked: usize },
    Violations(Vec<Violation>),
}

impl Certificate {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, Certificate::Disjoint { .. })
    }
}

/// Members bucketed by diameter band `(2^-(k+1), 2^-k]`, each band sorted by
/// base.
#[derive(Clone, Debug, Default)]
struct LocationIndex {
    bands: Vec<Band>,
}

#[derive(Clone, Debug)]
struct Band {
    max_diameter: f64,
    bases: Vec<f64>,
    members: Vec<usize>,
}

impl LocationIndex {
    fn build(entries: &[HalfPlaneHoroball]) -> Self {
        let mut by_band: std::collections::BTreeMap<i64, Vec<usize>> = Default::default();
        for (i, h) in entries.iter().enumerate() {
            let d = rational::to_f64(&h.diameter);
            by_band.entry((-d.log2()).floor() as i64).or_default().push(i);
        }
        let bands = by_band
            .into_values()
            .map(|mut members| {
                members.sort_by(|&a, &b| entries[a].base.cmp(&entries[b].base));
                let bases = members.iter().map(|&i| entries[i].base_f64()).collect();
                let max_diameter = members.iter().map(|&i| rational::to_f64(&entries[i].diameter)).fold(0.0, f64::max);
                Band {
                    max_diameter,
                    bases,
                    members,
                }
            })
            .collect();
        LocationIndex { bands }
    }

    /// Members with base in `[x − w(D), x + w(D)]` for bands with
    /// `D_max ≥ min_diameter`, where `w` is given per band. Windows are widened
    /// slightly so float rounding can only add candidates.
    fn candidates(&self, x: f64, min_diameter: f64, width: impl Fn(f64) -> f64) -> Vec<usize> {
        let floor = min_diameter * (1.0 - 1e-9);
        let slack = 1e-12 * (1.0 + x.abs());
        self.bands
            .iter()
            .filter(move |b| b.max_diameter >= floor)
            .flat_map(move |b| {
                let w = width(b.max_diameter) * (1.0 + 1e-9) + slack;
                let lo = b.bases.partition_point(|&p| p < x - w);
                let hi = b.bases.partition_point(|&p| p <= x + w);
                b.members[lo..hi].iter().copied()
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct HoroballFamily {
    entries: Vec<HalfPlaneHoroball>,
    infinity: Option<InfinityHoroball>,
    pub generation: Generation,
    certificate: Certificate,
    index: LocationIndex,
    /// Per member: float base and shadow radius.
    shadows: Vec<(f64, Result<f64, HyperbolicError>)>,
}

impl HoroballFamily {
    /// Builds a family from members plus an optional horoball at `∞`,
    /// certifying disjointness and basepoint exclusion.
    pub fn new(mut entries: Vec<HalfPlaneHoroball>, infinity: Option<InfinityHoroball>, generation: Generation) -> Result<Self, FamilyError> {
        entries.sort_by(|a, b| a.base.cmp(&b.base).then(a.diameter.cmp(&b.diameter)));
        if let Some(h) = entries.iter().find(|h| h.contains_basepoint()) {
            return Err(FamilyError::BasepointInside(rational::format(&h.base)));
        }
        if infinity.as_ref().is_some_and(|h| h.height < BigRational::one()) {
            return Err(FamilyError::BasepointInside("infinity".into()));
        }
        let index = LocationIndex::build(&entries);
        let shadows = entries.iter().map(|h| (h.base_f64(), h.shadow_radius())).collect();
        let mut family = HoroballFamily {
            entries,
            infinity,
            generation,
            certificate: Certificate::Disjoint { pairs_checked: 0 },
            index,
            shadows,
        };
        family.certificate = check_disjoint(&family);
        if let Certificate::Violations(v) = &family.certificate {
            return Err(FamilyError::NotDisjoint(v.clone()));
        }
        Ok(family)
    }

    pub fn empty() -> Self {
        HoroballFamily::new(Vec::new(), None, Generation::Explicit).expect("empty family")
    }

    pub fn entries(&self) -> &[HalfPlaneHoroball] {
        &self.entries
    }

    pub fn infinity(&self) -> Option<&InfinityHoroball> {
        self.infinity.as_ref()
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest shadow radius over the members.
    pub fn max_shadow_radius(&self) -> Result<f64, HyperbolicError> {
        self.shadows.iter().try_fold(0.0f64, |m, (_, r)| Ok(m.max(r.clone()?)))
    }

    /// Each member with its float base and shadow radius, computed once at
    /// construction.
    pub fn with_shadows(&self) -> impl Iterator<Item = (&HalfPlaneHoroball, f64, Result<f64, HyperbolicError>)> + '_ {
        self.entries.iter().zip(&self.shadows).map(|(h, (b, r))| (h, *b, r.clone()))
    }

    /// The member whose open disk contains `(x, y)`, exactly.
    pub fn locate_exact(&self, x: &BigRational, y: &BigRational) -> Option<&HalfPlaneHoroball> {
        let (xf, yf) = (rational::to_f64(x), rational::to_f64(y));
        // (x − ξ)² < D y forces y < D and |x − ξ| < √(D y)
        self.index
            .candidates(xf, yf, |d| (d * yf).sqrt())
            .into_iter()
            .map(|i| &self.entries[i])
            .find(|h| h.contains_exact(x, y))
    }

    /// The member containing the float point `z`.
    pub fn locate(&self, z: HPoint) -> Option<&HalfPlaneHoroball> {
        self.index
            .candidates(z.x, z.y, |d| (d * z.y).sqrt())
            .into_iter()
            .map(|i| &self.entries[i])
            .find(|h| h.contains(z))
    }

    /// Location of the point `(x + dx, height)` with `x` exact; see
    /// [`HalfPlaneHoroball::contains_offset`].
    pub fn locate_offset(&self, x: &BigRational, dx: f64, height: f64) -> Option<&HalfPlaneHoroball> {
        let centre = rational::to_f64(x) + dx;
        self.index
            .candidates(centre, height, |d| (d * height).sqrt())
            .into_iter()
            .map(|i| &self.entries[i])
            .find(|h| h.contains_offset(x, dx, height))
    }

    /// Whether `z` lies strictly above the horoball at `∞`.
    pub fn in_infinity(&self, height: f64) -> bool {
        self.infinity.as_ref().is_some_and(|h| h.contains(height))
    }

    /// Linear scan, for cross-checking the index.
    pub fn locate_brute(&self, z: HPoint) -> Option<&HalfPlaneHoroball> {
        self.entries.iter().find(|h| h.contains(z))
    }

    pub fn records(&self) -> Vec<serde_json::Value> {
        self.entries
            .iter()
            .map(|h| {
                json!({
                    "base": rational::format(&h.base),
                    "level": h.level(),
                    "shadow_radius": h.shadow_radius().ok(),
                    "euclidean_diameter": rational::format(&h.diameter),
                })
            })
            .collect()
    }

    /// The family in the text format read by [`parse_family`].
    pub fn to_file_text(&self) -> String {
        self.entries
            .iter()
            .map(|h| format!("base={} diameter={}\n", rational::format(&h.base), rational::format(&h.diameter)))
            .collect()
    }
}

/// Ford circles over the window `[0, 1]`: diameter `1/q²` at each reduced
/// `p/q` with `q ≤ qmax`, plus `{y ≥ 1}` at `∞`.
pub fn generate_ford(qmax: u64) -> Result<HoroballFamily, FamilyError> {
    if qmax == 0 {
        return Err(FamilyError::Domain("qmax"));
    }
    let mut entries = Vec::new();
    for q in 1..=qmax {
        for p in 0..=q {
            if gcd(p, q) == 1 {
                let qq = (q as i64) * (q as i64);
                entries.push(HalfPlaneHoroball::new(from_ratio(p as i64, q as i64), from_ratio(1, qq)));
            }
        }
    }
    HoroballFamily::new(entries, Some(InfinityHoroball { height: from_int(1) }), Generation::Ford { qmax })
}

/// Exact pairwise check, restricted through the index to pairs whose bases
/// are close enough to overlap.
pub fn check_disjoint(family: &HoroballFamily) -> Certificate {
    let entries = &family.entries;
    let mut violations = Vec::new();
    let mut pairs = 0usize;
    for (i, h) in entries.iter().enumerate() {
        let d = rational::to_f64(&h.diameter);
        // overlap needs |ξ − ξ'| < √(D D') ≤ max(D, D')
        for j in family.index.candidates(h.base_f64(), 0.0, |dmax| dmax.max(d)) {
            if j <= i {
                continue;
            }
            pairs += 1;
            let g = &entries[j];
            let gap = &h.base - &g.base;
            if &gap * &gap < &h.diameter * &g.diameter {
                violations.push(Violation {
                    first: rational::format(&h.base),
                    second: Some(rational::format(&g.base)),
                });
            }
        }
        if let Some(inf) = &family.infinity {
            pairs += 1;
            if h.diameter > inf.height {
                violations.push(Violation {
                    first: rational::format(&h.base),
                    second: None,
                });
            }
        }
    }
    if violations.is_empty() {
        Certificate::Disjoint { pairs_checked: pairs }
    } else {
        Certificate::Violations(violations)
    }
}

/// Member-wise [`HalfPlaneHoroball::scaled`]; the horoball at `∞` moves up
/// by the same Busemann shift `ln s`.
pub fn rescale_family(family: &HoroballFamily, s: f64) -> Result<HoroballFamily, FamilyError> {
    if !(s > 0.0 && s < 1.0) {
        return Err(HyperbolicError::ScaleDomain(s).into());
    }
    let entries = family.entries.iter().map(|h| h.scaled(s)).collect::<Result<Vec<_>, _>>()?;
    let infinity = family.infinity.as_ref().map(|h| InfinityHoroball {
        height: &h.height / rational::from_f64(s),
    });
    HoroballFamily::new(
        entries,
        infinity,
        Generation::Rescaled {
            parent: Box::new(family.generation.clone()),
            s,
        },
    )
}

/// Parses `base=p/q diameter=r/s` records, one per line. Blank lines and
/// `#` comments are skipped; `euclidean_diameter` is accepted as a synonym.
pub fn parse_family(text: &str, generation: Generation) -> Result<HoroballFamily, FamilyError> {
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| FamilyError::Parse { line: n + 1, message };
        let (mut base, mut diameter) = (None, None);
        for field in line.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{field}`")))?;
            let value = rational::parse(value).map_err(|e| err(e.to_string()))?;
            match key {
                "base" => base = Some(value),
                "diameter" | "euclidean_diameter" => diameter = Some(value),
                other => return Err(err(format!("unknown field `{other}`"))),
            }
        }
        let base = base.ok_or_else(|| err("missing base".into()))?;
        let diameter = diameter.ok_or_else(|| err("missing diameter".into()))?;
        if !diameter.is_positive() {
            return Err(err("diameter must be positive".into()));
        }
        entries.push(HalfPlaneHoroball::new(base, diameter));
    }
    HoroballFamily::new(entries, None, generation)
}

pub fn load_family(path: &Path) -> Result<HoroballFamily, FamilyError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| FamilyError::Io { path: shown.clone(), source })?;
    parse_family(&text, Generation::UserFile { path: shown })
}

/// A discrete group through the data the strategy needs.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupDescriptor {
    pub name: String,
    pub parabolic_points: Vec<String>,
    pub critical_exponent: f64,
    /// Measured bounds of `R_j · q_j²` over a family (shadow radius against
    /// the Ford diameter law), when available.
    pub comparability: Option<(f64, f64)>,
}

impl GroupDescriptor {
    /// The modular group: one cusp class, critical exponent 1.
    pub fn modular() -> Self {
        GroupDescriptor {
            name: "PSL(2,Z)".into(),
            parabolic_points: vec!["infinity".into()],
            critical_exponent: 1.0,
            comparability: None,
        }
    }
}

/// Range of `R(p/q) · q²` over a Ford family, with `R` the shadow radius
/// from `i`.
pub fn ford_comparability(family: &HoroballFamily) -> Result<(f64, f64), HyperbolicError> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for h in &family.entries {
        let q2 = rational::to_f64(&(BigRational::one() / &h.diameter));
        let ratio = h.shadow_radius()? * q2;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ford_small() {
        let f = generate_ford(2).unwrap();
        let bases: Vec<String> = f.entries().iter().map(|h| rational::format(&h.base)).collect();
        assert_eq!(bases, ["0", "1/2", "1"]);
        let diam: Vec<String> = f.entries().iter().map(|h| rational::format(&h.diameter)).collect();
        assert_eq!(diam, ["1", "1/4", "1"]);
        assert_eq!(generate_ford(5).unwrap().len(), 11);
        assert!(matches!(generate_ford(0), Err(FamilyError::Domain(_))));
    }

    #[test]
    fn overlap_is_rejected() {
        let e = vec![
            HalfPlaneHoroball::new(from_int(0), from_ratio(1, 2)),
            HalfPlaneHoroball::new(from_ratio(1, 10), from_ratio(1, 2)),
        ];
        match HoroballFamily::new(e, None, Generation::Explicit) {
            Err(FamilyError::NotDisjoint(v)) => assert_eq!(v.len(), 1),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn diameter_one_at_zero_touches_basepoint_only() {
        let e = vec![
            HalfPlaneHoroball::new(from_int(0), from_int(1)),
            HalfPlaneHoroball::new(from_ratio(1, 10), from_int(1)),
        ];
        assert!(HoroballFamily::new(e, None, Generation::Explicit).is_err());
        let inside = vec![HalfPlaneHoroball::new(from_int(0), from_int(2))];
        assert!(matches!(
            HoroballFamily::new(inside, None, Generation::Explicit),
            Err(FamilyError::BasepointInside(_))
        ));
    }

    #[test]
    fn locate_examples() {
        let f = generate_ford(10).unwrap();
        let hit = f.locate_exact(&from_ratio(1, 2), &from_ratio(1, 8)).unwrap();
        assert_eq!(hit.base, from_ratio(1, 2));
        assert!(f.locate_exact(&from_ratio(1, 2), &from_int(3)).is_none());
        assert!(f.in_infinity(3.0));
        // tangency point of the circles at 0 and 1/2: (2/5, 1/5)
        assert!(f.locate_exact(&from_ratio(2, 5), &from_ratio(1, 5)).is_none());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "base=0 diameter=1\n\nbase=1/2 diameter=oops\n";
        match parse_family(bad, Generation::Explicit) {
            Err(FamilyError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_family("", Generation::Explicit).unwrap().is_empty());
    }

    #[test]
    fn rescale_domain_and_parentage() {
        let f = generate_ford(3).unwrap();
        assert!(rescale_family(&f, 1.5).is_err());
        let g = rescale_family(&f, 0.5).unwrap();
        assert_eq!(g.generation.to_string(), "rescaled(ford(3), 0.5)");
        assert!(g.certificate().is_disjoint());
    }
}
