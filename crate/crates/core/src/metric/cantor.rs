use num::{BigRational, One, Zero};

/// Two-map self-similar Cantor set on `[0, 1]` generated by
/// `x ↦ νx` and `x ↦ νx + 1 − ν`, represented at a finite construction depth.
///
/// Membership means membership in the depth-`d` approximation `C_d`, the
/// union of the `2^d` level-`d` cylinder intervals. All cylinder endpoints are
/// points of the limit set itself.
#[derive(Clone, Debug, PartialEq)]
pub struct CantorSet {
    contraction: BigRational,
    depth: u32,
    endpoints: Vec<BigRational>,
}

impl CantorSet {
    pub fn new(contraction: BigRational, depth: u32) -> Self {
        let mut intervals = vec![(BigRational::zero(), BigRational::one())];
        for _ in 0..depth {
            intervals = refine(&intervals, &contraction);
        }
        let mut endpoints: Vec<BigRational> = intervals.into_iter().flat_map(|(a, b)| [a, b]).collect();
        endpoints.sort();
        endpoints.dedup();
        CantorSet {
            contraction,
            depth,
            endpoints,
        }
    }

    pub fn middle_thirds(depth: u32) -> Self {
        Self::new(crate::rational::from_ratio(1, 3), depth)
    }

    pub fn contraction(&self) -> &BigRational {
        &self.contraction
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Sorted endpoints of the level-`depth` cylinders.
    pub fn endpoints(&self) -> &[BigRational] {
        &self.endpoints
    }

    /// Left endpoints of the level-`level` cylinders (`level ≤ depth`).
    pub fn cylinder_starts(&self, level: u32) -> Vec<BigRational> {
        self.cylinders(level).into_iter().map(|(a, _)| a).collect()
    }

    pub fn cylinders(&self, level: u32) -> Vec<(BigRational, BigRational)> {
        let mut intervals = vec![(BigRational::zero(), BigRational::one())];
        for _ in 0..level {
            intervals = refine(&intervals, &self.contraction);
        }
        intervals
    }

    /// Membership in the depth-`depth` approximation.
    pub fn contains(&self, x: &BigRational) -> bool {
        let one = BigRational::one();
        if x < &BigRational::zero() || x > &one {
            return false;
        }
        let right = &one - &self.contraction;
        let mut y = x.clone();
        for _ in 0..self.depth {
            if y <= self.contraction {
                y = &y / &self.contraction;
            } else if y >= right {
                y = (&y - &right) / &self.contraction;
            } else {
                return false;
            }
        }
        true
    }

    /// Endpoints lying in `[lo, hi]`.
    pub fn endpoints_in(&self, lo: &BigRational, hi: &BigRational) -> &[BigRational] {
        let start = self.endpoints.partition_point(|p| p < lo);
        let end = self.endpoints.partition_point(|p| p <= hi);
        &self.endpoints[start..end.max(start)]
    }
}

fn refine(intervals: &[(BigRational, BigRational)], nu: &BigRational) -> Vec<(BigRational, BigRational)> {
    let mut out = Vec::with_capacity(intervals.len() * 2);
    for (a, b) in intervals {
        let w = (b - a) * nu;
        out.push((a.clone(), a + &w));
        out.push((b - &w, b.clone()));
    }
    out
}
