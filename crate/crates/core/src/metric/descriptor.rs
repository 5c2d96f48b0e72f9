use num::{BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{CantorSet, LineSet, MetricError};
use crate::rational;
use crate::tree::TreeSpace;

/// Half-plane hyperbolicity constant `log(1 + √2)`.
pub const HALF_PLANE_DELTA: f64 = 0.881_373_587_019_543;

#[derive(Clone, Debug, PartialEq)]
pub enum SpaceKind {
    RealWindow { lo: BigRational, hi: BigRational },
    Cantor { contraction: BigRational, depth: u32 },
    HyperbolicBoundary { lo: BigRational, hi: BigRational },
    TreeBoundary { branching: u8, depth: u32 },
}

impl SpaceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SpaceKind::RealWindow { .. } => "real-window",
            SpaceKind::Cantor { .. } => "cantor",
            SpaceKind::HyperbolicBoundary { .. } => "hyperbolic-boundary",
            SpaceKind::TreeBoundary { .. } => "tree-boundary",
        }
    }
}

/// One of the four supported ambient spaces plus the constants of the
/// hyperbolic space backing it.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceDescriptor {
    pub kind: SpaceKind,
    /// Hyperbolicity of the bulk space (0 for trees).
    pub delta: f64,
    pub visual_c: f64,
    pub visual_a: f64,
}

impl SpaceDescriptor {
    pub fn real_window(lo: BigRational, hi: BigRational) -> Self {
        SpaceDescriptor {
            kind: SpaceKind::RealWindow { lo, hi },
            delta: 0.0,
            visual_c: 1.0,
            visual_a: std::f64::consts::E,
        }
    }

    pub fn cantor(contraction: BigRational, depth: u32) -> Self {
        SpaceDescriptor {
            kind: SpaceKind::Cantor { contraction, depth },
            delta: 0.0,
            visual_c: 1.0,
            visual_a: std::f64::consts::E,
        }
    }

    pub fn hyperbolic_boundary(lo: BigRational, hi: BigRational) -> Self {
        SpaceDescriptor {
            kind: SpaceKind::HyperbolicBoundary { lo, hi },
            delta: HALF_PLANE_DELTA,
            visual_c: 2.0,
            visual_a: std::f64::consts::E,
        }
    }

    pub fn tree(branching: u8, depth: u32) -> Self {
        SpaceDescriptor {
            kind: SpaceKind::TreeBoundary { branching, depth },
            delta: 0.0,
            visual_c: 1.0,
            visual_a: std::f64::consts::E,
        }
    }

    pub fn validate(&self) -> Result<(), MetricError> {
        let bad = |m: String| Err(MetricError::Descriptor(m));
        match &self.kind {
            SpaceKind::RealWindow { lo, hi } | SpaceKind::HyperbolicBoundary { lo, hi } if lo >= hi => {
                return bad(format!("window [{}, {}] is empty", rational::format(lo), rational::format(hi)));
            }
            SpaceKind::Cantor { contraction, .. }
                if !contraction.is_positive() || contraction * BigRational::from_integer(2.into()) > BigRational::one() =>
            {
                return bad(format!("contraction {} outside (0, 1/2]", rational::format(contraction)));
            }
            SpaceKind::TreeBoundary { branching, .. } if *branching < 2 => {
                return bad(format!("branching {branching} < 2"));
            }
            _ => {}
        }
        if !(self.delta >= 0.0) {
            return bad(format!("delta {} is negative", self.delta));
        }
        // C = 1 is admitted: it is exact for trees and real windows.
        if !(self.visual_c >= 1.0) || !(self.visual_a > 1.0) {
            return bad(format!(
                "visual constants C = {}, a = {} must satisfy C ≥ 1, a > 1",
                self.visual_c, self.visual_a
            ));
        }
        Ok(())
    }

    /// The playfield of a real-line space.
    pub fn line_set(&self) -> Option<LineSet> {
        match &self.kind {
            SpaceKind::RealWindow { lo, hi } | SpaceKind::HyperbolicBoundary { lo, hi } => Some(LineSet::Window {
                lo: lo.clone(),
                hi: hi.clone(),
            }),
            SpaceKind::Cantor { contraction, depth } => Some(LineSet::Cantor(CantorSet::new(contraction.clone(), *depth))),
            SpaceKind::TreeBoundary { .. } => None,
        }
    }

    pub fn tree_space(&self) -> Option<TreeSpace> {
        match self.kind {
            SpaceKind::TreeBoundary { branching, depth } => Some(TreeSpace::new(branching, depth, self.visual_a)),
            _ => None,
        }
    }

    /// Parses the TOML space schema:
    ///
    /// ```toml
    /// kind = "cantor"          # real-window | cantor | hyperbolic-boundary | tree-boundary
    /// contraction = "1/3"      # cantor
    /// depth = 10               # cantor, tree-boundary
    /// lo = "0"                 # windows
    /// hi = "1"
    /// branching = 2            # tree-boundary
    /// delta = 0.0              # optional
    /// visual_c = 1.0           # optional
    /// visual_a = 2.718281828   # optional
    /// ```
    pub fn from_toml(text: &str) -> Result<Self, MetricError> {
        let raw: RawDescriptor = toml::from_str(text).map_err(|e| MetricError::Descriptor(e.to_string()))?;
        raw.into_descriptor()
    }

    /// Key/value echo used in every artifact header.
    pub fn echo(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "kind": self.kind.name(),
            "delta": self.delta,
            "visual_c": self.visual_c,
            "visual_a": self.visual_a,
        });
        let extra = match &self.kind {
            SpaceKind::RealWindow { lo, hi } | SpaceKind::HyperbolicBoundary { lo, hi } => {
                serde_json::json!({"lo": rational::format(lo), "hi": rational::format(hi)})
            }
            SpaceKind::Cantor { contraction, depth } => {
                serde_json::json!({"contraction": rational::format(contraction), "depth": depth})
            }
            SpaceKind::TreeBoundary { branching, depth } => serde_json::json!({"branching": branching, "depth": depth}),
        };
        if let (Some(map), serde_json::Value::Object(extra)) = (v.as_object_mut(), extra) {
            map.extend(extra);
        }
        v
    }
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawDescriptor {
    kind: String,
    lo: Option<String>,
    hi: Option<String>,
    contraction: Option<String>,
    depth: Option<u32>,
    branching: Option<u8>,
    delta: Option<f64>,
    visual_c: Option<f64>,
    visual_a: Option<f64>,
}

impl RawDescriptor {
    fn into_descriptor(self) -> Result<SpaceDescriptor, MetricError> {
        let rat = |field: &Option<String>, name: &str| -> Result<BigRational, MetricError> {
            let s = field.as_ref().ok_or_else(|| MetricError::Descriptor(format!("missing `{name}`")))?;
            rational::parse(s).map_err(|e| MetricError::Descriptor(e.to_string()))
        };
        let need_depth = || self.depth.ok_or_else(|| MetricError::Descriptor("missing `depth`".into()));
        let mut desc = match self.kind.as_str() {
            "real-window" => SpaceDescriptor::real_window(
                rat(&self.lo, "lo").unwrap_or_else(|_| BigRational::zero()),
                rat(&self.hi, "hi").unwrap_or_else(|_| BigRational::one()),
            ),
            "hyperbolic-boundary" => SpaceDescriptor::hyperbolic_boundary(
                rat(&self.lo, "lo").unwrap_or_else(|_| BigRational::zero()),
                rat(&self.hi, "hi").unwrap_or_else(|_| BigRational::one()),
            ),
            "cantor" => SpaceDescriptor::cantor(rat(&self.contraction, "contraction")?, need_depth()?),
            "tree-boundary" => SpaceDescriptor::tree(
                self.branching.ok_or_else(|| MetricError::Descriptor("missing `branching`".into()))?,
                need_depth()?,
            ),
            other => return Err(MetricError::Descriptor(format!("unknown kind `{other}`"))),
        };
        if let Some(d) = self.delta {
            desc.delta = d;
        }
        if let Some(c) = self.visual_c {
            desc.visual_c = c;
        }
        if let Some(a) = self.visual_a {
            desc.visual_a = a;
        }
        desc.validate()?;
        Ok(desc)
    }
}
