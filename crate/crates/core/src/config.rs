//! JSON configs for maps, packings, Schwarz systems and Suffridge maps.
//!
//! Numbers are decimal strings. A number may be a product or quotient of
//! factors, each a decimal or one of the tokens `sqrt2`, `sqrt3`, `sqrt5`,
//! `pi`, with an optional leading sign: `"2*sqrt2/3"`, `"-1/5"`. Complex
//! numbers are written `"re,im"` or as a single real.

use crate::circle::{CoveringMap, EuclideanCircle, MapKind, MarkovPartition, Orientation};
use crate::conjugacy::{canonical_power_conjugacy, ConjugacyMap};
use crate::holo::RationalMap;
use crate::numeric::{Poly, Rational};
use crate::reflection::CirclePacking;
use crate::schwarz::{
    make_quadrature_domain, make_system, DomainSide, QuadratureDomain, SchwarzSystem,
};
use crate::suffridge::SigmaStarMap;
use crate::{Error, Result};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

fn factor(s: &str) -> Result<f64> {
    match s.trim() {
        "sqrt2" => Ok(std::f64::consts::SQRT_2),
        "sqrt3" => Ok(3f64.sqrt()),
        "sqrt5" => Ok(5f64.sqrt()),
        "pi" => Ok(std::f64::consts::PI),
        t => t
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::InvalidInput(format!("cannot parse number `{s}`"))),
    }
}

pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) if rest.contains(['*', '/']) || rest.starts_with("sqrt") || rest == "pi" => {
            (-1.0, rest)
        }
        _ => (1.0, s),
    };
    let mut value = 1.0;
    let mut op = '*';
    let mut start = 0;
    for (i, ch) in body
        .char_indices()
        .chain(std::iter::once((body.len(), '*')))
    {
        if (ch == '*' || ch == '/') && i > start {
            let x = factor(&body[start..i])?;
            value = if op == '*' { value * x } else { value / x };
            op = ch;
            start = i + 1;
        } else if ch == '*' || ch == '/' {
            return Err(Error::InvalidInput(format!("cannot parse number `{s}`")));
        }
    }
    if !value.is_finite() {
        return Err(Error::InvalidInput(format!("`{s}` is not finite")));
    }
    Ok(sign * value)
}

pub fn parse_complex(s: &str) -> Result<C> {
    match s.split_once(',') {
        Some((re, im)) => Ok(C::new(parse_real(re)?, parse_real(im)?)),
        None => Ok(C::new(parse_real(s)?, 0.0)),
    }
}

/// Shortest decimal that parses back to `x`.
pub fn format_real(x: f64) -> String {
    format!("{x:?}")
}

pub fn format_complex(z: C) -> String {
    if z.im == 0.0 {
        format_real(z.re)
    } else {
        format!("{},{}", format_real(z.re), format_real(z.im))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrientationName {
    Preserving,
    Reversing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapConfig {
    Power {
        degree: usize,
        orientation: OrientationName,
    },
    BlaschkeParabolic {
        degree: usize,
    },
    Blaschke {
        theta: String,
        zeros: Vec<String>,
        anti: bool,
    },
    Reflection {
        breaks: Vec<String>,
    },
    Hybrid {
        degree: usize,
        pairs: Vec<usize>,
    },
}

impl MapConfig {
    pub fn build(&self) -> Result<CoveringMap> {
        match self {
            MapConfig::Power {
                degree,
                orientation,
            } => CoveringMap::power(
                *degree,
                match orientation {
                    OrientationName::Preserving => Orientation::Preserving,
                    OrientationName::Reversing => Orientation::Reversing,
                },
            ),
            MapConfig::BlaschkeParabolic { degree } => CoveringMap::blaschke_parabolic(*degree),
            MapConfig::Blaschke { theta, zeros, anti } => {
                let z = zeros
                    .iter()
                    .map(|s| parse_complex(s))
                    .collect::<Result<Vec<_>>>()?;
                CoveringMap::blaschke(parse_real(theta)?, &z, *anti)
            }
            MapConfig::Reflection { breaks } => CoveringMap::reflection(
                &breaks
                    .iter()
                    .map(|s| parse_real(s))
                    .collect::<Result<Vec<_>>>()?,
            ),
            MapConfig::Hybrid { degree, pairs } => CoveringMap::hybrid(*degree, pairs),
        }
    }

    pub fn from_map(map: &CoveringMap) -> MapConfig {
        match &map.kind {
            MapKind::Power { d, orientation } => MapConfig::Power {
                degree: *d,
                orientation: match orientation {
                    Orientation::Preserving => OrientationName::Preserving,
                    Orientation::Reversing => OrientationName::Reversing,
                },
            },
            MapKind::BlaschkeParabolic { d } => MapConfig::BlaschkeParabolic { degree: *d },
            MapKind::Blaschke { theta, zeros, anti } => MapConfig::Blaschke {
                theta: format_real(*theta),
                zeros: zeros.iter().map(|z| format_complex(*z)).collect(),
                anti: *anti,
            },
            MapKind::Reflection { breaks } => MapConfig::Reflection {
                breaks: breaks.iter().map(|b| format_real(*b)).collect(),
            },
            MapKind::Hybrid { d, pairs } => MapConfig::Hybrid {
                degree: *d,
                pairs: pairs.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleConfig {
    pub label: usize,
    pub cx: String,
    pub cy: String,
    pub r: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackingConfig {
    pub circles: Vec<CircleConfig>,
}

impl PackingConfig {
    pub fn build(&self, tol: f64) -> Result<CirclePacking> {
        let circles = self
            .circles
            .iter()
            .map(|c| {
                Ok((
                    c.label,
                    EuclideanCircle::new(
                        C::new(parse_real(&c.cx)?, parse_real(&c.cy)?),
                        parse_real(&c.r)?,
                    )?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        CirclePacking::new(&circles, tol)
    }

    pub fn from_packing(p: &CirclePacking) -> PackingConfig {
        let circles = p
            .labels()
            .iter()
            .zip(p.circles())
            .map(|(&label, c)| CircleConfig {
                label,
                cx: format_real(c.center.re),
                cy: format_real(c.center.im),
                r: format_real(c.radius),
            })
            .collect();
        PackingConfig { circles }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideName {
    Disk,
    Exterior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainConfig {
    Disk {
        center: String,
        radius: String,
    },
    DiskExterior {
        center: String,
        radius: String,
    },
    /// Coefficients in increasing degree.
    Rational {
        num: Vec<String>,
        den: Vec<String>,
        side: SideName,
    },
}

fn poly(c: &[String]) -> Result<Poly> {
    Ok(Poly::new(
        c.iter()
            .map(|s| parse_complex(s))
            .collect::<Result<Vec<_>>>()?,
    ))
}

impl DomainConfig {
    pub fn build(&self) -> Result<QuadratureDomain> {
        match self {
            DomainConfig::Disk { center, radius } => {
                QuadratureDomain::disk(parse_complex(center)?, parse_real(radius)?)
            }
            DomainConfig::DiskExterior { center, radius } => {
                QuadratureDomain::disk_exterior(parse_complex(center)?, parse_real(radius)?)
            }
            DomainConfig::Rational { num, den, side } => {
                let side = match side {
                    SideName::Disk => DomainSide::Disk,
                    SideName::Exterior => DomainSide::Exterior,
                };
                make_quadrature_domain(Rational::new(poly(num)?, poly(den)?), side)
            }
        }
    }

    pub fn from_domain(d: &QuadratureDomain) -> DomainConfig {
        let coeffs = |p: &Poly| p.coeffs().iter().map(|z| format_complex(*z)).collect();
        match d {
            QuadratureDomain::Disk { center, radius } => DomainConfig::Disk {
                center: format_complex(*center),
                radius: format_real(*radius),
            },
            QuadratureDomain::DiskExterior { center, radius } => DomainConfig::DiskExterior {
                center: format_complex(*center),
                radius: format_real(*radius),
            },
            QuadratureDomain::Rational { f, side } => DomainConfig::Rational {
                num: coeffs(&f.num),
                den: coeffs(&f.den),
                side: match side {
                    DomainSide::Disk => SideName::Disk,
                    DomainSide::Exterior => SideName::Exterior,
                },
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub domains: Vec<DomainConfig>,
}

impl SystemConfig {
    pub fn build(&self) -> Result<SchwarzSystem> {
        make_system(
            self.domains
                .iter()
                .map(DomainConfig::build)
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn from_system(s: &SchwarzSystem) -> SystemConfig {
        SystemConfig {
            domains: s.domains().iter().map(DomainConfig::from_domain).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuffridgeConfig {
    pub degree: usize,
    /// `a₁ … a_{d−1}`.
    pub coeffs: Vec<String>,
}

impl SuffridgeConfig {
    pub fn build(&self) -> Result<SigmaStarMap> {
        let a = self
            .coeffs
            .iter()
            .map(|s| parse_complex(s))
            .collect::<Result<Vec<_>>>()?;
        crate::suffridge::make_sigma_star(self.degree, &a)
    }
}

/// `num/den`, applied to `z̄` when `anti`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalMapConfig {
    /// Coefficients in increasing degree.
    pub num: Vec<String>,
    #[serde(default = "unit")]
    pub den: Vec<String>,
    #[serde(default)]
    pub anti: bool,
}

fn unit() -> Vec<String> {
    vec!["1".into()]
}

impl RationalMapConfig {
    pub fn build(&self) -> Result<RationalMap> {
        RationalMap::new(poly(&self.num)?, poly(&self.den)?, self.anti)
    }
}

/// A conjugacy from `source` to `target`. Without a target, `source` is
/// matched against the power map of its degree and orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugacyConfig {
    pub source: MapConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_breaks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<MapConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_breaks: Option<Vec<String>>,
}

fn reals(v: &[String]) -> Result<Vec<f64>> {
    v.iter().map(|s| parse_real(s)).collect()
}

impl ConjugacyConfig {
    pub fn build(&self) -> Result<ConjugacyMap> {
        let f = self.source.build()?;
        let Some(tgt) = &self.target else {
            return canonical_power_conjugacy(&f);
        };
        let g = tgt.build()?;
        let (Some(bf), Some(bg)) = (&self.source_breaks, &self.target_breaks) else {
            return Err(Error::InvalidInput(
                "break points are required for both maps when a target is given".into(),
            ));
        };
        ConjugacyMap::new(
            &MarkovPartition::new(&f, &reals(bf)?)?,
            &MarkovPartition::new(&g, &reals(bg)?)?,
        )
    }
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))
}

/// Pretty JSON with object keys sorted.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serialisable");
    serde_json::to_string_pretty(&v).expect("serialisable")
}
