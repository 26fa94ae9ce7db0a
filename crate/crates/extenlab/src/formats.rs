//! JSON file formats for nets, spaces, pairs, problems and certificates.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use extenlab_core::certificates::Certificate;
use extenlab_core::maps::MapSample;
use extenlab_core::metric::{Metric, Modulus, Net};
use extenlab_core::spaces::{
    make_space, AnnotatedSpace, AnrKind, ClopenStructure, Retraction, SpacePair, SpaceSource,
    SpaceSpec,
};
use extenlab_core::Resolution;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Core(#[from] extenlab_core::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetFile {
    pub dimension: usize,
    pub points: Vec<Vec<f64>>,
    pub resolution: f64,
    pub metric: Metric,
}

impl NetFile {
    pub fn from_net(net: &Net) -> Self {
        NetFile {
            dimension: net.dim(),
            points: net.points().map(<[f64]>::to_vec).collect(),
            resolution: net.resolution(),
            metric: net.metric().clone(),
        }
    }

    pub fn to_net(&self) -> Result<Net> {
        if self.points.iter().any(|p| p.len() != self.dimension) {
            return Err(extenlab_core::Error::InvalidArgument(
                "point dimension differs from the declared dimension".into(),
            )
            .into());
        }
        let coords = self.points.concat();
        Ok(Net::new(
            self.dimension,
            coords,
            self.resolution,
            self.metric.clone(),
        )?)
    }
}

/// A catalog reference `{name, parameters?, resolution}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatalogSpace {
    #[serde(flatten)]
    pub spec: SpaceSpec,
    pub resolution: Resolution,
}

/// A space with every annotation spelled out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpace {
    pub name: String,
    pub net: NetFile,
    pub path_components: Vec<u32>,
    pub component_names: Vec<String>,
    pub clopen_atoms: Vec<u32>,
    #[serde(default)]
    pub clopen_tail: Option<u32>,
    #[serde(default)]
    pub retractions: Option<Retraction>,
    #[serde(default)]
    pub anr: Option<AnrKind>,
    #[serde(default)]
    pub basepoints: Vec<(String, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SpaceFile {
    Catalog(CatalogSpace),
    Explicit(Box<ExplicitSpace>),
}

impl<'de> Deserialize<'de> for SpaceFile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let value = Value::deserialize(d)?;
        if value.get("net").is_some() {
            serde_json::from_value(value)
                .map(|s| SpaceFile::Explicit(Box::new(s)))
                .map_err(D::Error::custom)
        } else {
            serde_json::from_value(value)
                .map(SpaceFile::Catalog)
                .map_err(D::Error::custom)
        }
    }
}

impl SpaceFile {
    /// Records a space; catalog spaces are kept as references.
    pub fn from_space(space: &AnnotatedSpace) -> Self {
        if let SpaceSource::Catalog { spec, resolution } = space.source() {
            return SpaceFile::Catalog(CatalogSpace {
                spec: *spec,
                resolution: *resolution,
            });
        }
        SpaceFile::Explicit(Box::new(ExplicitSpace::from_space(space)))
    }

    pub fn load(&self) -> Result<AnnotatedSpace> {
        match self {
            SpaceFile::Catalog(c) => Ok(make_space(c.spec, c.resolution)?),
            SpaceFile::Explicit(e) => e.load(),
        }
    }
}

impl ExplicitSpace {
    pub fn from_space(space: &AnnotatedSpace) -> Self {
        ExplicitSpace {
            name: space.name().into(),
            net: NetFile::from_net(space.net()),
            path_components: space.components().to_vec(),
            component_names: space.component_names().to_vec(),
            clopen_atoms: space.clopen().atoms.clone(),
            clopen_tail: space.clopen().tail,
            retractions: space.retraction().cloned(),
            anr: space.anr(),
            basepoints: space.basepoints().to_vec(),
        }
    }

    /// Builds the space and checks its annotations.
    pub fn load(&self) -> Result<AnnotatedSpace> {
        let space = AnnotatedSpace::from_parts(
            self.name.clone(),
            SpaceSource::Derived {
                description: "loaded from file".into(),
            },
            self.net.to_net()?,
            self.path_components.clone(),
            self.component_names.clone(),
            ClopenStructure {
                atoms: self.clopen_atoms.clone(),
                tail: self.clopen_tail,
            },
            self.retractions.clone(),
            self.anr,
            self.basepoints.clone(),
        )?;
        space.check_invariants()?;
        Ok(space)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    pub space: SpaceFile,
    pub z_indices: Vec<usize>,
}

impl PairFile {
    pub fn from_pair(pair: &SpacePair) -> Self {
        PairFile {
            space: SpaceFile::from_space(pair.y()),
            z_indices: pair.z_indices().to_vec(),
        }
    }

    pub fn load(&self) -> Result<SpacePair> {
        Ok(SpacePair::new(
            Arc::new(self.space.load()?),
            self.z_indices.clone(),
        )?)
    }
}

/// The domain of a map file: a whole space, or the subset `Z` of a pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DomainRef {
    Pair(PairFile),
    Space(SpaceFile),
}

impl<'de> Deserialize<'de> for DomainRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let value = Value::deserialize(d)?;
        if value.get("z_indices").is_some() {
            serde_json::from_value(value)
                .map(DomainRef::Pair)
                .map_err(D::Error::custom)
        } else {
            serde_json::from_value(value)
                .map(DomainRef::Space)
                .map_err(D::Error::custom)
        }
    }
}

/// A sampled map: one value per domain point, with its declared modulus. With a pair
/// as domain the values sit on `Z`, which makes the file an extension problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub domain: DomainRef,
    pub codomain: SpaceFile,
    pub values: Vec<Vec<f64>>,
    pub modulus: Modulus,
}

/// A loaded extension problem `φ: Z → X` on `(Y, Z)`.
pub struct Problem {
    pub pair: SpacePair,
    pub phi: MapSample,
}

impl MapFile {
    pub fn problem(pair: &SpacePair, phi: &MapSample) -> Self {
        MapFile {
            domain: DomainRef::Pair(PairFile::from_pair(pair)),
            codomain: SpaceFile::from_space(phi.codomain()),
            values: phi.value_rows(),
            modulus: phi.modulus().clone(),
        }
    }

    /// Loads the map. Value arity is checked here; anything the certificate checker
    /// judges (modulus, membership in `X`) is left to it.
    pub fn load(&self) -> Result<(Option<SpacePair>, MapSample)> {
        let (pair, domain) = match &self.domain {
            DomainRef::Pair(p) => {
                let pair = p.load()?;
                let z = pair.z_net().clone();
                (Some(pair), z)
            }
            DomainRef::Space(s) => (None, s.load()?.shared_net()),
        };
        let codomain = Arc::new(self.codomain.load()?);
        let d = codomain.net().dim();
        if self.values.iter().any(|v| v.len() != d) {
            return Err(extenlab_core::Error::InvalidArgument(format!(
                "map values must have dimension {d}"
            ))
            .into());
        }
        let phi = MapSample::new(domain, codomain, self.values.concat(), self.modulus.clone())?;
        Ok((pair, phi))
    }

    pub fn load_problem(&self) -> Result<Problem> {
        match self.load()? {
            (Some(pair), phi) => Ok(Problem { pair, phi }),
            (None, _) => Err(extenlab_core::Error::InvalidArgument(
                "an extension problem needs a pair {space, z_indices} as domain".into(),
            )
            .into()),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn read_certificate(path: &Path) -> Result<Certificate> {
    read_json(path)
}
