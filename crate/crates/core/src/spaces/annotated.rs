use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::catalog::SpaceSpec;
use super::retraction::Retraction;
use crate::dyadic::Resolution;
use crate::error::{Error, Result};
use crate::metric::{Net, SpatialIndex, UnionFind};

/// Catalog absolute neighbourhood retracts that ship concrete homotopy and
/// small-diameter extension recipes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnrKind {
    Interval,
    Disk,
    Circle,
}

impl AnrKind {
    pub fn is_convex(self) -> bool {
        !matches!(self, AnrKind::Circle)
    }

    /// Diameter bound on `φ(Z)` that guarantees an extension of diameter `< target`.
    pub fn delta_for(self, target: f64) -> f64 {
        match self {
            AnrKind::Interval | AnrKind::Disk => target / 2.0,
            AnrKind::Circle => (target / 2.0).min(1.0),
        }
    }
}

/// A finite partition of the true space into clopen pieces ("atoms"); every net point
/// carries the label of its atom. Unions of atoms are exactly the clopen sets visible
/// at this resolution. The optional tail atom contains the accumulation point together
/// with every feature the truncation dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClopenStructure {
    pub atoms: Vec<u32>,
    pub tail: Option<u32>,
}

impl ClopenStructure {
    pub fn connected(n: usize) -> Self {
        ClopenStructure {
            atoms: vec![0; n],
            tail: None,
        }
    }

    pub fn atom_count(&self) -> usize {
        self.atoms
            .iter()
            .map(|&a| a as usize + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn atom_of(&self, i: usize) -> u32 {
        self.atoms[i]
    }

    pub fn atom_members(&self, atom: u32) -> Vec<usize> {
        (0..self.atoms.len())
            .filter(|&i| self.atoms[i] == atom)
            .collect()
    }

    /// Whether `set` (net indices) is the trace of a clopen set, i.e. splits no atom.
    pub fn is_clopen_union(&self, set: &BTreeSet<usize>) -> bool {
        let touched: BTreeSet<u32> = set.iter().map(|&i| self.atoms[i]).collect();
        (0..self.atoms.len()).all(|i| set.contains(&i) || !touched.contains(&self.atoms[i]))
    }

    /// Whether some clopen set `C` of the true space has `C ∩ Z = trace`.
    pub fn exists_clopen_with_trace(&self, z: &[usize], trace: &BTreeSet<usize>) -> bool {
        let inside: BTreeSet<u32> = trace.iter().map(|&i| self.atoms[i]).collect();
        z.iter()
            .filter(|i| !trace.contains(i))
            .all(|&i| !inside.contains(&self.atoms[i]))
    }
}

/// Where a space came from; catalog spaces can be rebuilt bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceSource {
    Catalog {
        spec: SpaceSpec,
        resolution: Resolution,
    },
    Derived {
        description: String,
    },
}

/// A compact metric space at one resolution: its ε-net plus exact annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedSpace {
    pub(crate) name: String,
    pub(crate) source: SpaceSource,
    pub(crate) net: Arc<Net>,
    pub(crate) components: Vec<u32>,
    pub(crate) component_names: Vec<String>,
    pub(crate) clopen: ClopenStructure,
    pub(crate) retraction: Option<Retraction>,
    pub(crate) anr: Option<AnrKind>,
    pub(crate) basepoints: Vec<(String, usize)>,
}

impl AnnotatedSpace {
    /// Assembles a space from explicit annotations, validating their shape.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        name: impl Into<String>,
        source: SpaceSource,
        net: Net,
        components: Vec<u32>,
        component_names: Vec<String>,
        clopen: ClopenStructure,
        retraction: Option<Retraction>,
        anr: Option<AnrKind>,
        basepoints: Vec<(String, usize)>,
    ) -> Result<Self> {
        let n = net.len();
        if n == 0 {
            return Err(Error::InvalidArgument("space with empty net".into()));
        }
        if components.len() != n || clopen.atoms.len() != n {
            return Err(Error::InvalidArgument(format!(
                "annotation length mismatch: {n} points, {} component labels, {} atom labels",
                components.len(),
                clopen.atoms.len()
            )));
        }
        let ncomp = components
            .iter()
            .map(|&c| c as usize + 1)
            .max()
            .unwrap_or(0);
        let component_names = if component_names.is_empty() {
            (0..ncomp).map(|c| format!("P{c}")).collect()
        } else {
            component_names
        };
        if component_names.len() < ncomp {
            return Err(Error::InvalidArgument("missing component names".into()));
        }
        if let Some(t) = clopen.tail {
            if t as usize >= clopen.atom_count() {
                return Err(Error::InvalidArgument("tail atom out of range".into()));
            }
        }
        if let Some((b, _)) = basepoints.iter().find(|(_, i)| *i >= n) {
            return Err(Error::InvalidArgument(format!(
                "basepoint {b} out of range"
            )));
        }
        Ok(AnnotatedSpace {
            name: name.into(),
            source,
            net: Arc::new(net),
            components,
            component_names,
            clopen,
            retraction,
            anr,
            basepoints,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &SpaceSource {
        &self.source
    }

    pub fn net(&self) -> &Net {
        &self.net
    }

    pub fn shared_net(&self) -> Arc<Net> {
        self.net.clone()
    }

    pub fn len(&self) -> usize {
        self.net.len()
    }

    pub fn is_empty(&self) -> bool {
        self.net.is_empty()
    }

    pub fn eps(&self) -> f64 {
        self.net.resolution()
    }

    pub fn components(&self) -> &[u32] {
        &self.components
    }

    pub fn component_of(&self, i: usize) -> u32 {
        self.components[i]
    }

    pub fn component_name(&self, c: u32) -> &str {
        &self.component_names[c as usize]
    }

    pub fn component_names(&self) -> &[String] {
        &self.component_names
    }

    pub fn component_count(&self) -> usize {
        let set: BTreeSet<u32> = self.components.iter().copied().collect();
        set.len()
    }

    pub fn clopen(&self) -> &ClopenStructure {
        &self.clopen
    }

    pub fn retraction(&self) -> Option<&Retraction> {
        self.retraction.as_ref()
    }

    pub fn anr(&self) -> Option<AnrKind> {
        self.anr
    }

    pub fn basepoints(&self) -> &[(String, usize)] {
        &self.basepoints
    }

    pub fn basepoint(&self, name: &str) -> Option<usize> {
        self.basepoints
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, i)| *i)
    }

    /// Nearest net point to `p` and its distance.
    pub fn locate(&self, p: &[f64]) -> (usize, f64) {
        SpatialIndex::new(&self.net, self.eps())
            .nearest(p)
            .expect("nonempty net")
    }

    /// The subspace spanned by `indices` with restricted annotations.
    pub fn subspace(&self, indices: &[usize], name: impl Into<String>) -> Result<AnnotatedSpace> {
        let net = self.net.select(indices)?;
        let mut comp_map = alloc::collections::BTreeMap::new();
        let mut atom_map = alloc::collections::BTreeMap::new();
        let mut components = Vec::with_capacity(indices.len());
        let mut atoms = Vec::with_capacity(indices.len());
        let mut names = Vec::new();
        for &i in indices {
            let c = self.components[i];
            let next = comp_map.len() as u32;
            let nc = *comp_map.entry(c).or_insert_with(|| {
                names.push(self.component_names[c as usize].clone());
                next
            });
            components.push(nc);
            let a = self.clopen.atoms[i];
            let next = atom_map.len() as u32;
            atoms.push(*atom_map.entry(a).or_insert(next));
        }
        let tail = self.clopen.tail.and_then(|t| atom_map.get(&t).copied());
        let position = |old: usize| indices.iter().position(|&i| i == old);
        let basepoints = self
            .basepoints
            .iter()
            .filter_map(|(n, i)| position(*i).map(|p| (n.clone(), p)))
            .collect();
        let name = name.into();
        AnnotatedSpace::from_parts(
            name.clone(),
            SpaceSource::Derived {
                description: format!("subspace of {}", self.name),
            },
            net,
            components,
            names,
            ClopenStructure { atoms, tail },
            self.retraction.clone(),
            self.anr,
            basepoints,
        )
    }

    /// Checks the structural invariants: each declared path component is a single
    /// component of the 2ε-graph, atoms are unions of path components, and the
    /// retraction fixes net points.
    pub fn check_invariants(&self) -> Result<()> {
        let net = &*self.net;
        net.check_metric_axioms(256)?;
        let scale = 2.0 * self.eps();
        let index = SpatialIndex::new(net, scale);
        let mut uf = UnionFind::new(net.len());
        for i in 0..net.len() {
            index.for_each_within(net.point(i), scale, |j, _| {
                if j > i && self.components[i] == self.components[j] {
                    uf.union(i, j);
                }
            });
        }
        let mut root_of_label: alloc::collections::BTreeMap<u32, usize> = Default::default();
        for i in 0..net.len() {
            let r = uf.find(i);
            let label = self.components[i];
            match root_of_label.get(&label) {
                Some(&r0) if r0 != r => {
                    return Err(Error::InvalidArgument(format!(
                        "path component `{}` of {} is not 2ε-chain-connected",
                        self.component_names[label as usize], self.name
                    )))
                }
                Some(_) => {}
                None => {
                    root_of_label.insert(label, r);
                }
            }
        }
        let mut atom_of_component: alloc::collections::BTreeMap<u32, u32> = Default::default();
        for i in 0..net.len() {
            let c = self.components[i];
            let a = self.clopen.atoms[i];
            if *atom_of_component.entry(c).or_insert(a) != a {
                return Err(Error::InvalidArgument(format!(
                    "clopen atom splits path component `{}`",
                    self.component_names[c as usize]
                )));
            }
        }
        if let Some(r) = &self.retraction {
            for i in 0..net.len() {
                let p = net.point(i);
                let img = r.apply(p).ok_or_else(|| {
                    Error::InvalidArgument(format!("net point {i} outside retraction domain"))
                })?;
                if net.metric().distance(p, &img) > self.eps() {
                    return Err(Error::InvalidArgument(format!(
                        "retraction moves net point {i}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        format!(
            "{} ({} points, ε = {}, {} path components, {} clopen atoms)",
            self.name,
            self.len(),
            self.eps(),
            self.component_count(),
            self.clopen.atom_count()
        )
    }
}

/// A space `Y` with a distinguished closed subspace `Z ⊆ Y`, given by net indices.
#[derive(Debug, Clone)]
pub struct SpacePair {
    y: Arc<AnnotatedSpace>,
    z: Vec<usize>,
    z_net: Arc<Net>,
}

impl SpacePair {
    pub fn new(y: Arc<AnnotatedSpace>, z: Vec<usize>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &i in &z {
            if i >= y.len() {
                return Err(Error::InvalidArgument(format!(
                    "Z index {i} outside Y's net of {} points",
                    y.len()
                )));
            }
            if !seen.insert(i) {
                return Err(Error::InvalidArgument(format!("duplicate Z index {i}")));
            }
        }
        let z_net = Arc::new(y.net.select(&z)?);
        Ok(SpacePair { y, z, z_net })
    }

    pub fn y(&self) -> &Arc<AnnotatedSpace> {
        &self.y
    }

    pub fn z_indices(&self) -> &[usize] {
        &self.z
    }

    pub fn z_net(&self) -> &Arc<Net> {
        &self.z_net
    }

    /// Position of Y-index `i` within Z, if it belongs to Z.
    pub fn z_position(&self, i: usize) -> Option<usize> {
        self.z.iter().position(|&j| j == i)
    }

    /// Membership mask over Y's net.
    pub fn z_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.y.len()];
        for &i in &self.z {
            mask[i] = true;
        }
        mask
    }

    pub fn describe(&self) -> String {
        format!("({}, Z with {} points)", self.y.name(), self.z.len())
    }
}

impl core::fmt::Display for AnnotatedSpace {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.describe())
    }
}

#[allow(dead_code)]
fn _assert_send_sync() {
    fn is<T: Send + Sync>() {}
    is::<AnnotatedSpace>();
    is::<SpacePair>();
}
