use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::annotated::{AnnotatedSpace, ClopenStructure, SpacePair, SpaceSource};
use super::catalog::{make_space, SpaceSpec};
use crate::dyadic::Resolution;
use crate::error::{Error, Result};
use crate::metric::{Block, Metric, Net};
use crate::num;

/// The first factor of a product `F × A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Factor {
    /// `[0,1]` sampled at the given step (the copy of `N` is included).
    Interval {
        step: Resolution,
    },
    Ndagger {
        resolution: Resolution,
    },
}

fn derived(description: String) -> SpaceSource {
    SpaceSource::Derived { description }
}

/// `F × A` with the max metric. Points are ordered factor-major: index `f·|A| + a`
/// has coordinates `(x_f, a)`.
pub fn product_with(a: &AnnotatedSpace, factor: Factor) -> Result<AnnotatedSpace> {
    let (fspace, fname) = match factor {
        Factor::Interval { step } => {
            if step.eps() > a.eps() {
                return Err(Error::InvalidArgument(format!(
                    "grid step {step} is coarser than the space resolution {}",
                    a.eps()
                )));
            }
            (make_space(SpaceSpec::Interval, step)?, "I")
        }
        Factor::Ndagger { resolution } => (make_space(SpaceSpec::Ndagger, resolution)?, "N"),
    };
    let (fnet, anet) = (fspace.net(), a.net());
    let (na, da) = (anet.len(), anet.dim());
    let mut coords = Vec::with_capacity(fnet.len() * na * (da + 1));
    let mut components = Vec::with_capacity(fnet.len() * na);
    let mut atoms = Vec::with_capacity(fnet.len() * na);
    let ca = a.component_count() as u32;
    let aa = a.clopen().atom_count() as u32;
    for f in 0..fnet.len() {
        for i in 0..na {
            coords.push(fnet.point(f)[0]);
            coords.extend_from_slice(anet.point(i));
            components.push(fspace.component_of(f) * ca + a.component_of(i));
            atoms.push(fspace.clopen().atom_of(f) * aa + a.clopen().atom_of(i));
        }
    }
    let mut names = Vec::new();
    for fc in 0..fspace.component_count() as u32 {
        for c in 0..ca {
            names.push(format!(
                "{}×{}",
                fspace.component_name(fc),
                a.component_name(c)
            ));
        }
    }
    let tail = match (fspace.clopen().tail, aa) {
        (Some(t), 1) => Some(t),
        _ => None,
    };
    let metric = Metric::Product(vec![
        Block {
            dim: 1,
            metric: Metric::Euclidean,
        },
        Block {
            dim: da,
            metric: anet.metric().clone(),
        },
    ]);
    let net = Net::new(da + 1, coords, a.eps(), metric)?;
    let basepoints = a
        .basepoints()
        .iter()
        .map(|(n, i)| (format!("0×{n}"), *i))
        .collect();
    AnnotatedSpace::from_parts(
        format!("{fname}×{}", a.name()),
        derived(format!("product of {} with {fname}", a.name())),
        net,
        components,
        names,
        ClopenStructure { atoms, tail },
        None,
        None,
        basepoints,
    )
}

/// Index of base point `i` at level `l` of a cone over a base of `n` points, where
/// levels `0..levels-1` are copies and the apex comes last.
fn cone_index(n: usize, l: usize, i: usize) -> usize {
    l * n + i
}

/// `A × [0,1] / A × {1}` with levels `t = jε` and the quotient of the max metric.
pub fn cone(a: &AnnotatedSpace) -> Result<AnnotatedSpace> {
    let anet = a.net();
    let (n, d) = (anet.len(), anet.dim());
    let eps = a.eps();
    let levels = num::ceil(1.0 / eps) as usize;
    let mut coords = Vec::with_capacity((levels * n + 1) * (d + 1));
    for l in 0..levels {
        let t = l as f64 / levels as f64;
        for i in 0..n {
            coords.extend_from_slice(anet.point(i));
            coords.push(t);
        }
    }
    coords.extend_from_slice(anet.point(0));
    coords.push(1.0);
    let total = levels * n + 1;
    let net = Net::new(
        d + 1,
        coords,
        eps,
        Metric::Cone(Box::new(anet.metric().clone())),
    )?;
    let mut basepoints: Vec<(String, usize)> = a
        .basepoints()
        .iter()
        .map(|(name, i)| (name.clone(), cone_index(n, 0, *i)))
        .collect();
    basepoints.push(("apex".into(), total - 1));
    AnnotatedSpace::from_parts(
        format!("cone({})", a.name()),
        derived(format!("cone over {}", a.name())),
        net,
        vec![0; total],
        vec![format!("cone({})", a.name())],
        ClopenStructure::connected(total),
        None,
        None,
        basepoints,
    )
}

/// Number of `t`-levels of `cone(a)` below the apex.
pub(crate) fn cone_levels(a: &AnnotatedSpace) -> usize {
    num::ceil(1.0 / a.eps()) as usize
}

/// `Y = cone(V)` and `Z = (V × {0}) ∪ ({p} × [0,1])`.
pub fn spiked_base_pair(v: &AnnotatedSpace, p: usize) -> Result<SpacePair> {
    let n = v.len();
    if p >= n {
        return Err(Error::InvalidArgument(format!(
            "basepoint index {p} is not a net point of {}",
            v.name()
        )));
    }
    let y = cone(v)?;
    let levels = cone_levels(v);
    let mut z: Vec<usize> = (0..n).collect();
    z.extend((1..levels).map(|l| cone_index(n, l, p)));
    z.push(y.len() - 1);
    SpacePair::new(Arc::new(y), z)
}

/// One-point compactification of the disjoint union of `blocks`. Block `n` (from 1)
/// is rescaled to diameter `≤ 2^-(n+3)` and placed around `(2^-(n+1), 0, …)`, so
/// every point of it is within `2^-n` of the point at infinity, which sits at the
/// origin and comes last.
pub fn opc_disjoint_union(blocks: &[AnnotatedSpace]) -> Result<AnnotatedSpace> {
    if blocks.is_empty() {
        return Err(Error::InvalidArgument(
            "one-point compactification of an empty list".into(),
        ));
    }
    if let Some(b) = blocks
        .iter()
        .find(|b| *b.net().metric() != Metric::Euclidean)
    {
        return Err(Error::InvalidArgument(format!(
            "block {} is not a Euclidean space",
            b.name()
        )));
    }
    let dim = blocks.iter().map(|b| b.net().dim()).max().unwrap_or(1);
    let mut coords = Vec::new();
    let mut components = Vec::new();
    let mut names = Vec::new();
    let mut atoms = Vec::new();
    let mut basepoints = Vec::new();
    let mut eps: f64 = 0.0;
    for (k, b) in blocks.iter().enumerate() {
        let n = k + 1;
        let net = b.net();
        let diam = net_diameter(net);
        let bound = num::powi2(-(n as i32 + 3));
        let s = if diam > bound { bound / diam } else { 1.0 };
        let offset = num::powi2(-(n as i32 + 1));
        let q0 = net.point(0).to_vec();
        let first = coords.len() / dim;
        for p in net.points() {
            for c in 0..dim {
                let x = p.get(c).copied().unwrap_or(0.0) - q0.get(c).copied().unwrap_or(0.0);
                coords.push(s * x + if c == 0 { offset } else { 0.0 });
            }
        }
        let c0 = names.len() as u32;
        for i in 0..b.len() {
            components.push(c0 + b.component_of(i));
            atoms.push(k as u32);
        }
        names.extend(b.component_names().iter().map(|c| format!("B{n}.{c}")));
        basepoints.push((format!("b{n}"), first));
        eps = eps.max(b.eps());
    }
    coords.extend(core::iter::repeat_n(0.0, dim));
    let inf = coords.len() / dim - 1;
    components.push(names.len() as u32);
    names.push("{∞}".into());
    atoms.push(blocks.len() as u32);
    basepoints.push(("inf".into(), inf));
    let net = Net::new(dim, coords, eps, Metric::Euclidean)?;
    AnnotatedSpace::from_parts(
        format!("opc[{}]", blocks.len()),
        derived(format!(
            "one-point compactification of {} blocks",
            blocks.len()
        )),
        net,
        components,
        names,
        ClopenStructure {
            atoms,
            tail: Some(blocks.len() as u32),
        },
        None,
        None,
        basepoints,
    )
}

/// Net indices of block `n` (from 1) of an `opc_disjoint_union` output.
pub(crate) fn opc_block(y: &AnnotatedSpace, n: usize) -> Vec<usize> {
    y.clopen().atom_members((n - 1) as u32)
}

fn net_diameter(net: &Net) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..net.len() {
        for j in i + 1..net.len() {
            d = d.max(net.distance(i, j));
        }
    }
    d
}
