use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::crossing::{CrossingGraph, Region};
use super::{Certificate, DiskWitness, Vertex};
use crate::error::{Error, Result};
use crate::maps::{collapse_retraction, FamilyName, MapFamily, MapSample, Member};
use crate::metric::{build_epsilon_graph, shortest_path_avoiding};
use crate::spaces::{earring_circle_loop, SpacePair};

/// Wraps an extension as a positive certificate.
pub fn positive_certificate(extension: &MapSample, tolerance: f64) -> Certificate {
    Certificate::Positive {
        values: extension.values().to_vec(),
        modulus: extension.modulus().clone(),
        tolerance,
    }
}

/// Position in `Z` of the `Y` net point with coordinates `p`.
fn z_pos(pair: &SpacePair, p: &[f64]) -> Result<usize> {
    pair.y()
        .net()
        .find_exact(p)
        .and_then(|i| pair.z_position(i))
        .ok_or_else(|| Error::InvalidArgument(format!("{p:?} is not a point of Z")))
}

/// The obstruction for a member of a catalog family that admits no extension.
pub fn build_negative_certificate(family: &MapFamily, member: Member) -> Result<Certificate> {
    let refuse = || {
        Err(Error::Refused(format!(
            "{} {member} has no non-extension argument",
            family.name()
        )))
    };
    let phi = family.get(member)?;
    let pair = family.pair();
    match (family.name(), member) {
        (FamilyName::SineEopen, Member::N(n)) => {
            let (a, b) = (1.0 / n as f64, 1.0 / (n + 1) as f64);
            path_certificate(pair, &phi, &[a, 0.0], &[b, 0.0], |p| p[0] >= b && p[0] <= a)
        }
        (FamilyName::Pathcomp, Member::Limit) => {
            path_certificate(pair, &phi, &[1.0], &[0.0], |_| true)
        }
        (FamilyName::SineEclosed, Member::Limit) => {
            let bound = 1.0 - 2.0 * pair.y().eps();
            crossing_certificate(pair, &phi, Region::AbsAbove { axis: 1, bound })
        }
        (FamilyName::Comb, Member::Limit) => {
            let bound = 2.0 * pair.y().eps();
            crossing_certificate(pair, &phi, Region::Below { axis: 1, bound })
        }
        (FamilyName::NdaggerEopen, Member::N(n)) => {
            let k = n + 1;
            let trace = (0..phi.len())
                .filter(|&p| phi.value(p) == [1.0 / k as f64])
                .collect();
            Ok(Certificate::Clopen { k, trace })
        }
        (FamilyName::Hawaii, Member::N(n)) => winding_certificate(family, n + 1),
        _ => refuse(),
    }
}

/// Path in `Y` from `from` to `to` through the net points of `from`'s component that
/// satisfy `keep`, ordered by the first coordinate.
fn path_certificate(
    pair: &SpacePair,
    phi: &MapSample,
    from: &[f64],
    to: &[f64],
    keep: impl Fn(&[f64]) -> bool,
) -> Result<Certificate> {
    let (z1, z2) = (z_pos(pair, from)?, z_pos(pair, to)?);
    let y = pair.y();
    let (y1, y2) = (pair.z_indices()[z1], pair.z_indices()[z2]);
    let label = y.component_of(y1);
    let allowed: Vec<bool> = (0..y.len())
        .map(|i| y.component_of(i) == label && keep(y.net().point(i)))
        .collect();
    let graph = build_epsilon_graph(y.net(), 2.0 * y.eps())?;
    let path = shortest_path_avoiding(&graph, y1, y2, &allowed)
        .ok_or_else(|| Error::InvalidArgument("no 2ε-chain between the chosen Z points".into()))?;
    let x = phi.codomain();
    let label_of = |pos: usize| {
        x.net()
            .find_exact(phi.value(pos))
            .map(|i| x.component_of(i))
            .ok_or_else(|| Error::InvalidArgument("image is not a net point".into()))
    };
    Ok(Certificate::PathComponent {
        z1,
        z2,
        path,
        labels: [label_of(z1)?, label_of(z2)?],
    })
}

/// Brackets `(1/(j+1), 1/j)` for `j = 1, 2, …` while the crossing is forced on the net,
/// converging to `z0 = 0`.
fn crossing_certificate(pair: &SpacePair, phi: &MapSample, region: Region) -> Result<Certificate> {
    let x = phi.codomain();
    let graph = CrossingGraph::new(x.net(), &region)?;
    let z0 = z_pos(pair, &[0.0])?;
    let inv = pair.y().net().resolution().recip() as usize;
    let mut brackets = Vec::new();
    for j in 1..inv {
        let a = z_pos(pair, &[1.0 / (j + 1) as f64])?;
        let b = z_pos(pair, &[1.0 / j as f64])?;
        let ia = x.net().find_exact(phi.value(a));
        let ib = x.net().find_exact(phi.value(b));
        match (ia, ib) {
            (Some(ia), Some(ib)) if graph.forced(ia, ib) => brackets.push([a, b]),
            _ => break,
        }
    }
    if brackets.is_empty() {
        return Err(Error::Refused(
            "no forced crossing is visible at this resolution".into(),
        ));
    }
    let p0 = phi.value(z0);
    let separation = x
        .net()
        .points()
        .filter(|p| region.contains(p))
        .map(|p| x.net().metric().distance(p0, p))
        .fold(f64::INFINITY, f64::min);
    Ok(Certificate::MandatoryCrossing {
        brackets,
        region,
        z0,
        separation,
    })
}

/// `C_k` bounds the disk of concentric rings inside the earring-disk; `φ_{k-1}` fixes
/// `C_k`, so the collapse onto `C_k` winds once.
fn winding_certificate(family: &MapFamily, k: usize) -> Result<Certificate> {
    let pair = family.pair();
    let y = pair.y();
    let retraction = collapse_retraction(family.codomain(), k)?;
    let ring = earring_circle_loop(y, k)?;
    let cycle = ring
        .iter()
        .map(|&i| {
            pair.z_position(i)
                .ok_or_else(|| Error::InvalidArgument("loop leaves Z".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = ring.len();
    let radius = 1.0 / k as f64;
    let center = [radius, 0.0];
    let rings = libm::ceil(radius / y.eps()).max(1.0) as usize;
    let mut vertices: Vec<Vertex> = ring.iter().map(|&i| Vertex::Net(i)).collect();
    for j in (1..rings).rev() {
        let s = j as f64 / rings as f64;
        for &i in &ring {
            let p = y.net().point(i);
            vertices.push(Vertex::Point(vec![
                center[0] + s * (p[0] - center[0]),
                center[1] + s * (p[1] - center[1]),
            ]));
        }
    }
    let apex = vertices.len();
    vertices.push(Vertex::Point(center.to_vec()));
    let mut triangles = Vec::new();
    for r in 0..rings - 1 {
        let (outer, inner) = (r * m, (r + 1) * m);
        for i in 0..m {
            let i1 = (i + 1) % m;
            triangles.push([outer + i, outer + i1, inner + i1]);
            triangles.push([outer + i, inner + i1, inner + i]);
        }
    }
    let last = (rings - 1) * m;
    for i in 0..m {
        triangles.push([last + i, last + (i + 1) % m, apex]);
    }
    Ok(Certificate::Winding {
        cycle,
        disk: DiskWitness {
            vertices,
            triangles,
        },
        retraction,
        expected: 1,
    })
}
