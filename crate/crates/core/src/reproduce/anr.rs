use alloc::collections::BTreeSet;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{limit_label, row_label, Params, Report};
use crate::certificates::positive_certificate;
use crate::error::{Error, Result};
use crate::maps::{
    dugundji_values, dugundji_values_many, glue_homotopy_extension, homotopy_between,
    net_lipschitz, restrict, HomotopyMode, MapSample,
};
use crate::metric::{sup_distance, Modulus, SpatialIndex};
use crate::num;
use crate::spaces::{
    make_space, product_with, urysohn, AnnotatedSpace, Factor, Retraction, SpacePair, SpaceSpec,
};

pub(super) fn circle_point(theta: f64) -> [f64; 2] {
    [num::cos(theta), num::sin(theta)]
}

/// Length of the chord subtending the angle `a` on the unit circle.
pub(super) fn chord(a: f64) -> f64 {
    2.0 * num::abs(num::sin(a / 2.0))
}

pub(super) fn catalog(spec: SpaceSpec, params: &Params) -> Result<Arc<AnnotatedSpace>> {
    Ok(Arc::new(make_space(spec, params.resolution)?))
}

/// Net points of the unit disk lying on its boundary circle.
pub(super) fn disk_boundary(y: &AnnotatedSpace) -> Vec<usize> {
    (0..y.len())
        .filter(|&i| {
            let p = y.net().point(i);
            num::abs(num::sqrt(p[0] * p[0] + p[1] * p[1]) - 1.0) < 1e-12
        })
        .collect()
}

pub(super) fn radial(x: &AnnotatedSpace) -> Result<Retraction> {
    x.retraction()
        .cloned()
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no retraction", x.name())))
}

/// `y ↦ e^{i(2.5·y₂ + θ)}` on the net of `domain`.
fn wave(domain: Arc<crate::metric::Net>, x: &Arc<AnnotatedSpace>, theta: f64) -> Result<MapSample> {
    MapSample::from_fn(domain, x.clone(), Modulus::Lipschitz(2.5), |_, p, out| {
        out.copy_from_slice(&circle_point(2.5 * p[1] + theta))
    })
}

fn check_truncation(params: &Params, bound: usize) -> Result<()> {
    if params.n_max > bound {
        return Err(Error::BeyondTruncation {
            index: params.n_max,
            bound,
        });
    }
    Ok(())
}

/// Level `n` of a point of `N × Y` (`0` for the limit level).
fn level(t: f64) -> usize {
    if t == 0.0 {
        0
    } else {
        num::round(1.0 / t) as usize
    }
}

/// `φ_n = e^{i·3/(n+1)}·φ` on the boundary of the disk with `φ = e^{i·2.5·y₂}`; the maps
/// on `N × Y` are extended in one go and restricted to each level `1/n`.
pub(super) fn anr_eopen(mut report: Report, params: Params) -> Result<Report> {
    check_truncation(&params, params.resolution.inverse())?;
    let x = catalog(SpaceSpec::Circle, &params)?;
    let y = catalog(SpaceSpec::Disk, &params)?;
    let pair = SpacePair::new(y.clone(), disk_boundary(&y))?;
    let rotation = |n: usize| 3.0 / (n + 1) as f64;
    let phi_bar = wave(y.shared_net(), &x, 0.0)?;
    let phi = restrict(&phi_bar, &pair)?;

    let yt = Arc::new(product_with(
        &y,
        Factor::Ndagger {
            resolution: params.resolution,
        },
    )?);
    let ny = y.len();
    let on_z = pair.z_mask();
    let zt: Vec<usize> = (0..yt.len())
        .filter(|&i| level(yt.net().point(i)[0]) == 0 || on_z[i % ny])
        .collect();
    let pair_t = SpacePair::new(yt.clone(), zt)?;
    // |ψ(p) − ψ(p')| ≤ 2.5·d_Y + |θ_n − θ_m| and |θ_n − θ_m| ≤ 3·|1/n − 1/m|
    let psi = MapSample::from_fn(
        pair_t.z_net().clone(),
        x.clone(),
        Modulus::Lipschitz(5.5),
        |_, p, out| {
            let theta = match level(p[0]) {
                0 => 0.0,
                n => rotation(n),
            };
            out.copy_from_slice(&circle_point(2.5 * p[2] + theta))
        },
    )?;
    let ext = dugundji_values(&pair_t, &psi, &radial(&x)?)?;
    let failed: BTreeSet<usize> = ext
        .failures
        .iter()
        .map(|&i| level(yt.net().point(i)[0]))
        .collect();
    let first = failed.iter().next_back().map_or(1, |&n| n + 1);
    report.check(
        "first-level",
        first <= params.n_max,
        format!("every level 1/n with n ≥ {first} extends"),
    );
    if !failed.is_empty() {
        report.notes.push(format!(
            "weighted averages left the annulus at levels {:?}",
            failed
        ));
    }
    let mut slices = vec![Vec::new(); params.n_max + 1];
    for i in 0..yt.len() {
        let n = level(yt.net().point(i)[0]);
        if n <= params.n_max {
            slices[n].extend_from_slice(&ext.values[i * 2..i * 2 + 2]);
        }
    }
    for (n, slice) in slices.iter_mut().enumerate().skip(first) {
        let phi_n = wave(pair.z_net().clone(), &x, rotation(n))?;
        let values = core::mem::take(slice);
        let l = net_lipschitz(y.net(), &values, x.net().metric());
        let ext_n = MapSample::new(y.shared_net(), x.clone(), values, Modulus::Lipschitz(l))?;
        let sup = sup_distance(&phi_n, &phi)?;
        report.certify(
            row_label(n),
            Some(n),
            Some(sup),
            &pair,
            &phi_n,
            &positive_certificate(&ext_n, 0.0),
        );
    }
    let same = slices[0] == phi_bar.values();
    report.check(
        "limit-level",
        same,
        "level 0 of the extension is the chosen extension of φ".into(),
    );
    report.certify(
        limit_label(),
        None,
        None,
        &pair,
        &phi,
        &positive_certificate(&phi_bar, 0.0),
    );
    Ok(report.finish(format!(
        "φ_n extends to the disk for every n ≥ {first}, by restricting one extension over N × Y"
    )))
}

/// `φ = id` on the circle and `φ_k` = rotation by `5/k`. For each `n` the map on
/// `N × Y` (rotations beyond level `n`, `φ` up to it) is extended over `[0,1] × Y`;
/// the first `n` that succeeds yields the homotopy `ψ` with `ψ_{1/k} = φ_k`, `k > n`.
pub(super) fn eop_homotopy(mut report: Report, params: Params) -> Result<Report> {
    let inv = params.resolution.inverse();
    check_truncation(&params, inv - 1)?;
    let x = catalog(SpaceSpec::Circle, &params)?;
    let y = x.clone();
    let angle = |k: usize| 5.0 / k as f64;
    let yt = Arc::new(product_with(
        &y,
        Factor::Interval {
            step: params.resolution,
        },
    )?);
    let ny = y.len();
    let t_of = |i: usize| yt.net().point(i)[0];
    let in_n = |t: f64| t == 0.0 || t == 1.0 / num::round(1.0 / t);
    let zt: Vec<usize> = (0..yt.len()).filter(|&i| in_n(t_of(i))).collect();
    let pair_t = SpacePair::new(yt.clone(), zt)?;
    let levels: Vec<usize> = (1..=inv).collect();
    let r = radial(&x)?;

    let tilde = |n: usize| -> Result<MapSample> {
        let theta = |t: f64| match level(t) {
            k if k > n => angle(k),
            _ => 0.0,
        };
        // rotation angles differ by at most `c·|t − t'|` between levels
        let mut c = 0.0f64;
        let ts: Vec<f64> = core::iter::once(0.0)
            .chain(levels.iter().map(|&k| 1.0 / k as f64))
            .collect();
        for (a, &s) in ts.iter().enumerate() {
            for &u in &ts[a + 1..] {
                c = c.max(chord(theta(s) - theta(u)) / num::abs(s - u));
            }
        }
        MapSample::from_fn(
            pair_t.z_net().clone(),
            x.clone(),
            Modulus::Lipschitz(1.0 + c),
            |_, p, out| {
                let (cs, sn) = (num::cos(theta(p[0])), num::sin(theta(p[0])));
                out.copy_from_slice(&[cs * p[1] - sn * p[2], sn * p[1] + cs * p[2]]);
            },
        )
    };
    let limit = MapSample::from_fn(
        pair_t.z_net().clone(),
        x.clone(),
        Modulus::Lipschitz(1.0),
        |_, p, out| out.copy_from_slice(&p[1..]),
    )?;

    let members = (1..=params.n_max).map(tilde).collect::<Result<Vec<_>>>()?;
    let refs: Vec<&MapSample> = members.iter().collect();
    let exts = dugundji_values_many(&pair_t, &refs, &r)?;
    let mut first = None;
    for ((n, phi_n), ext) in (1..).zip(&members).zip(exts) {
        if !ext.failures.is_empty() {
            if first.is_some() {
                report.check(
                    "stays-extendible",
                    false,
                    format!("n={n} failed after an earlier success"),
                );
            } else {
                report.notes.push(format!(
                    "n={n}: {} weighted averages left the annulus",
                    ext.failures.len()
                ));
            }
            continue;
        }
        if first.is_none() {
            first = Some(n);
            let mut exact = true;
            for i in 0..yt.len() {
                let t = t_of(i);
                if !in_n(t) {
                    continue;
                }
                let k = level(t);
                let a = if k > n { angle(k) } else { 0.0 };
                let q = y.net().point(i % ny);
                let want = [
                    num::cos(a) * q[0] - num::sin(a) * q[1],
                    num::sin(a) * q[0] + num::cos(a) * q[1],
                ];
                exact &= ext.values[i * 2..i * 2 + 2] == want;
            }
            report.check(
                "slice-identities",
                exact,
                format!("ψ_(1/k) = φ_k for every k > {n} and ψ_0 = φ, exactly on net points"),
            );
        }
        let l = net_lipschitz(yt.net(), &ext.values, x.net().metric());
        let ext = MapSample::new(
            yt.shared_net(),
            x.clone(),
            ext.values,
            Modulus::Lipschitz(l),
        )?;
        let sup = sup_distance(phi_n, &limit)?;
        report.certify(
            row_label(n),
            Some(n),
            Some(sup),
            &pair_t,
            phi_n,
            &positive_certificate(&ext, 0.0),
        );
    }
    let constant_in_t = MapSample::from_fn(
        yt.shared_net(),
        x.clone(),
        Modulus::Lipschitz(1.0),
        |_, p, out| out.copy_from_slice(&p[1..]),
    )?;
    report.certify(
        limit_label(),
        None,
        None,
        &pair_t,
        &limit,
        &positive_certificate(&constant_in_t, 0.0),
    );
    report.check(
        "first-success",
        first.is_some(),
        match first {
            Some(n) => format!("first n whose map on N × Y extends over [0,1] × Y: {n}"),
            None => "no n up to n_max extends".into(),
        },
    );
    Ok(report.finish(match first {
        Some(n) => format!("φ_k is homotopic to φ for k > {n} through one homotopy ψ"),
        None => "no homotopy found".into(),
    }))
}

/// Disk with boundary `Z`, `φ = e^{i·2.5·y₂}` on `Z`, `φ_n` rotated by `3/(n+1)` with
/// their evident extensions. The limit is extended by gluing: a partial extension of
/// `φ` near `Z`, a geodesic homotopy from `φ̄_n` to it on `V̄`, and a Urysohn function.
pub(super) fn anr_eclosed(mut report: Report, params: Params) -> Result<Report> {
    let x = catalog(SpaceSpec::Circle, &params)?;
    let y = catalog(SpaceSpec::Disk, &params)?;
    let eps = y.eps();
    let pair = SpacePair::new(y.clone(), disk_boundary(&y))?;
    let rotation = |n: usize| 3.0 / (n + 1) as f64;
    let phi = wave(pair.z_net().clone(), &x, 0.0)?;
    // maps closer than this are joined by the geodesic homotopy
    let close = 1.0;
    let mut chosen = None;
    for n in 1..=params.n_max {
        let phi_bar_n = wave(y.shared_net(), &x, rotation(n))?;
        let phi_n = restrict(&phi_bar_n, &pair)?;
        let sup = sup_distance(&phi_n, &phi)?;
        report.certify(
            row_label(n),
            Some(n),
            Some(sup),
            &pair,
            &phi_n,
            &positive_certificate(&phi_bar_n, 0.0),
        );
        if chosen.is_none() && sup < close / 2.0 {
            chosen = Some((n, phi_bar_n));
        }
    }
    let Some((n, phi_bar_n)) = chosen else {
        report.check(
            "close-member",
            false,
            format!(
                "no φ_n with n ≤ {} is within {} of φ",
                params.n_max,
                close / 2.0
            ),
        );
        return Ok(report.finish("no member close enough to glue".into()));
    };

    let partial = dugundji_values(&pair, &phi, &radial(&x)?)?;
    let bad: BTreeSet<usize> = partial.failures.iter().copied().collect();
    let zindex = SpatialIndex::over(y.net(), pair.z_indices(), eps);
    let dz: Vec<f64> = (0..y.len())
        .map(|i| {
            zindex
                .nearest(y.net().point(i))
                .map_or(f64::INFINITY, |(_, d)| d)
        })
        .collect();
    let gap = |i: usize| {
        x.net()
            .metric()
            .distance(phi_bar_n.value(i), &partial.values[i * 2..i * 2 + 2])
    };
    let mut radius = 0.5;
    let mut v = Vec::new();
    while radius >= 2.0 * eps {
        let cand: Vec<usize> = (0..y.len()).filter(|&i| dz[i] <= radius).collect();
        if cand.len() < y.len() && cand.iter().all(|&i| !bad.contains(&i) && gap(i) < close) {
            v = cand;
            break;
        }
        radius /= 2.0;
    }
    if v.is_empty() {
        report.check(
            "neighbourhood",
            false,
            "no usable neighbourhood V of Z".into(),
        );
        return Ok(report.finish("gluing not possible at this resolution".into()));
    }
    report.notes.push(format!(
        "glued with n = {n}; V̄ = points within {radius} of Z ({} of {} net points)",
        v.len(),
        y.len()
    ));
    let vnet = Arc::new(y.net().select(&v)?);
    let tilde_values: Vec<f64> = v
        .iter()
        .flat_map(|&i| partial.values[i * 2..i * 2 + 2].iter().copied())
        .collect();
    let lt = net_lipschitz(&vnet, &tilde_values, x.net().metric());
    let phi_tilde = MapSample::new(
        vnet.clone(),
        x.clone(),
        tilde_values,
        Modulus::Lipschitz(lt),
    )?;
    let start = MapSample::new(
        vnet,
        x.clone(),
        v.iter()
            .flat_map(|&i| phi_bar_n.value(i).iter().copied())
            .collect(),
        phi_bar_n.modulus().clone(),
    )?;
    let psi = homotopy_between(&start, &phi_tilde, HomotopyMode::Geodesic)?;
    let f = urysohn(&y, pair.z_indices(), &v)?;
    let glued = glue_homotopy_extension(&pair, &v, &phi_bar_n, &psi, &f)?;
    let on_z = restrict(&glued, &pair)?;
    report.check(
        "restricts-to-limit",
        on_z.values() == phi.values(),
        "the glued extension equals φ exactly on the net points of Z".into(),
    );
    let slack = 4.0 * eps;
    report.check(
        "modulus-4eps",
        glued.check_modulus(slack),
        format!("declared modulus {:?} holds with slack 4ε", glued.modulus()),
    );
    report.certify(
        limit_label(),
        None,
        None,
        &pair,
        &phi,
        &positive_certificate(&glued, 0.0),
    );
    Ok(report.finish(format!(
        "every φ_n extends and so does the limit φ, glued from φ̄_{n} near Z"
    )))
}
