use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::anr::{catalog, chord, circle_point, disk_boundary};
use super::{limit_label, row_label, Params, Report};
use crate::certificates::positive_certificate;
use crate::error::Result;
use crate::maps::{cone_contraction, equiconnect_homotopy, small_diameter_extend, MapSample};
use crate::metric::{sup_distance, Modulus};
use crate::num;
use crate::spaces::{
    opc_block, opc_disjoint_union, product_with, spiked_base_pair, AnnotatedSpace, Factor,
    SpacePair, SpaceSpec,
};

/// `Y` = one-point compactification of `K` disks, `Z` = their boundary circles and the
/// point at infinity, `φ_k = e^{i·sin(θ)/(4k)}` on the `k`-th circle and `p = 1` at
/// infinity. Each `φ_k` gets a small-diameter extension `φ̄_k`; assembling them extends
/// `φ`, and the truncations `φ_n` (`p` beyond block `n`) converge to it.
pub(super) fn loc_ext(mut report: Report, params: Params) -> Result<Report> {
    let blocks = params.n_max + 1;
    let x = catalog(SpaceSpec::Circle, &params)?;
    let disk = catalog(SpaceSpec::Disk, &params)?;
    let boundary = disk_boundary(&disk);
    let y = Arc::new(opc_disjoint_union(&alloc::vec![(*disk).clone(); blocks])?);
    let p = [1.0, 0.0];
    let target = |k: usize| 3.0 / k as f64;
    let block_pair = SpacePair::new(disk.clone(), boundary.clone())?;
    let phi_k = |k: usize| {
        MapSample::from_fn(
            block_pair.z_net().clone(),
            x.clone(),
            // arcs are at most π/2 times their chords
            Modulus::Lipschitz(core::f64::consts::FRAC_PI_2 / (4 * k) as f64),
            |_, q, out| {
                let theta = num::atan2(q[1], q[0]);
                out.copy_from_slice(&circle_point(num::sin(theta) / (4 * k) as f64))
            },
        )
    };
    let mut exts = Vec::with_capacity(blocks);
    let mut diams = Vec::with_capacity(blocks);
    for k in 1..=blocks {
        let ext = small_diameter_extend(&block_pair, &phi_k(k)?, target(k))?;
        diams.push(ext.image_diameter());
        exts.push(ext);
    }
    let within = diams.iter().enumerate().all(|(j, &d)| d <= target(j + 1));
    report.check(
        "diameter-bound",
        within,
        format!(
            "diam φ̄_k(Y_k) ≤ 3/k for k = 1..{blocks}; largest {:.6}",
            diams[0]
        ),
    );
    report.check(
        "diameter-decreasing",
        diams.windows(2).all(|w| w[1] < w[0]),
        format!(
            "diam φ̄_k(Y_k) from {:.6} down to {:.6}",
            diams[0],
            diams[blocks - 1]
        ),
    );

    // Z in Y: the boundary of every block and the point at infinity
    let mut slot = alloc::vec![None; y.len()];
    let mut z = Vec::new();
    for k in 1..=blocks {
        let members = opc_block(&y, k);
        for &j in &boundary {
            z.push(members[j]);
            slot[members[j]] = Some((k, j));
        }
    }
    z.push(y.len() - 1);
    let pair = SpacePair::new(y.clone(), z)?;
    let locate: Vec<Option<(usize, usize)>> = pair.z_indices().iter().map(|&i| slot[i]).collect();
    let bounds = BlockBounds::new(&y, &exts, &p, x.net().metric());
    // φ_n is the restriction of the assembled extension below, so its constant applies
    let truncation = |n: usize| -> Result<MapSample> {
        let values: Vec<f64> = locate
            .iter()
            .flat_map(|slot| match *slot {
                Some((k, j)) if k <= n => {
                    let q = disk.net().point(j);
                    circle_point(num::sin(num::atan2(q[1], q[0])) / (4 * k) as f64)
                }
                _ => p,
            })
            .collect();
        let modulus = Modulus::Lipschitz(bounds.lipschitz(n));
        MapSample::new(pair.z_net().clone(), x.clone(), values, modulus)
    };
    let extension = |n: usize| -> Result<MapSample> {
        let mut values = Vec::with_capacity(y.len() * 2);
        for _ in 0..y.len() {
            values.extend_from_slice(&p);
        }
        for k in 1..=n.min(blocks) {
            for (j, &i) in opc_block(&y, k).iter().enumerate() {
                values[i * 2..i * 2 + 2].copy_from_slice(exts[k - 1].value(j));
            }
        }
        let l = bounds.lipschitz(n.min(blocks));
        MapSample::new(y.shared_net(), x.clone(), values, Modulus::Lipschitz(l))
    };
    let phi = truncation(blocks)?;
    for n in 1..=params.n_max {
        let phi_n = truncation(n)?;
        let sup = sup_distance(&phi_n, &phi)?;
        report.certify(
            row_label(n),
            Some(n),
            Some(sup),
            &pair,
            &phi_n,
            &positive_certificate(&extension(n)?, 0.0),
        );
    }
    report.certify(
        limit_label(),
        None,
        None,
        &pair,
        &phi,
        &positive_certificate(&extension(blocks)?, 0.0),
    );
    report.notes.push(format!(
        "truncated to {blocks} blocks; beyond them φ is the constant p, so the tail condition is not sampled"
    ));
    Ok(report.finish("the small-diameter extensions φ̄_k assemble into an extension of φ".into()))
}

/// Lipschitz data for maps on a one-point compactification that use the block
/// extensions on blocks `1..=n` and the constant `p` elsewhere.
struct BlockBounds {
    /// Exact Lipschitz constant of each block extension in the rescaled coordinates.
    within: Vec<f64>,
    /// Largest distance from `p` on each block.
    reach: Vec<f64>,
    /// `gap[j][k]`: lower bound on distances between blocks (the last is `∞`).
    gap: Vec<Vec<f64>>,
}

impl BlockBounds {
    fn new(
        y: &AnnotatedSpace,
        exts: &[MapSample],
        p: &[f64],
        metric: &crate::metric::Metric,
    ) -> Self {
        let net = y.net();
        let mut members: Vec<Vec<usize>> = (1..=exts.len()).map(|k| opc_block(y, k)).collect();
        members.push(alloc::vec![y.len() - 1]);
        let mut within = Vec::new();
        let mut reach = Vec::new();
        for (ms, ext) in members.iter().zip(exts) {
            let mut l = 0.0f64;
            for a in 0..ms.len() {
                for b in a + 1..ms.len() {
                    let d = net.distance(ms[a], ms[b]);
                    l = l.max(metric.distance(ext.value(a), ext.value(b)) / d);
                }
            }
            within.push(l);
            reach.push(
                (0..ms.len())
                    .map(|a| metric.distance(ext.value(a), p))
                    .fold(0.0, f64::max),
            );
        }
        let boxes: Vec<(Vec<f64>, Vec<f64>)> = members
            .iter()
            .map(|ms| {
                let dim = net.dim();
                let mut lo = alloc::vec![f64::INFINITY; dim];
                let mut hi = alloc::vec![f64::NEG_INFINITY; dim];
                for &i in ms {
                    for (c, &x) in net.point(i).iter().enumerate() {
                        lo[c] = lo[c].min(x);
                        hi[c] = hi[c].max(x);
                    }
                }
                (lo, hi)
            })
            .collect();
        let gap = boxes
            .iter()
            .map(|(alo, ahi)| {
                boxes
                    .iter()
                    .map(|(blo, bhi)| {
                        let mut s = 0.0;
                        for c in 0..alo.len() {
                            let g = (blo[c] - ahi[c]).max(alo[c] - bhi[c]).max(0.0);
                            s += g * g;
                        }
                        num::sqrt(s)
                    })
                    .collect()
            })
            .collect();
        BlockBounds { within, reach, gap }
    }

    /// Across blocks `|v − v'| ≤ reach_j + reach_k` at distance at least the box gap.
    fn lipschitz(&self, n: usize) -> f64 {
        let reach = |k: usize| if k < n { self.reach[k] } else { 0.0 };
        let mut l = self.within[..n].iter().copied().fold(0.0, f64::max);
        for j in 0..n {
            for k in 0..self.gap.len() {
                if k != j {
                    l = l.max((reach(j) + reach(k)) / self.gap[j][k]);
                }
            }
        }
        l
    }
}

/// Contracts a small arc `V` of the circle to its basepoint inside the circle, keeping
/// the basepoint fixed throughout.
pub(super) fn cone_contraction_run(mut report: Report, params: Params) -> Result<Report> {
    let x = catalog(SpaceSpec::Circle, &params)?;
    let p = x.basepoint("p").unwrap_or(0);
    let target = 0.5;
    let reach = target / 5.0;
    let v: Vec<usize> = (0..x.len())
        .filter(|&i| x.net().distance(i, p) <= reach)
        .collect();
    let pv = v.iter().position(|&i| i == p).expect("p lies in V");
    let h = cone_contraction(&x, &v, p, target)?;
    let px = x.net().point(p);
    let slices = h.times().len();
    let fixed = (0..slices).all(|k| h.value(k, pv) == px);
    report.check(
        "rel-p",
        fixed,
        format!("H_t(p) = p exactly in all {slices} slices"),
    );
    let identity = (0..v.len()).all(|j| h.value(0, j) == x.net().point(v[j]));
    report.check(
        "starts-at-identity",
        identity,
        "H_0 is the inclusion of V".into(),
    );
    let constant = (0..v.len()).all(|j| h.value(slices - 1, j) == px);
    report.check("ends-at-p", constant, "H_1 is the constant map p".into());
    let mut farthest = 0.0f64;
    for k in 0..slices {
        for j in 0..v.len() {
            farthest = farthest.max(x.net().metric().distance(h.value(k, j), px));
        }
    }
    report.check(
        "stays-close",
        farthest < target,
        format!("every H_t(y) within {farthest:.6} < {target} of p"),
    );

    let vspace = x.subspace(&v, "V")?;
    let pair = spiked_base_pair(&vspace, pv)?;
    let n = vspace.len();
    let phi = MapSample::from_fn(
        pair.z_net().clone(),
        x.clone(),
        Modulus::Lipschitz(0.0),
        |k, _, out| {
            let yi = pair.z_indices()[k];
            out.copy_from_slice(if yi < n { vspace.net().point(yi) } else { px });
        },
    )?;
    let fitted = Modulus::fit(pair.z_net(), phi.values(), x.net().metric());
    let phi = phi.with_modulus(fitted)?;
    let levels = slices - 1;
    let mut values = h.map().values()[..levels * n * 2].to_vec();
    values.extend_from_slice(px);
    let ext = MapSample::new(
        pair.y().shared_net(),
        x.clone(),
        values,
        Modulus::Lipschitz(h.space_lipschitz()),
    )?;
    report.certify(
        String::from("cone extension"),
        None,
        None,
        &pair,
        &phi,
        &positive_certificate(&ext, 0.0),
    );
    Ok(report.finish(format!(
        "V (radius {reach}) contracts to p within {target} of p, fixing p"
    )))
}

/// Two maps of the circle that agree on `{q₀ ≤ 1/2}` and are `δ`-close are joined by a
/// homotopy fixing their coincidence set, read as an extension from
/// `(Y × {0,1}) ∪ (A × [0,1])` to `Y × [0,1]`.
pub(super) fn equiconnected(mut report: Report, params: Params) -> Result<Report> {
    let x = catalog(SpaceSpec::Circle, &params)?;
    let y: Arc<AnnotatedSpace> = x.clone();
    let delta = 0.5;
    let bend = |q: &[f64]| 0.6 * (q[0] - 0.5).max(0.0);
    let f = MapSample::from_fn(
        y.shared_net(),
        x.clone(),
        Modulus::Lipschitz(2.0),
        |_, q, out| out.copy_from_slice(&circle_point(2.0 * q[0])),
    )?;
    let g = MapSample::from_fn(
        y.shared_net(),
        x.clone(),
        Modulus::Lipschitz(2.6),
        |_, q, out| out.copy_from_slice(&circle_point(2.0 * q[0] + bend(q))),
    )?;
    let h = equiconnect_homotopy(&f, &g, delta)?;
    let coincide: Vec<usize> = (0..y.len()).filter(|&i| f.value(i) == g.value(i)).collect();
    let slices = h.times().len();
    let fixed = (0..slices).all(|k| coincide.iter().all(|&i| h.value(k, i) == f.value(i)));
    report.check(
        "coincidence-fixed",
        fixed,
        format!(
            "{} coincidence points fixed in all {slices} slices",
            coincide.len()
        ),
    );
    let mut widest = 0.0f64;
    for i in 0..y.len() {
        for a in 0..slices {
            for b in a + 1..slices {
                widest = widest.max(x.net().metric().distance(h.value(a, i), h.value(b, i)));
            }
        }
    }
    report.check(
        "slices-close",
        widest < delta,
        format!("any two slices are {widest:.6} < {delta} apart"),
    );
    report.notes.push(format!(
        "sup distance of the two maps: {:.6} (chord of 0.3)",
        chord(0.3)
    ));

    let step = crate::dyadic::Resolution::from_eps(h.times()[1] - h.times()[0])?;
    let yt = Arc::new(product_with(&y, Factor::Interval { step })?);
    let ny = y.len();
    let slice_of = |fi: usize| -> usize {
        let t = yt.net().point(fi * ny)[0];
        let k = h.nearest_time(t);
        debug_assert_eq!(h.times()[k], t);
        k
    };
    let on_a = {
        let mut m = alloc::vec![false; ny];
        for &i in &coincide {
            m[i] = true;
        }
        m
    };
    let zt: Vec<usize> = (0..yt.len())
        .filter(|&i| {
            let t = yt.net().point(i)[0];
            t == 0.0 || t == 1.0 || on_a[i % ny]
        })
        .collect();
    let pair = SpacePair::new(yt.clone(), zt)?;
    // endpoints differ by at most 2 at t-distance 1, within a slice by at most 2.6·d
    let phi = MapSample::from_fn(
        pair.z_net().clone(),
        x.clone(),
        Modulus::Lipschitz(2.6),
        |_, p, out| {
            let q = &p[1..];
            let a = if p[0] == 1.0 { bend(q) } else { 0.0 };
            out.copy_from_slice(&circle_point(2.0 * q[0] + a));
        },
    )?;
    let mut values = Vec::with_capacity(yt.len() * 2);
    for fi in 0..yt.len() / ny {
        let k = slice_of(fi);
        for i in 0..ny {
            values.extend_from_slice(h.value(k, i));
        }
    }
    let ext = MapSample::new(
        yt.shared_net(),
        x.clone(),
        values,
        h.map().modulus().clone(),
    )?;
    report.certify(
        String::from("homotopy extension"),
        None,
        None,
        &pair,
        &phi,
        &positive_certificate(&ext, 0.0),
    );
    Ok(report.finish(format!(
        "maps {:.6} apart are joined within {delta}, fixing where they agree",
        chord(0.3)
    )))
}
