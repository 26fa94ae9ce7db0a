use core::cmp::Ordering;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::extension::small_diameter_extend;
use super::sample::MapSample;
use crate::dyadic::Resolution;
use crate::error::{Error, Result};
use crate::metric::{sup_distance, Block, Metric, Modulus, Net};
use crate::num;
use crate::spaces::{
    cone_levels, make_space, spiked_base_pair, AnnotatedSpace, AnrKind, Retraction, SpaceSpec,
};

/// Homotopy sampled on `times × base`, stored time-major: slice `k` is the map at
/// `times[k]`.
#[derive(Debug, Clone)]
pub struct Homotopy {
    map: MapSample,
    base: Arc<Net>,
    times: Vec<f64>,
    space_lipschitz: f64,
    time_lipschitz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomotopyMode {
    StraightLine,
    Geodesic,
}

/// Default time grid: the interval net at `2^-6`.
pub const DEFAULT_TIME_EXPONENT: u32 = 6;

/// Sorted sample times of the interval net at resolution `res`.
pub fn time_grid(res: Resolution) -> Vec<f64> {
    let interval = make_space(SpaceSpec::Interval, res).expect("interval catalog entry");
    let mut t = interval.net().coords().to_vec();
    t.sort_by(f64::total_cmp);
    t
}

impl Homotopy {
    /// `values` holds `times.len()` slices of `base.len()` codomain points.
    pub fn from_slices(
        base: Arc<Net>,
        codomain: Arc<AnnotatedSpace>,
        times: Vec<f64>,
        values: Vec<f64>,
        space_lipschitz: f64,
        time_lipschitz: f64,
    ) -> Result<Self> {
        if times.is_empty()
            || times
                .windows(2)
                .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
        {
            return Err(Error::InvalidArgument(
                "homotopy times must be strictly increasing".into(),
            ));
        }
        let dim = base.dim();
        let mut coords = Vec::with_capacity(times.len() * base.len() * (dim + 1));
        for &t in &times {
            for p in base.points() {
                coords.push(t);
                coords.extend_from_slice(p);
            }
        }
        let metric = Metric::Product(vec![
            Block {
                dim: 1,
                metric: Metric::Euclidean,
            },
            Block {
                dim,
                metric: base.metric().clone(),
            },
        ]);
        let net = Net::new(dim + 1, coords, base.resolution(), metric)?;
        // under the max metric both moves can happen at once
        let l = space_lipschitz + time_lipschitz;
        let map = MapSample::new(Arc::new(net), codomain, values, Modulus::Lipschitz(l))?;
        Ok(Homotopy {
            map,
            base,
            times,
            space_lipschitz,
            time_lipschitz,
        })
    }

    /// The homotopy as one map on the product net (max metric).
    pub fn map(&self) -> &MapSample {
        &self.map
    }

    pub fn base(&self) -> &Arc<Net> {
        &self.base
    }

    pub fn codomain(&self) -> &Arc<AnnotatedSpace> {
        self.map.codomain()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn space_lipschitz(&self) -> f64 {
        self.space_lipschitz
    }

    pub fn time_lipschitz(&self) -> f64 {
        self.time_lipschitz
    }

    /// Index of the sample time closest to `t` (the earlier one on ties).
    pub fn nearest_time(&self, t: f64) -> usize {
        let k = self.times.partition_point(|&s| s < t);
        if k == 0 {
            0
        } else if k == self.times.len() || t - self.times[k - 1] <= self.times[k] - t {
            k - 1
        } else {
            k
        }
    }

    /// Linear interpolation in `t` between the two neighbouring slices, written to
    /// `out`. Exact sample times return the stored slice value.
    pub fn interpolate(&self, t: f64, i: usize, out: &mut [f64]) {
        let k = self.times.partition_point(|&s| s <= t);
        if k == 0 {
            out.copy_from_slice(self.value(0, i));
            return;
        }
        if k == self.times.len() || self.times[k - 1] == t {
            out.copy_from_slice(self.value(k - 1, i));
            return;
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let lambda = (t - t0) / (t1 - t0);
        let (a, b) = (self.value(k - 1, i), self.value(k, i));
        for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
            *o = (1.0 - lambda) * x + lambda * y;
        }
    }

    pub fn value(&self, k: usize, i: usize) -> &[f64] {
        self.map.value(k * self.base.len() + i)
    }

    pub fn slice(&self, k: usize) -> MapSample {
        let n = self.base.len();
        let d = self.map.codim();
        let values = self.map.values()[k * n * d..(k + 1) * n * d].to_vec();
        MapSample::new(
            self.base.clone(),
            self.map.codomain().clone(),
            values,
            Modulus::Lipschitz(self.space_lipschitz),
        )
        .expect("slice of a valid homotopy")
    }

    pub fn slice_at(&self, t: f64) -> MapSample {
        self.slice(self.nearest_time(t))
    }
}

/// Homotopy from `f` to `g` on the default time grid.
pub fn homotopy_between(f: &MapSample, g: &MapSample, mode: HomotopyMode) -> Result<Homotopy> {
    homotopy_between_on(f, g, mode, Resolution::new(DEFAULT_TIME_EXPONENT)?)
}

fn lipschitz_of(m: &Modulus) -> Result<f64> {
    match m {
        Modulus::Lipschitz(l) => Ok(*l),
        Modulus::Steps(_) => Err(Error::InvalidArgument(
            "homotopies need Lipschitz endpoint moduli".into(),
        )),
    }
}

/// Straight-line (convex codomain) or constant-speed geodesic (circle) homotopy.
/// Slices at `t = 0` and `t = 1` equal `f` and `g` exactly, and points where `f` and
/// `g` agree stay fixed.
pub fn homotopy_between_on(
    f: &MapSample,
    g: &MapSample,
    mode: HomotopyMode,
    grid: Resolution,
) -> Result<Homotopy> {
    if !f.same_domain(g) || !f.same_codomain(g) {
        return Err(Error::DomainMismatch(
            "homotopy endpoints differ in domain or codomain".into(),
        ));
    }
    let x = f.codomain();
    let anr = x.anr();
    let (lf, lg) = (lipschitz_of(f.modulus())?, lipschitz_of(g.modulus())?);
    let times = time_grid(grid);
    let n = f.len();
    let d = f.codim();
    let mut values = Vec::with_capacity(times.len() * n * d);
    let (space_l, time_l);
    match mode {
        HomotopyMode::StraightLine => {
            if !anr.is_some_and(AnrKind::is_convex) {
                return Err(Error::InvalidArgument(format!(
                    "straight-line homotopy needs a convex codomain, {} is not",
                    x.name()
                )));
            }
            for &t in &times {
                for i in 0..n {
                    let (a, b) = (f.value(i), g.value(i));
                    if t == 0.0 || a == b {
                        values.extend_from_slice(a);
                    } else if t == 1.0 {
                        values.extend_from_slice(b);
                    } else {
                        values.extend(a.iter().zip(b).map(|(p, q)| (1.0 - t) * p + t * q));
                    }
                }
            }
            space_l = lf.max(lg);
            time_l = sup_distance(f, g)?;
        }
        HomotopyMode::Geodesic => {
            let Some(Retraction::Radial { center, radius, .. }) = x.retraction() else {
                return Err(Error::InvalidArgument(format!(
                    "geodesic homotopy needs a circle codomain, {} is not",
                    x.name()
                )));
            };
            let (cx, cy, r) = (center[0], center[1], *radius);
            let mut start = vec![0.0; n];
            let mut sweep = vec![0.0; n];
            let mut widest = 0.0f64;
            for i in 0..n {
                let (a, b) = (f.value(i), g.value(i));
                let alpha = num::atan2(a[1] - cy, a[0] - cx);
                let delta = num::wrap_angle(num::atan2(b[1] - cy, b[0] - cx) - alpha);
                if a != b && num::abs(delta) >= core::f64::consts::PI - 1e-9 {
                    return Err(Error::EpsilonTooLarge(format!(
                        "f and g are antipodal at domain point {i}"
                    )));
                }
                start[i] = alpha;
                sweep[i] = delta;
                widest = widest.max(num::abs(delta));
            }
            for &t in &times {
                for i in 0..n {
                    let (a, b) = (f.value(i), g.value(i));
                    if t == 0.0 || a == b {
                        values.extend_from_slice(a);
                    } else if t == 1.0 {
                        values.extend_from_slice(b);
                    } else {
                        let th = start[i] + t * sweep[i];
                        values.push(cx + r * num::cos(th));
                        values.push(cy + r * num::sin(th));
                    }
                }
            }
            // arc length is at most π/2 times chord length
            space_l = core::f64::consts::FRAC_PI_2 * lf.max(lg);
            time_l = r * widest;
        }
    }
    Homotopy::from_slices(
        f.shared_domain().clone(),
        x.clone(),
        times,
        values,
        space_l,
        time_l,
    )
}

/// Contraction of a small `V ⊂ X` to `p ∈ V` inside `X`, obtained by extending the
/// spiked-base map on the cone over `V` with small image diameter. `v` lists X-indices,
/// `p` is an X-index that must belong to `v`. Slice `l` is cone level `l`, the last
/// slice is the apex (constant `p`).
pub fn cone_contraction(
    x: &Arc<AnnotatedSpace>,
    v: &[usize],
    p: usize,
    target: f64,
) -> Result<Homotopy> {
    let Some(pv) = v.iter().position(|&i| i == p) else {
        return Err(Error::InvalidArgument(
            "contraction point must lie in V".into(),
        ));
    };
    let vspace = x.subspace(v, "V")?;
    let levels = cone_levels(&vspace);
    let pair = spiked_base_pair(&vspace, pv)?;
    let n = vspace.len();
    let d = x.net().dim();
    let px = x.net().point(p).to_vec();
    let zf = MapSample::from_fn(
        pair.z_net().clone(),
        x.clone(),
        Modulus::Lipschitz(0.0),
        |k, _, out| {
            let yi = pair.z_indices()[k];
            if yi < n {
                out.copy_from_slice(vspace.net().point(yi));
            } else {
                out.copy_from_slice(&px);
            }
        },
    )?;
    let fitted = Modulus::fit(pair.z_net(), zf.values(), x.net().metric());
    let zf = zf.with_modulus(fitted)?;
    let ext = small_diameter_extend(&pair, &zf, target)?;
    let Modulus::Lipschitz(l) = *ext.modulus() else {
        unreachable!("dugundji extensions are Lipschitz")
    };
    let mut times: Vec<f64> = (0..levels).map(|k| k as f64 / levels as f64).collect();
    times.push(1.0);
    let mut values = ext.values()[..levels * n * d].to_vec();
    for _ in 0..n {
        values.extend_from_slice(ext.value(levels * n));
    }
    Homotopy::from_slices(vspace.shared_net(), x.clone(), times, values, l, l)
}

/// Homotopy between `δ`-close maps that keeps their coincidence set fixed and moves
/// each point along a path of length below `δ`. The time grid is the default one or the
/// domain's resolution, whichever is finer.
pub fn equiconnect_homotopy(f: &MapSample, g: &MapSample, delta: f64) -> Result<Homotopy> {
    let gap = sup_distance(f, g)?;
    if gap >= delta {
        return Err(Error::EpsilonTooLarge(format!(
            "maps are {gap} apart, not within {delta}"
        )));
    }
    let mode = match f.codomain().anr() {
        Some(k) if k.is_convex() => HomotopyMode::StraightLine,
        Some(AnrKind::Circle) => HomotopyMode::Geodesic,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{} is not a catalog ANR",
                f.codomain().name()
            )))
        }
    };
    let exponent = Resolution::from_eps(f.domain().resolution())
        .map_or(DEFAULT_TIME_EXPONENT, |r| {
            r.exponent().max(DEFAULT_TIME_EXPONENT)
        });
    homotopy_between_on(f, g, mode, Resolution::new(exponent)?)
}
