use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::maps::MapSample;
use crate::metric::Modulus;
use crate::spaces::{ClopenStructure, SpacePair};

/// `U_n = V_n ∖ ⋃_{k<n} V_k` for clopen atom unions `V_n` (net indices).
pub fn disjointify(
    sets: &[BTreeSet<usize>],
    clopen: &ClopenStructure,
) -> Result<Vec<BTreeSet<usize>>> {
    if let Some(n) = sets.iter().position(|s| !clopen.is_clopen_union(s)) {
        return Err(Error::InvalidArgument(format!(
            "set {n} splits a clopen atom"
        )));
    }
    let mut seen = BTreeSet::new();
    Ok(sets
        .iter()
        .map(|v| {
            let u: BTreeSet<usize> = v.difference(&seen).copied().collect();
            seen.extend(v.iter().copied());
            u
        })
        .collect())
}

/// Extension of a map into a space whose values are isolated points or a tail point,
/// built from clopen sets: for each value other than the tail value, the union of the
/// Y-atoms meeting its preimage must trace exactly that preimage on Z. These unions
/// are disjointified and the remainder of Y takes the tail value.
pub fn clopen_extension(pair: &SpacePair, phi: &MapSample) -> Result<MapSample> {
    let y = pair.y();
    let z = pair.z_indices();
    if phi.len() != z.len() || phi.domain() != &**pair.z_net() {
        return Err(Error::DomainMismatch("map is not defined on Z".into()));
    }
    let x = phi.codomain();
    let atoms = &y.clopen().atoms;
    // value groups in order of first appearance, as Y-indices of Z points
    let mut groups: Vec<(Vec<f64>, BTreeSet<usize>)> = Vec::new();
    for (pos, &yi) in z.iter().enumerate() {
        let v = phi.value(pos);
        match groups.iter_mut().find(|(w, _)| w == v) {
            Some((_, g)) => {
                g.insert(yi);
            }
            None => groups.push((v.to_vec(), BTreeSet::from([yi]))),
        }
    }
    let in_tail = |v: &[f64]| {
        let (i, _) = x.locate(v);
        Some(x.clopen().atom_of(i)) == x.clopen().tail
    };
    let default = groups
        .iter()
        .position(|(v, _)| in_tail(v))
        .unwrap_or(groups.len() - 1);
    let mut sets = Vec::new();
    let mut values = Vec::new();
    for (g, (v, trace)) in groups.iter().enumerate() {
        if g == default {
            continue;
        }
        let touched: BTreeSet<u32> = trace.iter().map(|&i| atoms[i]).collect();
        let set: BTreeSet<usize> = (0..y.len())
            .filter(|&i| touched.contains(&atoms[i]))
            .collect();
        if let Some(&bad) = z.iter().find(|&&i| set.contains(&i) != trace.contains(&i)) {
            return Err(Error::ExtensionFailure {
                index: bad,
                reason: "preimage is not the trace of a clopen set".into(),
            });
        }
        sets.push(set);
        values.push(v.clone());
    }
    let pieces = disjointify(&sets, y.clopen())?;
    let d = phi.codim();
    let mut out = vec![0.0; y.len() * d];
    for row in out.chunks_exact_mut(d) {
        row.copy_from_slice(&groups[default].0);
    }
    for (piece, v) in pieces.iter().zip(&values) {
        for &i in piece {
            out[i * d..(i + 1) * d].copy_from_slice(v);
        }
    }
    let net = y.shared_net();
    let modulus = Modulus::fit(&net, &out, x.net().metric());
    MapSample::new(net, x.clone(), out, modulus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjointify_small() {
        let clopen = ClopenStructure {
            atoms: vec![0, 1, 2, 3],
            tail: None,
        };
        let s = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
        let got = disjointify(&[s(&[0, 1]), s(&[1, 2]), s(&[2, 3])], &clopen).unwrap();
        assert_eq!(got, vec![s(&[0, 1]), s(&[2]), s(&[3])]);
        let split = ClopenStructure {
            atoms: vec![0, 0, 1],
            tail: None,
        };
        assert!(disjointify(&[s(&[0])], &split).is_err());
    }
}
