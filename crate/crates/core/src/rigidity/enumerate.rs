use std::collections::BTreeMap;

use super::action::{fixed_flags, propagate_seeds, CurveState, GraphAction, Seed};
use super::config::{CurveConfig, Permutation};
use super::RigidityError;

pub const MAX_ORDER: u32 = 64;
pub const MAX_VERTICES: usize = 64;

type OwnedKey = (u32, u32, Vec<usize>, Vec<CurveState>);

/// Every consistent order-`n` action with volume exponent `c`, one
/// representative per conjugacy class under the graph automorphisms,
/// optionally restricted to a census `(N, k)`.
///
/// Work is split over `jobs` threads; the result is sorted by action key
/// and does not depend on `jobs`.
pub fn enumerate_actions(
    config: &CurveConfig,
    n: u32,
    c: u32,
    filter: Option<(usize, usize)>,
    jobs: usize,
) -> Result<Vec<GraphAction>, RigidityError> {
    if n == 0 || n > MAX_ORDER {
        return Err(RigidityError::InvalidOrder);
    }
    if config.len() > MAX_VERTICES {
        return Err(RigidityError::ConfigTooLarge { vertices: config.len(), max: MAX_VERTICES });
    }
    let c = c % n;
    let autos = config.automorphisms();
    let candidates: Vec<&Permutation> = autos.iter().filter(|p| p.pow(n as u64).is_identity()).collect();
    let jobs = jobs.max(1);
    let chunk = candidates.len().div_ceil(jobs).max(1);
    let found: Vec<GraphAction> = std::thread::scope(|s| {
        let handles: Vec<_> = candidates
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().flat_map(|pi| actions_for(config, pi, n, c, filter)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut classes: BTreeMap<OwnedKey, GraphAction> = BTreeMap::new();
    for a in found {
        let rep = autos.iter().map(|g| a.conjugate(g)).min_by(|x, y| x.key().cmp(&y.key())).expect("identity is an automorphism");
        let (n, c, pi, states) = rep.key();
        classes.entry((n, c, pi.to_vec(), states.to_vec())).or_insert(rep);
    }
    Ok(classes.into_values().collect())
}

/// Connected components of the curves stable under `pi`, joined through
/// their common fixed points.
fn stable_components(config: &CurveConfig, pi: &Permutation) -> Vec<usize> {
    let mut seen = vec![false; config.len()];
    let mut roots = Vec::new();
    for start in 0..config.len() {
        if seen[start] || pi.apply(start) != start {
            continue;
        }
        roots.push(start);
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for (d, _) in config.neighbors(v) {
                if !seen[d] && pi.apply(d) == d {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
    }
    roots
}

fn actions_for(config: &CurveConfig, pi: &Permutation, n: u32, c: u32, filter: Option<(usize, usize)>) -> Vec<GraphAction> {
    let roots = stable_components(config, pi);
    let flags: Vec<_> = roots.iter().map(|&r| fixed_flags(config, pi, r)[0]).collect();
    let total = (n as u64).pow(roots.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let seeds: Vec<Seed> = roots
            .iter()
            .zip(&flags)
            .map(|(&r, &f)| {
                let w = (rest % n as u64) as u32;
                rest /= n as u64;
                Seed::Flag(r, f, w)
            })
            .collect();
        let Ok(action) = propagate_seeds(config, pi.clone(), n, c, &seeds) else { continue };
        if let Some((want_n, want_k)) = filter {
            let census = action.census(config);
            if (census.isolated_points, census.fixed_curves) != (want_n, want_k) {
                continue;
            }
        }
        out.push(action);
    }
    out
}
