//! Zero-sum splitting over `Z/p`.
//!
//! Given residues `v_i` with multiplicities `n_i` whose weighted sum vanishes,
//! find sub-multiplicities `0 <= k_i <= n_i` with `sum k_i v_i = 0 (mod p)`
//! and `0 < k_a < n_a` at the anchor `a`. A sequence of length at least
//! `p + 1` in which the anchor repeats always admits such a split when `p` is
//! prime; that is what lets a long `rho`-invariant monomial factor into two
//! shorter ones. For composite `p` it can fail.

use super::InvariantError;

/// Lexicographically smallest valid sub-multiplicity vector.
///
/// `terms` holds `(value, multiplicity)` pairs; values are taken mod `p`.
pub fn zero_sum_split(
    terms: &[(i64, u32)],
    anchor: usize,
    p: u32,
) -> Result<Vec<u32>, InvariantError> {
    let pre = |msg: String| Err(InvariantError::Precondition(msg));
    if p < 2 {
        return pre(format!("modulus p={p} must be >= 2"));
    }
    if anchor >= terms.len() {
        return pre(format!(
            "anchor {anchor} out of range for {} terms",
            terms.len()
        ));
    }
    let pm = p as i64;
    let total: u64 = terms.iter().map(|&(_, n)| n as u64).sum();
    if total < p as u64 + 1 {
        return pre(format!(
            "total multiplicity {total} is below p + 1 = {}",
            p + 1
        ));
    }
    if terms[anchor].1 < 2 {
        return pre(format!(
            "anchor multiplicity {} must be at least 2",
            terms[anchor].1
        ));
    }
    let sum = terms
        .iter()
        .map(|&(v, n)| v.rem_euclid(pm) * n as i64)
        .sum::<i64>()
        .rem_euclid(pm);
    if sum != 0 {
        return pre(format!("weighted sum is {sum} mod {p}, not 0"));
    }

    let p_us = p as usize;
    let values: Vec<usize> = terms
        .iter()
        .map(|&(v, _)| v.rem_euclid(pm) as usize)
        .collect();
    let range = |i: usize| {
        let n = terms[i].1;
        if i == anchor {
            1..=n - 1
        } else {
            0..=n
        }
    };
    // reach[i][x]: terms i.. can contribute residue x.
    let mut reach = vec![vec![false; p_us]; terms.len() + 1];
    reach[terms.len()][0] = true;
    for i in (0..terms.len()).rev() {
        // Only k mod p matters for the residue, so at most p choices.
        let ks: Vec<usize> = range(i).take(p_us).map(|k| k as usize).collect();
        for x in 0..p_us {
            if !reach[i + 1][x] {
                continue;
            }
            for &k in &ks {
                reach[i][(x + k * values[i]) % p_us] = true;
            }
        }
    }
    if !reach[0][0] {
        return Err(InvariantError::Infeasible(format!(
            "terms {terms:?} with anchor {anchor} mod {p}"
        )));
    }

    let mut need = 0usize;
    let mut out = Vec::with_capacity(terms.len());
    for i in 0..terms.len() {
        let k = range(i)
            .find(|&k| {
                let rest = (need + p_us * p_us - (k as usize % p_us) * values[i] % p_us) % p_us;
                reach[i + 1][rest]
            })
            .expect("reachability table guarantees a choice");
        need = (need + p_us * p_us - (k as usize % p_us) * values[i] % p_us) % p_us;
        out.push(k);
    }
    Ok(out)
}
