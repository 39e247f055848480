//! Exact test for whether an orbit sum is a polynomial in invariants of
//! smaller degree.
//!
//! `rho` and `sigma` preserve the degree in each summand block, so the
//! invariant ring is graded by block-degree vectors and the question can be
//! settled inside the single component containing `m`. There the lower-degree
//! subalgebra is spanned by products `o(u) o(v)` with block degrees adding up.

use std::collections::HashMap;

use super::{orbit_sum, Echelon, InvariantError};
use crate::poly::{rho_character, Monomial, Polynomial, VariableLayout};
use crate::rep::DihedralModule;

fn block_variables(layout: &VariableLayout) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); layout.r + layout.s + layout.t];
    for v in 0..layout.nvars() {
        blocks[layout.summand_of(v)].push(v);
    }
    blocks
}

fn monomials_with_block_degrees(blocks: &[Vec<usize>], degrees: &[u32], n: usize) -> Vec<Monomial> {
    let mut out = vec![vec![0u32; n]];
    for (vars, &d) in blocks.iter().zip(degrees) {
        out = out
            .into_iter()
            .flat_map(|exps| {
                let mut next = Vec::new();
                match vars.as_slice() {
                    [v] => {
                        let mut e = exps.clone();
                        e[*v] = d;
                        next.push(e);
                    }
                    [a, b] => {
                        for k in 0..=d {
                            let mut e = exps.clone();
                            e[*a] = k;
                            e[*b] = d - k;
                            next.push(e);
                        }
                    }
                    _ => unreachable!("blocks have one or two variables"),
                }
                next
            })
            .collect();
    }
    out.into_iter().map(Monomial::new).collect()
}

/// Whether `o(m)` lies in the subalgebra generated by invariants of degree
/// below `deg m`.
pub fn is_expressible(module: &DihedralModule, m: &Monomial) -> Result<bool, InvariantError> {
    let target = orbit_sum(module, m)?.polynomial;
    if m.degree() == 0 {
        return Ok(true);
    }
    let layout = module.layout();
    let n = layout.nvars();
    let blocks = block_variables(layout);
    let degrees: Vec<u32> = blocks
        .iter()
        .map(|vars| vars.iter().map(|&v| m.exponent(v)).sum())
        .collect();

    let mut cache: HashMap<Vec<u32>, Vec<Polynomial>> = HashMap::new();
    let mut basis = |a: &[u32]| -> Vec<Polynomial> {
        cache
            .entry(a.to_vec())
            .or_insert_with(|| {
                monomials_with_block_degrees(&blocks, a, n)
                    .into_iter()
                    .filter(|u| rho_character(u, module.spec()) == 0 && *u <= u.sigma_image(layout))
                    .map(|u| orbit_sum(module, &u).expect("rho-invariant").polynomial)
                    .collect()
            })
            .clone()
    };

    let mut ech = Echelon::new(module.field(), n);
    let mut a = vec![0u32; degrees.len()];
    // odometer over 0 <= a <= degrees; each unordered split {a, degrees - a} once
    'splits: loop {
        let b: Vec<u32> = degrees.iter().zip(&a).map(|(d, x)| d - x).collect();
        if a.iter().any(|&x| x > 0) && b.iter().any(|&x| x > 0) && a <= b {
            let left = basis(&a);
            if !left.is_empty() {
                let right = basis(&b);
                for g in &left {
                    for h in &right {
                        ech.insert(g.mul_unchecked(h, module.field()));
                    }
                }
            }
        }
        for i in 0..a.len() {
            if a[i] < degrees[i] {
                a[i] += 1;
                continue 'splits;
            }
            a[i] = 0;
        }
        break;
    }
    Ok(ech.contains(&target))
}
