//! Independent reference implementations used only by tests. They work on
//! plain bit vectors and explicit enumeration and share no code with the
//! library paths they check.
#![allow(dead_code)]

use std::collections::HashMap;

/// Bits of `index` over `m` positions, most significant first.
pub fn bits_of(index: usize, m: usize) -> Vec<bool> {
    (0..m).rev().map(|i| (index >> i) & 1 == 1).collect()
}

pub fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Inverse-square distance weighted average, evaluated term by term for
/// every idea in the space.
pub fn interpolated_table(m: usize, reps: &[(Vec<bool>, f64)]) -> Vec<f64> {
    (0..1usize << m)
        .map(|idx| {
            let v = bits_of(idx, m);
            if let Some((_, u)) = reps.iter().find(|(r, _)| *r == v) {
                return *u;
            }
            let mut num = 0.0;
            let mut den = 0.0;
            for (r, u) in reps {
                let d = hamming(r, &v) as f64;
                num += u * d.powi(-2);
                den += d.powi(-2);
            }
            num / den
        })
        .collect()
}

/// Base-2 Shannon entropy of a list of items, one entry per copy.
pub fn entropy_of_items(items: &[u32]) -> f64 {
    let mut freq: HashMap<u32, usize> = HashMap::new();
    for &i in items {
        *freq.entry(i).or_default() += 1;
    }
    let n = items.len() as f64;
    freq.values().map(|&c| c as f64 / n).map(|p| -p * p.ln() / std::f64::consts::LN_2).sum()
}

/// Exact two-sided Mann-Whitney p-value by enumerating every way of drawing
/// `a.len()` of the pooled observations as the first sample.
pub fn exact_mann_whitney_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    // brute-force midranks: count smaller and equal observations
    let ranks: Vec<f64> = pooled
        .iter()
        .map(|x| {
            let less = pooled.iter().filter(|y| *y < x).count() as f64;
            let equal = pooled.iter().filter(|y| *y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect();
    let n1 = a.len();
    let mean = (n1 * b.len()) as f64 / 2.0;
    let u_of = |subset: &[usize]| subset.iter().map(|&i| ranks[i]).sum::<f64>() - (n1 * (n1 + 1)) as f64 / 2.0;
    let observed = (u_of(&(0..n1).collect::<Vec<_>>()) - mean).abs();
    let mut extreme = 0usize;
    let mut total = 0usize;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != n1 {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        total += 1;
        if (u_of(&subset) - mean).abs() >= observed - 1e-9 {
            extreme += 1;
        }
    }
    extreme as f64 / total as f64
}
