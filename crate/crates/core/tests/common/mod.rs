//! Independent reference computations shared by the integration tests.
//! Nothing here calls the oracle module or the rank audits.

#![allow(dead_code)]

use std::collections::HashMap;

use lrss::galois::{Elem, Field};
use lrss::secret::{EncodingInput, SecretSharingScheme};
use num_rational::Ratio;

/// Every (secret, randomness) pair in input order.
pub fn all_inputs(scheme: &SecretSharingScheme) -> Vec<EncodingInput> {
    let q = scheme.field.order();
    let (k, l) = (scheme.secret_len, scheme.randomness_len);
    let total = q.pow((k + l) as u32);
    (0..total)
        .map(|mut idx| {
            let mut digits = Vec::with_capacity(k + l);
            for _ in 0..k + l {
                digits.push(Elem(idx % q));
                idx /= q;
            }
            EncodingInput {
                secret: digits[..k].to_vec(),
                randomness: digits[k..].to_vec(),
            }
        })
        .collect()
}

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
pub enum Reveal {
    All,
    Nothing,
    Some,
}

/// What the shares of `set` reveal, from direct encoding of every input.
pub fn reveal(scheme: &SecretSharingScheme, set: &[usize]) -> Reveal {
    let mut table: HashMap<Vec<Vec<Elem>>, HashMap<Vec<Elem>, u64>> = HashMap::new();
    let inputs = all_inputs(scheme);
    let secrets: usize = scheme.field.order().pow(scheme.secret_len as u32) as usize;
    for input in &inputs {
        let shares = scheme.encode(input).unwrap();
        let obs: Vec<Vec<Elem>> = set.iter().map(|&i| shares.get(i).unwrap().clone()).collect();
        *table
            .entry(obs)
            .or_default()
            .entry(input.secret.clone())
            .or_default() += 1;
    }
    if table.values().all(|c| c.len() == 1) {
        Reveal::All
    } else if table.values().all(|c| {
        c.len() == secrets && c.values().all(|&x| x == *c.values().next().unwrap())
    }) {
        Reveal::Nothing
    } else {
        Reveal::Some
    }
}

/// Whether share i is a function of the shares of `from`.
pub fn functional(scheme: &SecretSharingScheme, i: usize, from: &[usize]) -> bool {
    let mut seen: HashMap<Vec<Vec<Elem>>, Vec<Elem>> = HashMap::new();
    for input in all_inputs(scheme) {
        let shares = scheme.encode(&input).unwrap();
        let key: Vec<Vec<Elem>> = from.iter().map(|&j| shares.get(j).unwrap().clone()).collect();
        let v = shares.get(i).unwrap().clone();
        if let Some(prev) = seen.insert(key, v.clone()) {
            if prev != v {
                return false;
            }
        }
    }
    true
}

/// Entropy of the shares of `set` (with the secret when `with_secret`) in
/// base q = field order, by counting.
pub fn entropy(scheme: &SecretSharingScheme, set: &[usize], with_secret: bool) -> f64 {
    let mut counts: HashMap<(Vec<Vec<Elem>>, Vec<Elem>), u64> = HashMap::new();
    let inputs = all_inputs(scheme);
    for input in &inputs {
        let shares = scheme.encode(input).unwrap();
        let obs: Vec<Vec<Elem>> = set.iter().map(|&i| shares.get(i).unwrap().clone()).collect();
        let s = if with_secret { input.secret.clone() } else { Vec::new() };
        *counts.entry((obs, s)).or_default() += 1;
    }
    let total = inputs.len() as f64;
    let q = scheme.field.order() as f64;
    -counts
        .values()
        .map(|&c| {
            let p = c as f64 / total;
            p * p.log(q)
        })
        .sum::<f64>()
}

/// Rank over GF(p) by schoolbook elimination on residues.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p * p - f * m[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Minimum Hamming weight over all nonzero messages, prime fields only.
pub fn min_weight_mod_p(g: &[Vec<u64>], p: u64) -> usize {
    let dim = g[0].len();
    let mut best = usize::MAX;
    for mut idx in 1..p.pow(dim as u32) {
        let mut msg = vec![0u64; dim];
        for x in msg.iter_mut() {
            *x = idx % p;
            idx /= p;
        }
        let w = g
            .iter()
            .filter(|row| row.iter().zip(&msg).map(|(a, b)| a * b % p).sum::<u64>() % p != 0)
            .count();
        best = best.min(w);
    }
    best
}

/// Solves a square rational system; None if singular.
pub fn solve_rational(a: &[Vec<Ratio<i64>>], b: &[Ratio<i64>]) -> Option<Vec<Ratio<i64>>> {
    let n = a.len();
    let mut m: Vec<Vec<Ratio<i64>>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| m[i][c] != Ratio::from_integer(0))?;
        m.swap(c, piv);
        let p = m[c][c];
        for x in m[c].iter_mut() {
            *x /= p;
        }
        for i in 0..n {
            if i != c {
                let f = m[i][c];
                for j in 0..=n {
                    let d = f * m[c][j];
                    m[i][j] -= d;
                }
            }
        }
    }
    Some(m.iter().map(|r| r[n]).collect())
}

/// max c.x over {A x <= b, x >= 0} by enumerating basic solutions.
pub fn lp_by_vertices(c: &[i64], a: &[Vec<i64>], b: &[i64]) -> Ratio<i64> {
    let nv = c.len();
    let mut rows: Vec<Vec<Ratio<i64>>> = a
        .iter()
        .map(|r| r.iter().map(|&x| Ratio::from_integer(x)).collect())
        .collect();
    let mut rhs: Vec<Ratio<i64>> = b.iter().map(|&x| Ratio::from_integer(x)).collect();
    for j in 0..nv {
        let mut unit = vec![Ratio::from_integer(0); nv];
        unit[j] = Ratio::from_integer(-1);
        rows.push(unit);
        rhs.push(Ratio::from_integer(0));
    }
    let mut best: Option<Ratio<i64>> = None;
    for tight in lrss::subsets::combinations(rows.len(), nv) {
        let sys: Vec<Vec<Ratio<i64>>> = tight.iter().map(|&i| rows[i].clone()).collect();
        let r: Vec<Ratio<i64>> = tight.iter().map(|&i| rhs[i]).collect();
        let Some(x) = solve_rational(&sys, &r) else {
            continue;
        };
        let feasible = rows.iter().zip(&rhs).all(|(row, &bi)| {
            row.iter().zip(&x).map(|(a, b)| a * b).sum::<Ratio<i64>>() <= bi
        });
        if feasible {
            let v: Ratio<i64> = c.iter().zip(&x).map(|(&ci, xi)| xi * ci).sum();
            if best.is_none_or(|b| v > b) {
                best = Some(v);
            }
        }
    }
    best.expect("bounded feasible LP")
}

/// GF(p^N) element count sanity helper.
pub fn field_elements(f: &Field) -> Vec<Elem> {
    f.elements().collect()
}
