//! Slow, independent reference computations.

use dehnfill_core::finite::{FiniteGroup, FiniteGroupTable};
use dehnfill_core::{Presentation, Word};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

fn eval_table(g: &FiniteGroupTable, w: &Word, images: &[usize]) -> usize {
    w.letters().iter().fold(g.identity(), |acc, l| {
        let x = images[l.generator()];
        g.mul(acc, if l.is_inverse() { g.inv(x) } else { x })
    })
}

/// `|Hom(p, g)|` by trying every assignment of images.
pub fn brute_hom_count(p: &Presentation, g: &FiniteGroupTable) -> u64 {
    let n = p.num_generators();
    let mut images = vec![0usize; n];
    let mut count = 0;
    loop {
        if p.relators().iter().all(|r| eval_table(g, r, &images) == g.identity()) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            images[k] += 1;
            if images[k] < g.order() {
                break;
            }
            images[k] = 0;
            k += 1;
        }
    }
}

pub type Perm = Vec<usize>;

/// All permutations of `0..n`.
pub fn all_perms(n: usize) -> Vec<Perm> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Apply `a` then `b`.
pub fn compose(a: &Perm, b: &Perm) -> Perm {
    a.iter().map(|&x| b[x]).collect()
}

pub fn invert(a: &Perm) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x] = i;
    }
    out
}

pub fn eval_perm(w: &Word, images: &[Perm], n: usize) -> Perm {
    w.letters().iter().fold((0..n).collect(), |acc, l| {
        let x = &images[l.generator()];
        compose(&acc, &if l.is_inverse() { invert(x) } else { x.clone() })
    })
}

/// Every homomorphism `p -> Sym_n`, by exhaustive image assignment.
pub fn brute_sym_homs(p: &Presentation, n: usize) -> Vec<Vec<Perm>> {
    let perms = all_perms(n);
    let gens = p.num_generators();
    let id: Perm = (0..n).collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; gens];
    loop {
        let images: Vec<Perm> = pick.iter().map(|&i| perms[i].clone()).collect();
        if p.relators().iter().all(|r| eval_perm(r, &images, n) == id) {
            out.push(images);
        }
        let mut k = 0;
        loop {
            if k == gens {
                return out;
            }
            pick[k] += 1;
            if pick[k] < perms.len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// Index of the kernel of the product of all homs `<a | rels> -> Sym_n`:
/// the order of `a` under the product map.
pub fn cyclic_core_index(p: &Presentation, n: usize) -> u64 {
    assert_eq!(p.num_generators(), 1);
    let homs = brute_sym_homs(p, n);
    let id: Perm = (0..n).collect();
    let mut powers: Vec<Perm> = homs.iter().map(|_| id.clone()).collect();
    for m in 1.. {
        for (acc, h) in powers.iter_mut().zip(&homs) {
            *acc = compose(acc, &h[0]);
        }
        if powers.iter().all(|x| *x == id) {
            return m;
        }
    }
    unreachable!()
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][c] * det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// k-by-k minors and the k-th factor is `d_k / d_(k-1)`.
pub fn snf_by_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=rows.min(cols) {
        let mut d = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| BigInt::from(m[r][c])).collect())
                    .collect();
                d = d.gcd(&det(&sub));
            }
        }
        if d.is_zero() {
            out.push(BigInt::zero());
            prev = BigInt::zero();
        } else {
            out.push((&d / &prev).abs());
            prev = d;
        }
    }
    out
}
