//! Exact double description: extreme rays and lineality of `{x : A x >= 0}`.

use num_traits::{Signed, Zero};

use crate::lattice::{clear_denominators, dot, int_rank, normalize_int, rat_inverse, to_rat_vec, Int, IntMatrix};

#[derive(Clone, Debug, Default)]
pub(crate) struct ConeDescription {
    /// Primitive integer extreme rays of the cone modulo its lineality space.
    pub rays: Vec<Vec<Int>>,
    /// Z-basis of the lineality space `ker A`.
    pub lineality: Vec<Vec<Int>>,
}

#[derive(Clone)]
struct Ray {
    y: Vec<Int>,
    zeros: Vec<u64>,
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn and_count(a: &[u64], b: &[u64]) -> (Vec<u64>, usize) {
    let v: Vec<u64> = a.iter().zip(b).map(|(x, y)| x & y).collect();
    let c = v.iter().map(|w| w.count_ones() as usize).sum();
    (v, c)
}

fn contains(sup: &[u64], sub: &[u64]) -> bool {
    sup.iter().zip(sub).all(|(a, b)| a & b == *b)
}

/// Extreme rays and lineality of `{x in R^dim : <row, x> >= 0 for every row}`.
pub(crate) fn cone_from_inequalities(rows: &[Vec<Int>], dim: usize) -> ConeDescription {
    let a = IntMatrix::from_rows(rows.to_vec(), dim).expect("inequality dimension");
    let lineality = a.integer_kernel();
    // parametrize the orthogonal complement of the lineality space
    let basis: Vec<Vec<Int>> = if lineality.is_empty() {
        (0..dim).map(|i| (0..dim).map(|j| Int::from((i == j) as i32)).collect()).collect()
    } else {
        IntMatrix::from_rows(lineality.clone(), dim).unwrap().integer_kernel()
    };
    let r = basis.len();
    if r == 0 {
        return ConeDescription { rays: Vec::new(), lineality };
    }
    let reduced: Vec<Vec<Int>> = rows.iter().map(|row| basis.iter().map(|b| dot(row, b)).collect()).collect();

    // r independent rows give the initial simplicial cone
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_rows: Vec<Vec<Int>> = Vec::new();
    for (i, row) in reduced.iter().enumerate() {
        chosen_rows.push(row.clone());
        if int_rank(&chosen_rows) == chosen_rows.len() {
            chosen.push(i);
            if chosen.len() == r {
                break;
            }
        } else {
            chosen_rows.pop();
        }
    }
    assert_eq!(chosen.len(), r, "reduced system must have full column rank");
    let inv = rat_inverse(&chosen_rows.iter().map(|r| to_rat_vec(r)).collect::<Vec<_>>()).expect("independent rows");
    let words = rows.len().div_ceil(64).max(1);
    let mut rays: Vec<Ray> = (0..r)
        .map(|k| {
            let col: Vec<_> = inv.iter().map(|row| row[k].clone()).collect();
            let y = clear_denominators(&col);
            let mut zeros = vec![0u64; words];
            for (j, &i) in chosen.iter().enumerate() {
                if j != k {
                    set_bit(&mut zeros, i);
                }
            }
            Ray { y, zeros }
        })
        .collect();

    for (i, row) in reduced.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let vals: Vec<Int> = rays.iter().map(|ray| dot(row, &ray.y)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (k, ray) in rays.iter().enumerate() {
            if !vals[k].is_negative() {
                let mut ray = ray.clone();
                if vals[k].is_zero() {
                    set_bit(&mut ray.zeros, i);
                }
                next.push(ray);
            }
        }
        for &p in &pos {
            for &n in &neg {
                let (common, count) = and_count(&rays[p].zeros, &rays[n].zeros);
                if count + 2 < r {
                    continue;
                }
                let adjacent =
                    rays.iter().enumerate().all(|(k, other)| k == p || k == n || !contains(&other.zeros, &common));
                if !adjacent {
                    continue;
                }
                let mut y: Vec<Int> =
                    rays[n].y.iter().zip(&rays[p].y).map(|(yn, yp)| &vals[p] * yn - &vals[n] * yp).collect();
                normalize_int(&mut y);
                let mut zeros = common;
                set_bit(&mut zeros, i);
                next.push(Ray { y, zeros });
            }
        }
        rays = next;
    }

    let rays = rays
        .into_iter()
        .map(|ray| {
            let mut x: Vec<Int> = (0..dim).map(|j| basis.iter().zip(&ray.y).map(|(b, c)| &b[j] * c).sum()).collect();
            normalize_int(&mut x);
            x
        })
        .collect();
    ConeDescription { rays, lineality }
}
