//! Oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

use antr_core::exactnum::Rat;
use antr_core::series::{Monomial, SparsePoly, VarId};

fn double_factorial(n: i64) -> Rat {
    // (-1)!! = 1
    let mut acc = 1i64;
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Rat::from_int(acc)
}

/// Intersection numbers `<tau_{d_1} ... tau_{d_n}>_g` from the string and dilaton
/// equations and the DVV recursion, seeded by `<tau_0^3>_0 = 1` and `<tau_1>_1 = 1/24`.
#[derive(Default)]
pub struct Intersections {
    memo: HashMap<(u32, Vec<u32>), Rat>,
}

impl Intersections {
    pub fn get(&mut self, g: u32, ds: &[u32]) -> Rat {
        let mut key = ds.to_vec();
        key.sort_unstable();
        if let Some(v) = self.memo.get(&(g, key.clone())) {
            return v.clone();
        }
        let v = self.compute(g, &key);
        self.memo.insert((g, key), v.clone());
        v
    }

    fn compute(&mut self, g: u32, ds: &[u32]) -> Rat {
        let n = ds.len() as i64;
        let total: i64 = ds.iter().map(|&d| d as i64).sum();
        if n == 0 || total != 3 * g as i64 - 3 + n {
            return Rat::zero();
        }
        if g == 0 && ds == [0, 0, 0] {
            return Rat::one();
        }
        if g == 1 && ds == [1] {
            return Rat::new(1, 24);
        }
        if ds[0] == 0 {
            let rest = &ds[1..];
            let mut acc = Rat::zero();
            for j in 0..rest.len() {
                if rest[j] > 0 {
                    let mut t = rest.to_vec();
                    t[j] -= 1;
                    acc = acc + self.get(g, &t);
                }
            }
            return acc;
        }
        if ds[0] == 1 {
            let rest = &ds[1..];
            return Rat::from_int(2 * g as i64 - 2 + rest.len() as i64) * self.get(g, rest);
        }
        // DVV on the last (largest) insertion tau_{k+1}.
        let k = ds[ds.len() - 1] as i64 - 1;
        let s = &ds[..ds.len() - 1];
        let mut acc = Rat::zero();
        for j in 0..s.len() {
            let dj = s[j] as i64;
            let mut t: Vec<u32> = s.to_vec();
            t[j] = (k + dj) as u32;
            let c = double_factorial(2 * k + 2 * dj + 1) * double_factorial(2 * dj - 1).inv().unwrap();
            acc = acc + c * self.get(g, &t);
        }
        let half = Rat::new(1, 2);
        for r in 0..k {
            let sidx = k - 1 - r;
            let c = double_factorial(2 * r + 1) * double_factorial(2 * sidx + 1);
            if g >= 1 {
                let mut t = s.to_vec();
                t.push(r as u32);
                t.push(sidx as u32);
                acc = acc + &half * &c * self.get(g - 1, &t);
            }
            for mask in 0u32..(1 << s.len()) {
                let mut left = vec![r as u32];
                let mut right = vec![sidx as u32];
                for (i, &d) in s.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        left.push(d);
                    } else {
                        right.push(d);
                    }
                }
                for g1 in 0..=g {
                    let a = self.get(g1, &left);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc + &half * &c * a * self.get(g - g1, &right);
                }
            }
        }
        acc * double_factorial(2 * k + 3).inv().unwrap()
    }

    /// `F_g(t) = sum <prod tau_{d_i}>_g prod t_{d_i} / |Aut|` over degrees `1..=max_degree`,
    /// with `t_d` written as `VarId(d, 1)`.
    pub fn potential(&mut self, g: u32, max_degree: u32) -> SparsePoly<Rat> {
        let mut out = SparsePoly::zero();
        for n in 1..=max_degree {
            let total = 3 * g as i64 - 3 + n as i64;
            if total < 0 {
                continue;
            }
            for ds in partitions_into(total as u32, n as usize) {
                let v = self.get(g, &ds);
                if v.is_zero() {
                    continue;
                }
                let mut exps: Vec<(VarId, u32)> = Vec::new();
                for &d in &ds {
                    match exps.last_mut() {
                        Some((var, e)) if var.m == d => *e += 1,
                        _ => exps.push((VarId::new(d, 1), 1)),
                    }
                }
                let aut = exps.iter().fold(Rat::one(), |acc, (_, e)| acc * factorial(*e));
                out.add_term(Monomial::from_pairs(&exps), v * aut.inv().unwrap());
            }
        }
        out
    }
}

fn factorial(n: u32) -> Rat {
    (1..=n as i64).fold(Rat::one(), |acc, k| acc * Rat::from_int(k))
}

/// Weakly increasing sequences of `len` non-negative integers summing to `total`.
pub fn partitions_into(total: u32, len: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, slots: usize, lo: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for d in lo..=left {
            if d * slots as u32 > left {
                break;
            }
            cur.push(d);
            rec(left - d, slots - 1, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, len, 0, &mut Vec::new(), &mut out);
    out
}

/// Adds `delta` to the coefficient of the first monomial of `f`.
pub fn perturb_first(f: &SparsePoly<Rat>, delta: Rat) -> SparsePoly<Rat> {
    let (m, _) = f.terms().next().expect("non-empty polynomial");
    let mut out = f.clone();
    out.add_term(m.clone(), delta);
    out
}
