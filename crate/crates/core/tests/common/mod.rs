//! Brute-force reference implementations, sharing nothing with the search
//! engine beyond the term type.

#![allow(dead_code)]

use std::collections::BTreeSet;

use zlab::{Identity, Term};

pub const IMPLICATION: [&str; 2] = ["(x -> y) -> z = ((z' -> x) -> (y -> z)')'", "0'' = 0"];
pub const SYMMETRIC_EXTRA: [&str; 2] = ["x'' = x", "x ^ y = y ^ x"];

pub fn axioms(symmetric: bool) -> Vec<Identity> {
    let mut texts: Vec<&str> = IMPLICATION.to_vec();
    if symmetric {
        texts.extend(SYMMETRIC_EXTRA);
    }
    texts.iter().map(|t| Identity::parse(*t, t).unwrap()).collect()
}

pub fn eval(t: &Term, table: &[usize], n: usize, env: &[usize]) -> usize {
    match t {
        Term::Zero => 0,
        Term::Var(v) => env[v.index()],
        Term::Arrow(a, b) => table[eval(a, table, n, env) * n + eval(b, table, n, env)],
    }
}

/// Every assignment of all alphabet slots used by `id`.
pub fn holds(id: &Identity, table: &[usize], n: usize) -> bool {
    let slots = id.variables().iter().map(|v| v.index() + 1).max().unwrap_or(0);
    let mut env = vec![0usize; slots];
    loop {
        if eval(&id.lhs, table, n, &env) != eval(&id.rhs, table, n, &env) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == slots {
                return true;
            }
            env[i] += 1;
            if env[i] < n {
                break;
            }
            env[i] = 0;
            i += 1;
        }
    }
}

/// All n×n tables (flat, row-major) satisfying every identity.
pub fn naive_models(n: usize, ids: &[Identity]) -> Vec<Vec<usize>> {
    let cells = n * n;
    let total = n.pow(cells as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let table: Vec<usize> = (0..cells)
            .map(|_| {
                let d = c % n;
                c /= n;
                d
            })
            .collect();
        if ids.iter().all(|id| holds(id, &table, n)) {
            out.push(table);
        }
    }
    out.sort();
    out
}

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let x = left.remove(i);
            prefix.push(x);
            go(prefix, left, out);
            prefix.pop();
            left.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut vec![0], &mut (1..n).collect(), &mut out);
    out
}

/// Lexicographically least relabelled table (element 0 stays fixed).
pub fn naive_canonical(table: &[usize], n: usize) -> Vec<usize> {
    permutations_fixing_zero(n)
        .iter()
        .map(|p| {
            let mut t = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[p[a] * n + p[b]] = p[table[a * n + b]];
                }
            }
            t
        })
        .min()
        .unwrap()
}

pub fn naive_classes(n: usize, tables: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    tables.iter().map(|t| naive_canonical(t, n)).collect()
}

pub fn flat(rows: &[Vec<usize>]) -> Vec<usize> {
    rows.iter().flatten().copied().collect()
}
