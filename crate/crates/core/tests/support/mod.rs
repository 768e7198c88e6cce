//! A deliberately naive replica calculus used as an independent oracle:
//! integer coefficients, isomorphism by trying every vertex bijection,
//! unit diagonal only.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub type Key = (Vec<(u32, u32)>, Vec<u32>);
pub type Naive = BTreeMap<Key, i64>;

pub fn vertices(k: &Key) -> Vec<u32> {
    let mut v: BTreeSet<u32> = BTreeSet::new();
    for &(a, b) in &k.0 {
        v.insert(a);
        v.insert(b);
    }
    v.extend(k.1.iter().copied());
    v.into_iter().collect()
}

fn apply(k: &Key, map: &BTreeMap<u32, u32>) -> Key {
    let mut e: Vec<(u32, u32)> = k
        .0
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (map[&a], map[&b]);
            (x.min(y), x.max(y))
        })
        .collect();
    e.sort_unstable();
    let mut l: Vec<u32> = k.1.iter().map(|v| map[v]).collect();
    l.sort_unstable();
    (e, l)
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n as u32);
            out.push(q);
        }
    }
    out
}

/// Minimum relabeling onto `1..=n` over all bijections.
pub fn brute_canonical(k: &Key) -> Key {
    let v = vertices(k);
    let mut best: Option<Key> = None;
    for p in permutations(v.len()) {
        let map: BTreeMap<u32, u32> = v.iter().copied().zip(p).collect();
        let c = apply(k, &map);
        if best.as_ref().is_none_or(|b| c < *b) {
            best = Some(c);
        }
    }
    best.unwrap_or_default()
}

pub fn insert(p: &mut Naive, k: Key, c: i64) {
    let key = brute_canonical(&k);
    *p.entry(key).or_insert(0) += c;
    p.retain(|_, c| *c != 0);
}

pub fn monomial(edges: &[(u32, u32)]) -> Naive {
    let mut p = Naive::new();
    insert(&mut p, (edges.to_vec(), vec![]), 1);
    p
}

pub fn delta(p: &Naive) -> Naive {
    let mut out = Naive::new();
    for (k, &c) in p {
        let v = vertices(k);
        let fresh = v.iter().max().copied().unwrap_or(0) + 1;
        for &x in &v {
            let mut t = k.clone();
            t.1.push(x);
            insert(&mut out, t, c);
        }
        let mut t = k.clone();
        t.1.push(fresh);
        insert(&mut out, t, -c * v.len() as i64);
    }
    out
}

fn matchings(slots: &[u32], acc: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
    if slots.is_empty() {
        out.push(acc.clone());
        return;
    }
    for j in 1..slots.len() {
        let mut rest = slots[1..].to_vec();
        let b = rest.remove(j - 1);
        acc.push((slots[0], b));
        matchings(&rest, acc, out);
        acc.pop();
    }
}

pub fn wick(p: &Naive) -> Naive {
    let mut out = Naive::new();
    for (k, &c) in p {
        let mut all = Vec::new();
        matchings(&k.1, &mut Vec::new(), &mut all);
        for m in all {
            let mut edges = k.0.clone();
            edges.extend(m.into_iter().filter(|(a, b)| a != b));
            insert(&mut out, (edges, vec![]), c);
        }
    }
    out
}

pub fn big_delta(p: &Naive) -> Naive {
    wick(&delta(&delta(p)))
}

pub fn scale(p: &Naive, f: i64) -> Naive {
    p.iter().map(|(k, c)| (k.clone(), c * f)).collect()
}

/// Renders a key in the engine's text syntax.
pub fn render(k: &Key) -> String {
    if k.0.is_empty() && k.1.is_empty() {
        return "1".into();
    }
    let mut s = String::new();
    for (a, b) in &k.0 {
        s += &format!("({a},{b})");
    }
    for l in &k.1 {
        s += &format!("({l})");
    }
    s
}

/// Every loop-free multigraph with exactly `e` edges and no isolated
/// vertex, up to isomorphism.
pub fn brute_classes(e: usize) -> BTreeSet<Key> {
    let mut classes = BTreeSet::new();
    for k in 2..=(2 * e as u32) {
        let pairs: Vec<(u32, u32)> = (1..=k)
            .flat_map(|a| ((a + 1)..=k).map(move |b| (a, b)))
            .collect();
        let mut idx = vec![0usize; e];
        loop {
            let edges: Vec<(u32, u32)> = idx.iter().map(|&i| pairs[i]).collect();
            let covered: BTreeSet<u32> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
            if covered.len() == k as usize {
                classes.insert(brute_canonical(&(edges, vec![])));
            }
            // next non-decreasing index tuple
            let mut i = e;
            while i > 0 && idx[i - 1] + 1 == pairs.len() {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            let v = idx[i - 1];
            idx[i..].iter_mut().for_each(|x| *x = v);
        }
    }
    classes
}
