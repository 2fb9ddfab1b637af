//! Writes a simply-laced simple Lie algebra (Chevalley basis, Frenkel–Kac
//! signs) in the JSON algebra format.
//!
//!     cargo run --release --example simply_laced -- e8 data/e8.json

use std::collections::{BTreeMap, HashMap};

use cgva_core::lie::{FormSpec, LieAlgebra};
use cgva_core::linalg::SVec;
use cgva_core::Field;

type Root = Vec<i64>;

/// Edges of the Dynkin diagram, 0-based, Bourbaki numbering.
fn diagram(name: &str) -> Option<(usize, Vec<(usize, usize)>)> {
    let chain = |n: usize| (0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>();
    let e = |n: usize| {
        let mut edges = vec![(0, 2), (1, 3)];
        edges.extend((2..n - 1).map(|i| (i, i + 1)));
        (n, edges)
    };
    let (kind, rank) = name.split_at(1);
    let r: usize = rank.parse().ok()?;
    match kind {
        "a" if r >= 1 => Some((r, chain(r))),
        "d" if r >= 4 => {
            let mut edges = chain(r - 1);
            edges.push((r - 3, r - 1));
            Some((r, edges))
        }
        "e" if (6..=8).contains(&r) => Some(e(r)),
        _ => None,
    }
}

fn cartan(r: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0; r]; r];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j) in edges {
        a[i][j] = -1;
        a[j][i] = -1;
    }
    a
}

fn pairing(a: &[Vec<i64>], x: &Root, y: &Root) -> i64 {
    let mut s = 0;
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += x[i] * a[i][j] * y[j];
        }
    }
    s
}

fn positive_roots(a: &[Vec<i64>]) -> Vec<Root> {
    let r = a.len();
    let simple: Vec<Root> = (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut roots = simple.clone();
    let mut frontier = simple.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for b in &frontier {
            for (i, s) in simple.iter().enumerate() {
                // For simply-laced roots, b + α_i is a root iff (b, α_i) = -1.
                if pairing(a, b, s) == -1 {
                    let mut c = b.clone();
                    c[i] += 1;
                    if !roots.contains(&c) && !next.contains(&c) {
                        next.push(c);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        frontier = next;
    }
    roots.sort_by_key(|x| (x.iter().sum::<i64>(), x.clone()));
    roots
}

/// `ε(α, β) = Π ε(α_i, α_j)^{a_i b_j}` with `ε(α_i, α_j) = -1` for `i = j`
/// or `i < j` joined by an edge.
fn epsilon(a: &[Vec<i64>], x: &Root, y: &Root) -> i64 {
    let mut e = 0;
    for i in 0..x.len() {
        for j in 0..y.len() {
            if i == j || (i < j && a[i][j] == -1) {
                e += x[i] * y[j];
            }
        }
    }
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let name = args.get(1).map(String::as_str).unwrap_or("e8");
    let out = args.get(2).cloned().unwrap_or_else(|| format!("data/{name}.json"));
    let (r, edges) = diagram(name).ok_or_else(|| format!("unsupported type {name}"))?;
    // The file name doubles as the key for the dual Coxeter number.
    let algebra = match &name[..1] {
        "a" => format!("sl{}", r + 1),
        "d" => format!("so{}", 2 * r),
        _ => name.to_string(),
    };
    let a = cartan(r, &edges);
    let pos = positive_roots(&a);
    let neg: Vec<Root> = pos.iter().map(|x| x.iter().map(|c| -c).collect()).collect();

    // Basis: positive roots, Cartan, negative roots.
    let mut labels = Vec::new();
    let mut index: HashMap<Root, usize> = HashMap::new();
    let digits = |x: &Root| x.iter().map(|c| c.abs().to_string()).collect::<String>();
    for x in &pos {
        index.insert(x.clone(), labels.len());
        labels.push(format!("E{}", digits(x)));
    }
    let h0 = labels.len();
    for i in 0..r {
        labels.push(format!("H{}", i + 1));
    }
    for x in &neg {
        index.insert(x.clone(), labels.len());
        labels.push(format!("F{}", digits(x)));
    }
    let d = labels.len();
    let roots: Vec<Root> = pos.iter().chain(neg.iter()).cloned().collect();
    let root_of = |k: usize| -> Option<&Root> {
        if k < h0 {
            Some(&roots[k])
        } else if k < h0 + r {
            None
        } else {
            Some(&roots[k - r])
        }
    };

    let field = Field::Rationals;
    let mut structure = BTreeMap::new();
    for i in 0..d {
        for j in i + 1..d {
            let v = match (root_of(i), root_of(j)) {
                (None, None) => SVec::new(),
                (None, Some(y)) => {
                    let s = (0..r).map(|t| a[i - h0][t] * y[t]).sum::<i64>();
                    SVec::from_pairs(vec![(j, field.int(s))])
                }
                (Some(x), None) => {
                    let s = (0..r).map(|t| a[j - h0][t] * x[t]).sum::<i64>();
                    SVec::from_pairs(vec![(i, field.int(-s))])
                }
                (Some(x), Some(y)) => {
                    let sum: Root = x.iter().zip(y).map(|(p, q)| p + q).collect();
                    if sum.iter().all(|&c| c == 0) {
                        // [E_α, E_{-α}] = -α in the basis of simple coroots.
                        SVec::from_pairs(
                            (0..r).map(|t| (h0 + t, field.int(-x[t]))).collect(),
                        )
                    } else if let Some(&k) = index.get(&sum) {
                        SVec::from_pairs(vec![(k, field.int(epsilon(&a, x, y)))])
                    } else {
                        SVec::new()
                    }
                }
            };
            if !v.is_zero() {
                structure.insert((i, j), v);
            }
        }
    }
    let g = LieAlgebra::from_structure(algebra.as_str(), field, labels, structure, FormSpec::DualCoxeter)?;
    let report = g.validate();
    if let Some(msg) = report.first_failure() {
        return Err(format!("generated algebra fails validation: {msg}").into());
    }
    std::fs::write(&out, g.to_json()? + "\n")?;
    eprintln!("wrote {algebra} (dim {d}) to {out}");
    Ok(())
}
