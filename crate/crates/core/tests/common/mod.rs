#![allow(dead_code)]

use std::collections::HashMap;

use f2coh::algebra::AlgebraPresentation;

/// A graded polynomial quotient given by exponent vectors, for brute-force
/// Hilbert series: `dim R_d = #monomials_d - rank(I_d)`, with `I_d` spanned
/// by every monomial multiple of every relation.
pub struct Oracle {
    degs: Vec<u32>,
    rels: Vec<Vec<Vec<u32>>>,
}

impl Oracle {
    pub fn new(degs: &[u32], rels: &[&[&[u32]]]) -> Self {
        Oracle {
            degs: degs.to_vec(),
            rels: rels
                .iter()
                .map(|r| r.iter().map(|m| m.to_vec()).collect())
                .collect(),
        }
    }

    /// Reads generator degrees and relations off a presentation.
    pub fn from_presentation(p: &AlgebraPresentation) -> Self {
        Oracle {
            degs: p.weights(),
            rels: p
                .relations()
                .iter()
                .filter(|r| !r.is_zero())
                .map(|r| {
                    r.terms()
                        .map(|m| m.exponents().iter().map(|e| u32::from(*e)).collect())
                        .collect()
                })
                .collect(),
        }
    }

    fn deg(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.degs).map(|(e, d)| e * d).sum()
    }

    fn monomials(&self, d: u32) -> Vec<Vec<u32>> {
        fn go(degs: &[u32], d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if degs.is_empty() {
                if d == 0 {
                    out.push(prefix.clone());
                }
                return;
            }
            for e in 0..=d / degs[0] {
                prefix.push(e);
                go(&degs[1..], d - e * degs[0], prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(&self.degs, d, &mut Vec::new(), &mut out);
        out
    }

    pub fn series(&self, bound: u32) -> Vec<usize> {
        (0..=bound)
            .map(|d| {
                let mons = self.monomials(d);
                let index: HashMap<&Vec<u32>, usize> =
                    mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let mut rows = Vec::new();
                for rel in &self.rels {
                    let rd = self.deg(&rel[0]);
                    if rd > d {
                        continue;
                    }
                    for m in self.monomials(d - rd) {
                        let mut row = vec![false; mons.len()];
                        for t in rel {
                            let prod: Vec<u32> = m.iter().zip(t).map(|(a, b)| a + b).collect();
                            row[index[&prod]] ^= true;
                        }
                        rows.push(row);
                    }
                }
                mons.len() - rank(rows)
            })
            .collect()
    }
}

pub fn rank(mut rows: Vec<Vec<bool>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|i| rows[*i][c]) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        r += 1;
    }
    r
}
