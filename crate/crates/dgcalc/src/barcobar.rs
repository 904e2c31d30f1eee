//! Bar cocategory `B∞(A) = T^c(SĀ)`, cobar DG category `Ω(B)` and the
//! universal DG category `U(A) = Ω(B∞(A))`.
//!
//! For an ordered, finite, reduced A∞ category the bar words are tensor
//! words of suspended reduced morphisms along strictly ascending object
//! chains, so everything here is finite by construction: word length is
//! bounded by the number of objects minus one, and the cobar category is the
//! relation-free path algebra on one generator per bar word.
//!
//! Sign conventions (suspension `s`, desuspension `ω = s⁻¹`):
//! `b_k = −s∘m_k∘ω^{⊗k}` with the Koszul signs of `ω^{⊗k}`, the bar
//! differential is `Σ id^{⊗r}⊗b_k⊗id^{⊗t}` with the Koszul sign of moving
//! `b_k` past the suspended letters above it, and the cobar differential
//! desuspends `d + Δ` with a global `−1` on the `d`-part and `(−1)^{|x|}` on
//! a split `x⊗y`. All four choices are pinned mechanically: `d² = 0`,
//! co-Leibniz, `check_dg_axioms` on `Ω`, and the dimension-level
//! quasi-isomorphism `H•U(A) ≅ H•A` are asserted in the tests.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ainfty::{AiError, AInfinityStructure};
use crate::cochain::GradedVS;
use crate::dgcore::{path_algebra, DGCategory, DGQuiver, DgError, PathSum};
use crate::exactla::Matrix;
use crate::{QComplex, Rat};

#[derive(Debug, Error)]
pub enum BarError {
    #[error("bar construction requires an ordered structure")]
    NotOrdered,
    #[error(transparent)]
    Ai(#[from] AiError),
    #[error(transparent)]
    Dg(#[from] DgError),
}

/// A tensor word `(α_n, …, α_1)` of reduced morphisms along an ascending
/// object chain; `letters[k]` is `(degree in Ā, basis index)` of `α_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BarWord {
    pub chain: Vec<usize>,
    pub letters: Vec<(i64, usize)>,
}

impl BarWord {
    /// Degree in the bar cocategory: suspended degrees summed.
    pub fn degree(&self) -> i64 {
        self.letters.iter().map(|&(d, _)| d - 1).sum()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// The bar DG cocategory of an augmented ordered A∞ category.
pub struct BarCocategory {
    pub objects: Vec<String>,
    /// all non-counit words per pair, in a fixed enumeration order
    pub words: BTreeMap<(usize, usize), Vec<BarWord>>,
    /// per pair: the word complex with the bar differential
    pub complexes: BTreeMap<(usize, usize), QComplex>,
    /// differential as sparse word-to-word coefficients
    diff: BTreeMap<(usize, usize), Vec<Vec<(Rat, usize)>>>,
}

fn sign(e: i64) -> Rat {
    if e.rem_euclid(2) == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// Raw bar differential of one word: list of `(coefficient, word)`.
fn bar_diff_word(a: &AInfinityStructure, w: &BarWord) -> Vec<(Rat, BarWord)> {
    let n = w.len();
    let mut out = Vec::new();
    for k in 1..=n {
        for l in 1..=(n - k + 1) {
            // b_k on letters l..l+k−1 (1-based)
            let block = &w.letters[l - 1..l + k - 1];
            let chain_block = &w.chain[l - 1..l + k];
            let degs: Vec<i64> = block.iter().map(|&(d, _)| d).collect();
            let out_deg = AInfinityStructure::out_degree(&degs);
            let rows = a.dim(chain_block[0], chain_block[k], out_deg);
            if rows == 0 {
                continue;
            }
            let args: Vec<Vec<Rat>> = block
                .iter()
                .enumerate()
                .map(|(p, &(d, b))| {
                    let dim = a.dim(chain_block[p], chain_block[p + 1], d);
                    let mut v = vec![Rat::zero(); dim];
                    v[b] = Rat::one();
                    v
                })
                .collect();
            let refs: Vec<&[Rat]> = args.iter().map(|v| v.as_slice()).collect();
            let val = a.apply(chain_block, &degs, &refs);
            if val.iter().all(|x| x.is_zero()) {
                continue;
            }
            // Koszul sign of moving b_k past the letters above the block …
            let above: i64 = w.letters[l + k - 1..].iter().map(|&(d, _)| d - 1).sum();
            // … times the b_k sign: −1 and the ω^{⊗k} Koszul sign
            let omega: i64 = block
                .iter()
                .enumerate()
                .map(|(p, &(d, _))| p as i64 * (d - 1))
                .sum();
            let s = -sign(above + omega);
            let mut chain = w.chain[..l].to_vec();
            chain.extend_from_slice(&w.chain[l + k - 1..]);
            for (b, c) in val.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut letters = w.letters[..l - 1].to_vec();
                letters.push((out_deg, b));
                letters.extend_from_slice(&w.letters[l + k - 1..]);
                out.push((
                    s.clone() * c.clone(),
                    BarWord {
                        chain: chain.clone(),
                        letters,
                    },
                ));
            }
        }
    }
    out
}

/// Builds `B∞(A)` for an ordered, finite, augmented A∞ category.
pub fn bar(a: &AInfinityStructure) -> Result<BarCocategory, BarError> {
    if !a.ordered {
        return Err(BarError::NotOrdered);
    }
    a.augment()?;
    let nobj = a.objects.len();
    // enumerate words along strictly ascending chains
    let mut words: BTreeMap<(usize, usize), Vec<BarWord>> = BTreeMap::new();
    for i in 0..nobj {
        for j in 0..nobj {
            words.insert((i, j), Vec::new());
        }
    }
    // grow by appending one ascending letter on the left (target side)
    let mut frontier: Vec<BarWord> = (0..nobj)
        .map(|i| BarWord {
            chain: vec![i],
            letters: vec![],
        })
        .collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in frontier {
            let last = *w.chain.last().unwrap();
            for t in last + 1..nobj {
                for d in a.hom[last][t].degrees().collect::<Vec<_>>() {
                    for b in 0..a.dim(last, t, d) {
                        let mut w2 = w.clone();
                        w2.chain.push(t);
                        w2.letters.push((d, b));
                        next.push(w2);
                    }
                }
            }
        }
        for w in &next {
            words
                .get_mut(&(w.chain[0], *w.chain.last().unwrap()))
                .unwrap()
                .push(w.clone());
        }
        frontier = next;
    }
    // word complexes and sparse differential
    let mut complexes = BTreeMap::new();
    let mut diff = BTreeMap::new();
    for (&(i, j), ws) in &words {
        let index: BTreeMap<&BarWord, usize> =
            ws.iter().enumerate().map(|(p, w)| (w, p)).collect();
        let mut rows = Vec::new();
        for w in ws {
            let mut entry = Vec::new();
            for (c, v) in bar_diff_word(a, w) {
                let p = *index.get(&v).expect("bar differential leaves the word set");
                entry.push((c, p));
            }
            rows.push(entry);
        }
        // complex: group by degree
        let mut by_deg: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (p, w) in ws.iter().enumerate() {
            by_deg.entry(w.degree()).or_default().push(p);
        }
        let mut space = GradedVS::new();
        let mut pos: BTreeMap<usize, (i64, usize)> = BTreeMap::new();
        for (&d, list) in &by_deg {
            let labels = list
                .iter()
                .enumerate()
                .map(|(q, &p)| {
                    pos.insert(p, (d, q));
                    format!("w{p}")
                })
                .collect();
            space.set_degree(d, labels);
        }
        let mut cx = QComplex::new(space);
        for (&d, list) in &by_deg {
            let tgt = by_deg.get(&(d + 1)).map_or(0, |l| l.len());
            let mut m = Matrix::zero(tgt, list.len());
            for (col, &p) in list.iter().enumerate() {
                for (c, q) in &rows[p] {
                    let (dd, r) = pos[q];
                    assert_eq!(dd, d + 1, "bar differential must raise degree by 1");
                    m.set(r, col, m.get(r, col) + c.clone());
                }
            }
            cx.set_diff(d, m).expect("shapes agree");
        }
        complexes.insert((i, j), cx);
        diff.insert((i, j), rows);
    }
    Ok(BarCocategory {
        objects: a.objects.clone(),
        words,
        complexes,
        diff,
    })
}

impl BarCocategory {
    fn word_index(&self, w: &BarWord) -> usize {
        let key = (w.chain[0], *w.chain.last().unwrap());
        self.words[&key].iter().position(|x| x == w).unwrap()
    }

    /// `d² = 0` on every word.
    pub fn check_d_squared(&self) -> Vec<String> {
        let mut report = Vec::new();
        for (&(i, j), cx) in &self.complexes {
            if let Err(e) = cx.check_complex() {
                report.push(format!("bar({i},{j}): {e}"));
            }
        }
        report
    }

    /// Cocomposition splits of a word: `(upper, lower)` pairs, excluding the
    /// counit terms `1⊗w` and `w⊗1`.
    pub fn splits(&self, w: &BarWord) -> Vec<(BarWord, BarWord)> {
        let n = w.len();
        (1..n)
            .map(|l| {
                (
                    BarWord {
                        chain: w.chain[l..].to_vec(),
                        letters: w.letters[l..].to_vec(),
                    },
                    BarWord {
                        chain: w.chain[..l + 1].to_vec(),
                        letters: w.letters[..l].to_vec(),
                    },
                )
            })
            .collect()
    }

    /// Co-Leibniz: `Δ∘d = (d⊗id + id⊗d)∘Δ` on every word, with the Koszul
    /// sign on `id⊗d`. Counit terms are tracked explicitly.
    pub fn check_coleibniz(&self) -> Vec<String> {
        // tensor terms keyed by (left word or counit, right word or counit)
        type Key = (Option<(usize, usize, usize)>, Option<(usize, usize, usize)>);
        let id_of = |w: &BarWord| {
            (
                w.chain[0],
                *w.chain.last().unwrap(),
                self.word_index(w),
            )
        };
        let mut report = Vec::new();
        for ws in self.words.values() {
            for w in ws {
                let key = (w.chain[0], *w.chain.last().unwrap());
                let dw = &self.diff[&key][self.word_index(w)];
                let mut lhs: BTreeMap<Key, Rat> = BTreeMap::new();
                let add = |map: &mut BTreeMap<Key, Rat>, k: Key, c: Rat| {
                    let e = map.entry(k).or_insert_with(Rat::zero);
                    *e = e.clone() + c;
                };
                for (c, q) in dw {
                    let v = &self.words[&key][*q];
                    add(&mut lhs, (None, Some(id_of(v))), c.clone());
                    add(&mut lhs, (Some(id_of(v)), None), c.clone());
                    for (x, y) in self.splits(v) {
                        add(&mut lhs, (Some(id_of(&x)), Some(id_of(&y))), c.clone());
                    }
                }
                let mut rhs: BTreeMap<Key, Rat> = BTreeMap::new();
                // Δw = 1⊗w + w⊗1 + Σ x⊗y; d(1) = 0
                for (x, y) in std::iter::once((None, Some(w.clone())))
                    .chain(std::iter::once((Some(w.clone()), None)))
                    .chain(self.splits(w).into_iter().map(|(x, y)| (Some(x), Some(y))))
                {
                    // d⊗id
                    if let Some(x) = &x {
                        let kx = (x.chain[0], *x.chain.last().unwrap());
                        for (c, q) in &self.diff[&kx][self.word_index(x)] {
                            let dx = &self.words[&kx][*q];
                            let rk = (
                                Some(id_of(dx)),
                                y.as_ref().map(|y| id_of(y)),
                            );
                            add(&mut rhs, rk, c.clone());
                        }
                    }
                    // id⊗d with (−1)^{|x|}
                    if let Some(y) = &y {
                        let s = match &x {
                            Some(x) => sign(x.degree()),
                            None => Rat::one(),
                        };
                        let ky = (y.chain[0], *y.chain.last().unwrap());
                        for (c, q) in &self.diff[&ky][self.word_index(y)] {
                            let dy = &self.words[&ky][*q];
                            let rk = (
                                x.as_ref().map(|x| id_of(x)),
                                Some(id_of(dy)),
                            );
                            add(&mut rhs, rk, s.clone() * c.clone());
                        }
                    }
                }
                lhs.retain(|_, c| !c.is_zero());
                rhs.retain(|_, c| !c.is_zero());
                if lhs != rhs {
                    report.push(format!(
                        "co-Leibniz fails on word {:?} of ({},{})",
                        w.letters, key.0, key.1
                    ));
                }
            }
        }
        report
    }
}

/// The cobar DG quiver `Ω(B)`: one generator per bar word (desuspended,
/// degree `|w|+1`), differential `∂(s⁻¹w) = −s⁻¹(dw) + Σ (−1)^{|x|} x∘y`
/// over the splits `x⊗y` of `w`, composition free by concatenation.
pub fn cobar(b: &BarCocategory) -> DGQuiver {
    let mut q = DGQuiver::new(b.objects.clone(), true);
    let mut names: BTreeMap<(usize, usize, usize), String> = BTreeMap::new();
    for (&(i, j), ws) in &b.words {
        for (p, w) in ws.iter().enumerate() {
            let name = format!("g{i}_{j}_{p}");
            q.add_arrow(&name, i, j, w.degree() + 1);
            names.insert((i, j, p), name);
        }
    }
    for (&(i, j), ws) in &b.words {
        for (p, w) in ws.iter().enumerate() {
            let mut terms: Vec<(Rat, Vec<String>)> = Vec::new();
            for (c, v) in &b.diff[&(i, j)][p] {
                terms.push((-c.clone(), vec![names[&(i, j, *v)].clone()]));
            }
            for (x, y) in b.splits(w) {
                let mid = x.chain[0];
                let xi = b.word_index(&x);
                let yi = b.word_index(&y);
                terms.push((
                    sign(x.degree()),
                    vec![
                        names[&(mid, j, xi)].clone(),
                        names[&(i, mid, yi)].clone(),
                    ],
                ));
            }
            if terms.is_empty() {
                continue;
            }
            let spec: Vec<(i64, Vec<&str>)> = terms
                .iter()
                .map(|(_, path)| (1, path.iter().map(|s| s.as_str()).collect()))
                .collect();
            let refs: Vec<(i64, &[&str])> =
                spec.iter().map(|(c, p)| (*c, p.as_slice())).collect();
            let mut ps = q.path_sum(&refs).expect("generators exist");
            for (t, (c, _)) in ps.terms.iter_mut().zip(&terms) {
                t.0 = c.clone();
            }
            let ps = PathSum {
                terms: ps.terms.drain(..).filter(|(c, _)| !c.is_zero()).collect(),
            };
            if !ps.terms.is_empty() {
                q.set_differential(&names[&(i, j, p)], ps).unwrap();
            }
        }
    }
    q
}

/// `U(A) = Ω(B∞(A))` as a concrete DG category.
pub fn universal_dg(a: &AInfinityStructure) -> Result<DGCategory, BarError> {
    let b = bar(a)?;
    let q = cobar(&b);
    let n = a.objects.len().max(2);
    Ok(path_algebra(&q, n)?)
}
