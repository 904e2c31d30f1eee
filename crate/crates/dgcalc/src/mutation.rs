//! Left and right mutations of twisted complexes via the canonical
//! evaluation/coevaluation morphisms, and the braid-word action on
//! collections:
//!
//! * `φ: C ⊗ Hom(C,D) → D`, `L_C D = cone(φ)[−1]`,
//! * `ψ: C → Hom(C,D)* ⊗ D`, `R_D C = cone(ψ)`,
//! * `L_i ⟨…, E_i, E_{i+1}, …⟩ = ⟨…, L_{E_i}E_{i+1}, E_i, …⟩` and the mirror
//!   for `R_i`.
//!
//! The layer signs of φ and ψ (degree-`l` layer entry from term `ρ` to term
//! `s` picks up `(−1)^{l(1+ρ+s)}` resp. `(−1)^l`) are forced by the storage
//! convention of [`crate::pretr`]; closedness is asserted on every call, so a
//! wrong sign cannot slip through silently.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::dgcore::{CohTable, DGCategory};
use crate::pretr::{
    cone, diff_tw, tensor_with_complex, twisted_hom, HomEnv, PretrError, TwElt, TwistedComplex,
};
use crate::Rat;

#[derive(Debug, Error)]
pub enum MutError {
    #[error("braid letter {step} ({letter}) out of range for {n} items")]
    IndexOutOfRange {
        step: usize,
        letter: String,
        n: usize,
    },
    #[error("cannot parse braid letter {0:?}")]
    BadLetter(String),
    #[error(transparent)]
    Pretr(#[from] PretrError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    L,
    R,
}

/// A braid word: letters `(i, L|R)` with 1-based slot index `i`, applied
/// left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    pub letters: Vec<(usize, Dir)>,
}

impl BraidWord {
    /// Parses a whitespace-separated word such as `"L2 R1 L1"`.
    pub fn parse(s: &str) -> Result<Self, MutError> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let dir = match tok.chars().next() {
                Some('L') => Dir::L,
                Some('R') => Dir::R,
                _ => return Err(MutError::BadLetter(tok.to_string())),
            };
            let idx: usize = tok[1..]
                .parse()
                .map_err(|_| MutError::BadLetter(tok.to_string()))?;
            if idx == 0 {
                return Err(MutError::BadLetter(tok.to_string()));
            }
            letters.push((idx, dir));
        }
        Ok(BraidWord { letters })
    }
}

fn sign(e: i64) -> Rat {
    use num_traits::One;
    if e.rem_euclid(2) == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// The canonical evaluation `φ: C ⊗ Hom(C,D) → D`. Returns the tensor
/// product (already flattened to a twisted complex over the base) together
/// with φ as a closed degree-0 morphism out of it.
pub fn canonical_eval<'e, E: HomEnv>(
    c: &TwistedComplex<'e, E>,
    d: &TwistedComplex<'e, E>,
) -> Result<(TwistedComplex<'e, E>, TwElt), PretrError> {
    let layout = twisted_hom(c, d);
    let t = tensor_with_complex(c, &layout.complex)?;
    let nc = c.n_terms();
    let mut phi = TwElt::zero(0);
    let mut layer = 0usize;
    for l in layout.complex.space.degrees() {
        for a in 0..layout.dim(l) {
            let mut basis = vec![Rat::from_integer(0.into()); layout.dim(l)];
            basis[a] = Rat::from_integer(1.into());
            let f = layout.unflatten(l, &basis);
            for (&(k, j), w) in &f.entries {
                let rho = c.terms[k].1;
                let s = d.terms[j].1;
                let e = sign(l * (1 + rho + s));
                let scaled: Vec<Rat> = w.iter().map(|x| x.clone() * e.clone()).collect();
                phi.entries.insert((layer * nc + k, j), scaled);
            }
            layer += 1;
        }
    }
    if !diff_tw(&t, d, &phi).is_zero() {
        return Err(PretrError::NotClosed {
            context: "canonical evaluation",
        });
    }
    Ok((t, phi))
}

/// The canonical coevaluation `ψ: C → Hom(C,D)* ⊗ D`. Returns the tensor
/// product and ψ as a closed degree-0 morphism into it.
pub fn coevaluation<'e, E: HomEnv>(
    c: &TwistedComplex<'e, E>,
    d: &TwistedComplex<'e, E>,
) -> Result<(TwistedComplex<'e, E>, TwElt), PretrError> {
    let layout = twisted_hom(c, d);
    let dual = layout.complex.dual();
    let t = tensor_with_complex(d, &dual)?;
    let nd = d.n_terms();
    let mut psi = TwElt::zero(0);
    let mut layer = 0usize;
    for m in dual.space.degrees() {
        let l = -m;
        for a in 0..dual.dim(m) {
            let mut basis = vec![Rat::from_integer(0.into()); layout.dim(l)];
            basis[a] = Rat::from_integer(1.into());
            let f = layout.unflatten(l, &basis);
            for (&(k, j), w) in &f.entries {
                let e = sign(l);
                let scaled: Vec<Rat> = w.iter().map(|x| x.clone() * e.clone()).collect();
                psi.entries.insert((k, layer * nd + j), scaled);
            }
            layer += 1;
        }
    }
    if !diff_tw(c, &t, &psi).is_zero() {
        return Err(PretrError::NotClosed {
            context: "coevaluation",
        });
    }
    Ok((t, psi))
}

/// `L_C D = cone(φ)[−1]` for `φ: C ⊗ Hom(C,D) → D`.
pub fn left_mutation<'e, E: HomEnv>(
    c: &TwistedComplex<'e, E>,
    d: &TwistedComplex<'e, E>,
) -> Result<TwistedComplex<'e, E>, PretrError> {
    let (t, phi) = canonical_eval(c, d)?;
    Ok(cone(&t, d, &phi)?.shift_tw(-1))
}

/// `R_D C = cone(ψ)` for `ψ: C → Hom(C,D)* ⊗ D`.
pub fn right_mutation<'e, E: HomEnv>(
    d: &TwistedComplex<'e, E>,
    c: &TwistedComplex<'e, E>,
) -> Result<TwistedComplex<'e, E>, PretrError> {
    let (t, psi) = coevaluation(c, d)?;
    cone(c, &t, &psi)
}

/// An ordered list of twisted complexes over a shared base category.
#[derive(Debug)]
pub struct Collection<'e> {
    pub base: &'e DGCategory,
    pub items: Vec<TwistedComplex<'e, DGCategory>>,
}

impl<'e> Collection<'e> {
    /// The collection of all base objects, in category order.
    pub fn from_category(base: &'e DGCategory) -> Self {
        let items = (0..base.objects.len())
            .map(|i| TwistedComplex::embed(base, i).unwrap())
            .collect();
        Collection { base, items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn hom_cohomology(&self, i: usize, j: usize) -> BTreeMap<i64, usize> {
        twisted_hom(&self.items[i], &self.items[j])
            .complex
            .cohomology_dims()
    }

    /// All pairwise cohomology dimensions, keyed by `(i, j, degree)`.
    pub fn table(&self) -> CohTable {
        let mut out = BTreeMap::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                for (k, d) in self.hom_cohomology(i, j) {
                    out.insert((i, j, k), d);
                }
            }
        }
        out
    }

    /// Exceptionality: endomorphisms are one-dimensional in degree 0 and
    /// backwards cohomology vanishes.
    pub fn is_exceptional(&self) -> bool {
        for i in 0..self.len() {
            let endo = self.hom_cohomology(i, i);
            if endo.len() != 1 || endo.get(&0) != Some(&1) {
                return false;
            }
            for j in 0..i {
                if !self.hom_cohomology(i, j).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Gram matrix of the Euler form, `G[i][j] = χ(items[i], items[j])`.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        (0..self.len())
            .map(|i| {
                (0..self.len())
                    .map(|j| {
                        self.hom_cohomology(i, j)
                            .iter()
                            .map(|(k, d)| if k.rem_euclid(2) == 0 { *d as i64 } else { -(*d as i64) })
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// Folds a braid word left to right. `L_i` replaces slots `(i, i+1)` by
    /// `(L_{E_i}E_{i+1}, E_i)`; `R_i` by `(E_{i+1}, R_{E_{i+1}}E_i)`.
    pub fn apply_braid(&self, w: &BraidWord) -> Result<Collection<'e>, MutError> {
        let mut items = self.items.clone();
        for (step, &(idx, dir)) in w.letters.iter().enumerate() {
            if idx >= items.len() {
                return Err(MutError::IndexOutOfRange {
                    step: step + 1,
                    letter: format!("{}{}", if dir == Dir::L { "L" } else { "R" }, idx),
                    n: items.len(),
                });
            }
            let c = items[idx - 1].clone();
            let d = items[idx].clone();
            match dir {
                Dir::L => {
                    items[idx - 1] = left_mutation(&c, &d)?;
                    items[idx] = c;
                }
                Dir::R => {
                    items[idx - 1] = d.clone();
                    items[idx] = right_mutation(&d, &c)?;
                }
            }
        }
        Ok(Collection {
            base: self.base,
            items,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::{path_algebra, DGQuiver};
    use crate::presets::x_quiver;

    /// ⟨O, O(1)⟩ on ℙ¹: two arrows, no relations.
    fn kronecker() -> DGCategory {
        let mut q = DGQuiver::new(vec!["O".into(), "O(1)".into()], true);
        q.add_arrow("x", 0, 1, 0);
        q.add_arrow("y", 0, 1, 0);
        path_algebra(&q, 3).unwrap()
    }

    /// Two fully orthogonal objects.
    fn orthogonal() -> DGCategory {
        let q = DGQuiver::new(vec!["A".into(), "B".into()], true);
        path_algebra(&q, 2).unwrap()
    }

    fn xcat() -> DGCategory {
        path_algebra(&x_quiver(), 6).unwrap()
    }

    #[test]
    fn braid_word_parsing() {
        let w = BraidWord::parse("L2 R1 L1").unwrap();
        assert_eq!(
            w.letters,
            vec![(2, Dir::L), (1, Dir::R), (1, Dir::L)]
        );
        assert!(BraidWord::parse("Q1").is_err());
        assert!(BraidWord::parse("L0").is_err());
        assert!(BraidWord::parse("Lx").is_err());
    }

    #[test]
    fn kronecker_left_mutation_is_o_minus_one() {
        // classical answer: L_O O(1) = O(−1) with Hom(O(−1), O) = ℚ²
        let cat = kronecker();
        let col = Collection::from_category(&cat);
        let l = left_mutation(&col.items[0], &col.items[1]).unwrap();
        l.check_mc().unwrap();
        let h = twisted_hom(&l, &col.items[0]).complex.cohomology_dims();
        assert_eq!(h.len(), 1);
        assert_eq!(h.values().sum::<usize>(), 2);
        // the mutated pair ⟨L_O O(1), O⟩ is again exceptional
        let mutated = col.apply_braid(&BraidWord::parse("L1").unwrap()).unwrap();
        assert!(mutated.is_exceptional());
        // Euler-form oracle: χ(L, O) = χ(O,O(1))·χ(O,O) − χ(O(1),O) = 2
        let g = mutated.gram();
        assert_eq!(g[0][1], 2);
    }

    #[test]
    fn kronecker_right_mutation_matches_direct_computation() {
        let cat = kronecker();
        let col = Collection::from_category(&cat);
        let r = right_mutation(&col.items[1], &col.items[0]).unwrap();
        r.check_mc().unwrap();
        // R_{O(1)} O = O(2): Hom(O(1), O(2)) = ℚ² in one degree
        let h = twisted_hom(&col.items[1], &r).complex.cohomology_dims();
        assert_eq!(h.len(), 1);
        assert_eq!(h.values().sum::<usize>(), 2);
        let mutated = col.apply_braid(&BraidWord::parse("R1").unwrap()).unwrap();
        assert!(mutated.is_exceptional());
    }

    #[test]
    fn orthogonal_pair_mutations() {
        // Hom(A,B) = 0: φ is the empty sum, the cones degenerate to shifts
        // of the untouched object: L_A B = B[−1], R_B A = A[1]
        let cat = orthogonal();
        let col = Collection::from_category(&cat);
        let (t, phi) = canonical_eval(&col.items[0], &col.items[1]).unwrap();
        assert_eq!(t.n_terms(), 0);
        assert!(phi.is_zero());
        let l = left_mutation(&col.items[0], &col.items[1]).unwrap();
        assert_eq!(l.terms, vec![(1, -1)]);
        let r = right_mutation(&col.items[1], &col.items[0]).unwrap();
        assert_eq!(r.terms, vec![(0, 1)]);
        let h = twisted_hom(&l, &l).complex.cohomology_dims();
        assert_eq!(h.get(&0), Some(&1));
    }

    #[test]
    fn left_then_right_restores_tables() {
        for cat in [kronecker(), xcat()] {
            let col = Collection::from_category(&cat);
            let back = col.apply_braid(&BraidWord::parse("L1 R1").unwrap()).unwrap();
            assert_eq!(back.table(), col.table());
            let back = col.apply_braid(&BraidWord::parse("R1 L1").unwrap()).unwrap();
            assert_eq!(back.table(), col.table());
        }
    }

    #[test]
    fn x_slot_mutation_stays_exceptional() {
        let cat = xcat();
        let col = Collection::from_category(&cat);
        assert!(col.is_exceptional());
        // mutate at the (O(E₂), O(E₁+E₂)) slot
        let mutated = col.apply_braid(&BraidWord::parse("L2").unwrap()).unwrap();
        for item in &mutated.items {
            item.check_mc().unwrap();
        }
        assert!(mutated.is_exceptional());
    }

    #[test]
    fn gram_matrix_base_change() {
        let cat = xcat();
        let col = Collection::from_category(&cat);
        let g = col.gram();
        for (word, slot, dir) in [("L2", 2usize, Dir::L), ("R3", 3usize, Dir::R)] {
            let mutated = col.apply_braid(&BraidWord::parse(word).unwrap()).unwrap();
            let g2 = mutated.gram();
            // base-change matrix: new classes in terms of old ones
            let n = col.len();
            let s = slot - 1;
            let chi = g[s][s + 1];
            let mut m = vec![vec![0i64; n]; n];
            for i in 0..n {
                m[i][i] = 1;
            }
            m[s][s] = 0;
            m[s + 1][s + 1] = 0;
            match dir {
                Dir::L => {
                    // [L_{E_s}E_{s+1}] = χ[E_s] − [E_{s+1}], then [E_s]
                    m[s][s] = chi;
                    m[s + 1][s] = -1;
                    m[s][s + 1] = 1;
                }
                Dir::R => {
                    // [E_{s+1}] first, then [R E_s] = χ[E_{s+1}] − [E_s]
                    m[s + 1][s] = 1;
                    m[s][s + 1] = -1;
                    m[s + 1][s + 1] = chi;
                }
            }
            let n = col.len();
            let mut expect = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0;
                    for a in 0..n {
                        for b in 0..n {
                            acc += m[a][i] * g[a][b] * m[b][j];
                        }
                    }
                    expect[i][j] = acc;
                }
            }
            assert_eq!(g2, expect, "word {word}");
        }
    }

    #[test]
    fn braid_relation_on_strong_subcollection() {
        // ⟨O(E₁+E₂), O(H), O(2H)⟩ is a strong exceptional collection
        let cat = xcat();
        let items = (2..5)
            .map(|i| TwistedComplex::embed(&cat, i).unwrap())
            .collect();
        let col = Collection {
            base: &cat,
            items,
        };
        assert!(col.is_exceptional());
        let lhs = col
            .apply_braid(&BraidWord::parse("L1 L2 L1").unwrap())
            .unwrap();
        let rhs = col
            .apply_braid(&BraidWord::parse("L2 L1 L2").unwrap())
            .unwrap();
        assert_eq!(lhs.table(), rhs.table());
    }

    #[test]
    fn braid_index_out_of_range_names_step() {
        let cat = kronecker();
        let col = Collection::from_category(&cat);
        let err = col
            .apply_braid(&BraidWord::parse("L1 L2").unwrap())
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2") && msg.contains("L2"), "{msg}");
    }
}
