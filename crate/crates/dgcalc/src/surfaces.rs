//! Picard-lattice bookkeeping for rational surfaces: intersection form,
//! canonical class, Riemann–Roch Euler characteristics, and augmentation of
//! line-bundle collections under blow-up.
//!
//! This module is pure integer arithmetic and serves as the independent
//! oracle for hom dimensions of the surface fixtures: on a rational surface
//! χ(D) = 1 + D·(D−K)/2, and for line bundles L_i = O(D_i) the Euler pairing
//! of the collection is χ(D_j − D_i).

use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::dgcore::DGCategory;

#[derive(Debug, Error)]
pub enum SurfError {
    #[error("intersection matrix is not symmetric (entry ({0},{1}))")]
    NotSymmetric(usize, usize),
    #[error("lattice rank {rank} does not match {what} of length {got}")]
    RankMismatch {
        rank: usize,
        what: &'static str,
        got: usize,
    },
    #[error("D·(D−K) = {value} is odd; inconsistent lattice data")]
    OddSelfIntersection { value: i64 },
    #[error("augmentation slot {k} out of range 1..={s}")]
    BadSlot { k: usize, s: usize },
}

/// An integer divisor class, written in the coordinates of a fixed lattice
/// basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![0; rank])
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }
}

/// The Picard lattice of a rational surface: named generators, the symmetric
/// intersection form, and the canonical class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicardLattice {
    pub names: Vec<String>,
    pub form: Vec<Vec<i64>>,
    pub canonical: DivisorClass,
}

impl PicardLattice {
    pub fn new(
        names: Vec<String>,
        form: Vec<Vec<i64>>,
        canonical: DivisorClass,
    ) -> Result<Self, SurfError> {
        let rank = names.len();
        if form.len() != rank || form.iter().any(|r| r.len() != rank) {
            return Err(SurfError::RankMismatch {
                rank,
                what: "intersection matrix",
                got: form.len(),
            });
        }
        for i in 0..rank {
            for j in 0..i {
                if form[i][j] != form[j][i] {
                    return Err(SurfError::NotSymmetric(i, j));
                }
            }
        }
        if canonical.0.len() != rank {
            return Err(SurfError::RankMismatch {
                rank,
                what: "canonical class",
                got: canonical.0.len(),
            });
        }
        Ok(PicardLattice {
            names,
            form,
            canonical,
        })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// Intersection number D·D′.
    pub fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64, SurfError> {
        for (what, d) in [("left divisor", a), ("right divisor", b)] {
            if d.0.len() != self.rank() {
                return Err(SurfError::RankMismatch {
                    rank: self.rank(),
                    what,
                    got: d.0.len(),
                });
            }
        }
        let mut out = 0;
        for (i, &x) in a.0.iter().enumerate() {
            for (j, &y) in b.0.iter().enumerate() {
                out += x * self.form[i][j] * y;
            }
        }
        Ok(out)
    }
}

/// Riemann–Roch on a rational surface: χ(O(D)) = 1 + D·(D−K)/2.
pub fn chi(l: &PicardLattice, d: &DivisorClass) -> Result<i64, SurfError> {
    let v = l.dot(d, &(d - &l.canonical))?;
    if v.rem_euclid(2) != 0 {
        return Err(SurfError::OddSelfIntersection { value: v });
    }
    Ok(1 + v / 2)
}

/// The Euler pairing Σ_k (−1)^k dim H^k hom(i, j) of a DG category.
pub fn euler_pairing(c: &DGCategory, i: usize, j: usize) -> i64 {
    c.hom(i, j)
        .cohomology_dims()
        .iter()
        .map(|(k, d)| {
            if k.rem_euclid(2) == 0 {
                *d as i64
            } else {
                -(*d as i64)
            }
        })
        .sum()
}

/// The lattice shadow of augmentation under a blow-up with exceptional class
/// `r`: `⟨L₁, …, L_s⟩` at slot `k` becomes
/// `⟨L₁(R), …, L_{k−1}(R), L_k, L_k(R), L_{k+1}, …, L_s⟩`.
pub fn augment_collection(
    l: &PicardLattice,
    classes: &[DivisorClass],
    r: &DivisorClass,
    k: usize,
) -> Result<Vec<DivisorClass>, SurfError> {
    let s = classes.len();
    if k == 0 || k > s {
        return Err(SurfError::BadSlot { k, s });
    }
    for d in classes.iter().chain([r]) {
        if d.0.len() != l.rank() {
            return Err(SurfError::RankMismatch {
                rank: l.rank(),
                what: "collection member",
                got: d.0.len(),
            });
        }
    }
    let mut out = Vec::with_capacity(s + 1);
    for c in &classes[..k - 1] {
        out.push(c + r);
    }
    out.push(classes[k - 1].clone());
    out.push(&classes[k - 1] + r);
    out.extend(classes[k..].iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::path_algebra;
    use crate::mutation::{BraidWord, Collection};
    use crate::presets::{x_divisors, x_lattice, x_quiver};

    #[test]
    fn chi_of_zero_is_one() {
        let l = x_lattice();
        assert_eq!(chi(&l, &DivisorClass::zero(3)).unwrap(), 1);
    }

    #[test]
    fn x_lattice_intersection_numbers() {
        let l = x_lattice();
        let e1 = DivisorClass(vec![1, 0, 0]);
        let e2 = DivisorClass(vec![0, 1, 0]);
        let h = DivisorClass(vec![0, 0, 1]);
        assert_eq!(l.dot(&e1, &e1).unwrap(), -2);
        assert_eq!(l.dot(&e2, &e2).unwrap(), -1);
        assert_eq!(l.dot(&h, &h).unwrap(), 1);
        assert_eq!(l.dot(&e1, &e2).unwrap(), 1);
        assert_eq!(l.dot(&e1, &h).unwrap(), 0);
        assert_eq!(l.dot(&e2, &h).unwrap(), 0);
        // K = −3H + E₁ + 2E₂
        assert_eq!(l.canonical, DivisorClass(vec![1, 2, -3]));
        assert_eq!(chi(&l, &h).unwrap(), 3);
        assert_eq!(chi(&l, &(&h - &e2)).unwrap(), 2);
    }

    #[test]
    fn bad_lattice_data_is_rejected() {
        let asym = PicardLattice::new(
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![-1, 0]],
            DivisorClass::zero(2),
        );
        assert!(matches!(asym, Err(SurfError::NotSymmetric(1, 0))));
        let short_k = PicardLattice::new(
            vec!["a".into()],
            vec![vec![2]],
            DivisorClass::zero(2),
        );
        assert!(matches!(short_k, Err(SurfError::RankMismatch { .. })));
        let l = x_lattice();
        assert!(matches!(
            l.dot(&DivisorClass::zero(2), &DivisorClass::zero(3)),
            Err(SurfError::RankMismatch { .. })
        ));
        // an odd-parity form is not a surface lattice
        let odd = PicardLattice::new(
            vec!["a".into()],
            vec![vec![1]],
            DivisorClass::zero(1),
        )
        .unwrap();
        assert!(matches!(
            chi(&odd, &DivisorClass(vec![1])),
            Err(SurfError::OddSelfIntersection { value: 1 })
        ));
    }

    #[test]
    fn chi_matches_euler_pairing_on_every_x_pair() {
        let l = x_lattice();
        let ds = x_divisors();
        let cat = path_algebra(&x_quiver(), 6).unwrap();
        assert_eq!(ds.len(), cat.objects.len());
        for i in 0..ds.len() {
            for j in 0..ds.len() {
                assert_eq!(
                    chi(&l, &(&ds[j] - &ds[i])).unwrap(),
                    euler_pairing(&cat, i, j),
                    "pair ({}, {})",
                    cat.objects[i],
                    cat.objects[j]
                );
            }
        }
        assert_eq!(euler_pairing(&cat, 0, 3), 3);
    }

    #[test]
    fn augmentation_from_p2_reaches_the_x_collection() {
        let l = x_lattice();
        let e1 = DivisorClass(vec![1, 0, 0]);
        let e2 = DivisorClass(vec![0, 1, 0]);
        let h = DivisorClass(vec![0, 0, 1]);
        // ⟨O, O(h), O(2h)⟩ on ℙ², pulled back to the lattice of X
        let p2 = vec![DivisorClass::zero(3), h.clone(), &h + &h];
        // first blow-up: exceptional class pulls back to R₁ = E₁ + E₂
        let r1 = &e1 + &e2;
        let once = augment_collection(&l, &p2, &r1, 1).unwrap();
        assert_eq!(once.len(), p2.len() + 1);
        // second blow-up: exceptional class R₂ = E₂
        let twice = augment_collection(&l, &once, &e2, 1).unwrap();
        assert_eq!(twice, x_divisors());
        // slot 1 on a singleton is the base case ⟨O⟩ → ⟨O, O(R)⟩
        let single = augment_collection(&l, &[DivisorClass::zero(3)], &e2, 1).unwrap();
        assert_eq!(single, vec![DivisorClass::zero(3), e2.clone()]);
        assert!(matches!(
            augment_collection(&l, &p2, &e2, 0),
            Err(SurfError::BadSlot { k: 0, s: 3 })
        ));
        assert!(matches!(
            augment_collection(&l, &p2, &e2, 4),
            Err(SurfError::BadSlot { k: 4, s: 3 })
        ));
    }

    #[test]
    fn augmentation_in_a_middle_slot_twists_the_head() {
        let l = x_lattice();
        let e2 = DivisorClass(vec![0, 1, 0]);
        let h = DivisorClass(vec![0, 0, 1]);
        let p2 = vec![DivisorClass::zero(3), h.clone(), &h + &h];
        let aug = augment_collection(&l, &p2, &e2, 2).unwrap();
        assert_eq!(
            aug,
            vec![
                e2.clone(),
                h.clone(),
                &h + &e2,
                &h + &h,
            ]
        );
    }

    #[test]
    fn euler_gram_transforms_by_mutation_base_change() {
        let cat = path_algebra(&x_quiver(), 6).unwrap();
        let col = Collection::from_category(&cat);
        let g = col.gram();
        for word in ["L2", "R3", "L4", "L2 L3"] {
            let w = BraidWord::parse(word).unwrap();
            let mutated = col.apply_braid(&w).unwrap();
            let g2 = mutated.gram();
            // base change: L at (i−1, i) sends the K-theory basis to
            // (χ(C,D)[C] − [D], [C]); R at (i−1, i) to ([D], χ(C,D)[D] − [C])
            let n = col.len();
            let mut gcur = g.clone();
            for &(idx, dir) in &w.letters {
                let (a, b) = (idx - 1, idx);
                let mut step: Vec<Vec<i64>> = (0..n)
                    .map(|r| (0..n).map(|c| i64::from(r == c)).collect())
                    .collect();
                match dir {
                    crate::mutation::Dir::L => {
                        for r in 0..n {
                            step[r][a] = 0;
                            step[r][b] = 0;
                        }
                        step[a][a] = gcur[a][b];
                        step[b][a] = -1;
                        step[a][b] = 1;
                    }
                    crate::mutation::Dir::R => {
                        for r in 0..n {
                            step[r][a] = 0;
                            step[r][b] = 0;
                        }
                        step[b][a] = 1;
                        step[b][b] = gcur[a][b];
                        step[a][b] = -1;
                    }
                }
                // gcur ← stepᵀ gcur step
                let mut next = vec![vec![0i64; n]; n];
                for r in 0..n {
                    for c in 0..n {
                        let mut acc = 0;
                        for x in 0..n {
                            for y in 0..n {
                                acc += step[x][r] * gcur[x][y] * step[y][c];
                            }
                        }
                        next[r][c] = acc;
                    }
                }
                gcur = next;
            }
            assert_eq!(g2, gcur, "braid word {word}");
        }
    }
}
