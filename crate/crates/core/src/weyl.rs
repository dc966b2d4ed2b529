//! Weyl group elements as integer matrices acting on the root lattice.

use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::root_system::{Root, RootSystem, WeightVector};

/// An element of the Weyl group.
///
/// Equality and hashing use only the root-lattice action; the inverse and
/// the weight-lattice action are carried along so that descents and the
/// action on weights need no matrix inversion.
#[derive(Clone, Debug)]
pub struct WeylElement {
    root_action: IntMatrix,
    inverse_action: IntMatrix,
    weight_action: IntMatrix,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.root_action == other.root_action
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.root_action.hash(state);
    }
}

/// A reduced expression, letters 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct ReducedWord {
    letters: Vec<usize>,
}

impl ReducedWord {
    /// Validates `letters` as a reduced word in `rs`.
    pub fn new(rs: &RootSystem, letters: Vec<usize>) -> Result<Self> {
        let w = rs.element_from_word(&letters)?;
        if w.length(rs) != letters.len() {
            return Err(Error::NotReduced(letters));
        }
        Ok(ReducedWord { letters })
    }

    pub(crate) fn new_unchecked(letters: Vec<usize>) -> Self {
        ReducedWord { letters }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn into_letters(self) -> Vec<usize> {
        self.letters
    }
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            root_action: IntMatrix::identity(rank),
            inverse_action: IntMatrix::identity(rank),
            weight_action: IntMatrix::identity(rank),
        }
    }

    pub fn simple_reflection(rs: &RootSystem, i: usize) -> Result<Self> {
        check_letter(rs, i)?;
        let m = rs.simple_reflection_matrices()[i - 1].clone();
        Ok(WeylElement {
            root_action: m.clone(),
            inverse_action: m,
            weight_action: rs.simple_reflection_weight_matrices()[i - 1].clone(),
        })
    }

    /// The reflection `s_alpha` for any root `alpha`.
    pub fn reflection(rs: &RootSystem, alpha: &Root) -> Result<Self> {
        let data = rs.root_data(alpha)?;
        let n = rs.rank();
        let cartan = rs.cartan();
        // s_alpha(alpha_j) = alpha_j - <alpha_j, alpha^v> alpha
        let root_action = IntMatrix::from_fn(n, |r, c| {
            let k: i32 = (0..n).map(|i| cartan[i][c] * data.coroot[i]).sum();
            i32::from(r == c) - k * alpha.coords[r]
        });
        // s_alpha(omega_j) = omega_j - coroot_j alpha
        let weight_action = IntMatrix::from_fn(n, |r, c| {
            i32::from(r == c) - data.coroot[c] * data.weight[r]
        });
        Ok(WeylElement {
            inverse_action: root_action.clone(),
            root_action,
            weight_action,
        })
    }

    pub fn rank(&self) -> usize {
        self.root_action.dim()
    }

    pub fn root_action(&self) -> &IntMatrix {
        &self.root_action
    }

    /// `self * other` (apply `other` first).
    pub fn mul(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            root_action: self.root_action.mul(&other.root_action),
            inverse_action: other.inverse_action.mul(&self.inverse_action),
            weight_action: self.weight_action.mul(&other.weight_action),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        // The inverse weight action is not tracked, so invert it here.
        WeylElement {
            root_action: self.inverse_action.clone(),
            inverse_action: self.root_action.clone(),
            weight_action: invert_unimodular(&self.weight_action),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.root_action.is_identity()
    }

    pub fn act_on_root(&self, alpha: &Root) -> Root {
        Root::new(self.root_action.apply(&alpha.coords))
    }

    pub fn act_on_root_inverse(&self, alpha: &Root) -> Root {
        Root::new(self.inverse_action.apply(&alpha.coords))
    }

    pub fn act_on_weight(&self, lam: &WeightVector) -> WeightVector {
        WeightVector::new(self.weight_action.apply(&lam.coords))
    }

    pub(crate) fn act_on_weight_coords(&self, lam: &[i32]) -> Vec<i32> {
        self.weight_action.apply(lam)
    }

    /// Number of positive roots sent to negative roots.
    pub fn length(&self, rs: &RootSystem) -> usize {
        rs.positive_roots()
            .iter()
            .filter(|a| !self.act_on_root(a).is_positive())
            .count()
    }

    /// `Phi_w = Phi+ ∩ w Phi-`: positive roots sent negative by `w^{-1}`.
    pub fn inversion_set(&self, rs: &RootSystem) -> Vec<Root> {
        rs.positive_roots()
            .iter()
            .filter(|a| !self.act_on_root_inverse(a).is_positive())
            .cloned()
            .collect()
    }

    /// `s_i w < w`, i.e. `w^{-1} alpha_i < 0`.
    pub fn is_left_descent(&self, i: usize) -> bool {
        self.inverse_action.column(i - 1).iter().all(|&c| c <= 0)
    }

    /// `w s_i < w`, i.e. `w alpha_i < 0`.
    pub fn is_right_descent(&self, i: usize) -> bool {
        self.root_action.column(i - 1).iter().all(|&c| c <= 0)
    }

    pub fn left_descents(&self) -> Vec<usize> {
        (1..=self.rank())
            .filter(|&i| self.is_left_descent(i))
            .collect()
    }

    pub fn right_descents(&self) -> Vec<usize> {
        (1..=self.rank())
            .filter(|&i| self.is_right_descent(i))
            .collect()
    }

    /// Canonical reduced word: repeatedly strip the smallest left descent.
    pub fn canonical_word(&self, rs: &RootSystem) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = self.clone();
        while let Some(s) = (1..=rs.rank()).find(|&i| cur.is_left_descent(i)) {
            word.push(s);
            cur = WeylElement::simple_reflection(rs, s)
                .expect("valid letter")
                .mul(&cur);
        }
        word
    }
}

fn check_letter(rs: &RootSystem, i: usize) -> Result<()> {
    if i == 0 || i > rs.rank() {
        return Err(Error::LetterOutOfRange {
            letter: i,
            rank: rs.rank(),
        });
    }
    Ok(())
}

/// Inverse of a unimodular integer matrix by fraction-free Gauss-Jordan.
fn invert_unimodular(m: &IntMatrix) -> IntMatrix {
    let n = m.dim();
    let mut a: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = (0..n).map(|j| i64::from(m.get(i, j))).collect();
            row.extend((0..n).map(|j| i64::from(i == j)));
            row
        })
        .collect();
    for col in 0..n {
        // Euclid on the column until a single unit pivot remains.
        loop {
            let rows: Vec<usize> = (col..n).filter(|&r| a[r][col] != 0).collect();
            let pivot = *rows
                .iter()
                .min_by_key(|&&r| a[r][col].abs())
                .expect("matrix is invertible");
            a.swap(col, pivot);
            let mut done = true;
            for r in col + 1..n {
                if a[r][col] != 0 {
                    let q = a[r][col] / a[col][col];
                    for c in 0..2 * n {
                        a[r][c] -= q * a[col][c];
                    }
                    if a[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        assert_eq!(a[col][col].abs(), 1, "matrix is unimodular");
        if a[col][col] < 0 {
            for c in 0..2 * n {
                a[col][c] = -a[col][c];
            }
        }
    }
    for col in (0..n).rev() {
        for r in 0..col {
            let q = a[r][col];
            if q != 0 {
                for c in 0..2 * n {
                    a[r][c] -= q * a[col][c];
                }
            }
        }
    }
    IntMatrix::from_fn(n, |i, j| a[i][n + j] as i32)
}

impl RootSystem {
    /// Product of simple reflections; the leftmost letter acts last.
    pub fn element_from_word(&self, letters: &[usize]) -> Result<WeylElement> {
        let mut w = WeylElement::identity(self.rank());
        for &l in letters {
            w = w.mul(&WeylElement::simple_reflection(self, l)?);
        }
        Ok(w)
    }

    pub fn longest_element(&self) -> WeylElement {
        let mut w = WeylElement::identity(self.rank());
        while let Some(i) = (1..=self.rank()).find(|&i| !w.is_right_descent(i)) {
            w = w.mul(&WeylElement::simple_reflection(self, i).expect("valid letter"));
        }
        w
    }

    /// Bruhat order by descent recursion: if `s` is a left descent of `w`,
    /// then `x <= w` iff `min(x, sx) <= sw`.
    pub fn bruhat_leq(&self, x: &WeylElement, w: &WeylElement) -> bool {
        let mut x = x.clone();
        let mut w = w.clone();
        loop {
            if w.is_identity() {
                return x.is_identity();
            }
            let s = (1..=self.rank())
                .find(|&i| w.is_left_descent(i))
                .expect("non-identity element has a left descent");
            let sr = WeylElement::simple_reflection(self, s).expect("valid letter");
            if x.is_left_descent(s) {
                x = sr.mul(&x);
            }
            w = sr.mul(&w);
        }
    }

    /// All reduced words of `w` in lexicographic order.
    pub fn all_reduced_words(&self, w: &WeylElement) -> Vec<ReducedWord> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.reduced_words_rec(w, &mut prefix, &mut out);
        out
    }

    fn reduced_words_rec(
        &self,
        w: &WeylElement,
        prefix: &mut Vec<usize>,
        out: &mut Vec<ReducedWord>,
    ) {
        if w.is_identity() {
            out.push(ReducedWord::new_unchecked(prefix.clone()));
            return;
        }
        for s in w.left_descents() {
            let sw = WeylElement::simple_reflection(self, s)
                .expect("valid letter")
                .mul(w);
            prefix.push(s);
            self.reduced_words_rec(&sw, prefix, out);
            prefix.pop();
        }
    }
}
