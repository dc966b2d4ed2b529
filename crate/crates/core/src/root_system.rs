//! Finite crystallographic root systems.
//!
//! Roots are kept in simple-root coordinates and weights in
//! fundamental-weight coordinates. The Cartan matrix converts between the
//! two: `alpha_j = sum_i a_ij omega_i`. Coroot pairings for arbitrary roots
//! are computed from a symmetrized invariant form, so everything stays
//! integral.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLetter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeLetter {
    pub fn as_char(self) -> char {
        match self {
            TypeLetter::A => 'A',
            TypeLetter::B => 'B',
            TypeLetter::C => 'C',
            TypeLetter::D => 'D',
            TypeLetter::E => 'E',
            TypeLetter::F => 'F',
            TypeLetter::G => 'G',
        }
    }
}

impl fmt::Display for TypeLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for TypeLetter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letter = match s.trim().to_ascii_uppercase().as_str() {
            "A" => TypeLetter::A,
            "B" => TypeLetter::B,
            "C" => TypeLetter::C,
            "D" => TypeLetter::D,
            "E" => TypeLetter::E,
            "F" => TypeLetter::F,
            "G" => TypeLetter::G,
            _ => {
                return Err(Error::InvalidType {
                    letter: s.chars().next().unwrap_or('?'),
                    rank: 0,
                })
            }
        };
        Ok(letter)
    }
}

/// A root in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root {
    pub coords: Vec<i32>,
}

impl Root {
    pub fn new(coords: Vec<i32>) -> Self {
        Root { coords }
    }

    pub fn height(&self) -> i32 {
        self.coords.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0) && self.coords.iter().any(|&c| c > 0)
    }

    pub fn neg(&self) -> Root {
        Root::new(self.coords.iter().map(|c| -c).collect())
    }
}

/// A weight in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector {
    pub coords: Vec<i32>,
}

impl WeightVector {
    pub fn new(coords: Vec<i32>) -> Self {
        WeightVector { coords }
    }

    pub fn zero(rank: usize) -> Self {
        WeightVector {
            coords: vec![0; rank],
        }
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, other: &WeightVector) -> WeightVector {
        WeightVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `self + k * other`
    pub fn add_scaled(&self, other: &[i32], k: i32) -> WeightVector {
        WeightVector::new(
            self.coords
                .iter()
                .zip(other)
                .map(|(a, b)| a + k * b)
                .collect(),
        )
    }

    pub fn neg(&self) -> WeightVector {
        WeightVector::new(self.coords.iter().map(|c| -c).collect())
    }
}

/// Cached data for one root of the system.
#[derive(Clone, Debug)]
pub(crate) struct RootData {
    /// The root in fundamental-weight coordinates.
    pub weight: Vec<i32>,
    /// The coroot in simple-coroot coordinates; `<lam, alpha^v> = lam . coroot`.
    pub coroot: Vec<i32>,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    type_letter: TypeLetter,
    rank: usize,
    cartan: Vec<Vec<i32>>,
    positive_roots: Vec<Root>,
    simple_reflection_matrices: Vec<IntMatrix>,
    simple_reflection_weight_matrices: Vec<IntMatrix>,
    /// Squared lengths of simple roots, normalized so the shortest is 1.
    norms: Vec<i64>,
    roots: HashMap<Vec<i32>, RootData>,
}

fn cartan_matrix(letter: TypeLetter, n: usize) -> Result<Vec<Vec<i32>>> {
    let valid = match letter {
        TypeLetter::A => n >= 1,
        TypeLetter::B | TypeLetter::C => n >= 2,
        TypeLetter::D => n >= 4,
        TypeLetter::E => (6..=8).contains(&n),
        TypeLetter::F => n == 4,
        TypeLetter::G => n == 2,
    };
    if !valid {
        return Err(Error::InvalidType {
            letter: letter.as_char(),
            rank: n,
        });
    }
    let mut a = vec![vec![0i32; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match letter {
        TypeLetter::A | TypeLetter::B | TypeLetter::C | TypeLetter::F | TypeLetter::G => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        TypeLetter::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        TypeLetter::E => {
            // Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4.
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
    }
    // a_ij = <alpha_j, alpha_i^v>
    match letter {
        TypeLetter::B => a[n - 1][n - 2] = -2,
        TypeLetter::C => a[n - 2][n - 1] = -2,
        TypeLetter::F => a[2][1] = -2,
        TypeLetter::G => a[0][1] = -3,
        _ => {}
    }
    Ok(a)
}

/// Squared lengths `d_i` with `d_i a_ij = d_j a_ji`, scaled to coprime integers.
fn symmetrizer(a: &[Vec<i32>]) -> Vec<i64> {
    let n = a.len();
    let mut d: Vec<Option<i64>> = vec![None; n];
    d[0] = Some(6);
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        let di = d[i].expect("visited");
        for j in 0..n {
            if i != j && a[i][j] != 0 && d[j].is_none() {
                d[j] = Some(di * i64::from(a[i][j]) / i64::from(a[j][i]));
                stack.push(j);
            }
        }
    }
    let d: Vec<i64> = d
        .into_iter()
        .map(|x| x.expect("connected diagram"))
        .collect();
    let g = d.iter().fold(0, |g, &x| gcd(g, x));
    d.into_iter().map(|x| x / g).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl RootSystem {
    /// Builds the root system of the given finite type.
    pub fn new(type_letter: TypeLetter, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(type_letter, rank)?;
        let norms = symmetrizer(&cartan);
        let n = rank;

        // s_i(alpha_j) = alpha_j - a_ij alpha_i
        let simple_reflection_matrices: Vec<IntMatrix> = (0..n)
            .map(|i| {
                IntMatrix::from_fn(n, |r, c| {
                    let id = i32::from(r == c);
                    if r == i {
                        id - cartan[i][c]
                    } else {
                        id
                    }
                })
            })
            .collect();
        // s_i(omega_j) = omega_j - delta_ij alpha_i, alpha_i = sum_r a_ri omega_r
        let simple_reflection_weight_matrices: Vec<IntMatrix> = (0..n)
            .map(|i| {
                IntMatrix::from_fn(n, |r, c| {
                    let id = i32::from(r == c);
                    if c == i {
                        id - cartan[r][i]
                    } else {
                        id
                    }
                })
            })
            .collect();

        let mut rs = RootSystem {
            type_letter,
            rank,
            cartan,
            positive_roots: Vec::new(),
            simple_reflection_matrices,
            simple_reflection_weight_matrices,
            norms,
            roots: HashMap::new(),
        };

        let mut seen: Vec<Vec<i32>> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        let mut frontier = seen.clone();
        while let Some(beta) = frontier.pop() {
            for m in &rs.simple_reflection_matrices {
                let image = m.apply(&beta);
                if image.iter().all(|&c| c >= 0) && !seen.contains(&image) {
                    seen.push(image.clone());
                    frontier.push(image);
                }
            }
        }
        let mut positive: Vec<Root> = seen.into_iter().map(Root::new).collect();
        positive.sort_by(|a, b| {
            a.height()
                .cmp(&b.height())
                .then_with(|| a.coords.cmp(&b.coords))
        });

        for root in &positive {
            let data = rs.compute_root_data(&root.coords);
            let neg_data = RootData {
                weight: data.weight.iter().map(|c| -c).collect(),
                coroot: data.coroot.iter().map(|c| -c).collect(),
            };
            rs.roots.insert(root.coords.clone(), data);
            rs.roots.insert(root.neg().coords, neg_data);
        }
        rs.positive_roots = positive;
        Ok(rs)
    }

    fn compute_root_data(&self, c: &[i32]) -> RootData {
        let n = self.rank;
        let weight: Vec<i32> = (0..n)
            .map(|i| (0..n).map(|j| self.cartan[i][j] * c[j]).sum())
            .collect();
        // twice the squared length: sum_ij c_i c_j a_ij d_i
        let mut twice_norm = 0i64;
        for i in 0..n {
            for j in 0..n {
                twice_norm += i64::from(c[i])
                    * i64::from(c[j])
                    * i64::from(self.cartan[i][j])
                    * self.norms[i];
            }
        }
        let coroot = (0..n)
            .map(|j| {
                let num = 2 * i64::from(c[j]) * self.norms[j];
                debug_assert_eq!(num % twice_norm, 0, "coroot coordinates are integral");
                (num / twice_norm) as i32
            })
            .collect();
        RootData { weight, coroot }
    }

    pub fn type_letter(&self) -> TypeLetter {
        self.type_letter
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn simple_reflection_matrices(&self) -> &[IntMatrix] {
        &self.simple_reflection_matrices
    }

    pub(crate) fn simple_reflection_weight_matrices(&self) -> &[IntMatrix] {
        &self.simple_reflection_weight_matrices
    }

    /// Squared lengths of the simple roots (shortest normalized to 1).
    pub fn simple_root_norms(&self) -> &[i64] {
        &self.norms
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.type_letter, self.rank)
    }

    /// The simple root `alpha_i` for a 1-based index.
    pub fn simple_root(&self, i: usize) -> Root {
        let mut c = vec![0; self.rank];
        c[i - 1] = 1;
        Root::new(c)
    }

    /// The fundamental weight `omega_i` for a 1-based index.
    pub fn fundamental_weight(&self, i: usize) -> WeightVector {
        let mut c = vec![0; self.rank];
        c[i - 1] = 1;
        WeightVector::new(c)
    }

    pub fn rho(&self) -> WeightVector {
        WeightVector::new(vec![1; self.rank])
    }

    pub fn is_root(&self, alpha: &Root) -> bool {
        self.roots.contains_key(&alpha.coords)
    }

    pub(crate) fn root_data(&self, alpha: &Root) -> Result<&RootData> {
        self.roots
            .get(&alpha.coords)
            .ok_or_else(|| Error::NotARoot(alpha.coords.clone()))
    }

    pub(crate) fn positive_root_data(&self, alpha: &Root) -> Result<&RootData> {
        let data = self.root_data(alpha)?;
        if !alpha.is_positive() {
            return Err(Error::NotPositive(alpha.coords.clone()));
        }
        Ok(data)
    }

    /// `<lam, alpha^v>`.
    pub fn pairing(&self, lam: &WeightVector, alpha: &Root) -> Result<i32> {
        let data = self.root_data(alpha)?;
        Ok(dot(&lam.coords, &data.coroot))
    }

    /// Expresses a root-lattice vector in fundamental-weight coordinates.
    pub fn root_to_weight_coords(&self, alpha: &Root) -> WeightVector {
        let n = self.rank;
        WeightVector::new(
            (0..n)
                .map(|i| (0..n).map(|j| self.cartan[i][j] * alpha.coords[j]).sum())
                .collect(),
        )
    }

    /// `s_alpha(lam) = lam - <lam, alpha^v> alpha`.
    pub fn reflect_weight(&self, alpha: &Root, lam: &WeightVector) -> Result<WeightVector> {
        let data = self.root_data(alpha)?;
        let k = dot(&lam.coords, &data.coroot);
        Ok(lam.add_scaled(&data.weight, -k))
    }

    /// `s_alpha(beta)` for a root-lattice vector `beta`.
    pub fn reflect_root(&self, alpha: &Root, beta: &Root) -> Result<Root> {
        let data = self.root_data(alpha)?;
        let k = dot(&self.root_to_weight_coords(beta).coords, &data.coroot);
        Ok(Root::new(
            beta.coords
                .iter()
                .zip(&alpha.coords)
                .map(|(b, a)| b - k * a)
                .collect(),
        ))
    }

    /// Coroot of `alpha` in simple-coroot coordinates.
    pub fn coroot(&self, alpha: &Root) -> Result<Vec<i32>> {
        Ok(self.root_data(alpha)?.coroot.clone())
    }
}

pub(crate) fn dot(a: &[i32], b: &[i32]) -> i32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Serialize for RootSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RootSystem", 4)?;
        s.serialize_field("cartan", &self.cartan)?;
        s.serialize_field("positive_roots", &self.positive_roots)?;
        s.serialize_field("rank", &self.rank)?;
        s.serialize_field("type", &self.type_letter)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rs(letter: TypeLetter, n: usize) -> RootSystem {
        RootSystem::new(letter, n).unwrap()
    }

    #[test]
    fn positive_root_counts() {
        let cases = [
            (TypeLetter::A, 1, 1),
            (TypeLetter::A, 2, 3),
            (TypeLetter::A, 4, 10),
            (TypeLetter::B, 2, 4),
            (TypeLetter::B, 3, 9),
            (TypeLetter::C, 3, 9),
            (TypeLetter::D, 4, 12),
            (TypeLetter::D, 5, 20),
            (TypeLetter::E, 6, 36),
            (TypeLetter::E, 7, 63),
            (TypeLetter::E, 8, 120),
            (TypeLetter::F, 4, 24),
            (TypeLetter::G, 2, 6),
        ];
        for (letter, n, count) in cases {
            assert_eq!(rs(letter, n).positive_roots().len(), count, "{letter}{n}");
        }
    }

    #[test]
    fn invalid_types_are_rejected() {
        for (letter, n) in [
            (TypeLetter::A, 0),
            (TypeLetter::B, 1),
            (TypeLetter::D, 3),
            (TypeLetter::E, 5),
            (TypeLetter::E, 9),
            (TypeLetter::F, 3),
            (TypeLetter::G, 3),
        ] {
            assert_eq!(
                RootSystem::new(letter, n).unwrap_err(),
                Error::InvalidType {
                    letter: letter.as_char(),
                    rank: n
                }
            );
        }
    }

    #[test]
    fn cartan_and_reflection_invariants() {
        for (letter, n) in [
            (TypeLetter::A, 3),
            (TypeLetter::B, 3),
            (TypeLetter::C, 3),
            (TypeLetter::D, 4),
            (TypeLetter::F, 4),
            (TypeLetter::G, 2),
            (TypeLetter::E, 6),
        ] {
            let r = rs(letter, n);
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        assert_eq!(r.cartan()[i][j], 2);
                    } else {
                        assert!(r.cartan()[i][j] <= 0);
                    }
                }
            }
            for m in r.simple_reflection_matrices() {
                assert!(m.mul(m).is_identity());
            }
            for m in r.simple_reflection_weight_matrices() {
                assert!(m.mul(m).is_identity());
            }
            for alpha in r.positive_roots() {
                assert!(alpha.is_positive());
            }
        }
    }

    #[test]
    fn a2_positive_roots_in_height_order() {
        let r = rs(TypeLetter::A, 2);
        let got: Vec<Vec<i32>> = r
            .positive_roots()
            .iter()
            .map(|a| a.coords.clone())
            .collect();
        assert_eq!(got, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn simple_reflections_permute_other_positive_roots() {
        for (letter, n) in [(TypeLetter::B, 3), (TypeLetter::G, 2), (TypeLetter::F, 4)] {
            let r = rs(letter, n);
            for i in 1..=n {
                let ai = r.simple_root(i);
                for alpha in r.positive_roots() {
                    if *alpha != ai {
                        let image = r.reflect_root(&ai, alpha).unwrap();
                        assert!(image.is_positive() && r.is_root(&image));
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let a1 = rs(TypeLetter::A, 1);
        assert_eq!(
            a1.pairing(&a1.fundamental_weight(1), &a1.simple_root(1))
                .unwrap(),
            1
        );
        let a2 = rs(TypeLetter::A, 2);
        let theta = Root::new(vec![1, 1]);
        assert_eq!(a2.pairing(&a2.fundamental_weight(1), &theta).unwrap(), 1);
        for alpha in a2.positive_roots() {
            assert_eq!(a2.pairing(&WeightVector::zero(2), alpha).unwrap(), 0);
        }
        assert!(matches!(
            a2.pairing(&WeightVector::zero(2), &Root::new(vec![2, 1])),
            Err(Error::NotARoot(_))
        ));
        // fundamental-weight duality in every type
        let g2 = rs(TypeLetter::G, 2);
        for i in 1..=2 {
            for j in 1..=2 {
                let k = g2
                    .pairing(&g2.fundamental_weight(j), &g2.simple_root(i))
                    .unwrap();
                assert_eq!(k, i32::from(i == j));
            }
        }
    }

    #[test]
    fn non_simply_laced_coroots() {
        // B2: alpha_1 long, alpha_2 short; alpha_1 + 2 alpha_2 is long with
        // coroot alpha_1^v + alpha_2^v.
        let b2 = rs(TypeLetter::B, 2);
        assert_eq!(b2.simple_root_norms(), &[2, 1]);
        assert_eq!(b2.coroot(&Root::new(vec![1, 2])).unwrap(), vec![1, 1]);
        assert_eq!(b2.coroot(&Root::new(vec![1, 1])).unwrap(), vec![2, 1]);
        let g2 = rs(TypeLetter::G, 2);
        assert_eq!(g2.simple_root_norms(), &[1, 3]);
    }

    #[test]
    fn root_to_weight_examples() {
        let a1 = rs(TypeLetter::A, 1);
        assert_eq!(a1.root_to_weight_coords(&a1.simple_root(1)).coords, vec![2]);
        let a2 = rs(TypeLetter::A, 2);
        assert_eq!(
            a2.root_to_weight_coords(&a2.simple_root(1)).coords,
            vec![2, -1]
        );
        assert_eq!(
            a2.root_to_weight_coords(&Root::new(vec![1, 1])).coords,
            vec![1, 1]
        );
    }

    #[test]
    fn reflect_weight_examples() {
        let a1 = rs(TypeLetter::A, 1);
        let w = a1
            .reflect_weight(&a1.simple_root(1), &a1.fundamental_weight(1))
            .unwrap();
        assert_eq!(w.coords, vec![-1]);
        let a2 = rs(TypeLetter::A, 2);
        let zero = WeightVector::zero(2);
        assert_eq!(
            a2.reflect_weight(&Root::new(vec![1, 1]), &zero).unwrap(),
            zero
        );
        let om2 = a2.fundamental_weight(2);
        assert_eq!(a2.reflect_weight(&a2.simple_root(1), &om2).unwrap(), om2);
    }

    #[test]
    fn root_to_weight_is_injective_and_pairing_consistent() {
        for (letter, n) in [
            (TypeLetter::B, 3),
            (TypeLetter::C, 3),
            (TypeLetter::G, 2),
            (TypeLetter::D, 4),
        ] {
            let r = rs(letter, n);
            let images: Vec<WeightVector> = r
                .positive_roots()
                .iter()
                .map(|a| r.root_to_weight_coords(a))
                .collect();
            for (i, a) in images.iter().enumerate() {
                for b in &images[i + 1..] {
                    assert_ne!(a, b);
                }
            }
            for (alpha, wt) in r.positive_roots().iter().zip(&images) {
                for j in 1..=n {
                    let direct: i32 = (0..n).map(|k| r.cartan()[j - 1][k] * alpha.coords[k]).sum();
                    assert_eq!(r.pairing(wt, &r.simple_root(j)).unwrap(), direct);
                }
            }
        }
    }

    #[test]
    fn serializes_type_rank_cartan_and_roots() {
        let json = serde_json::to_string(&rs(TypeLetter::A, 2)).unwrap();
        assert_eq!(
            json,
            r#"{"cartan":[[2,-1],[-1,2]],"positive_roots":[[0,1],[1,0],[1,1]],"rank":2,"type":"A"}"#
        );
    }

    proptest! {
        #[test]
        fn reflection_is_involutive(coords in proptest::collection::vec(-6i32..=6, 3), root_idx in 0usize..9) {
            let r = RootSystem::new(TypeLetter::B, 3).unwrap();
            let alpha = &r.positive_roots()[root_idx];
            let lam = WeightVector::new(coords);
            let once = r.reflect_weight(alpha, &lam).unwrap();
            let twice = r.reflect_weight(alpha, &once).unwrap();
            prop_assert_eq!(&twice, &lam);
            let k = r.pairing(&lam, alpha).unwrap();
            prop_assert_eq!(once == lam, k == 0);
        }
    }
}
