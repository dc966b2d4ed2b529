//! Exact arithmetic in `Z[v] ⊗ Z[P]` and the divided-difference calculus.
//!
//! Operators are evaluated on monomials through closed geometric sums, so no
//! polynomial division ever happens. With `k = <lam, alpha^v>`:
//!
//! ```text
//! ∂_α e^λ =  Σ_{j=0}^{k} e^{λ-jα}          k >= 0
//!         =  0                              k = -1
//!         = -Σ_{j=1}^{-k-1} e^{λ+jα}        k <= -2
//! ```

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::root_system::{dot, Root, RootSystem, WeightVector};
use crate::weyl::WeylElement;

/// Coefficients beyond i64 are out of scope at every supported size; fail
/// loudly rather than wrap in release builds.
fn checked(x: Option<i64>) -> i64 {
    x.expect("Z[v] coefficient overflowed i64")
}

/// Polynomial in `v` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VPolynomial {
    coeffs: Vec<i64>,
}

impl VPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        VPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        VPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        VPolynomial::new(vec![c])
    }

    /// `c v^d`
    pub fn monomial(c: i64, d: usize) -> Self {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        VPolynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, d: usize) -> i64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    fn add_assign_scaled(&mut self, other: &VPolynomial, sign: i64, shift: usize) {
        if self.coeffs.len() < other.coeffs.len() + shift {
            self.coeffs.resize(other.coeffs.len() + shift, 0);
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            self.coeffs[i + shift] = checked(
                c.checked_mul(sign)
                    .and_then(|t| self.coeffs[i + shift].checked_add(t)),
            );
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, v: Ratio<i64>) -> Ratio<i64> {
        self.coeffs
            .iter()
            .rev()
            .fold(Ratio::from_integer(0), |acc, &c| {
                acc * v + Ratio::from_integer(c)
            })
    }
}

impl Add for &VPolynomial {
    type Output = VPolynomial;
    fn add(self, rhs: &VPolynomial) -> VPolynomial {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, 1, 0);
        out
    }
}

impl Sub for &VPolynomial {
    type Output = VPolynomial;
    fn sub(self, rhs: &VPolynomial) -> VPolynomial {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, -1, 0);
        out
    }
}

impl Neg for &VPolynomial {
    type Output = VPolynomial;
    fn neg(self) -> VPolynomial {
        VPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| checked(c.checked_neg()))
                .collect(),
        }
    }
}

impl Mul for &VPolynomial {
    type Output = VPolynomial;
    fn mul(self, rhs: &VPolynomial) -> VPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return VPolynomial::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] =
                    checked(a.checked_mul(*b).and_then(|t| coeffs[i + j].checked_add(t)));
            }
        }
        VPolynomial::new(coeffs)
    }
}

impl fmt::Display for VPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (d, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "v")?,
                (1, _) => write!(f, "{a}v")?,
                (_, 1) => write!(f, "v^{d}")?,
                _ => write!(f, "{a}v^{d}")?,
            }
        }
        Ok(())
    }
}

/// Element of `Z[v] ⊗ Z[P]`: a finite map from weights to nonzero
/// polynomials in `v`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupAlgebraElement {
    terms: BTreeMap<WeightVector, VPolynomial>,
}

/// A group-algebra element after substituting a rational value for `v`.
pub type RationalElement = BTreeMap<WeightVector, Ratio<i64>>;

impl GroupAlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(WeightVector::zero(rank))
    }

    /// `e^lam`
    pub fn monomial(lam: WeightVector) -> Self {
        Self::term(lam, VPolynomial::constant(1))
    }

    /// `p(v) e^lam`
    pub fn term(lam: WeightVector, p: VPolynomial) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(lam, p);
        }
        GroupAlgebraElement { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (WeightVector, VPolynomial)>>(iter: I) -> Self {
        let mut out = GroupAlgebraElement::zero();
        for (lam, p) in iter {
            out.add_term(lam, &p, 1, 0);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeightVector, &VPolynomial)> {
        self.terms.iter()
    }

    pub fn coeff(&self, lam: &WeightVector) -> VPolynomial {
        self.terms.get(lam).cloned().unwrap_or_default()
    }

    /// `self += sign * v^shift * p e^lam`
    fn add_term(&mut self, lam: WeightVector, p: &VPolynomial, sign: i64, shift: usize) {
        match self.terms.entry(lam) {
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign_scaled(p, sign, shift);
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                let mut q = VPolynomial::zero();
                q.add_assign_scaled(p, sign, shift);
                if !q.is_zero() {
                    e.insert(q);
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &GroupAlgebraElement) {
        for (lam, p) in &other.terms {
            self.add_term(lam.clone(), p, 1, 0);
        }
    }

    pub fn sub_assign(&mut self, other: &GroupAlgebraElement) {
        for (lam, p) in &other.terms {
            self.add_term(lam.clone(), p, -1, 0);
        }
    }

    pub fn scale_by_vpoly(&self, p: &VPolynomial) -> GroupAlgebraElement {
        GroupAlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(lam, q)| (lam.clone(), q * p))
                .filter(|(_, q)| !q.is_zero())
                .collect(),
        }
    }

    pub fn scale(&self, c: i64) -> GroupAlgebraElement {
        self.scale_by_vpoly(&VPolynomial::constant(c))
    }

    /// `self * (1 - v e^{-alpha})` with `alpha` given in weight coordinates.
    pub(crate) fn times_one_minus_v_exp_neg(&self, alpha_weight: &[i32]) -> GroupAlgebraElement {
        let mut out = self.clone();
        for (lam, p) in &self.terms {
            out.add_term(lam.add_scaled(alpha_weight, -1), p, -1, 1);
        }
        out
    }

    /// Action of a Weyl group element on weights; `v` is untouched.
    pub fn weyl_act(&self, w: &WeylElement) -> GroupAlgebraElement {
        GroupAlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(lam, p)| {
                    (
                        WeightVector::new(w.act_on_weight_coords(&lam.coords)),
                        p.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Substitutes `v := value`.
    pub fn specialize_v(&self, value: Ratio<i64>) -> RationalElement {
        self.terms
            .iter()
            .map(|(lam, p)| (lam.clone(), p.eval(value)))
            .filter(|(_, c)| *c != Ratio::from_integer(0))
            .collect()
    }

    /// Coefficient-wise check that the `v^0` part has no negative entries.
    pub fn constant_part_nonnegative(&self) -> bool {
        self.terms.values().all(|p| p.coeff(0) >= 0)
    }
}

impl Add for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn add(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn sub(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl Neg for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn neg(self) -> GroupAlgebraElement {
        self.scale(-1)
    }
}

impl Mul for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn mul(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = GroupAlgebraElement::zero();
        for (a, p) in &self.terms {
            for (b, q) in &rhs.terms {
                out.add_term(a.add(b), &(p * q), 1, 0);
            }
        }
        out
    }
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (lam, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})e^{:?}", lam.coords)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct SerializedTerm<'a> {
    vpoly: &'a [i64],
    weight: &'a [i32],
}

impl Serialize for GroupAlgebraElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (lam, p) in &self.terms {
            seq.serialize_element(&SerializedTerm {
                vpoly: p.coeffs(),
                weight: &lam.coords,
            })?;
        }
        seq.end()
    }
}

/// `1 - v e^{-alpha}`
pub fn one_minus_v_exp_neg(rs: &RootSystem, alpha: &Root) -> GroupAlgebraElement {
    let alpha_weight = rs.root_to_weight_coords(alpha);
    GroupAlgebraElement::one(rs.rank()).times_one_minus_v_exp_neg(&alpha_weight.coords)
}

/// Product of `1 - v e^{-alpha}` over the given roots.
pub fn product_one_minus_v_exp_neg<'a, I>(rs: &RootSystem, roots: I) -> GroupAlgebraElement
where
    I: IntoIterator<Item = &'a Root>,
{
    roots
        .into_iter()
        .fold(GroupAlgebraElement::one(rs.rank()), |acc, alpha| {
            acc.times_one_minus_v_exp_neg(&rs.root_to_weight_coords(alpha).coords)
        })
}

/// `∂_α` for any root of the system, given its weight and coroot vectors.
fn demazure_raw(
    alpha_weight: &[i32],
    coroot: &[i32],
    f: &GroupAlgebraElement,
) -> GroupAlgebraElement {
    let mut out = GroupAlgebraElement::zero();
    for (lam, p) in &f.terms {
        let k = dot(&lam.coords, coroot);
        if k >= 0 {
            for j in 0..=k {
                out.add_term(lam.add_scaled(alpha_weight, -j), p, 1, 0);
            }
        } else {
            for j in 1..-k {
                out.add_term(lam.add_scaled(alpha_weight, j), p, -1, 0);
            }
        }
    }
    out
}

/// Demazure operator `∂_α = (1 - e^{-α} s_α)/(1 - e^{-α})` for a positive root.
pub fn demazure(
    rs: &RootSystem,
    alpha: &Root,
    f: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement> {
    let data = rs.positive_root_data(alpha)?;
    Ok(demazure_raw(&data.weight, &data.coroot, f))
}

/// `∂_α` for an arbitrary root, positive or negative.
pub fn demazure_any_root(
    rs: &RootSystem,
    alpha: &Root,
    f: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement> {
    let data = rs.root_data(alpha)?;
    Ok(demazure_raw(&data.weight, &data.coroot, f))
}

/// Demazure atom operator `D_α = ∂_α - 1`.
pub fn atom_op(
    rs: &RootSystem,
    alpha: &Root,
    f: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement> {
    let mut out = demazure(rs, alpha, f)?;
    out.sub_assign(f);
    Ok(out)
}

/// Hecke operator `𝒯_α = (1 - v e^{-α}) ∂_α - 1` for a positive root.
pub fn t_op(rs: &RootSystem, alpha: &Root, f: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
    let data = rs.positive_root_data(alpha)?;
    Ok(t_raw(&data.weight, &data.coroot, f))
}

/// `𝒯_α` for an arbitrary root.
pub fn t_op_any_root(
    rs: &RootSystem,
    alpha: &Root,
    f: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement> {
    let data = rs.root_data(alpha)?;
    Ok(t_raw(&data.weight, &data.coroot, f))
}

fn t_raw(alpha_weight: &[i32], coroot: &[i32], f: &GroupAlgebraElement) -> GroupAlgebraElement {
    let mut out = demazure_raw(alpha_weight, coroot, f).times_one_minus_v_exp_neg(alpha_weight);
    out.sub_assign(f);
    out
}

/// Simple-root shorthands with 1-based index.
pub fn demazure_simple(rs: &RootSystem, i: usize, f: &GroupAlgebraElement) -> GroupAlgebraElement {
    demazure(rs, &rs.simple_root(i), f).expect("simple roots are positive")
}

pub fn atom_simple(rs: &RootSystem, i: usize, f: &GroupAlgebraElement) -> GroupAlgebraElement {
    atom_op(rs, &rs.simple_root(i), f).expect("simple roots are positive")
}

pub fn t_simple(rs: &RootSystem, i: usize, f: &GroupAlgebraElement) -> GroupAlgebraElement {
    t_op(rs, &rs.simple_root(i), f).expect("simple roots are positive")
}
