//! Whittaker functions, Demazure characters and atoms, and the coefficients
//! `c_{w,x}` in `𝒯_w = Σ_{x <= w} c_{w,x} D_x`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{ElemId, WeylGroup};
use crate::group_algebra::{
    atom_simple, demazure_simple, product_one_minus_v_exp_neg, t_op_any_root, t_simple,
    GroupAlgebraElement,
};
use crate::root_system::{RootSystem, WeightVector};
use crate::shellability::{beta_sequence, WordLabels};
use crate::weyl::{ReducedWord, WeylElement};

/// Which of the three simple-root operators to compose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    /// `∂_i`
    Demazure,
    /// `D_i = ∂_i - 1`
    Atom,
    /// `𝒯_i = (1 - v e^{-α_i}) ∂_i - 1`
    Hecke,
}

impl Operator {
    pub fn apply_simple(
        self,
        rs: &RootSystem,
        i: usize,
        f: &GroupAlgebraElement,
    ) -> GroupAlgebraElement {
        match self {
            Operator::Demazure => demazure_simple(rs, i, f),
            Operator::Atom => atom_simple(rs, i, f),
            Operator::Hecke => t_simple(rs, i, f),
        }
    }

    /// `O_{a_1} ... O_{a_n} f` for the word `a`.
    pub fn apply_word(
        self,
        rs: &RootSystem,
        word: &[usize],
        f: &GroupAlgebraElement,
    ) -> GroupAlgebraElement {
        word.iter()
            .rev()
            .fold(f.clone(), |acc, &i| self.apply_simple(rs, i, &acc))
    }

    /// `O_x f` for every group element, indexed by id.
    pub fn apply_all(self, g: &WeylGroup, f: &GroupAlgebraElement) -> Vec<GroupAlgebraElement> {
        let rs = g.root_system();
        let mut out: Vec<GroupAlgebraElement> = Vec::with_capacity(g.order());
        out.push(f.clone());
        for x in g.ids().skip(1) {
            let s = g.word(x)[0];
            let rest = g.lmul(s, x);
            let value = self.apply_simple(rs, s, &out[rest.idx()]);
            out.push(value);
        }
        out
    }
}

fn require_dominant(lam: &WeightVector) -> Result<()> {
    if lam.is_dominant() {
        Ok(())
    } else {
        Err(Error::NotDominant(lam.coords.clone()))
    }
}

/// `W_{w,λ} = 𝒯_w e^λ`.
pub fn whittaker_function(
    g: &WeylGroup,
    w: ElemId,
    lam: &WeightVector,
) -> Result<GroupAlgebraElement> {
    require_dominant(lam)?;
    Ok(Operator::Hecke.apply_word(
        g.root_system(),
        g.word(w),
        &GroupAlgebraElement::monomial(lam.clone()),
    ))
}

/// `∂_{w,λ} = ∂_w e^λ`.
pub fn demazure_character(
    g: &WeylGroup,
    w: ElemId,
    lam: &WeightVector,
) -> Result<GroupAlgebraElement> {
    require_dominant(lam)?;
    Ok(Operator::Demazure.apply_word(
        g.root_system(),
        g.word(w),
        &GroupAlgebraElement::monomial(lam.clone()),
    ))
}

/// `D_{w,λ} = D_w e^λ`.
pub fn demazure_atom(g: &WeylGroup, w: ElemId, lam: &WeightVector) -> Result<GroupAlgebraElement> {
    require_dominant(lam)?;
    Ok(Operator::Atom.apply_word(
        g.root_system(),
        g.word(w),
        &GroupAlgebraElement::monomial(lam.clone()),
    ))
}

/// `W̃_{w,λ} = Σ_{x <= w} W_{x,λ}`.
pub fn spherical_whittaker(
    g: &WeylGroup,
    w: ElemId,
    lam: &WeightVector,
) -> Result<GroupAlgebraElement> {
    require_dominant(lam)?;
    let all = Operator::Hecke.apply_all(g, &GroupAlgebraElement::monomial(lam.clone()));
    let mut out = GroupAlgebraElement::zero();
    for x in g.lower_interval(w) {
        out.add_assign(&all[x.idx()]);
    }
    Ok(out)
}

/// Coefficients attached to the lower interval of `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    pub w: ElemId,
    pub entries: BTreeMap<ElemId, GroupAlgebraElement>,
}

impl CoefficientTable {
    pub fn get(&self, x: ElemId) -> Option<&GroupAlgebraElement> {
        self.entries.get(&x)
    }

    /// `Σ_x entry_x * basis[x]`.
    pub fn expand(&self, basis: &[GroupAlgebraElement]) -> GroupAlgebraElement {
        let mut out = GroupAlgebraElement::zero();
        for (x, c) in &self.entries {
            out.add_assign(&(c * &basis[x.idx()]));
        }
        out
    }

    /// Elements strictly between `e` and `w` whose coefficient vanishes.
    pub fn vanishing(&self) -> Vec<ElemId> {
        self.entries
            .iter()
            .filter(|&(&x, c)| c.is_zero() && x != ElemId(0) && x != self.w)
            .map(|(&x, _)| x)
            .collect()
    }
}

/// `c_{w,x}` for all `x <= w`, grown along the suffixes of `word` with the
/// three-case induction for `sw > w`.
pub fn atom_coeffs(g: &WeylGroup, word: &ReducedWord) -> Result<CoefficientTable> {
    let rs = g.root_system();
    let (_, target) = g.reduced_word(word.letters())?;
    let mut w = g.identity();
    let mut table = BTreeMap::new();
    table.insert(w, GroupAlgebraElement::one(rs.rank()));
    for &s in word.letters().iter().rev() {
        let sw = g.lmul(s, w);
        let refl = WeylElement::simple_reflection(rs, s)?;
        let alpha = rs.root_to_weight_coords(&rs.simple_root(s));
        let factor_s =
            |f: &GroupAlgebraElement| f.weyl_act(&refl).times_one_minus_v_exp_neg(&alpha.coords);
        let mut next = BTreeMap::new();
        for x in g.lower_interval(sw) {
            let sx = g.lmul(s, x);
            let value = if g.leq(x, w) {
                let cx = &table[&x];
                let t = t_simple(rs, s, cx);
                if x < sx {
                    t
                } else {
                    &factor_s(&(&table[&sx] - cx)) + &t
                }
            } else {
                factor_s(&table[&sx])
            };
            next.insert(x, value);
        }
        table = next;
        w = sw;
    }
    debug_assert_eq!(w, target);
    for x in [g.identity(), w] {
        if table[&x].is_zero() {
            return Err(Error::Invariant(format!(
                "c_(w,x) vanishes at x = {:?}",
                g.word(x)
            )));
        }
    }
    Ok(CoefficientTable { w, entries: table })
}

/// Which reading of the shellability condition supplies the indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionForm {
    /// `lambda_set = reverse(lex_max_chain)`
    A,
    /// `lex_min_chain = reverse(lex_max_chain)`
    B,
}

/// Closed formula for `c_{w,x}` when the chosen condition holds for `word`.
pub fn closed_form_coeff(
    g: &WeylGroup,
    x: ElemId,
    word: &ReducedWord,
    form: ConditionForm,
) -> Result<GroupAlgebraElement> {
    let labels = WordLabels::compute(g, x, word)?;
    let flags = labels.flags();
    let indices = match form {
        ConditionForm::A if flags.i => &labels.lambda,
        ConditionForm::B if flags.ii => &labels.plus,
        _ => return Err(labels.error()),
    };
    Ok(closed_form_raw(g.root_system(), word.letters(), indices))
}

/// Evaluates the product formula for arbitrary increasing `indices`, without
/// checking any condition: right to left, `r := 𝒯_{β_i} r` at the indices
/// and `r := (1 - v e^{-β_i}) r` elsewhere, starting from `r = 1`.
pub fn closed_form_raw(rs: &RootSystem, word: &[usize], indices: &[usize]) -> GroupAlgebraElement {
    let beta = beta_sequence(rs, word, indices);
    let mut r = GroupAlgebraElement::one(rs.rank());
    for i in (1..=word.len()).rev() {
        let b = &beta[i - 1];
        r = if indices.contains(&i) {
            t_op_any_root(rs, b, &r).expect("beta is a root")
        } else {
            r.times_one_minus_v_exp_neg(&rs.root_to_weight_coords(b).coords)
        };
    }
    r
}

/// `c_{w,w}`: the product of `1 - v e^{-α}` over the inversion set of `w`.
pub fn diagonal_coeff(g: &WeylGroup, w: ElemId) -> GroupAlgebraElement {
    let rs = g.root_system();
    product_one_minus_v_exp_neg(rs, &g.element(w).inversion_set(rs))
}

/// `C_{w,x} = Σ_{x <= y <= w} (-1)^{l(y)-l(x)} c_{w,y}`.
pub fn char_coeffs(g: &WeylGroup, atoms: &CoefficientTable) -> CoefficientTable {
    let entries = atoms
        .entries
        .keys()
        .map(|&x| {
            let mut sum = GroupAlgebraElement::zero();
            for (&y, c) in atoms.entries.range(x..) {
                if g.leq(x, y) {
                    if (g.length(y) - g.length(x)).is_multiple_of(2) {
                        sum.add_assign(c);
                    } else {
                        sum.sub_assign(c);
                    }
                }
            }
            (x, sum)
        })
        .collect();
    CoefficientTable {
        w: atoms.w,
        entries,
    }
}

/// `c_{w,x} = Σ_{x <= y <= w} C_{w,y}`.
pub fn atoms_from_chars(g: &WeylGroup, chars: &CoefficientTable) -> CoefficientTable {
    let entries = chars
        .entries
        .keys()
        .map(|&x| {
            let mut sum = GroupAlgebraElement::zero();
            for (&y, c) in chars.entries.range(x..) {
                if g.leq(x, y) {
                    sum.add_assign(c);
                }
            }
            (x, sum)
        })
        .collect();
    CoefficientTable {
        w: chars.w,
        entries,
    }
}

/// `C̃_{w,x} = Σ_{x <= y <= w} C_{y,x}`, using canonical words for every `y`.
pub fn tilde_coeffs(g: &WeylGroup, w: ElemId) -> Result<CoefficientTable> {
    let mut entries: BTreeMap<ElemId, GroupAlgebraElement> = BTreeMap::new();
    for y in g.lower_interval(w) {
        let chars = char_coeffs(g, &atom_coeffs(g, &g.canonical_word(y))?);
        for (x, c) in chars.entries {
            entries.entry(x).or_default().add_assign(&c);
        }
    }
    Ok(CoefficientTable { w, entries })
}

/// Compares `W̃_{w∘,λ}` with `Π_{α>0}(1 - v e^{-α}) ∂_{w∘} e^λ`.
pub fn casselman_shalika_check(g: &WeylGroup, lam: &WeightVector) -> Result<bool> {
    let rs = g.root_system();
    let lhs = spherical_whittaker(g, g.longest(), lam)?;
    let rhs = &product_one_minus_v_exp_neg(rs, rs.positive_roots())
        * &demazure_character(g, g.longest(), lam)?;
    Ok(lhs == rhs)
}

/// `rho` followed by `count - 1` dominant weights with coordinates in `[0, 3]`.
pub fn test_weights(rank: usize, count: usize, seed: u64) -> Vec<WeightVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![WeightVector::new(vec![1; rank])];
    while out.len() < count {
        out.push(WeightVector::new(
            (0..rank).map(|_| rng.gen_range(0..=3)).collect(),
        ));
    }
    out
}
