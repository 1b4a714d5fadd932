//! Symbolic model of the glued quantum two-sphere over the free isometry
//! algebra.
//!
//! The algebra is generated by an isometry `s` (with `s* s = 1` but
//! `s s* != 1`) and two odd elements `phi1`, `phi2`, with no further
//! relations: every computation below is a consequence of the defining
//! symbol images and the grading, so the free model is a conservative
//! verifier. Elements of the sphere algebra are triples of elements of
//! `T<phi> (x) C(Z2)`, glued along symbol-map images into commutative
//! targets. Both construction methods for a strong connection are
//! implemented and their outputs are verified exactly in normal form.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::linalg::{Matrix, Vector};
use crate::scalar::{int, rat, Scalar};
use crate::{Error, Result};

/// Generators of the free isometry algebra with the two auxiliary
/// elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    S,
    SStar,
    Phi1,
    Phi2,
}

impl Gen {
    pub fn token(self) -> &'static str {
        match self {
            Gen::S => "s",
            Gen::SStar => "s*",
            Gen::Phi1 => "phi1",
            Gen::Phi2 => "phi2",
        }
    }

    pub fn from_token(t: &str) -> Result<Self> {
        match t {
            "s" => Ok(Gen::S),
            "s*" => Ok(Gen::SStar),
            "phi1" => Ok(Gen::Phi1),
            "phi2" => Ok(Gen::Phi2),
            other => Err(Error::Invalid(format!("unknown generator {other:?}"))),
        }
    }
}

/// A monomial: a word over the generators, kept in normal form (no
/// adjacent `s* s` factor). The grading is the word length mod 2.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Gen>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: Gen) -> Self {
        Word(vec![g])
    }

    /// Builds a word from letters, reducing to normal form.
    pub fn from_letters(letters: &[Gen]) -> Self {
        normalize(letters.to_vec())
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u8 {
        (self.0.len() % 2) as u8
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        normalize(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in &self.0 {
            if !first {
                f.write_char(' ')?;
            }
            f.write_str(g.token())?;
            first = false;
        }
        Ok(())
    }
}

/// Rewrites `s* s -> 1` to a fixpoint. Redexes never overlap, so the
/// scan order does not matter; confluence is property-tested.
fn normalize(mut letters: Vec<Gen>) -> Word {
    loop {
        let Some(pos) = letters.windows(2).position(|w| w == [Gen::SStar, Gen::S]) else {
            return Word(letters);
        };
        letters.drain(pos..pos + 2);
    }
}

/// Noncommutative polynomial over the generators: a finite sum of
/// normal-form words with nonzero rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly::default()
    }

    pub fn one() -> Self {
        NcPoly::from_word(Word::one())
    }

    pub fn from_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, Scalar::one());
        NcPoly { terms }
    }

    pub fn gen(g: Gen) -> Self {
        NcPoly::from_word(Word::gen(g))
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(Word::one(), c);
        p
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            // look up again to remove; borrow rules prevent removing via entry
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> NcPoly {
        NcPoly::zero().sub(self)
    }

    pub fn scale(&self, c: &Scalar) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// `Some(d)` when every word has length of parity `d`.
    pub fn homogeneous_degree(&self) -> Option<u8> {
        let mut deg = None;
        for w in self.terms.keys() {
            match deg {
                None => deg = Some(w.degree()),
                Some(d) if d != w.degree() => return None,
                _ => {}
            }
        }
        deg.or(Some(0))
    }

    /// True when no word mentions `s` or `s*`.
    pub fn is_phi_polynomial(&self) -> bool {
        self.terms.keys().all(|w| {
            w.letters()
                .iter()
                .all(|g| matches!(g, Gen::Phi1 | Gen::Phi2))
        })
    }
}

/// `1 - p^2`, a combination that recurs in every connection formula here.
pub fn one_minus_square(p: &NcPoly) -> NcPoly {
    NcPoly::one().sub(&p.mul(p))
}

/// An element of `T<phi> (x) C(Z2)` with the group-like part expanded on
/// the basis `{1, u}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Tz2 {
    /// Coefficient of `1`.
    pub even: NcPoly,
    /// Coefficient of `u`.
    pub odd: NcPoly,
}

impl Tz2 {
    pub fn zero() -> Self {
        Tz2::default()
    }

    pub fn one() -> Self {
        Tz2 {
            even: NcPoly::one(),
            odd: NcPoly::zero(),
        }
    }

    /// `p (x) 1`.
    pub fn of(p: NcPoly) -> Self {
        Tz2 {
            even: p,
            odd: NcPoly::zero(),
        }
    }

    /// `p (x) u`.
    pub fn of_u(p: NcPoly) -> Self {
        Tz2 {
            even: NcPoly::zero(),
            odd: p,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn add(&self, other: &Tz2) -> Tz2 {
        Tz2 {
            even: self.even.add(&other.even),
            odd: self.odd.add(&other.odd),
        }
    }

    pub fn sub(&self, other: &Tz2) -> Tz2 {
        Tz2 {
            even: self.even.sub(&other.even),
            odd: self.odd.sub(&other.odd),
        }
    }

    /// Product with `u^2 = 1` on the group-like factor.
    pub fn mul(&self, other: &Tz2) -> Tz2 {
        Tz2 {
            even: self.even.mul(&other.even).add(&self.odd.mul(&other.odd)),
            odd: self.even.mul(&other.odd).add(&self.odd.mul(&other.even)),
        }
    }

    /// Degree under the diagonal coaction: word parity plus the
    /// group-like exponent. `Some(d)` when homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u8> {
        match (self.even.is_zero(), self.odd.is_zero()) {
            (true, true) => Some(0),
            (false, true) => self.even.homogeneous_degree(),
            (true, false) => self.odd.homogeneous_degree().map(|d| (d + 1) % 2),
            (false, false) => {
                let de = self.even.homogeneous_degree()?;
                let do_ = self.odd.homogeneous_degree()?;
                if (do_ + 1) % 2 == de {
                    Some(de)
                } else {
                    None
                }
            }
        }
    }
}

/// An element of the sphere algebra: one `Tz2` per pullback component.
pub type SphereElem = [Tz2; 3];

pub fn sphere_zero() -> SphereElem {
    [Tz2::zero(), Tz2::zero(), Tz2::zero()]
}

pub fn sphere_one() -> SphereElem {
    [Tz2::one(), Tz2::one(), Tz2::one()]
}

pub fn sphere_add(a: &SphereElem, b: &SphereElem) -> SphereElem {
    [a[0].add(&b[0]), a[1].add(&b[1]), a[2].add(&b[2])]
}

pub fn sphere_sub(a: &SphereElem, b: &SphereElem) -> SphereElem {
    [a[0].sub(&b[0]), a[1].sub(&b[1]), a[2].sub(&b[2])]
}

pub fn sphere_mul(a: &SphereElem, b: &SphereElem) -> SphereElem {
    [a[0].mul(&b[0]), a[1].mul(&b[1]), a[2].mul(&b[2])]
}

pub fn sphere_is_zero(a: &SphereElem) -> bool {
    a.iter().all(Tz2::is_zero)
}

/// Monomial of a commutative gluing target `C(Z2) (x) C(I) (x) C(Z2)` (in
/// one of its slot orders): a power of the interval coordinate and two
/// group-like exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GlueMono {
    pub t: usize,
    pub x: u8,
    pub y: u8,
}

/// The overlap isomorphism exchanging the two group-like slots of a
/// gluing target; an involution.
pub fn outer_swap(m: GlueMono) -> GlueMono {
    GlueMono {
        t: m.t,
        x: m.y,
        y: m.x,
    }
}

/// Element of a commutative gluing target.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GlueElem {
    terms: BTreeMap<GlueMono, Scalar>,
}

impl GlueElem {
    fn add_term(&mut self, m: GlueMono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, other: &GlueElem) -> GlueElem {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

/// Image of a `phi`-polynomial under the first symbol map:
/// `phi1 -> u (x) 1`, `phi2 -> 1 (x) t`, landing in
/// `C(Z2) (x) C(I)` encoded as `(z2, t)`.
fn sigma1(p: &NcPoly) -> Result<Vec<((u8, usize), Scalar)>> {
    sigma_images(p, (1, 0), (0, 1))
}

/// Image under the second symbol map: `phi1 -> t (x) 1`,
/// `phi2 -> 1 (x) u`, encoded as `(z2, t)` with the group-like exponent in
/// the second spatial slot.
fn sigma2(p: &NcPoly) -> Result<Vec<((u8, usize), Scalar)>> {
    sigma_images(p, (0, 1), (1, 0))
}

fn sigma_images(
    p: &NcPoly,
    phi1_img: (u8, usize),
    phi2_img: (u8, usize),
) -> Result<Vec<((u8, usize), Scalar)>> {
    if !p.is_phi_polynomial() {
        return Err(Error::OutOfRange(
            "symbol images are only encoded on the phi-subalgebra".into(),
        ));
    }
    let mut out: BTreeMap<(u8, usize), Scalar> = BTreeMap::new();
    for (w, c) in p.terms() {
        let mut z2 = 0u8;
        let mut t = 0usize;
        for g in w.letters() {
            let (dz, dt) = match g {
                Gen::Phi1 => phi1_img,
                Gen::Phi2 => phi2_img,
                _ => unreachable!("checked phi polynomial"),
            };
            z2 = (z2 + dz) % 2;
            t += dt;
        }
        let entry = out.entry((z2, t)).or_insert_with(Scalar::zero);
        *entry += c.clone();
    }
    Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

/// The pairs of maps glued over each target, both sides evaluated into
/// the shared slot encoding, so a tuple is in the pullback exactly when
/// all three differences vanish.
pub fn gluing_mismatch(elem: &SphereElem) -> Result<[GlueElem; 3]> {
    // pair (0, 1): sigma1 on component 0 versus the slot swap of sigma1
    // on component 1, in slots (z2_sigma, t, z2_group)
    let mut d01 = GlueElem::default();
    for (sign, (comp, swap)) in [(1i64, (0usize, false)), (-1, (1usize, true))] {
        accumulate_pair(&mut d01, &elem[comp], sign, swap)?;
    }
    // pair (0, 2): sigma2 on component 0 versus swapped sigma1 on
    // component 2, in slots (t, z2_sigma, z2_group)
    let mut d02 = GlueElem::default();
    accumulate_sigma2_side(&mut d02, &elem[0], 1)?;
    accumulate_phi02_side(&mut d02, &elem[2], -1)?;
    // pair (1, 2): sigma2 on component 1 versus swapped sigma2 on
    // component 2
    let mut d12 = GlueElem::default();
    accumulate_sigma2_side(&mut d12, &elem[1], 1)?;
    accumulate_phi12_side(&mut d12, &elem[2], -1)?;
    Ok([d01, d02, d12])
}

fn accumulate_pair(acc: &mut GlueElem, q: &Tz2, sign: i64, swap: bool) -> Result<()> {
    // q = even (x) 1 + odd (x) u; sigma1 gives (z2, t); the group factor
    // contributes the third slot exponent
    for (eps, poly) in [(0u8, &q.even), (1u8, &q.odd)] {
        for ((z2, t), c) in sigma1(poly)? {
            let mono = GlueMono { t, x: z2, y: eps };
            let mono = if swap { outer_swap(mono) } else { mono };
            acc.add_term(mono, c * int(sign));
        }
    }
    Ok(())
}

fn accumulate_sigma2_side(acc: &mut GlueElem, q: &Tz2, sign: i64) -> Result<()> {
    // sigma2 (x) id in slots (t, z2_sigma, z2_group) -> x = sigma slot,
    // y = group slot
    for (eps, poly) in [(0u8, &q.even), (1u8, &q.odd)] {
        for ((z2, t), c) in sigma2(poly)? {
            acc.add_term(GlueMono { t, x: z2, y: eps }, c * int(sign));
        }
    }
    Ok(())
}

fn accumulate_phi02_side(acc: &mut GlueElem, q: &Tz2, sign: i64) -> Result<()> {
    // (sigma1 (x) id)(q) in slots (z2, t, eps), then the overlap
    // isomorphism h (x) p (x) k -> p (x) k (x) h: result (t, eps, z2)
    for (eps, poly) in [(0u8, &q.even), (1u8, &q.odd)] {
        for ((z2, t), c) in sigma1(poly)? {
            acc.add_term(GlueMono { t, x: eps, y: z2 }, c * int(sign));
        }
    }
    Ok(())
}

fn accumulate_phi12_side(acc: &mut GlueElem, q: &Tz2, sign: i64) -> Result<()> {
    // (sigma2 (x) id)(q) in slots (t, z2, eps), then
    // p (x) h (x) k -> p (x) k (x) h: result (t, eps, z2)
    for (eps, poly) in [(0u8, &q.even), (1u8, &q.odd)] {
        for ((z2, t), c) in sigma2(poly)? {
            acc.add_term(GlueMono { t, x: eps, y: z2 }, c * int(sign));
        }
    }
    Ok(())
}

/// True when the tuple satisfies all three gluing constraints.
pub fn in_pullback(elem: &SphereElem) -> Result<bool> {
    Ok(gluing_mismatch(elem)?.iter().all(GlueElem::is_zero))
}

/// A symbolic strong-connection candidate: the value at the group-like
/// generator `u` as a list of pure tensors; the value at `1` is `1 (x) 1`
/// by unitality and linearity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicConnection {
    pub terms: Vec<(SphereElem, SphereElem)>,
}

/// The three standard homogeneous lifts of `1 (x) u` used by both
/// methods (`gamma_i` has `1 (x) u` in slot `i` and the auxiliary
/// elements elsewhere).
pub fn gamma(i: usize) -> SphereElem {
    let phi1 = Tz2::of(NcPoly::gen(Gen::Phi1));
    let phi2 = Tz2::of(NcPoly::gen(Gen::Phi2));
    let one_u = Tz2::of_u(NcPoly::one());
    match i {
        0 => [one_u, phi1.clone(), phi1],
        1 => [phi1, one_u, phi2],
        2 => [phi2.clone(), phi2, one_u],
        _ => panic!("three components"),
    }
}

const EXPECT_GAMMA_IN_PULLBACK: &str = "gamma lifts satisfy the gluing constraints";

/// Strong connection via iterated two-piece gluing.
///
/// First the pieces 0 and 1 are glued over their shared target (transfer
/// values `phi1 (x) 1` both ways), then piece 2 is glued against that
/// fiber product (transfer values built from `phi2` and the intermediate
/// legs). Every transfer value is verified against the gluing constraints
/// and the grading before use. The output is flattened to three
/// components and returned in normal form together with the intermediate
/// two-piece connection.
pub fn method_one() -> Result<(MethodOneIntermediate, SymbolicConnection)> {
    let phi1 = Tz2::of(NcPoly::gen(Gen::Phi1));
    let phi2 = Tz2::of(NcPoly::gen(Gen::Phi2));
    let one_u = Tz2::of_u(NcPoly::one());

    // stage 1: pieces 0 and 1, l_i(u) = (1 (x) u) (x) (1 (x) u),
    // transfers f(1 (x) u) = phi1 (x) 1 in both directions
    let ell_first = vec![(vec![one_u.clone()], vec![one_u.clone()])];
    let transfer_a = vec![(vec![one_u.clone()], vec![phi1.clone()])];
    let transfer_b = transfer_a.clone();
    // a transfer value is admissible when the joint tuple meets the
    // gluing constraint of the bridged pair and stays homogeneous odd
    verify_transfer_tuple(&[one_u.clone(), phi1.clone(), Tz2::zero()], 0)?;
    verify_transfer_tuple(&[phi1.clone(), one_u.clone(), Tz2::zero()], 0)?;
    let stage1 = glue_two_symbolic(&ell_first, &ell_first, &transfer_a, &transfer_b);

    // stage 2: piece 2 against the fiber product of 0 and 1
    let ell_piece2 = vec![(vec![one_u.clone()], vec![one_u.clone()])];
    let f2_to_01 = vec![(vec![one_u.clone()], vec![phi2.clone(), phi2.clone()])];
    // transfers of the stage-1 second legs back into piece 2
    let f01_to_2 = vec![
        (vec![one_u.clone(), phi1.clone()], vec![phi1.clone()]),
        (vec![phi1.clone(), one_u.clone()], vec![phi2.clone()]),
    ];
    for tuple in [
        [phi2.clone(), phi2.clone(), one_u.clone()],
        [one_u.clone(), phi1.clone(), phi1.clone()],
        [phi1.clone(), one_u.clone(), phi2.clone()],
    ] {
        verify_transfer_tuple(&tuple, 1)?;
        verify_transfer_tuple(&tuple, 2)?;
    }
    let glued = glue_two_symbolic(&ell_piece2, &stage1, &f2_to_01, &f01_to_2);

    // flatten (component 2, components (0, 1)) to ascending order
    let terms = glued
        .into_iter()
        .map(|(l, r)| (flatten_2_01(&l), flatten_2_01(&r)))
        .collect();
    let intermediate = MethodOneIntermediate {
        two_piece: SymbolicConnectionPair {
            terms: stage1_pairs(&stage1),
        },
    };
    Ok((intermediate, SymbolicConnection { terms }))
}

/// Checks that a tuple satisfies the gluing constraint of one pair
/// (0 = pair (0,1), 1 = pair (0,2), 2 = pair (1,2)) and that its entries
/// are homogeneous of odd degree.
fn verify_transfer_tuple(tuple: &SphereElem, pair: usize) -> Result<()> {
    let mismatch = gluing_mismatch(tuple)?;
    if !mismatch[pair].is_zero() {
        return Err(Error::ConnectionInvalid(
            "transfer value violates its gluing equation".into(),
        ));
    }
    for tz in tuple {
        if !tz.is_zero() && tz.homogeneous_degree() != Some(1) {
            return Err(Error::ConnectionInvalid(
                "transfer value is not homogeneous of odd degree".into(),
            ));
        }
    }
    Ok(())
}

/// The intermediate two-piece connection of the first method.
pub struct MethodOneIntermediate {
    pub two_piece: SymbolicConnectionPair,
}

/// A two-component symbolic connection (the fiber product of the first
/// two pieces).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicConnectionPair {
    pub terms: Vec<([Tz2; 2], [Tz2; 2])>,
}

fn stage1_pairs(stage1: &[(Vec<Tz2>, Vec<Tz2>)]) -> Vec<([Tz2; 2], [Tz2; 2])> {
    stage1
        .iter()
        .map(|(l, r)| ([l[0].clone(), l[1].clone()], [r[0].clone(), r[1].clone()]))
        .collect()
}

fn flatten_2_01(parts: &[Tz2]) -> SphereElem {
    // parts = [piece2, comp0, comp1] -> [comp0, comp1, comp2]
    [parts[1].clone(), parts[2].clone(), parts[0].clone()]
}

/// The group-like-generator instance of the two-piece gluing formula:
/// given term lists of the piece connections at `u` and transfer tables
/// on the occurring legs, produce the glued term list at `u` over the
/// concatenated component list (first piece's components, then the
/// second's).
fn glue_two_symbolic(
    ell_a: &[(Vec<Tz2>, Vec<Tz2>)],
    ell_b: &[(Vec<Tz2>, Vec<Tz2>)],
    f_ab: &[(Vec<Tz2>, Vec<Tz2>)],
    f_ba: &[(Vec<Tz2>, Vec<Tz2>)],
) -> Vec<(Vec<Tz2>, Vec<Tz2>)> {
    let lookup = |table: &[(Vec<Tz2>, Vec<Tz2>)], x: &[Tz2]| -> Vec<Tz2> {
        table
            .iter()
            .find(|(k, _)| k.as_slice() == x)
            .map(|(_, v)| v.clone())
            .expect("transfer table covers every occurring leg")
    };
    let b_width = ell_b[0].0.len();
    let mut out = Vec::new();
    // first block: (x, f(x)) (x) (y, f(y))
    for (x, y) in ell_a {
        let fx = lookup(f_ab, x);
        let fy = lookup(f_ab, y);
        out.push((merge(x, &fx), merge(y, &fy)));
    }
    // correction block: (0, (1 - f(x) f(y)) w) (x) (f'(z), z)
    let mut defect = vec![Tz2::one(); b_width];
    for (x, y) in ell_a {
        let fx = lookup(f_ab, x);
        let fy = lookup(f_ab, y);
        for (d, (a, b)) in defect.iter_mut().zip(fx.iter().zip(&fy)) {
            *d = d.sub(&a.mul(b));
        }
    }
    if defect.iter().any(|d| !d.is_zero()) {
        let a_width = ell_a[0].0.len();
        for (w, z) in ell_b {
            let left_second: Vec<Tz2> = defect.iter().zip(w).map(|(d, wi)| d.mul(wi)).collect();
            let left = merge(&vec![Tz2::zero(); a_width], &left_second);
            let fz = lookup(f_ba, z);
            let right = merge(&fz, z);
            out.push((left, right));
        }
    }
    out
}

fn merge(a: &[Tz2], b: &[Tz2]) -> Vec<Tz2> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

/// Strong connection via the piecewise synthesis formula specialized to
/// the group-like generator: `l(u) = sum_i gamma_i (x) gamma_i T_{i+1}(u)`
/// with `T_{i+1}(u) = prod_{j>i} (1 - gamma_j^2)`.
pub fn method_two() -> SymbolicConnection {
    let gammas: Vec<SphereElem> = (0..3).map(gamma).collect();
    for g in &gammas {
        assert!(
            in_pullback(g).expect("phi tuples"),
            "{EXPECT_GAMMA_IN_PULLBACK}"
        );
    }
    let mut terms = Vec::new();
    for i in 0..3 {
        let mut tail = sphere_one();
        for g in gammas.iter().skip(i + 1) {
            tail = sphere_mul(&tail, &sphere_sub(&sphere_one(), &sphere_mul(g, g)));
        }
        let left = gammas[i].clone();
        let right = sphere_mul(&gammas[i], &tail);
        if !sphere_is_zero(&right) {
            terms.push((left, right));
        }
    }
    SymbolicConnection { terms }
}

/// Symbolic telescoping product `T_i(h)` for `h` in `{1, u}`; `theta_i`
/// vanishes at the unit, so every `T_i(1)` with `i <= n` vanishes.
pub fn telescope(i: usize, at_u: bool) -> SphereElem {
    let gammas: Vec<SphereElem> = (0..3).map(gamma).collect();
    if !at_u {
        // theta_j(1) = 0, so the product is zero unless it is empty
        return if i >= 3 { sphere_one() } else { sphere_zero() };
    }
    let mut acc = sphere_one();
    for g in gammas.iter().skip(i).take(3 - i.min(3)) {
        acc = sphere_mul(&acc, &sphere_sub(&sphere_one(), &sphere_mul(g, g)));
    }
    acc
}

/// Report of the symbolic axiom verification.
#[derive(Clone, Debug)]
pub struct SymbolicReport {
    /// Residual of the collapse identity per component.
    pub collapse_residual: [Tz2; 3],
    /// Whether every leg of every term is homogeneous of odd degree.
    pub legs_homogeneous_odd: bool,
    /// Whether every term's legs satisfy the gluing constraints.
    pub legs_in_pullback: bool,
}

impl SymbolicReport {
    pub fn pass(&self) -> bool {
        self.collapse_residual.iter().all(Tz2::is_zero)
            && self.legs_homogeneous_odd
            && self.legs_in_pullback
    }
}

/// Verifies a symbolic connection exactly: unitality is structural
/// (`l(1) = 1 (x) 1`), the collapse at `u` must equal the unit tuple
/// componentwise in normal form, and both colinearities reduce to every
/// leg being homogeneous of degree one under the diagonal grading.
pub fn verify_symbolic(ell: &SymbolicConnection) -> Result<SymbolicReport> {
    let mut collapse = sphere_sub(&sphere_zero(), &sphere_one());
    for (l, r) in &ell.terms {
        collapse = sphere_add(&collapse, &sphere_mul(l, r));
    }
    let mut homogeneous = true;
    let mut membership = true;
    for (l, r) in &ell.terms {
        for leg in [l, r] {
            for comp in leg.iter() {
                match comp.homogeneous_degree() {
                    Some(1) => {}
                    Some(0) if comp.is_zero() => {}
                    _ => homogeneous = false,
                }
            }
            if !in_pullback(leg)? {
                membership = false;
            }
        }
    }
    Ok(SymbolicReport {
        collapse_residual: collapse,
        legs_homogeneous_odd: homogeneous,
        legs_in_pullback: membership,
    })
}

/// Rank test over the free word basis: both leg families of the term list
/// must be linearly independent.
pub fn legs_independent(ell: &SymbolicConnection) -> bool {
    let left: Vec<&SphereElem> = ell.terms.iter().map(|(l, _)| l).collect();
    let right: Vec<&SphereElem> = ell.terms.iter().map(|(_, r)| r).collect();
    family_independent(&left) && family_independent(&right)
}

fn family_independent(family: &[&SphereElem]) -> bool {
    // coordinates: (component, group exponent, word) -> column index
    let mut columns: BTreeMap<(usize, u8, Word), usize> = BTreeMap::new();
    for elem in family {
        for (comp, tz) in elem.iter().enumerate() {
            for (eps, poly) in [(0u8, &tz.even), (1u8, &tz.odd)] {
                for (w, _) in poly.terms() {
                    let next = columns.len();
                    columns.entry((comp, eps, w.clone())).or_insert(next);
                }
            }
        }
    }
    let mut rows = Vec::new();
    for elem in family {
        let mut row = Vector::zero(columns.len());
        for (comp, tz) in elem.iter().enumerate() {
            for (eps, poly) in [(0u8, &tz.even), (1u8, &tz.odd)] {
                for (w, c) in poly.terms() {
                    row.set(columns[&(comp, eps, w.clone())], c.clone());
                }
            }
        }
        rows.push(row);
    }
    Matrix::from_rows(&rows).rank() == family.len()
}

/// The projector `p[i][j] = r_i l_j` of a symbolic connection; entries
/// are sphere elements, idempotency and degree-zero entries are verified
/// in normal form.
#[derive(Clone, Debug)]
pub struct SymbolicProjector {
    pub size: usize,
    pub entries: Vec<Vec<SphereElem>>,
    pub idempotent: bool,
    pub entries_degree_zero: bool,
}

pub fn projector(ell: &SymbolicConnection) -> Result<SymbolicProjector> {
    if !legs_independent(ell) {
        return Err(Error::DependentLegs);
    }
    let n = ell.terms.len();
    let mut entries = vec![vec![sphere_zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            entries[i][j] = sphere_mul(&ell.terms[i].1, &ell.terms[j].0);
        }
    }
    let mut idempotent = true;
    for i in 0..n {
        for j in 0..n {
            let mut acc = sphere_zero();
            for k in 0..n {
                acc = sphere_add(&acc, &sphere_mul(&entries[i][k], &entries[k][j]));
            }
            if acc != entries[i][j] {
                idempotent = false;
            }
        }
    }
    let entries_degree_zero = entries.iter().flatten().all(|e| {
        e.iter().all(|tz| match tz.homogeneous_degree() {
            Some(0) => true,
            _ => tz.is_zero(),
        })
    });
    Ok(SymbolicProjector {
        size: n,
        entries,
        idempotent,
        entries_degree_zero,
    })
}

/// Truncated shift representation: `s` acts as the right shift on the
/// basis `|0>, .., |cutoff-1>` (the top vector truncates to zero), `s*`
/// as the left shift, `phi1` and `phi2` as zero (only the isometry part
/// is represented).
pub struct ShiftRepresentation {
    pub cutoff: usize,
    pub shift: Matrix,
    pub coshift: Matrix,
}

impl ShiftRepresentation {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 4 {
            return Err(Error::CutoffTooSmall(4));
        }
        let mut shift = Matrix::zero(cutoff, cutoff);
        let mut coshift = Matrix::zero(cutoff, cutoff);
        for m in 0..cutoff - 1 {
            shift.set(m + 1, m, int(1));
            coshift.set(m, m + 1, int(1));
        }
        Ok(ShiftRepresentation {
            cutoff,
            shift,
            coshift,
        })
    }

    /// Matrix of a polynomial in `s`, `s*` (normal form first, so the
    /// isometry relation is already applied). Errors on `phi` letters.
    pub fn represent(&self, p: &NcPoly) -> Result<Matrix> {
        let mut out = Matrix::zero(self.cutoff, self.cutoff);
        for (w, c) in p.terms() {
            let mut m = Matrix::identity(self.cutoff);
            // letters act on the right of the ket, so apply right-to-left
            for g in w.letters().iter().rev() {
                let factor = match g {
                    Gen::S => &self.shift,
                    Gen::SStar => &self.coshift,
                    _ => {
                        return Err(Error::OutOfRange(
                            "only the isometry part is represented".into(),
                        ))
                    }
                };
                m = factor.mul(&m);
            }
            out = out.add(&m.scale(c));
        }
        Ok(out)
    }

    /// The deformation element
    /// `E_n = s (s^n s*^n - s^(n+2) s*^(n+2))` as a polynomial.
    pub fn deformation(n: usize) -> NcPoly {
        let s = NcPoly::gen(Gen::S);
        let sstar = NcPoly::gen(Gen::SStar);
        let pow = |p: &NcPoly, k: usize| {
            let mut acc = NcPoly::one();
            for _ in 0..k {
                acc = acc.mul(p);
            }
            acc
        };
        let inner = pow(&s, n)
            .mul(&pow(&sstar, n))
            .sub(&pow(&s, n + 2).mul(&pow(&sstar, n + 2)));
        s.mul(&inner)
    }
}

/// Report of the shift-representation checks at a given cutoff.
#[derive(Clone, Debug)]
pub struct ShiftReport {
    pub cutoff: usize,
    /// `R(s* s) = id` on all basis vectors (the isometry relation is a
    /// rewrite, so this is the identity of the normal form).
    pub isometry_identity: bool,
    /// `R(s*) R(s) = id` away from the truncation edge.
    pub matrix_isometry_away_from_edge: bool,
    /// `R(s s*) != id`: the representation refuses to collapse `s s*`.
    pub coisometry_distinct: bool,
    /// `R(E_n^2)|m> = delta_(m,n) |n+2>` for all `m, n <= cutoff - 3`.
    pub deformation_identity: bool,
}

impl ShiftReport {
    pub fn pass(&self) -> bool {
        self.isometry_identity
            && self.matrix_isometry_away_from_edge
            && self.coisometry_distinct
            && self.deformation_identity
    }
}

/// Verifies the shift-representation identities at the given cutoff.
pub fn verify_shift(cutoff: usize) -> Result<ShiftReport> {
    let rep = ShiftRepresentation::new(cutoff)?;
    let s = NcPoly::gen(Gen::S);
    let sstar = NcPoly::gen(Gen::SStar);

    let isometry_identity = rep.represent(&sstar.mul(&s))? == Matrix::identity(cutoff);
    let prod = rep.coshift.mul(&rep.shift);
    let matrix_isometry_away_from_edge =
        (0..cutoff - 1).all(|m| prod.col(m) == Vector::unit(cutoff, m));
    let coisometry_distinct = rep.represent(&s.mul(&sstar))? != Matrix::identity(cutoff);

    let mut deformation_identity = true;
    let bound = cutoff - 3;
    for n in 0..=bound {
        let en = ShiftRepresentation::deformation(n);
        let sq = rep.represent(&en.mul(&en))?;
        for m in 0..=bound {
            let expected = if m == n {
                Vector::unit(cutoff, n + 2)
            } else {
                Vector::zero(cutoff)
            };
            if sq.mul_vec(&Vector::unit(cutoff, m)) != expected {
                deformation_identity = false;
            }
        }
    }
    Ok(ShiftReport {
        cutoff,
        isometry_identity,
        matrix_isometry_away_from_edge,
        coisometry_distinct,
        deformation_identity,
    })
}

/// Canonical JSON serialization of a polynomial: a sorted term list of
/// `{"word": .., "coeff": ..}` objects. Deterministic because terms are
/// kept in a sorted map.
pub fn ncpoly_to_json(p: &NcPoly) -> String {
    let terms: Vec<String> = p
        .terms()
        .map(|(w, c)| {
            format!(
                "{{\"word\":\"{}\",\"coeff\":\"{}\"}}",
                w,
                crate::scalar::format(c)
            )
        })
        .collect();
    format!("[{}]", terms.join(","))
}

/// Canonical JSON of a `T<phi> (x) C(Z2)` element.
pub fn tz2_to_json(t: &Tz2) -> String {
    format!(
        "{{\"one\":{},\"u\":{}}}",
        ncpoly_to_json(&t.even),
        ncpoly_to_json(&t.odd)
    )
}

/// Canonical JSON of a sphere element (one object per component).
pub fn sphere_to_json(e: &SphereElem) -> String {
    let comps: Vec<String> = e.iter().map(tz2_to_json).collect();
    format!("[{}]", comps.join(","))
}

/// Canonical JSON of a symbolic connection: the term list of its value at
/// the group-like generator.
pub fn connection_to_json(c: &SymbolicConnection) -> String {
    let terms: Vec<String> = c
        .terms
        .iter()
        .map(|(l, r)| {
            format!(
                "{{\"left\":{},\"right\":{}}}",
                sphere_to_json(l),
                sphere_to_json(r)
            )
        })
        .collect();
    format!("{{\"terms\":[{}]}}", terms.join(","))
}

/// Exact evaluation of the two piecewise-linear circle functions at the
/// angle `theta = ratio * pi`, with `ratio` in `[1/4, 9/4]`.
pub fn phi_hat(which: u8, ratio: &Scalar) -> Result<Scalar> {
    let lo = rat(1, 4);
    let hi = rat(9, 4);
    if *ratio < lo || *ratio > hi {
        return Err(Error::OutOfRange(format!(
            "angle ratio {} outside [1/4, 9/4]",
            crate::scalar::format(ratio)
        )));
    }
    let x = ratio.clone();
    let value = match which {
        1 => {
            if x <= rat(3, 4) {
                int(2) - int(4) * x
            } else if x <= rat(5, 4) {
                int(-1)
            } else if x <= rat(7, 4) {
                int(4) * x - int(6)
            } else {
                int(1)
            }
        }
        2 => {
            if x <= rat(3, 4) {
                int(1)
            } else if x <= rat(5, 4) {
                int(4) - int(4) * x
            } else if x <= rat(7, 4) {
                int(-1)
            } else {
                int(4) * x - int(8)
            }
        }
        _ => return Err(Error::Invalid("which must be 1 or 2".into())),
    };
    Ok(value)
}
