//! The Witt group `W_k ≅ W_f²` of a p-adic field and isometry classes of
//! nondegenerate quadratic forms.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{PadicCtx, SquareClass};

/// Group law of the residue-field Witt group `W_f`.
///
/// `Klein` when `-1` is a square (`p ≡ 1 mod 4`), `Cyclic` (ℤ/4, generated
/// by `⟨1⟩`) otherwise.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WittLaw {
    Klein,
    Cyclic,
}

impl WittLaw {
    pub fn of(ctx: &PadicCtx) -> WittLaw {
        if ctx.minus_one_is_square() {
            WittLaw::Klein
        } else {
            WittLaw::Cyclic
        }
    }

    pub fn for_prime(p: u64) -> WittLaw {
        if p % 4 == 1 {
            WittLaw::Klein
        } else {
            WittLaw::Cyclic
        }
    }

    pub fn minus_one_class(self) -> SquareClass {
        match self {
            WittLaw::Klein => SquareClass::One,
            WittLaw::Cyclic => SquareClass::Rho,
        }
    }

    /// Square class of `-a`.
    pub fn neg_class(self, a: SquareClass) -> SquareClass {
        a.mul(self.minus_one_class())
    }

    pub fn add_res(self, u: ResWittClass, v: ResWittClass) -> ResWittClass {
        match self {
            WittLaw::Klein => ResWittClass::from_klein(u.klein_bits() ^ v.klein_bits()),
            WittLaw::Cyclic => ResWittClass::from_cyclic((u.cyclic_index() + v.cyclic_index()) % 4),
        }
    }

    pub fn neg_res(self, u: ResWittClass) -> ResWittClass {
        match self {
            WittLaw::Klein => u,
            WittLaw::Cyclic => ResWittClass::from_cyclic((4 - u.cyclic_index()) % 4),
        }
    }

    pub fn add(self, u: WittClass, v: WittClass) -> WittClass {
        WittClass::new(self.add_res(u.unit, v.unit), self.add_res(u.pi, v.pi))
    }

    pub fn neg(self, u: WittClass) -> WittClass {
        WittClass::new(self.neg_res(u.unit), self.neg_res(u.pi))
    }

    pub fn sub(self, u: WittClass, v: WittClass) -> WittClass {
        self.add(u, self.neg(v))
    }

    pub fn sum<I: IntoIterator<Item = WittClass>>(self, items: I) -> WittClass {
        items.into_iter().fold(WittClass::ZERO, |acc, x| self.add(acc, x))
    }
}

/// Element of `W_f = {Hyp, ⟨1⟩, ⟨ρ⟩, ⟨1,-ρ⟩}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ResWittClass {
    #[serde(rename = "ZERO")]
    Zero,
    #[serde(rename = "U1")]
    U1,
    #[serde(rename = "URHO")]
    URho,
    #[serde(rename = "U1RHO")]
    U1Rho,
}

impl ResWittClass {
    pub const ALL: [ResWittClass; 4] = [
        ResWittClass::Zero,
        ResWittClass::U1,
        ResWittClass::URho,
        ResWittClass::U1Rho,
    ];

    /// Dimension of the anisotropic representative.
    pub fn dim(self) -> u32 {
        match self {
            ResWittClass::Zero => 0,
            ResWittClass::U1 | ResWittClass::URho => 1,
            ResWittClass::U1Rho => 2,
        }
    }

    // ⟨1⟩ and ⟨ρ⟩ as independent generators of (ℤ/2)².
    fn klein_bits(self) -> u8 {
        match self {
            ResWittClass::Zero => 0b00,
            ResWittClass::U1 => 0b10,
            ResWittClass::URho => 0b01,
            ResWittClass::U1Rho => 0b11,
        }
    }

    fn from_klein(bits: u8) -> Self {
        match bits & 0b11 {
            0b00 => ResWittClass::Zero,
            0b10 => ResWittClass::U1,
            0b01 => ResWittClass::URho,
            _ => ResWittClass::U1Rho,
        }
    }

    // Multiples of ⟨1⟩ in ℤ/4: ⟨1⟩, ⟨1,1⟩, ⟨1,1,1⟩ ≅ ⟨ρ⟩.
    fn cyclic_index(self) -> u8 {
        match self {
            ResWittClass::Zero => 0,
            ResWittClass::U1 => 1,
            ResWittClass::U1Rho => 2,
            ResWittClass::URho => 3,
        }
    }

    fn from_cyclic(i: u8) -> Self {
        match i % 4 {
            0 => ResWittClass::Zero,
            1 => ResWittClass::U1,
            2 => ResWittClass::U1Rho,
            _ => ResWittClass::URho,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ResWittClass::Zero => "ZERO",
            ResWittClass::U1 => "U1",
            ResWittClass::URho => "URHO",
            ResWittClass::U1Rho => "U1RHO",
        }
    }

    /// Accepts the names above or the short tags `0`, `1`, `r`, `1r`.
    pub fn parse(tag: &str) -> Option<Self> {
        let t = tag.trim();
        ResWittClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(t))
            .or(match t {
                "0" => Some(ResWittClass::Zero),
                "1" => Some(ResWittClass::U1),
                "r" => Some(ResWittClass::URho),
                "1r" => Some(ResWittClass::U1Rho),
                _ => None,
            })
    }

    /// Anisotropic diagonal entries of this class (unit square classes).
    fn representative(self, law: WittLaw) -> &'static [SquareClass] {
        use SquareClass::{One, Rho};
        match (self, law) {
            (ResWittClass::Zero, _) => &[],
            (ResWittClass::U1, _) => &[One],
            (ResWittClass::URho, _) => &[Rho],
            (ResWittClass::U1Rho, WittLaw::Klein) => &[One, Rho],
            (ResWittClass::U1Rho, WittLaw::Cyclic) => &[One, One],
        }
    }
}

/// Element of `W_k`, stored as (unit part, ϖ part).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WittClass {
    pub unit: ResWittClass,
    pub pi: ResWittClass,
}

impl WittClass {
    pub const ZERO: WittClass = WittClass {
        unit: ResWittClass::Zero,
        pi: ResWittClass::Zero,
    };
    /// The quaternionic class, the unique class of anisotropic dimension 4.
    pub const QUAT: WittClass = WittClass {
        unit: ResWittClass::U1Rho,
        pi: ResWittClass::U1Rho,
    };

    pub const fn new(unit: ResWittClass, pi: ResWittClass) -> Self {
        WittClass { unit, pi }
    }

    /// All 16 classes, unit part major.
    pub fn all() -> impl Iterator<Item = WittClass> {
        ResWittClass::ALL
            .into_iter()
            .flat_map(|u| ResWittClass::ALL.into_iter().map(move |v| WittClass::new(u, v)))
    }

    /// Class of the one-dimensional form `⟨a⟩`.
    pub fn of_class(a: SquareClass) -> WittClass {
        let res = if a.is_nonsquare_unit() {
            ResWittClass::URho
        } else {
            ResWittClass::U1
        };
        if a.has_odd_valuation() {
            WittClass::new(ResWittClass::Zero, res)
        } else {
            WittClass::new(res, ResWittClass::Zero)
        }
    }

    pub fn aniso_dim(self) -> u32 {
        self.unit.dim() + self.pi.dim()
    }

    pub fn is_zero(self) -> bool {
        self == WittClass::ZERO
    }
}

impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.unit.name(), self.pi.name())
    }
}

/// Diagonal form `⟨a_1, …, a_n⟩` with entries given by square class.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiagonalForm {
    pub entries: Vec<SquareClass>,
}

impl DiagonalForm {
    pub fn new(entries: Vec<SquareClass>) -> Self {
        DiagonalForm { entries }
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    pub fn concat(&self, other: &DiagonalForm) -> DiagonalForm {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        DiagonalForm { entries }
    }

    /// Parses a comma-separated list of `1`, `r`, `w`, `rw`.
    pub fn parse(s: &str) -> Option<DiagonalForm> {
        let s = s.trim();
        if s.is_empty() {
            return Some(DiagonalForm::default());
        }
        s.split(',')
            .map(|t| SquareClass::from_tag(t.trim()))
            .collect::<Option<Vec<_>>>()
            .map(DiagonalForm::new)
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tags: Vec<_> = self.entries.iter().map(|c| c.tag()).collect();
        write!(f, "<{}>", tags.join(","))
    }
}

pub fn witt_of_diagonal(f: &DiagonalForm, law: WittLaw) -> WittClass {
    law.sum(f.entries.iter().map(|&a| WittClass::of_class(a)))
}

/// Canonical anisotropic representative: unit entries first, then ϖ entries.
pub fn aniso_representative(u: WittClass, law: WittLaw) -> DiagonalForm {
    let mut entries: Vec<SquareClass> = u.unit.representative(law).to_vec();
    entries.extend(
        u.pi
            .representative(law)
            .iter()
            .map(|&a| a.mul(SquareClass::Pi)),
    );
    DiagonalForm { entries }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QFormError {
    #[error("degree {degree} cannot carry a Witt class of anisotropic dimension {dim}")]
    IncompatibleDegree { degree: u32, dim: u32 },
}

/// Isometry class of a nondegenerate quadratic form: `(degree, Witt class)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QFormClass {
    #[serde(rename = "deg")]
    pub degree: u32,
    #[serde(rename = "witt")]
    pub cls: WittClass,
}

impl QFormClass {
    pub fn new(degree: u32, cls: WittClass) -> Result<Self, QFormError> {
        let dim = cls.aniso_dim();
        if dim > degree || !(degree - dim).is_multiple_of(2) {
            return Err(QFormError::IncompatibleDegree { degree, dim });
        }
        Ok(QFormClass { degree, cls })
    }

    pub fn aniso_dim(self) -> u32 {
        self.cls.aniso_dim()
    }

    /// Number of hyperbolic planes in a Witt decomposition.
    pub fn witt_index(self) -> u32 {
        (self.degree - self.aniso_dim()) / 2
    }

    pub fn of_diagonal(f: &DiagonalForm, law: WittLaw) -> QFormClass {
        QFormClass {
            degree: f.degree() as u32,
            cls: witt_of_diagonal(f, law),
        }
    }
}

impl fmt::Display for QFormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.degree, self.cls)
    }
}

/// All isometry classes of the given degree, in `WittClass::all` order.
pub fn isometry_classes(degree: u32) -> Vec<QFormClass> {
    WittClass::all()
        .filter_map(|u| QFormClass::new(degree, u).ok())
        .collect()
}

/// Anisotropic kernel followed by `(1, -1)` hyperbolic pads.
pub fn canonical_diagonal(c: QFormClass, law: WittLaw) -> DiagonalForm {
    let mut f = aniso_representative(c.cls, law);
    for _ in 0..c.witt_index() {
        f.entries.push(SquareClass::One);
        f.entries.push(law.minus_one_class());
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use SquareClass::*;

    const LAWS: [WittLaw; 2] = [WittLaw::Klein, WittLaw::Cyclic];

    fn diag(xs: &[SquareClass]) -> DiagonalForm {
        DiagonalForm::new(xs.to_vec())
    }

    #[test]
    fn hyperbolic_plane_is_zero() {
        for law in LAWS {
            let f = diag(&[One, law.minus_one_class()]);
            assert_eq!(witt_of_diagonal(&f, law), WittClass::ZERO);
            let g = diag(&[Pi, law.neg_class(Pi)]);
            assert_eq!(witt_of_diagonal(&g, law), WittClass::ZERO);
        }
    }

    #[test]
    fn cyclic_identities() {
        let law = WittLaw::Cyclic;
        let ones = witt_of_diagonal(&diag(&[One, One]), law);
        assert_eq!(ones.aniso_dim(), 2);
        assert_eq!(ones, witt_of_diagonal(&diag(&[Rho, Rho]), law));
        // ⟨r,r,r⟩ ≅ ⟨-r⟩
        for a in SquareClass::ALL {
            assert_eq!(
                witt_of_diagonal(&diag(&[a, a, a]), law),
                WittClass::of_class(law.neg_class(a))
            );
        }
        let one = WittClass::of_class(One);
        assert_eq!(law.add(one, one).aniso_dim(), 2);
    }

    #[test]
    fn quaternionic_class() {
        let q = witt_of_diagonal(&diag(&[One, Rho, Pi, RhoPi]), WittLaw::Klein);
        assert_eq!(q, WittClass::QUAT);
        assert_eq!(q.aniso_dim(), 4);
        assert_eq!(aniso_representative(q, WittLaw::Klein), diag(&[One, Rho, Pi, RhoPi]));
        assert_eq!(aniso_representative(q, WittLaw::Cyclic), diag(&[One, One, Pi, Pi]));
        assert_eq!(WittClass::of_class(Pi).aniso_dim(), 1);
    }

    #[test]
    fn group_axioms() {
        for law in LAWS {
            for u in WittClass::all() {
                assert_eq!(law.add(u, WittClass::ZERO), u);
                assert_eq!(law.add(u, law.neg(u)), WittClass::ZERO);
                for v in WittClass::all() {
                    assert_eq!(law.add(u, v), law.add(v, u));
                }
            }
        }
    }

    #[test]
    fn representatives_round_trip() {
        for law in LAWS {
            for u in WittClass::all() {
                let f = aniso_representative(u, law);
                assert_eq!(f.degree() as u32, u.aniso_dim());
                assert_eq!(witt_of_diagonal(&f, law), u);
            }
        }
    }

    #[test]
    fn iota_preserves_difference_dimensions() {
        for u in WittClass::all() {
            for v in WittClass::all() {
                assert_eq!(
                    WittLaw::Cyclic.sub(u, v).aniso_dim(),
                    WittLaw::Klein.sub(u, v).aniso_dim(),
                    "{u} - {v}"
                );
            }
        }
    }

    #[test]
    fn classification_counts() {
        assert_eq!(isometry_classes(0).len(), 1);
        assert_eq!(isometry_classes(1).len(), 4);
        assert_eq!(isometry_classes(2).len(), 7);
        for d in 3..=8 {
            assert_eq!(isometry_classes(d).len(), 8);
        }
    }

    #[test]
    fn canonical_diagonals() {
        let hyp = QFormClass::new(2, WittClass::ZERO).unwrap();
        assert_eq!(canonical_diagonal(hyp, WittLaw::Klein), diag(&[One, One]));
        assert_eq!(canonical_diagonal(hyp, WittLaw::Cyclic), diag(&[One, Rho]));
        let c = QFormClass::new(3, WittClass::of_class(Pi)).unwrap();
        assert_eq!(canonical_diagonal(c, WittLaw::Cyclic), diag(&[Pi, One, Rho]));
        let c = QFormClass::new(1, WittClass::of_class(Rho)).unwrap();
        assert_eq!(canonical_diagonal(c, WittLaw::Klein), diag(&[Rho]));
        for law in LAWS {
            for d in 0..7 {
                for c in isometry_classes(d) {
                    assert_eq!(QFormClass::of_diagonal(&canonical_diagonal(c, law), law), c);
                }
            }
        }
    }

    #[test]
    fn invalid_degree_rejected() {
        assert!(QFormClass::new(1, WittClass::QUAT).is_err());
        assert!(QFormClass::new(3, WittClass::ZERO).is_err());
    }

    #[test]
    fn tag_parsing() {
        assert_eq!(ResWittClass::parse("1r"), Some(ResWittClass::U1Rho));
        assert_eq!(ResWittClass::parse("urho"), Some(ResWittClass::URho));
        assert_eq!(ResWittClass::parse("x"), None);
        assert_eq!(DiagonalForm::parse("1,r,w,rw"), Some(diag(&[One, Rho, Pi, RhoPi])));
        assert_eq!(DiagonalForm::parse("1,q"), None);
    }

    #[test]
    fn json_shapes() {
        let s = serde_json::to_string(&WittClass::of_class(RhoPi)).unwrap();
        assert_eq!(s, r#"{"unit":"ZERO","pi":"URHO"}"#);
        let s = serde_json::to_string(&diag(&[One, Rho, Pi, RhoPi])).unwrap();
        assert_eq!(s, r#"["1","r","w","rw"]"#);
    }

    fn arb_diag() -> impl Strategy<Value = DiagonalForm> {
        prop::collection::vec(prop::sample::select(SquareClass::ALL.to_vec()), 0..10)
            .prop_map(DiagonalForm::new)
    }

    proptest! {
        #[test]
        fn witt_of_concat_is_sum(f in arb_diag(), g in arb_diag(), klein in any::<bool>()) {
            let law = if klein { WittLaw::Klein } else { WittLaw::Cyclic };
            prop_assert_eq!(
                witt_of_diagonal(&f.concat(&g), law),
                law.add(witt_of_diagonal(&f, law), witt_of_diagonal(&g, law))
            );
        }

        #[test]
        fn degree_parity_matches(f in arb_diag(), klein in any::<bool>()) {
            let law = if klein { WittLaw::Klein } else { WittLaw::Cyclic };
            let c = QFormClass::of_diagonal(&f, law);
            prop_assert!(QFormClass::new(c.degree, c.cls).is_ok());
        }
    }
}
