//! Exact word problem for the autoequivalence group generated by the two
//! spherical twists and the shift functor.
//!
//! The normal form of an element is the triple (lattice action, twist
//! exponent sum, shift residue mod 5). The shift residue is well defined
//! because `(Phi_S Phi_T)^3 [5] = id`; the pair (lattice action, exponent
//! sum) separates elements of the twist subgroup because the kernel of
//! Br3 -> SL(2,Z) is generated by an element of exponent sum 12.

use crate::lattice::{twist_matrix, IntMat2, KClass, LatticeAut};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A generator symbol: a spherical twist or the shift functor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenSym {
    PhiS,
    PhiT,
    Shift,
}

/// One letter of a word: a generator with a nonzero exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenLetter {
    pub sym: GenSym,
    pub exp: i64,
}

impl GenLetter {
    pub fn new(sym: GenSym, exp: i64) -> GenLetter {
        assert_ne!(exp, 0, "letter exponent must be nonzero");
        GenLetter { sym, exp }
    }
}

/// A word in the generators, as written (no reduction applied).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Word(pub Vec<GenLetter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn phi_s() -> Word {
        Word(vec![GenLetter::new(GenSym::PhiS, 1)])
    }

    pub fn phi_t() -> Word {
        Word(vec![GenLetter::new(GenSym::PhiT, 1)])
    }

    pub fn shift(n: i64) -> Word {
        if n == 0 {
            Word::empty()
        } else {
            Word(vec![GenLetter::new(GenSym::Shift, n)])
        }
    }

    /// `Sigma = (Phi_S Phi_T)[2]`, the right tilt at the T-role simple.
    pub fn big_sigma() -> Word {
        Word::phi_s().concat(&Word::phi_t()).concat(&Word::shift(2))
    }

    /// `Delta = (Phi_T Phi_S Phi_T)[3]`, the right tilt at the S-role simple.
    pub fn big_delta() -> Word {
        Word::phi_t()
            .concat(&Word::phi_s())
            .concat(&Word::phi_t())
            .concat(&Word::shift(3))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(
            self.0
                .iter()
                .rev()
                .map(|l| GenLetter::new(l.sym, -l.exp))
                .collect(),
        )
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n >= 0 { self.clone() } else { self.inverse() };
        let mut w = Word::empty();
        for _ in 0..n.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected token `{0}`")]
    UnexpectedToken(String),
    #[error("malformed shift `{0}`, expected e.g. `[2]`")]
    MalformedShift(String),
    #[error("malformed exponent in `{0}`")]
    MalformedExponent(String),
    #[error("zero exponent in `{0}`")]
    ZeroExponent(String),
}

impl std::str::FromStr for Word {
    type Err = ParseError;

    /// Parses the compact syntax `S`, `T`, `[n]`, each with optional `^k`,
    /// separated by whitespace: e.g. `S T S^-1 [2]`.
    fn from_str(input: &str) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        for tok in input.split_whitespace() {
            let (head, exp) = match tok.split_once('^') {
                Some((h, e)) => {
                    let exp: i64 = e
                        .parse()
                        .map_err(|_| ParseError::MalformedExponent(tok.to_string()))?;
                    (h, exp)
                }
                None => (tok, 1),
            };
            let (sym, base_exp) = match head {
                "S" => (GenSym::PhiS, 1),
                "T" => (GenSym::PhiT, 1),
                _ if head.starts_with('[') && head.ends_with(']') => {
                    let n: i64 = head[1..head.len() - 1]
                        .parse()
                        .map_err(|_| ParseError::MalformedShift(tok.to_string()))?;
                    (GenSym::Shift, n)
                }
                _ => return Err(ParseError::UnexpectedToken(tok.to_string())),
            };
            let total = base_exp * exp;
            if total != 0 {
                letters.push(GenLetter::new(sym, total));
            } else if exp == 0 {
                return Err(ParseError::ZeroExponent(tok.to_string()));
            }
            // `[0]` contributes nothing and is dropped silently.
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match l.sym {
                GenSym::PhiS => {
                    if l.exp == 1 {
                        write!(f, "S")?
                    } else {
                        write!(f, "S^{}", l.exp)?
                    }
                }
                GenSym::PhiT => {
                    if l.exp == 1 {
                        write!(f, "T")?
                    } else {
                        write!(f, "T^{}", l.exp)?
                    }
                }
                GenSym::Shift => write!(f, "[{}]", l.exp)?,
            }
        }
        Ok(())
    }
}

/// Canonical form of an element of the autoequivalence group.
///
/// Two words represent the same element iff their `AutElement`s are equal
/// component-wise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AutElement {
    /// Action on the lattice, including the sign contributed by shifts.
    pub k_matrix: LatticeAut,
    /// Exponent sum of twist letters, after absorbing multiples of `[5]`
    /// via `(Phi_S Phi_T)^3 [5] = id` (each absorbed `[5]` costs 6).
    pub twist_sum: i64,
    /// Total shift reduced to `[0, 5)`.
    pub shift_res: u8,
}

impl AutElement {
    pub const IDENTITY: AutElement = AutElement {
        k_matrix: LatticeAut::IDENTITY,
        twist_sum: 0,
        shift_res: 0,
    };

    pub fn is_identity(self) -> bool {
        self == AutElement::IDENTITY
    }

    fn canonicalize(k_matrix: LatticeAut, twist_exp: i64, shift_total: i64) -> AutElement {
        let r = shift_total.rem_euclid(5);
        let q = (shift_total - r) / 5;
        AutElement {
            k_matrix,
            twist_sum: twist_exp - 6 * q,
            shift_res: r as u8,
        }
    }
}

fn aut_pow(m: LatticeAut, exp: i64) -> LatticeAut {
    let base = if exp >= 0 { m } else { m.inverse() };
    let mut acc = LatticeAut::IDENTITY;
    for _ in 0..exp.unsigned_abs() {
        acc = acc * base;
    }
    acc
}

/// Reduces a word to its canonical form. This is a homomorphism:
/// `reduce(w1 . w2) = compose(reduce(w1), reduce(w2))`.
pub fn reduce(word: &Word) -> AutElement {
    let m_s = twist_matrix(KClass::S);
    let m_t = twist_matrix(KClass::T);
    let mut mat = LatticeAut::IDENTITY;
    let mut twist_exp = 0i64;
    let mut shift_total = 0i64;
    for l in &word.0 {
        match l.sym {
            GenSym::PhiS => {
                mat = mat * aut_pow(m_s, l.exp);
                twist_exp += l.exp;
            }
            GenSym::PhiT => {
                mat = mat * aut_pow(m_t, l.exp);
                twist_exp += l.exp;
            }
            GenSym::Shift => {
                mat = mat * crate::lattice::shift_matrix(l.exp);
                shift_total += l.exp;
            }
        }
    }
    AutElement::canonicalize(mat, twist_exp, shift_total)
}

/// Group law on canonical forms.
pub fn compose(a: AutElement, b: AutElement) -> AutElement {
    AutElement::canonicalize(
        a.k_matrix * b.k_matrix,
        a.twist_sum + b.twist_sum,
        a.shift_res as i64 + b.shift_res as i64,
    )
}

pub fn inverse(a: AutElement) -> AutElement {
    AutElement::canonicalize(a.k_matrix.inverse(), -a.twist_sum, -(a.shift_res as i64))
}

/// A lattice automorphism modulo sign: the image in PSL(2, Z).
///
/// Normalized so that the first nonzero entry (row-major) is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Psl2Class(IntMat2);

impl Psl2Class {
    pub fn of(m: IntMat2) -> Psl2Class {
        let e = m.0;
        let flat = [e[0][0], e[0][1], e[1][0], e[1][1]];
        let lead = flat.iter().copied().find(|&x| x != 0).unwrap_or(0);
        if lead < 0 {
            Psl2Class(-m)
        } else {
            Psl2Class(m)
        }
    }

    pub fn representative(self) -> IntMat2 {
        self.0
    }

    pub const IDENTITY: Psl2Class = Psl2Class(IntMat2::IDENTITY);
}

/// Image of an element in PSL(2, Z): the lattice action up to sign.
pub fn psl2_image(a: AutElement) -> Psl2Class {
    Psl2Class::of(a.k_matrix.matrix())
}

/// The mod-5 word length in the generators `Phi_S[1]`, `Phi_T[1]`; equals
/// the shift residue of the canonical form.
pub fn ell_mod5(a: AutElement) -> u8 {
    a.shift_res
}

/// True iff the element lies in the subgroup generated by the two twists.
pub fn is_sph(a: AutElement) -> bool {
    ell_mod5(a) == 0
}

/// Reduced canonical elements for the common named autoequivalences.
pub mod elements {
    use super::*;

    pub fn phi_s() -> AutElement {
        reduce(&Word::phi_s())
    }
    pub fn phi_t() -> AutElement {
        reduce(&Word::phi_t())
    }
    pub fn shift(n: i64) -> AutElement {
        reduce(&Word::shift(n))
    }
    pub fn big_sigma() -> AutElement {
        reduce(&Word::big_sigma())
    }
    pub fn big_delta() -> AutElement {
        reduce(&Word::big_delta())
    }
}
