//! The minimal free resolution of F2 over F2[S2].
//!
//! One free generator `e_i` per homological degree `-i`, so each degree is
//! spanned by `e_i` and its twist `e_i.(21)`. The differential raises degree:
//! `d(e_i) = e_{i-1} + e_{i-1}.(21)`, with `e_{-1} = 0`. The coproduct `psi`
//! sends `e_n` to the sum of `e_j (x) e_{n-j}` with the right factor twisted
//! for odd `j`; it is the source of every cup-i formula downstream.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

/// Basis element `e_index`, optionally twisted by the transposition.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BarElem {
    pub index: u32,
    pub twist: bool,
}

impl BarElem {
    /// `None` for negative indices: those are identically zero.
    pub fn new(index: i64, twist: bool) -> Option<BarElem> {
        if index < 0 {
            None
        } else {
            Some(BarElem {
                index: index as u32,
                twist,
            })
        }
    }

    pub fn plain(index: u32) -> BarElem {
        BarElem {
            index,
            twist: false,
        }
    }

    /// Homological degree `-index`.
    pub fn degree(&self) -> i64 {
        -(self.index as i64)
    }

    pub fn acted(self) -> BarElem {
        BarElem {
            index: self.index,
            twist: !self.twist,
        }
    }

    pub fn render(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = write!(s, "e_{}", self.index);
        if self.twist {
            s.push_str(".(21)");
        }
        s
    }
}

impl core::fmt::Display for BarElem {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Formal F2-sum of basis elements; addition is symmetric difference.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct BarSum {
    terms: BTreeSet<BarElem>,
}

impl BarSum {
    pub fn zero() -> BarSum {
        BarSum::default()
    }

    pub fn singleton(e: BarElem) -> BarSum {
        let mut terms = BTreeSet::new();
        terms.insert(e);
        BarSum { terms }
    }

    pub fn toggle(&mut self, e: BarElem) {
        if !self.terms.remove(&e) {
            self.terms.insert(e);
        }
    }

    pub fn add(&mut self, other: &BarSum) {
        for &t in &other.terms {
            self.toggle(t);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &BarElem> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Right action of the transposition: twist every term.
    pub fn acted(&self) -> BarSum {
        BarSum {
            terms: self.terms.iter().map(|e| e.acted()).collect(),
        }
    }

    pub fn render(&self) -> String {
        render_terms(self.terms.iter().map(|e| e.render()))
    }
}

impl core::fmt::Display for BarSum {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.render())
    }
}

pub(crate) fn render_terms(terms: impl Iterator<Item = String>) -> String {
    let parts: Vec<String> = terms.collect();
    if parts.is_empty() {
        String::from("0")
    } else {
        parts.join(" + ")
    }
}

/// `d(e_i . tau) = e_{i-1} + e_{i-1}.(21)`, independent of the twist.
pub fn d_bar(s: &BarSum) -> BarSum {
    let mut out = BarSum::zero();
    for e in s.terms() {
        if e.index == 0 {
            continue;
        }
        out.toggle(BarElem::plain(e.index - 1));
        out.toggle(BarElem {
            index: e.index - 1,
            twist: true,
        });
    }
    out
}

/// One term of the coproduct: an ordered pair of tensor factors.
pub type PsiTerm = (BarElem, BarElem);

/// Coproduct sum in the tensor square of the resolution.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct PsiSum {
    terms: BTreeSet<PsiTerm>,
}

impl PsiSum {
    pub fn terms(&self) -> impl Iterator<Item = &PsiTerm> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }
}

/// `psi(e_n) = sum_j e_j (x) e_{n-j}.(21)^j`: untwisted right factor for even
/// left index, twisted for odd. Exactly `n + 1` terms.
pub fn psi(n: u32) -> PsiSum {
    let mut terms = BTreeSet::new();
    for j in 0..=n {
        let left = BarElem::plain(j);
        let right = BarElem {
            index: n - j,
            twist: j % 2 == 1,
        };
        terms.insert((left, right));
    }
    PsiSum { terms }
}
