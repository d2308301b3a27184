//! The extended Steenrod algebra B2 and its classical quotient A2.
//!
//! Monomials are words in generalized squares `Sq^i` with arbitrary integer
//! exponents; `Sq^0` is not the identity in B2. `normal_form` rewrites to
//! the admissible basis with the Adem relation
//! `Sq^t Sq^s = sum_i binom(s-i-1, t-2i) Sq^{s+t-i} Sq^i` for `t < 2s`.
//! A2 is obtained by deleting `Sq^0` factors and killing negative squares;
//! both steps are repeated to a fixpoint because a deletion can expose a new
//! inadmissible pair.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bar::render_terms;
use crate::gf2::binom_c;
use crate::tree::DiagSum;

/// `Display` as the canonical rendering; shared by the formal-sum types.
macro_rules! fmt_via_render {
    () => {
        fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
            write!(f, "{}", self.render())
        }
    };
}

/// Word `Sq^{s1} .. Sq^{sk}`; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct SqMonomial {
    pub exps: Vec<i64>,
}

impl SqMonomial {
    pub fn new(exps: &[i64]) -> SqMonomial {
        SqMonomial { exps: exps.to_vec() }
    }

    pub fn unit() -> SqMonomial {
        SqMonomial::default()
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().sum()
    }

    /// Every adjacent pair `(t, s)` satisfies `t >= 2s`.
    pub fn is_admissible(&self) -> bool {
        self.exps.windows(2).all(|w| w[0] >= 2 * w[1])
    }

    pub fn render(&self) -> String {
        if self.exps.is_empty() {
            return String::from("1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|e| {
                use core::fmt::Write;
                let mut s = String::new();
                let _ = write!(s, "Sq^{}", e);
                s
            })
            .collect();
        parts.join(" ")
    }
}

impl core::fmt::Display for SqMonomial {
    fmt_via_render!();
}

/// F2-sum of monomials.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct SqPolynomial {
    terms: BTreeSet<SqMonomial>,
}

impl SqPolynomial {
    pub fn zero() -> SqPolynomial {
        SqPolynomial::default()
    }

    pub fn singleton(m: SqMonomial) -> SqPolynomial {
        let mut p = SqPolynomial::zero();
        p.toggle(m);
        p
    }

    pub fn toggle(&mut self, m: SqMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&mut self, other: &SqPolynomial) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &SqMonomial> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn render(&self) -> String {
        render_terms(self.terms.iter().map(|m| m.render()))
    }
}

impl core::fmt::Display for SqPolynomial {
    fmt_via_render!();
}

/// Which algebra to normalize in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SqMode {
    B2,
    A2,
}

/// One Adem rewrite of the inadmissible pair `(t, s)`, `t < 2s`. The sum
/// runs over `t-s+1 <= i <= floor(t/2)`; outside that range the binomial
/// vanishes. Every output pair `(s+t-i, i)` is admissible.
pub fn adem_step(t: i64, s: i64) -> SqPolynomial {
    assert!(t < 2 * s, "adem_step needs an inadmissible pair, got ({}, {})", t, s);
    let mut out = SqPolynomial::zero();
    let lo = t - s + 1;
    let hi = t.div_euclid(2);
    for i in lo..=hi {
        if binom_c(s - i - 1, t - 2 * i) {
            debug_assert!(s + t - i >= 2 * i);
            out.toggle(SqMonomial::new(&[s + t - i, i]));
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RewriteError {
    /// The per-monomial step budget ran out before reaching normal form.
    FuelExhausted { monomial: SqMonomial },
    /// A2 inputs must have nonnegative exponents.
    NegativeExponent { monomial: SqMonomial },
}

impl core::fmt::Display for RewriteError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RewriteError::FuelExhausted { monomial } => {
                write!(f, "rewriting fuel exhausted on {}", monomial.render())
            }
            RewriteError::NegativeExponent { monomial } => {
                write!(f, "negative exponent in A2 mode: {}", monomial.render())
            }
        }
    }
}

impl core::error::Error for RewriteError {}

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Fully rewrite one monomial in B2, spending from `fuel`.
fn reduce_monomial_b2(m: &SqMonomial, fuel: &mut u64) -> Result<SqPolynomial, RewriteError> {
    let mut done = SqPolynomial::zero();
    let mut work: Vec<Vec<i64>> = alloc::vec![m.exps.clone()];
    while let Some(word) = work.pop() {
        let bad = word.windows(2).position(|w| w[0] < 2 * w[1]);
        let Some(j) = bad else {
            done.toggle(SqMonomial { exps: word });
            continue;
        };
        if *fuel == 0 {
            return Err(RewriteError::FuelExhausted {
                monomial: SqMonomial { exps: word },
            });
        }
        *fuel -= 1;
        for pair in adem_step(word[j], word[j + 1]).terms() {
            let mut next = word.clone();
            next[j] = pair.exps[0];
            next[j + 1] = pair.exps[1];
            work.push(next);
        }
    }
    Ok(done)
}

/// Admissible normal form. In B2 this is Adem rewriting alone; in A2 it
/// also deletes `Sq^0` factors and kills monomials containing a negative
/// square, iterating with further rewriting until nothing changes. Each
/// input monomial gets its own fuel budget covering its whole rewrite tree.
pub fn normal_form_with_fuel(
    p: &SqPolynomial,
    mode: SqMode,
    fuel_per_monomial: u64,
) -> Result<SqPolynomial, RewriteError> {
    if mode == SqMode::A2 {
        if let Some(bad) = p.terms().find(|m| m.exps.iter().any(|&e| e < 0)) {
            return Err(RewriteError::NegativeExponent { monomial: bad.clone() });
        }
    }
    let mut out = SqPolynomial::zero();
    for m in p.terms() {
        let mut fuel = fuel_per_monomial;
        let mut reduced = reduce_monomial_b2(m, &mut fuel)?;
        if mode == SqMode::A2 {
            loop {
                let mut next = SqPolynomial::zero();
                let mut changed = false;
                for t in reduced.terms() {
                    if t.exps.iter().any(|&e| e < 0) {
                        changed = true;
                        continue;
                    }
                    if t.exps.contains(&0) {
                        changed = true;
                        let trimmed: Vec<i64> =
                            t.exps.iter().copied().filter(|&e| e != 0).collect();
                        next.add(&reduce_monomial_b2(
                            &SqMonomial { exps: trimmed },
                            &mut fuel,
                        )?);
                    } else {
                        next.toggle(t.clone());
                    }
                }
                reduced = next;
                if !changed {
                    break;
                }
            }
        }
        out.add(&reduced);
    }
    Ok(out)
}

pub fn normal_form(p: &SqPolynomial, mode: SqMode) -> Result<SqPolynomial, RewriteError> {
    normal_form_with_fuel(p, mode, DEFAULT_FUEL)
}

/// Canonical form of `p` as an operation on classes of the given degree.
/// On real cohomology `Sq^0` is the identity, negative squares vanish, and
/// a square vanishes on any class of lower degree, so beyond the A2
/// reduction every monomial that `acts_trivially` is dropped. Admissible
/// words of excess at most the degree act independently, which makes this
/// form faithful: two polynomials agree on every class of this degree
/// exactly when their unstable forms coincide. Unlike A2 `normal_form`,
/// negative exponents in the input are allowed; they act as zero.
pub fn unstable_normal_form(p: &SqPolynomial, degree: i64) -> Result<SqPolynomial, RewriteError> {
    let mut out = SqPolynomial::zero();
    for m in p.terms() {
        let mut fuel = DEFAULT_FUEL;
        let mut reduced = reduce_monomial_b2(m, &mut fuel)?;
        loop {
            let mut next = SqPolynomial::zero();
            let mut changed = false;
            for t in reduced.terms() {
                if t.exps.iter().any(|&e| e < 0) {
                    changed = true;
                } else if t.exps.contains(&0) {
                    changed = true;
                    let trimmed: Vec<i64> = t.exps.iter().copied().filter(|&e| e != 0).collect();
                    next.add(&reduce_monomial_b2(&SqMonomial { exps: trimmed }, &mut fuel)?);
                } else {
                    next.toggle(t.clone());
                }
            }
            reduced = next;
            if !changed {
                break;
            }
        }
        out.add(&reduced);
    }
    let mut filtered = SqPolynomial::zero();
    for m in out.terms() {
        if !acts_trivially(m, degree) {
            filtered.toggle(m.clone());
        }
    }
    Ok(filtered)
}

/// Does instability force `m` to kill every class of this degree?
/// Factors apply right to left; a factor whose exponent exceeds the current
/// degree gives zero, otherwise it raises the degree by its exponent.
pub fn acts_trivially(m: &SqMonomial, degree: i64) -> bool {
    let mut d = degree;
    for &s in m.exps.iter().rev() {
        if s > d {
            return true;
        }
        d += s;
    }
    false
}

/// Translate diagonal symbols `D_x D_h` into squares on a class of the
/// given degree `q`: the inner factor is `Sq^{q-h}`, the outer lands in
/// degree `2q - h`, so the word is `Sq^{2q-h-x} Sq^{q-h}`.
pub fn diagonal_on_class(d: &DiagSum, q: i64) -> SqPolynomial {
    let mut out = SqPolynomial::zero();
    for sym in d.terms() {
        assert_eq!(
            sym.lo, sym.hi,
            "only composed squares translate to Steenrod words"
        );
        let h = sym.lo as i64;
        out.toggle(SqMonomial::new(&[2 * q - h - sym.x as i64, q - h]));
    }
    out
}

/// Parse error with a byte offset into the input.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SqParseError {
    pub pos: usize,
    pub msg: &'static str,
}

impl core::fmt::Display for SqParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl core::error::Error for SqParseError {}

/// Grammar: `poly := mono ('+' mono)*`, `mono := sq+ | "0" | "1"`,
/// `sq := "Sq^" '-'? digit+`. Whitespace is insignificant. The bare `0`
/// and `1` monomials make every rendering round-trip.
pub fn parse_sq(text: &str) -> Result<SqPolynomial, SqParseError> {
    let b = text.as_bytes();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while *pos < b.len() && (b[*pos] as char).is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut out = SqPolynomial::zero();
    skip_ws(&mut pos);
    if pos == b.len() {
        return Err(SqParseError { pos, msg: "empty input" });
    }
    loop {
        skip_ws(&mut pos);
        // One monomial.
        if pos < b.len() && b[pos] == b'0' {
            pos += 1;
            // zero contributes nothing
        } else if pos < b.len() && b[pos] == b'1' {
            pos += 1;
            out.toggle(SqMonomial::unit());
        } else {
            let mut exps = Vec::new();
            loop {
                skip_ws(&mut pos);
                if !text[pos..].starts_with("Sq^") {
                    if exps.is_empty() {
                        return Err(SqParseError { pos, msg: "expected \"Sq^\", \"0\" or \"1\"" });
                    }
                    break;
                }
                pos += 3;
                let start = pos;
                if pos < b.len() && b[pos] == b'-' {
                    pos += 1;
                }
                let digits_from = pos;
                while pos < b.len() && b[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == digits_from {
                    return Err(SqParseError { pos, msg: "expected an integer exponent" });
                }
                let e: i64 = text[start..pos]
                    .parse()
                    .map_err(|_| SqParseError { pos: start, msg: "exponent out of range" })?;
                exps.push(e);
            }
            out.toggle(SqMonomial { exps });
        }
        skip_ws(&mut pos);
        if pos == b.len() {
            return Ok(out);
        }
        if b[pos] != b'+' {
            return Err(SqParseError { pos, msg: "expected '+' or end of input" });
        }
        pos += 1;
        skip_ws(&mut pos);
        if pos == b.len() {
            return Err(SqParseError { pos, msg: "dangling '+'" });
        }
    }
}
