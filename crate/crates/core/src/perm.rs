//! Permutations in one-line notation, with block and cross products.
//!
//! A permutation `s` of `{1, .., n}` is stored as its image list
//! `(s(1), .., s(n))`. Composition is function composition,
//! `(s * t)(i) = s(t(i))`. All group actions on operad elements in this crate
//! are right actions: acting by `t` after `s` multiplies `s * t` in this
//! order.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Perm {
    img: Vec<u8>,
}

impl Perm {
    /// Build from 1-based images; panics unless they form a bijection.
    pub fn from_images(img: &[u8]) -> Perm {
        let n = img.len();
        assert!(n <= 64, "permutation too large");
        let mut seen = vec![false; n];
        for &v in img {
            assert!(v >= 1 && v as usize <= n, "image {} out of range 1..={}", v, n);
            assert!(!seen[v as usize - 1], "image {} repeated", v);
            seen[v as usize - 1] = true;
        }
        Perm { img: img.to_vec() }
    }

    pub fn identity(n: usize) -> Perm {
        Perm {
            img: (1..=n as u8).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    /// `s(i)` with 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.img[i - 1] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.img
    }

    /// `(self * t)(i) = self(t(i))`.
    pub fn compose(&self, t: &Perm) -> Perm {
        assert_eq!(self.degree(), t.degree(), "degree mismatch");
        Perm {
            img: (1..=self.degree()).map(|i| self.apply(t.apply(i)) as u8).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0u8; self.degree()];
        for i in 1..=self.degree() {
            img[self.apply(i) - 1] = i as u8;
        }
        Perm { img }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(k, &v)| v as usize == k + 1)
    }

    /// One-line notation: digits concatenated while single-digit, otherwise
    /// space separated.
    pub fn one_line(&self) -> String {
        use core::fmt::Write;
        let mut s = String::from("(");
        if self.degree() <= 9 {
            for &v in &self.img {
                let _ = write!(s, "{}", v);
            }
        } else {
            for (k, &v) in self.img.iter().enumerate() {
                if k > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{}", v);
            }
        }
        s.push(')');
        s
    }
}

impl core::fmt::Display for Perm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.one_line())
    }
}

/// The block permutation `s(i_1, .., i_n)`: the k-th consecutive block of
/// `sizes[k-1]` inputs moves, as a block, to position `s(k)`.
pub fn block_perm(s: &Perm, sizes: &[usize]) -> Perm {
    let n = s.degree();
    assert_eq!(sizes.len(), n, "one size per block");
    let total: usize = sizes.iter().sum();
    // Start offset of each output slot: the block landing at output position l
    // is block s^{-1}(l).
    let sinv = s.inverse();
    let mut out_start = vec![0usize; n + 1];
    for l in 1..=n {
        out_start[l] = out_start[l - 1] + sizes[sinv.apply(l) - 1];
    }
    let mut img = vec![0u8; total];
    let mut in_pos = 0usize;
    for k in 1..=n {
        let dest = s.apply(k);
        for r in 0..sizes[k - 1] {
            img[in_pos] = (out_start[dest - 1] + r + 1) as u8;
            in_pos += 1;
        }
    }
    Perm { img }
}

/// `t1 x t2 x .. x tn`: each factor permutes its own consecutive block.
pub fn cross(factors: &[&Perm]) -> Perm {
    let total: usize = factors.iter().map(|p| p.degree()).sum();
    let mut img = Vec::with_capacity(total);
    let mut offset = 0u8;
    for p in factors {
        for i in 1..=p.degree() {
            img.push(offset + p.apply(i) as u8);
        }
        offset += p.degree() as u8;
    }
    Perm { img }
}

/// Shorthand for elements of S4.
pub fn p4(a: u8, b: u8, c: u8, d: u8) -> Perm {
    Perm::from_images(&[a, b, c, d])
}

/// S2 transposition.
pub fn swap2() -> Perm {
    Perm::from_images(&[2, 1])
}

/// All n! permutations in lexicographic order of their one-line images.
pub fn all_perms(n: usize) -> Vec<Perm> {
    assert!(n <= 8, "factorial blowup guard");
    let mut out = Vec::new();
    let mut img: Vec<u8> = (1..=n as u8).collect();
    loop {
        out.push(Perm { img: img.clone() });
        // Next lexicographic arrangement, if any.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| img[i] < img[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| img[j] > img[i]).unwrap();
        img.swap(i, j);
        img[i + 1..].reverse();
    }
    out
}
