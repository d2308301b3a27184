//! Bit-packed GF(2) linear algebra and mod-2 binomial coefficients.
//!
//! Binomials come in two flavours. `binom_may(i, j)` is the symmetric
//! convention `(i, j) = (i+j)! / (i! j!) mod 2`, zero whenever either
//! argument is negative; by Kummer's theorem it is 1 exactly when the 2-adic
//! digits of `i` and `j` are disjoint. `binom_c(n, k)` is the classical
//! `C(n, k) mod 2`, defined through the symmetric one.

use alloc::vec;
use alloc::vec::Vec;

/// `(i, j) mod 2` in the symmetric convention; 0 if either argument is negative.
pub fn binom_may(i: i64, j: i64) -> bool {
    if i < 0 || j < 0 {
        return false;
    }
    (i as u64) & (j as u64) == 0
}

/// Classical `C(n, k) mod 2`; 0 outside `0 <= k <= n`.
pub fn binom_c(n: i64, k: i64) -> bool {
    binom_may(k, n - k)
}

/// Dense bit vector over GF(2). Fixed length, word-packed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitVec {
    nbits: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(nbits: usize) -> Self {
        BitVec {
            nbits,
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    pub fn from_indices(nbits: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(nbits);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.nbits
    }

    pub fn is_empty(&self) -> bool {
        self.nbits == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.nbits, "bit index {} out of range {}", i, self.nbits);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.nbits, "bit index {} out of range {}", i, self.nbits);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.nbits, "bit index {} out of range {}", i, self.nbits);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.nbits, other.nbits, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the AND with `other`: the GF(2) dot product.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.nbits, other.nbits, "length mismatch in dot");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Index of the lowest set bit, if any.
    pub fn leading(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nbits).filter(move |&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl core::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for i in 0..self.nbits {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Errors from subspace and quotient computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    /// `W` is not contained in `V` when forming `V / W`.
    NotSubspace { offending_row: usize },
    /// Vector handed to a projection does not lie in the ambient space.
    NotInSpace,
    DimensionMismatch,
}

impl core::fmt::Display for Gf2Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Gf2Error::NotSubspace { offending_row } => {
                write!(f, "row {} of W does not lie in V", offending_row)
            }
            Gf2Error::NotInSpace => write!(f, "vector is not in the ambient space"),
            Gf2Error::DimensionMismatch => write!(f, "dimension mismatch"),
        }
    }
}

impl core::error::Error for Gf2Error {}

/// Dense GF(2) matrix, one `BitVec` per row.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GF2Matrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl GF2Matrix {
    pub fn zeros(nrows: usize, cols: usize) -> Self {
        GF2Matrix {
            rows: vec![BitVec::zeros(cols); nrows],
            cols,
        }
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        GF2Matrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut BitVec {
        &mut self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v);
    }

    /// Matrix-vector product (rows dotted against `x`).
    pub fn mul_vec(&self, x: &BitVec) -> BitVec {
        let mut y = BitVec::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                y.set(i, true);
            }
        }
        y
    }

    /// In-place reduction to reduced row echelon form.
    ///
    /// Pivot choice is deterministic: scan columns left to right, take the
    /// lowest-index remaining row with a 1 in that column. Returns the pivot
    /// columns in order.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..self.cols {
            let mut pivot = None;
            for r in next_row..self.rows.len() {
                if self.rows[r].get(col) {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            self.rows.swap(next_row, p);
            let pivot_row = self.rows[next_row].clone();
            for (r, row) in self.rows.iter_mut().enumerate() {
                if r != next_row && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == self.rows.len() {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Basis of the right kernel `{x : A x = 0}`, one vector per free column,
    /// emitted in increasing free-column order.
    pub fn kernel(&self) -> Vec<BitVec> {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut x = BitVec::zeros(self.cols);
            x.set(free, true);
            for (r, &c) in pivots.iter().enumerate() {
                if m.rows[r].get(free) {
                    x.set(c, true);
                }
            }
            basis.push(x);
        }
        basis
    }

    /// Solve `A x = b`. Returns a particular solution and a kernel basis, or
    /// `None` when the system is inconsistent. The solution is checked by
    /// back-substitution before being returned.
    pub fn solve_affine(&self, b: &BitVec) -> Option<(BitVec, Vec<BitVec>)> {
        assert_eq!(b.len(), self.rows.len(), "rhs length mismatch");
        // Augmented elimination: carry b along as an extra column.
        let mut m = Vec::with_capacity(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let mut aug = BitVec::zeros(self.cols + 1);
            for j in row.ones() {
                aug.set(j, true);
            }
            if b.get(i) {
                aug.set(self.cols, true);
            }
            m.push(aug);
        }
        let mut aug = GF2Matrix::from_rows(m, self.cols + 1);
        let pivots = aug.row_reduce();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            if aug.rows[r].get(self.cols) {
                x.set(c, true);
            }
        }
        debug_assert_eq!(&self.mul_vec(&x), b, "back-substitution failed");
        Some((x, self.kernel()))
    }
}

/// A basis of `V / W` together with the data needed to project onto it.
pub struct Quotient {
    ambient: usize,
    /// RREF rows spanning W, with their pivot columns.
    w_rows: Vec<BitVec>,
    w_pivots: Vec<usize>,
    /// Reduced representatives of the chosen quotient basis, with pivots.
    rep_reduced: Vec<BitVec>,
    rep_pivots: Vec<usize>,
    /// The chosen representatives, as handed in (original `V` vectors).
    reps: Vec<BitVec>,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[BitVec] {
        &self.reps
    }

    /// Reduce `v` modulo `W`, leaving only quotient-basis pivots.
    fn reduce(&self, v: &BitVec) -> Result<BitVec, Gf2Error> {
        if v.len() != self.ambient {
            return Err(Gf2Error::DimensionMismatch);
        }
        let mut r = v.clone();
        for (row, &p) in self.w_rows.iter().zip(self.w_pivots.iter()) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        Ok(r)
    }

    /// Coordinates of `[v]` in the quotient basis. Errors if `v` is not in
    /// `V + W`.
    pub fn project(&self, v: &BitVec) -> Result<BitVec, Gf2Error> {
        let mut r = self.reduce(v)?;
        let mut coords = BitVec::zeros(self.reps.len());
        for (k, (row, &p)) in self.rep_reduced.iter().zip(self.rep_pivots.iter()).enumerate() {
            if r.get(p) {
                r.xor_assign(row);
                coords.set(k, true);
            }
        }
        if !r.is_zero() {
            return Err(Gf2Error::NotInSpace);
        }
        Ok(coords)
    }
}

/// Given spanning sets of `V` and of a subspace `W`, pick representatives of a
/// basis of `V / W` (the earliest spanning vectors of `V` that are independent
/// modulo `W`) and return them with a projection map.
pub fn quotient_basis(v: &[BitVec], w: &[BitVec], ambient: usize) -> Result<Quotient, Gf2Error> {
    for x in v.iter().chain(w.iter()) {
        if x.len() != ambient {
            return Err(Gf2Error::DimensionMismatch);
        }
    }
    // RREF of W.
    let mut wm = GF2Matrix::from_rows(w.to_vec(), ambient);
    let w_pivots = wm.row_reduce();
    let w_rows: Vec<BitVec> = wm.rows[..w_pivots.len()].to_vec();

    // W must lie in span(V): every W row must reduce to zero against V's RREF.
    let mut vm = GF2Matrix::from_rows(v.to_vec(), ambient);
    let v_pivots = vm.row_reduce();
    for (i, row) in w.iter().enumerate() {
        let mut r = row.clone();
        for (vr, &p) in vm.rows.iter().zip(v_pivots.iter()) {
            if r.get(p) {
                r.xor_assign(vr);
            }
        }
        if !r.is_zero() {
            return Err(Gf2Error::NotSubspace { offending_row: i });
        }
    }

    let mut q = Quotient {
        ambient,
        w_rows,
        w_pivots,
        rep_reduced: Vec::new(),
        rep_pivots: Vec::new(),
        reps: Vec::new(),
    };
    for cand in v {
        let mut r = q.reduce(cand)?;
        for (row, &p) in q.rep_reduced.iter().zip(q.rep_pivots.iter()) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        if let Some(p) = r.leading() {
            // Back-clean previously accepted rows so pivots stay unique.
            for row in q.rep_reduced.iter_mut() {
                if row.get(p) {
                    row.xor_assign(&r);
                }
            }
            q.rep_reduced.push(r);
            q.rep_pivots.push(p);
            q.reps.push(cand.clone());
        }
    }
    Ok(q)
}
