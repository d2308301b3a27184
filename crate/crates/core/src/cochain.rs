//! Finite cochain models over F2 with explicit cup-i structure maps.
//!
//! A `CupAlgebra` stores a graded basis, the differential, and sparse
//! tables for the bilinear maps `e_i` (degree `(p,q) -> p+q-i`). The
//! defining contract, tested rather than assumed, is the arity-2 coboundary
//! identity `d e_i(u,v) + e_i(du,v) + e_i(u,dv) = e_{i-1}(u,v) + e_{i-1}(v,u)`
//! together with `e_0` being the Alexander-Whitney cup product on
//! simplicial models.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::bar::render_terms;
use crate::gf2::{binom_may, quotient_basis, BitVec, GF2Matrix, Quotient};
use crate::tree::Tree2Sum;

/// Homogeneous cochain: basis indices within one degree. The zero cochain
/// compares equal across degrees so that empty evaluation results mix
/// freely into sums.
#[derive(Clone, Debug)]
pub struct Cochain {
    pub degree: i64,
    pub support: BTreeSet<usize>,
}

impl Cochain {
    pub fn zero(degree: i64) -> Cochain {
        Cochain { degree, support: BTreeSet::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn toggle(&mut self, idx: usize) {
        if !self.support.remove(&idx) {
            self.support.insert(idx);
        }
    }

    pub fn add(&mut self, other: &Cochain) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.clone();
            return;
        }
        assert_eq!(self.degree, other.degree, "degree mismatch in cochain sum");
        for &i in &other.support {
            self.toggle(i);
        }
    }

    pub fn plus(&self, other: &Cochain) -> Cochain {
        let mut s = self.clone();
        s.add(other);
        s
    }
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Cochain) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.degree == other.degree && self.support == other.support
    }
}

impl Eq for Cochain {}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EvalError {
    /// An `e_i` was requested beyond the table with a target degree that
    /// could be nonzero, so silently returning zero would be unsound.
    BeyondIMax { i: i64, p: i64, q: i64, i_max: i64 },
}

impl core::fmt::Display for EvalError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EvalError::BeyondIMax { i, p, q, i_max } => write!(
                f,
                "e_{} on degrees ({}, {}) exceeds the stored structure (i_max = {})",
                i, p, q, i_max
            ),
        }
    }
}

impl core::error::Error for EvalError {}

/// Key for one structure constant: `(i, p, j, q, k)` names the coefficient
/// cochain of `e_i(basis_j^p, basis_k^q)`.
pub type EKey = (i64, i64, usize, i64, usize);

#[derive(Clone, Debug)]
pub struct CupAlgebra {
    names: Vec<Vec<String>>,
    /// Per degree, per basis index: support of `d(basis)` one degree up.
    d_map: Vec<Vec<BTreeSet<usize>>>,
    e_map: BTreeMap<EKey, BTreeSet<usize>>,
    i_max: i64,
}

impl CupAlgebra {
    pub fn from_parts(
        names: Vec<Vec<String>>,
        d_map: Vec<Vec<BTreeSet<usize>>>,
        e_map: BTreeMap<EKey, BTreeSet<usize>>,
        i_max: i64,
    ) -> CupAlgebra {
        assert!(i_max >= 0);
        assert_eq!(names.len(), d_map.len());
        CupAlgebra { names, d_map, e_map, i_max }
    }

    pub fn top_degree(&self) -> i64 {
        self.names.len() as i64 - 1
    }

    pub fn i_max(&self) -> i64 {
        self.i_max
    }

    pub fn dim(&self, degree: i64) -> usize {
        if degree < 0 || degree >= self.names.len() as i64 {
            0
        } else {
            self.names[degree as usize].len()
        }
    }

    pub fn name(&self, degree: i64, idx: usize) -> &str {
        &self.names[degree as usize][idx]
    }

    pub fn index_of(&self, degree: i64, name: &str) -> Option<usize> {
        if degree < 0 || degree >= self.names.len() as i64 {
            return None;
        }
        self.names[degree as usize].iter().position(|n| n == name)
    }

    pub fn basis(&self, degree: i64, idx: usize) -> Cochain {
        assert!(idx < self.dim(degree));
        let mut c = Cochain::zero(degree);
        c.toggle(idx);
        c
    }

    pub fn render(&self, c: &Cochain) -> String {
        render_terms(c.support.iter().map(|&i| self.name(c.degree, i).to_string()))
    }

    pub fn d(&self, u: &Cochain) -> Cochain {
        let mut out = Cochain::zero(u.degree + 1);
        if u.degree < 0 || u.degree >= self.names.len() as i64 {
            return out;
        }
        let rows = &self.d_map[u.degree as usize];
        for &j in &u.support {
            for &t in &rows[j] {
                out.toggle(t);
            }
        }
        out
    }

    /// Bilinear `e_i`. Negative `i` and negative target degrees give zero;
    /// `i > i_max` errors unless an argument is zero or the target degree
    /// is negative, since then the table genuinely lacks the answer.
    pub fn e(&self, i: i64, u: &Cochain, v: &Cochain) -> Result<Cochain, EvalError> {
        let target = u.degree + v.degree - i;
        let mut out = Cochain::zero(target);
        if i < 0 || target < 0 || u.is_zero() || v.is_zero() {
            return Ok(out);
        }
        if i > self.i_max {
            return Err(EvalError::BeyondIMax { i, p: u.degree, q: v.degree, i_max: self.i_max });
        }
        for &j in &u.support {
            for &k in &v.support {
                if let Some(entry) = self.e_map.get(&(i, u.degree, j, v.degree, k)) {
                    for &t in entry {
                        out.toggle(t);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn cup(&self, u: &Cochain, v: &Cochain) -> Cochain {
        self.e(0, u, v).expect("cup product is always within i_max")
    }

    /// Flip one structure constant; the verification suites must notice.
    pub fn toggle_e_entry(&mut self, key: EKey, target_idx: usize) {
        let entry = self.e_map.entry(key).or_default();
        if !entry.remove(&target_idx) {
            entry.insert(target_idx);
        }
    }

    /// Flip one matrix entry of the differential.
    pub fn toggle_d_entry(&mut self, degree: i64, idx: usize, target_idx: usize) {
        let entry = &mut self.d_map[degree as usize][idx];
        if !entry.remove(&target_idx) {
            entry.insert(target_idx);
        }
    }

    /// Left side minus right side of the coboundary identity; zero iff the
    /// identity holds on this pair at this `i`.
    pub fn coboundary_defect(&self, i: i64, u: &Cochain, v: &Cochain) -> Result<Cochain, EvalError> {
        let mut s = self.d(&self.e(i, u, v)?);
        s.add(&self.e(i, &self.d(u), v)?);
        s.add(&self.e(i, u, &self.d(v))?);
        s.add(&self.e(i - 1, u, v)?);
        s.add(&self.e(i - 1, v, u)?);
        Ok(s)
    }
}

/// Evaluate a sum of trees: each term `(x,a,b,sigma)` becomes
/// `e_x(e_a(w1,w2), e_b(w3,w4))` with `w_j = args[sigma^{-1}(j)]`.
pub fn eval_tree(s: &Tree2Sum, a: &CupAlgebra, args: &[Cochain; 4]) -> Result<Cochain, EvalError> {
    let mut out = Cochain::zero(0);
    for t in s.terms() {
        let inv = t.sigma.inverse();
        let w = |j: usize| &args[inv.apply(j) - 1];
        let left = a.e(t.a as i64, w(1), w(2))?;
        let right = a.e(t.b as i64, w(3), w(4))?;
        out.add(&a.e(t.x as i64, &left, &right)?);
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ComplexError {
    VertexOutOfRange { facet: usize },
    NotStrictlyIncreasing { facet: usize },
    EmptyFacet { facet: usize },
}

impl core::fmt::Display for ComplexError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ComplexError::VertexOutOfRange { facet } => {
                write!(f, "facet {} mentions a vertex outside the declared range", facet)
            }
            ComplexError::NotStrictlyIncreasing { facet } => {
                write!(f, "facet {} is not strictly increasing", facet)
            }
            ComplexError::EmptyFacet { facet } => write!(f, "facet {} is empty", facet),
        }
    }
}

impl core::error::Error for ComplexError {}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    pub vertex_count: usize,
    pub facets: Vec<Vec<u32>>,
}

impl SimplicialComplex {
    pub fn new(vertex_count: usize, facets: Vec<Vec<u32>>) -> Result<SimplicialComplex, ComplexError> {
        for (fi, f) in facets.iter().enumerate() {
            if f.is_empty() {
                return Err(ComplexError::EmptyFacet { facet: fi });
            }
            if !f.windows(2).all(|w| w[0] < w[1]) {
                return Err(ComplexError::NotStrictlyIncreasing { facet: fi });
            }
            if f.iter().any(|&v| v as usize >= vertex_count) {
                return Err(ComplexError::VertexOutOfRange { facet: fi });
            }
        }
        Ok(SimplicialComplex { vertex_count, facets })
    }

    /// Downward closure, one sorted list of simplices per dimension.
    pub fn simplices(&self) -> Vec<Vec<Vec<u32>>> {
        let top = self.facets.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut by_dim: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); top];
        for f in &self.facets {
            // All nonempty subsets, smallest bit pattern first.
            for mask in 1u32..(1 << f.len()) {
                let sub: Vec<u32> = (0..f.len()).filter(|&b| mask >> b & 1 == 1).map(|b| f[b]).collect();
                by_dim[sub.len() - 1].insert(sub);
            }
        }
        by_dim.into_iter().map(|s| s.into_iter().collect()).collect()
    }
}

fn simplex_name(s: &[u32]) -> String {
    let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Enumerate weakly increasing cut tuples `0 <= b_1 <= .. <= b_len <= n`.
fn for_each_cut(len: usize, n: usize, mut f: impl FnMut(&[usize])) {
    let mut cuts = vec![0usize; len];
    loop {
        f(&cuts);
        // Odometer step keeping the tuple weakly increasing.
        let mut j = len;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if cuts[j] < n {
                cuts[j] += 1;
                for k in j + 1..len {
                    cuts[k] = cuts[j];
                }
                break;
            }
        }
    }
}

/// Simplicial cochains with interval-cut cup-i products. A cut tuple
/// splits `[0..n]` into closed intervals sharing endpoints; the first
/// cochain eats the even-numbered intervals, the second the odd ones.
/// Cuts where the two position sets collide (an interval degenerating to
/// a shared point) are dropped: the vertex counts then cannot match the
/// cochain degrees.
pub fn cochain_algebra(k: &SimplicialComplex, i_max: i64) -> CupAlgebra {
    assert!(i_max >= 0);
    let simplices = k.simplices();
    let names: Vec<Vec<String>> =
        simplices.iter().map(|dim| dim.iter().map(|s| simplex_name(s)).collect()).collect();
    let index: Vec<BTreeMap<&[u32], usize>> = simplices
        .iter()
        .map(|dim| dim.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
        .collect();

    let top = simplices.len().saturating_sub(1);
    let mut d_map: Vec<Vec<BTreeSet<usize>>> = simplices
        .iter()
        .map(|dim| vec![BTreeSet::new(); dim.len()])
        .collect();
    for p in 0..top {
        for (si, s) in simplices[p + 1].iter().enumerate() {
            // (d u)(s) = sum of u over codimension-1 faces of s.
            for drop in 0..s.len() {
                let mut face = s.clone();
                face.remove(drop);
                let j = index[p][face.as_slice()];
                d_map[p][j].insert(si);
            }
        }
    }

    let mut e_map: BTreeMap<EKey, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..=i_max {
        for (n, dim) in simplices.iter().enumerate() {
            for (si, s) in dim.iter().enumerate() {
                for_each_cut(i as usize + 1, n, |cuts| {
                    let mut upos: BTreeSet<usize> = BTreeSet::new();
                    let mut vpos: BTreeSet<usize> = BTreeSet::new();
                    let mut prev = 0usize;
                    for (seg, &c) in cuts.iter().enumerate() {
                        let dst = if seg % 2 == 0 { &mut upos } else { &mut vpos };
                        dst.extend(prev..=c);
                        prev = c;
                    }
                    let dst = if (cuts.len()) % 2 == 0 { &mut upos } else { &mut vpos };
                    dst.extend(prev..=n);
                    if upos.len() + vpos.len() != n + i as usize + 2 {
                        return;
                    }
                    let uface: Vec<u32> = upos.iter().map(|&p| s[p]).collect();
                    let vface: Vec<u32> = vpos.iter().map(|&p| s[p]).collect();
                    let p = uface.len() as i64 - 1;
                    let q = vface.len() as i64 - 1;
                    let j = index[p as usize][uface.as_slice()];
                    let kk = index[q as usize][vface.as_slice()];
                    let entry = e_map.entry((i, p, j, q, kk)).or_default();
                    if !entry.remove(&si) {
                        entry.insert(si);
                    }
                });
            }
        }
    }

    CupAlgebra { names, d_map, e_map, i_max }
}

/// The hand-specified model of the circle: a unit in degree 0, one
/// generator `a` in degree 1, trivial differential, `e_0` the unital
/// product with `a^2 = 0`, and `e_1(a,a) = a`; everything else is zero.
pub fn circle_algebra() -> CupAlgebra {
    let names = vec![vec![String::from("1")], vec![String::from("a")]];
    let d_map = vec![vec![BTreeSet::new()], vec![BTreeSet::new()]];
    let mut e_map: BTreeMap<EKey, BTreeSet<usize>> = BTreeMap::new();
    for (key, t) in [
        ((0, 0, 0, 0, 0), 0),
        ((0, 0, 0, 1, 0), 0),
        ((0, 1, 0, 0, 0), 0),
        ((1, 1, 0, 1, 0), 0),
    ] {
        e_map.entry(key).or_default().insert(t);
    }
    CupAlgebra { names, d_map, e_map, i_max: 2 }
}

/// One point: just the unit.
pub fn point_algebra() -> CupAlgebra {
    let names = vec![vec![String::from("1")]];
    let d_map = vec![vec![BTreeSet::new()]];
    let mut e_map: BTreeMap<EKey, BTreeSet<usize>> = BTreeMap::new();
    e_map.entry((0, 0, 0, 0, 0)).or_default().insert(0);
    CupAlgebra { names, d_map, e_map, i_max: 0 }
}

/// Tensor product of two models. The differential is Leibniz (char 2),
/// and the structure maps come from the coproduct of the bar resolution:
/// `e_i(u1 (x) w1, u2 (x) w2) = sum_j e_j(u1,u2) (x) e_{i-j}(args)` where
/// the second-factor arguments `(w1,w2)` swap exactly when `j` is odd.
pub fn tensor_algebra(a: &CupAlgebra, b: &CupAlgebra) -> Result<CupAlgebra, EvalError> {
    let top = a.top_degree() + b.top_degree();
    let i_max = 2 * top;
    // Degree t holds pairs (p, j, k) with p + (t-p) = t, ordered by p then j then k.
    let mut layout: Vec<Vec<(i64, usize, usize)>> = Vec::new();
    let mut names: Vec<Vec<String>> = Vec::new();
    for t in 0..=top {
        let mut slots = Vec::new();
        let mut nm = Vec::new();
        for p in 0..=t {
            let q = t - p;
            for j in 0..a.dim(p) {
                for k in 0..b.dim(q) {
                    slots.push((p, j, k));
                    nm.push(format!("{}(x){}", a.name(p, j), b.name(q, k)));
                }
            }
        }
        layout.push(slots);
        names.push(nm);
    }
    let slot_index = |t: i64, p: i64, j: usize, k: usize| -> usize {
        layout[t as usize].iter().position(|&s| s == (p, j, k)).expect("slot in layout")
    };

    let mut d_map: Vec<Vec<BTreeSet<usize>>> = layout.iter().map(|l| vec![BTreeSet::new(); l.len()]).collect();
    for t in 0..=top {
        for (s, &(p, j, k)) in layout[t as usize].iter().enumerate() {
            let q = t - p;
            for &dj in &a.d_map[p as usize][j] {
                d_map[t as usize][s].insert(slot_index(t + 1, p + 1, dj, k));
            }
            for &dk in &b.d_map[q as usize][k] {
                d_map[t as usize][s].insert(slot_index(t + 1, p, j, dk));
            }
        }
    }

    let mut e_map: BTreeMap<EKey, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..=i_max {
        for t1 in 0..=top {
            for t2 in 0..=top {
                if t1 + t2 - i < 0 || t1 + t2 - i > top {
                    continue;
                }
                for (s1, &(p1, j1, k1)) in layout[t1 as usize].iter().enumerate() {
                    for (s2, &(p2, j2, k2)) in layout[t2 as usize].iter().enumerate() {
                        let q1 = t1 - p1;
                        let q2 = t2 - p2;
                        let mut total = Cochain::zero(t1 + t2 - i);
                        for j in 0..=i {
                            let left = a.e(j, &a.basis(p1, j1), &a.basis(p2, j2))?;
                            if left.is_zero() {
                                continue;
                            }
                            let (w1, w2) = if j % 2 == 0 {
                                (b.basis(q1, k1), b.basis(q2, k2))
                            } else {
                                (b.basis(q2, k2), b.basis(q1, k1))
                            };
                            let right = b.e(i - j, &w1, &w2)?;
                            if right.is_zero() {
                                continue;
                            }
                            for &lj in &left.support {
                                for &rk in &right.support {
                                    total.toggle(slot_index(t1 + t2 - i, left.degree, lj, rk));
                                }
                            }
                        }
                        if !total.is_zero() {
                            e_map.insert((i, t1, s1, t2, s2), total.support);
                        }
                    }
                }
            }
        }
    }

    Ok(CupAlgebra { names, d_map, e_map, i_max })
}

/// Cohomology with chosen representatives and projection onto the basis.
pub struct CohomologyModel {
    quots: Vec<Quotient>,
    reps: Vec<Vec<Cochain>>,
}

/// A cohomology class: coordinates in the chosen basis of one degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Class {
    pub degree: i64,
    pub coords: BitVec,
}

impl Class {
    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CohomologyError {
    /// `d` of the given cochain is nonzero, so it has no class.
    NotACocycle { degree: i64 },
    /// Linear algebra failed; with d^2 != 0 the quotient is ill-posed.
    BrokenDifferential,
}

impl core::fmt::Display for CohomologyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CohomologyError::NotACocycle { degree } => {
                write!(f, "cochain of degree {} is not a cocycle", degree)
            }
            CohomologyError::BrokenDifferential => write!(f, "d^2 != 0, cohomology undefined"),
        }
    }
}

impl core::error::Error for CohomologyError {}

pub fn cohomology(a: &CupAlgebra) -> Result<CohomologyModel, CohomologyError> {
    let top = a.top_degree();
    let mut quots = Vec::new();
    let mut reps = Vec::new();
    for p in 0..=top {
        let n = a.dim(p);
        // Matrix of d_p in the basis, rows indexed by degree p+1.
        let mut m = GF2Matrix::zeros(a.dim(p + 1), n);
        for j in 0..n {
            for &t in &a.d_map[p as usize][j] {
                m.set(t, j, true);
            }
        }
        let kernel = m.kernel();
        let mut image = Vec::new();
        if p > 0 {
            for j in 0..a.dim(p - 1) {
                let mut col = BitVec::zeros(n);
                for &t in &a.d_map[p as usize - 1][j] {
                    col.flip(t);
                }
                image.push(col);
            }
        }
        let q = quotient_basis(&kernel, &image, n).map_err(|_| CohomologyError::BrokenDifferential)?;
        let r: Vec<Cochain> = q
            .representatives()
            .iter()
            .map(|v| Cochain { degree: p, support: v.ones().collect() })
            .collect();
        quots.push(q);
        reps.push(r);
    }
    Ok(CohomologyModel { quots, reps })
}

impl CohomologyModel {
    pub fn top_degree(&self) -> i64 {
        self.reps.len() as i64 - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.reps.iter().map(|r| r.len()).collect()
    }

    pub fn dim(&self, degree: i64) -> usize {
        if degree < 0 || degree >= self.reps.len() as i64 {
            0
        } else {
            self.reps[degree as usize].len()
        }
    }

    pub fn zero_class(&self, degree: i64) -> Class {
        Class { degree, coords: BitVec::zeros(self.dim(degree)) }
    }

    pub fn basis_class(&self, degree: i64, idx: usize) -> Class {
        let mut c = self.zero_class(degree);
        c.coords.set(idx, true);
        c
    }

    /// Every coordinate vector in the degree, zero included.
    pub fn all_classes(&self, degree: i64) -> Vec<Class> {
        let n = self.dim(degree);
        assert!(n < 16, "class enumeration is for small models");
        (0u32..1 << n)
            .map(|mask| Class {
                degree,
                coords: BitVec::from_indices(n, &(0..n).filter(|&b| mask >> b & 1 == 1).collect::<Vec<_>>()),
            })
            .collect()
    }

    /// The stored representative cocycle of a class.
    pub fn representative(&self, h: &Class) -> Cochain {
        let mut c = Cochain::zero(h.degree);
        if h.degree < 0 || h.degree >= self.reps.len() as i64 {
            return c;
        }
        for idx in h.coords.ones() {
            c.add(&self.reps[h.degree as usize][idx]);
        }
        c
    }

    /// Class of a cocycle. Degrees without any cohomology accept every
    /// cocycle there (the class is zero); non-cocycles error.
    pub fn project(&self, a: &CupAlgebra, u: &Cochain) -> Result<Class, CohomologyError> {
        if !a.d(u).is_zero() {
            return Err(CohomologyError::NotACocycle { degree: u.degree });
        }
        if u.degree < 0 || u.degree >= self.reps.len() as i64 {
            assert!(u.is_zero(), "nonzero cochain outside the graded range");
            return Ok(self.zero_class(u.degree));
        }
        let mut v = BitVec::zeros(a.dim(u.degree));
        for &j in &u.support {
            v.set(j, true);
        }
        let coords = self.quots[u.degree as usize]
            .project(&v)
            .map_err(|_| CohomologyError::NotACocycle { degree: u.degree })?;
        Ok(Class { degree: u.degree, coords })
    }
}

/// `Sq^r` on a class: pick the representative `c`, form `e_{|c|-r}(c,c)`,
/// check it is a cocycle, and project. `D_j` is `r = |c| - j`.
pub fn sq(a: &CupAlgebra, h: &CohomologyModel, x: &Class, r: i64) -> Result<Class, CohomologyError> {
    let c = h.representative(x);
    let target = x.degree + r;
    if c.is_zero() {
        return Ok(h.zero_class(target));
    }
    let s = a
        .e(x.degree - r, &c, &c)
        .map_err(|_| CohomologyError::NotACocycle { degree: target })?;
    if !a.d(&s).is_zero() {
        return Err(CohomologyError::NotACocycle { degree: target });
    }
    let mut class = h.project(a, &s)?;
    class.degree = target;
    Ok(class)
}

pub fn d_op(a: &CupAlgebra, h: &CohomologyModel, x: &Class, j: i64) -> Result<Class, CohomologyError> {
    sq(a, h, x, x.degree - j)
}

/// Product of classes through `e_0` on representatives.
pub fn class_product(
    a: &CupAlgebra,
    h: &CohomologyModel,
    x: &Class,
    y: &Class,
) -> Result<Class, CohomologyError> {
    let prod = a.cup(&h.representative(x), &h.representative(y));
    let mut class = h.project(a, &prod)?;
    class.degree = x.degree + y.degree;
    Ok(class)
}

#[derive(Clone, Debug)]
pub struct RelationEntry {
    pub check: String,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct RelationReport {
    pub entries: Vec<RelationEntry>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.failures == 0)
    }

    fn record(&mut self, check: &str, checked: usize, failures: usize, first: Option<String>) {
        self.entries.push(RelationEntry {
            check: String::from(check),
            checked,
            failures,
            first_failure: first,
        });
    }
}

struct Tally {
    checked: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally { checked: 0, failures: 0, first: None }
    }

    fn note(&mut self, pass: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !pass {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }
}

/// Exhaustive relation checks on a model: the coboundary identity over
/// all basis pairs, then on all classes commutativity, Cartan, Adem,
/// instability, top squaring, the level identity, and the chain-level
/// Cartan representative. Failures become report entries, not errors.
pub fn verify_relations(a: &CupAlgebra, h: &CohomologyModel) -> RelationReport {
    let top = h.top_degree();
    let mut report = RelationReport::default();
    let classes: Vec<Class> =
        (0..=top).flat_map(|p| h.all_classes(p)).collect();

    // d e_i(u,v) + e_i(du,v) + e_i(u,dv) = e_{i-1}(u,v) + e_{i-1}(v,u),
    // exhaustively over basis cochains; bilinearity covers the rest.
    let mut cob = Tally::new();
    for p in 0..=a.top_degree() {
        for q in 0..=a.top_degree() {
            for j in 0..a.dim(p) {
                for k in 0..a.dim(q) {
                    for i in 0..=a.i_max() {
                        let pass = match a.coboundary_defect(i, &a.basis(p, j), &a.basis(q, k)) {
                            Ok(defect) => defect.is_zero(),
                            Err(_) => false,
                        };
                        cob.note(pass, || {
                            format!("coboundary defect at i={} on ({},{})x({},{})", i, p, j, q, k)
                        });
                    }
                }
            }
        }
    }
    report.record("coboundary", cob.checked, cob.failures, cob.first);

    // x*y = y*x: level algebras are commutative.
    let mut comm = Tally::new();
    for x in &classes {
        for y in &classes {
            let pass = match (class_product(a, h, x, y), class_product(a, h, y, x)) {
                (Ok(l), Ok(r)) => class_eq(&l, &r),
                _ => false,
            };
            comm.note(pass, || {
                format!("commutativity failed at degrees ({},{})", x.degree, y.degree)
            });
        }
    }
    report.record("commutativity", comm.checked, comm.failures, comm.first);

    // D_n(x*y) = sum_k D_k(x) * D_{n-k}(y).
    let mut cartan = Tally::new();
    for x in &classes {
        for y in &classes {
            let Ok(xy) = class_product(a, h, x, y) else {
                cartan.note(false, || String::from("product not a cocycle"));
                continue;
            };
            for n in 0..=x.degree + y.degree {
                let lhs = d_op(a, h, &xy, n);
                let rhs = (0..=n).try_fold(h.zero_class(0), |mut acc, k| {
                    let dx = d_op(a, h, x, k)?;
                    let dy = d_op(a, h, y, n - k)?;
                    acc_add(&mut acc, &class_product(a, h, &dx, &dy)?);
                    Ok::<Class, CohomologyError>(acc)
                });
                let pass = match (&lhs, &rhs) {
                    (Ok(l), Ok(r)) => class_eq(l, r),
                    _ => false,
                };
                cartan.note(pass, || {
                    format!("cartan failed at degrees ({},{}) n={}", x.degree, y.degree, n)
                });
            }
        }
    }
    report.record("cartan", cartan.checked, cartan.failures, cartan.first);

    // sum_k (k, v-2k) D_{w-v+2k} D_{v-k} = sum_l (l, w-2l) D_{v-w+2l} D_{w-l}.
    let mut adem = Tally::new();
    for x in &classes {
        for v in 0..=2 * top + 2 {
            for w in 0..=2 * top + 2 {
                let side = |outer_shift: i64, inner_top: i64, other: i64| -> Result<Class, CohomologyError> {
                    let mut acc = h.zero_class(0);
                    let mut k = 0;
                    while 2 * k <= inner_top {
                        if binom_may(k, inner_top - 2 * k) {
                            let inner = d_op(a, h, x, inner_top - k)?;
                            let term = d_op(a, h, &inner, outer_shift - other + 2 * k)?;
                            acc_add(&mut acc, &term);
                        }
                        k += 1;
                    }
                    Ok(acc)
                };
                let lhs = side(w, v, v);
                let rhs = side(v, w, w);
                let pass = match (&lhs, &rhs) {
                    (Ok(l), Ok(r)) => class_eq(l, r),
                    _ => false,
                };
                adem.note(pass, || format!("adem failed at |x|={} v={} w={}", x.degree, v, w));
            }
        }
    }
    report.record("adem", adem.checked, adem.failures, adem.first);

    // Sq^r = 0 above the degree and for negative r.
    let mut inst = Tally::new();
    for x in &classes {
        for r in [-2, -1, x.degree + 1, x.degree + 2, x.degree + 3] {
            let pass = match sq(a, h, x, r) {
                Ok(c) => c.is_zero(),
                Err(_) => false,
            };
            inst.note(pass, || format!("instability failed at |x|={} r={}", x.degree, r));
        }
    }
    report.record("instability", inst.checked, inst.failures, inst.first);

    // Sq^{|x|} x = x * x.
    let mut square = Tally::new();
    for x in &classes {
        let pass = match (sq(a, h, x, x.degree), class_product(a, h, x, x)) {
            (Ok(l), Ok(r)) => class_eq(&l, &r),
            _ => false,
        };
        square.note(pass, || format!("squaring failed at |x|={}", x.degree));
    }
    report.record("squaring", square.checked, square.failures, square.first);

    // (a*b)*(c*d) = (a*c)*(b*d).
    let mut level = Tally::new();
    for x1 in &classes {
        for x2 in &classes {
            for x3 in &classes {
                for x4 in &classes {
                    let lhs = class_product(a, h, x1, x2).and_then(|p| {
                        let q = class_product(a, h, x3, x4)?;
                        class_product(a, h, &p, &q)
                    });
                    let rhs = class_product(a, h, x1, x3).and_then(|p| {
                        let q = class_product(a, h, x2, x4)?;
                        class_product(a, h, &p, &q)
                    });
                    let pass = match (&lhs, &rhs) {
                        (Ok(l), Ok(r)) => class_eq(l, r),
                        _ => false,
                    };
                    level.note(pass, || {
                        format!(
                            "level failed at degrees ({},{},{},{})",
                            x1.degree, x2.degree, x3.degree, x4.degree
                        )
                    });
                }
            }
        }
    }
    report.record("level", level.checked, level.failures, level.first);

    // Chain-level Cartan: alpha(n,n) + alpha(n,0).(3214) on (x,x,y,y) is
    // cohomologous to sum_l D_l(x) * D_{n-l}(y) + D_n(x*y).
    let mut chain = Tally::new();
    for p1 in 0..=top {
        for p2 in 0..=top {
            for i1 in 0..h.dim(p1) {
                for i2 in 0..h.dim(p2) {
                    let x = h.basis_class(p1, i1);
                    let y = h.basis_class(p2, i2);
                    for n in 0..=p1 + p2 {
                        let pass = cartan_chain_holds(a, h, &x, &y, n);
                        chain.note(pass, || {
                            format!("chain cartan failed at ({},{},{},{}) n={}", p1, i1, p2, i2, n)
                        });
                    }
                }
            }
        }
    }
    report.record("cartan_chain", chain.checked, chain.failures, chain.first);

    report
}

fn class_eq(l: &Class, r: &Class) -> bool {
    if l.is_zero() && r.is_zero() {
        return true;
    }
    l.degree == r.degree && l.coords == r.coords
}

fn acc_add(acc: &mut Class, term: &Class) {
    if term.is_zero() {
        return;
    }
    if acc.is_zero() {
        *acc = term.clone();
        return;
    }
    assert_eq!(acc.degree, term.degree);
    acc.coords.xor_assign(&term.coords);
}

fn cartan_chain_holds(a: &CupAlgebra, h: &CohomologyModel, x: &Class, y: &Class, n: i64) -> bool {
    use crate::perm::Perm;
    use crate::tree::alpha;

    let xc = h.representative(x);
    let yc = h.representative(y);
    let fix = Perm::from_images(&[3, 2, 1, 4]);
    let mut s = alpha(n, n);
    s.add(&alpha(n, 0).act(&fix));
    let Ok(lhs) = eval_tree(&s, a, &[xc.clone(), xc.clone(), yc.clone(), yc.clone()]) else {
        return false;
    };
    let Ok(lhs_class) = h.project(a, &lhs) else {
        return false;
    };
    let mut rhs = h.zero_class(2 * (x.degree + y.degree) - n);
    for l in 0..=n {
        let (Ok(dx), Ok(dy)) = (d_op(a, h, x, l), d_op(a, h, y, n - l)) else {
            return false;
        };
        let Ok(term) = class_product(a, h, &dx, &dy) else {
            return false;
        };
        acc_add(&mut rhs, &term);
    }
    let Ok(xy) = class_product(a, h, x, y) else {
        return false;
    };
    let Ok(dxy) = d_op(a, h, &xy, n) else {
        return false;
    };
    acc_add(&mut rhs, &dxy);
    class_eq(&lhs_class, &rhs)
}
