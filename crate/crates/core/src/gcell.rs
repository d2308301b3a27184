//! Formal cell generators `G^m_n` and their differential.
//!
//! `G^m_n` has degree `-n` and exists for `1 <= m <= n`; out-of-range
//! coefficients are zero and are dropped at construction. The boundary of a
//! cell mixes lower cells and concrete arity-4 sums (the `alpha` family), so
//! sums here carry a cell part and a tree part side by side. `d` squared
//! vanishing on the whole grid is the correctness statement for the chosen
//! permutation constants; `check_d2` sweeps it.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bar::render_terms;
use crate::perm::{p4, Perm};
use crate::tree::{alpha, d_tree, Tree2Sum};

/// Cell generator `G^m_n.sigma`, kept only in the valid range.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GElem {
    pub m: u32,
    pub n: u32,
    pub sigma: Perm,
}

impl GElem {
    /// `None` encodes the zero coefficient: `m <= 0` or `n < m`.
    pub fn new(m: i64, n: i64, sigma: Perm) -> Option<GElem> {
        if m <= 0 || n < m {
            None
        } else {
            Some(GElem {
                m: m as u32,
                n: n as u32,
                sigma,
            })
        }
    }

    pub fn degree(&self) -> i64 {
        -(self.n as i64)
    }

    pub fn render(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = write!(s, "G^{}_{}.{}", self.m, self.n, self.sigma.one_line());
        s
    }
}

/// F2-sum with a cell part and a tree part.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct GMixedSum {
    gpart: BTreeSet<GElem>,
    tpart: Tree2Sum,
}

impl GMixedSum {
    pub fn zero() -> GMixedSum {
        GMixedSum::default()
    }

    pub fn from_tree(t: Tree2Sum) -> GMixedSum {
        GMixedSum {
            gpart: BTreeSet::new(),
            tpart: t,
        }
    }

    pub fn toggle_g(&mut self, g: GElem) {
        if !self.gpart.remove(&g) {
            self.gpart.insert(g);
        }
    }

    fn toggle_g_opt(&mut self, g: Option<GElem>) {
        if let Some(g) = g {
            self.toggle_g(g);
        }
    }

    pub fn add(&mut self, other: &GMixedSum) {
        for g in &other.gpart {
            self.toggle_g(g.clone());
        }
        self.tpart.add(&other.tpart);
    }

    pub fn is_zero(&self) -> bool {
        self.gpart.is_empty() && self.tpart.is_zero()
    }

    pub fn gpart(&self) -> impl Iterator<Item = &GElem> {
        self.gpart.iter()
    }

    pub fn tpart(&self) -> &Tree2Sum {
        &self.tpart
    }

    pub fn tpart_mut(&mut self) -> &mut Tree2Sum {
        &mut self.tpart
    }

    pub fn act(&self, tau: &Perm) -> GMixedSum {
        GMixedSum {
            gpart: self
                .gpart
                .iter()
                .map(|g| GElem {
                    m: g.m,
                    n: g.n,
                    sigma: g.sigma.compose(tau),
                })
                .collect(),
            tpart: self.tpart.act(tau),
        }
    }

    pub fn render(&self) -> String {
        let gs = self.gpart.iter().map(|g| g.render());
        if self.tpart.is_zero() {
            render_terms(gs)
        } else if self.gpart.is_empty() {
            self.tpart.render()
        } else {
            let mut s = render_terms(gs);
            s.push_str(" + ");
            s.push_str(&self.tpart.render());
            s
        }
    }
}

impl core::fmt::Display for GMixedSum {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Boundary of the generator `G^m_n`, with `p = floor((m-1)/2)`.
///
/// Both branches differ only in the leading cell term: above the diagonal it
/// is `G^m_{n-1}.(Id+(2143))`, on the diagonal `G^{m-1}_{m-1}` multiplied on
/// the right by `{(3214), (3214)(2143)}`. The shared tail is
/// `G^{m-2}_{n-1}.(Id+(4321)) + alpha(n-1, n-1-p) + alpha(n-1, p).(3214)`.
pub fn dg(m: i64, n: i64) -> GMixedSum {
    assert!(m >= 1 && n >= m, "dg defined for 1 <= m <= n, got ({}, {})", m, n);
    let p = (m - 1).div_euclid(2);
    let swap_in = p4(2, 1, 4, 3);
    let rev = p4(4, 3, 2, 1);
    let fix = p4(3, 2, 1, 4);
    let mut out = GMixedSum::zero();
    if n > m {
        out.toggle_g_opt(GElem::new(m, n - 1, Perm::identity(4)));
        out.toggle_g_opt(GElem::new(m, n - 1, swap_in));
    } else {
        out.toggle_g_opt(GElem::new(m - 1, m - 1, fix.clone()));
        out.toggle_g_opt(GElem::new(m - 1, m - 1, fix.compose(&swap_in)));
    }
    out.toggle_g_opt(GElem::new(m - 2, n - 1, Perm::identity(4)));
    out.toggle_g_opt(GElem::new(m - 2, n - 1, rev));
    out.tpart.add(&alpha(n - 1, n - 1 - p));
    out.tpart.add(&alpha(n - 1, p).act(&fix));
    out
}

/// Extend the boundary to mixed sums: cells via `d(G.sigma) = (dG).sigma`,
/// trees via the Leibniz differential.
pub fn d_mixed(s: &GMixedSum) -> GMixedSum {
    let mut out = GMixedSum::zero();
    for g in &s.gpart {
        out.add(&dg(g.m as i64, g.n as i64).act(&g.sigma));
    }
    out.tpart.add(&d_tree(&s.tpart));
    out
}

/// One grid point of the `d^2 = 0` sweep; `residual` nonzero means failure.
#[derive(Clone, Debug)]
pub struct D2Check {
    pub m: u32,
    pub n: u32,
    pub residual: GMixedSum,
}

impl D2Check {
    pub fn ok(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Verify `d(d(G^m_n)) = 0` for every `1 <= m <= n <= max_n`.
pub fn check_d2(max_n: u32) -> Vec<D2Check> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for m in 1..=n {
            let residual = d_mixed(&dg(m as i64, n as i64));
            out.push(D2Check { m, n, residual });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_perms;
    use crate::tree::Tree2Sum;

    #[test]
    fn boundary_of_the_first_cell() {
        let d = dg(1, 1);
        assert_eq!(d.gpart().count(), 0);
        let x = Tree2Sum::generator(0, 0, 0);
        let want = x.plus(&x.act(&p4(3, 2, 1, 4)));
        assert_eq!(d.tpart(), &want);
        assert_eq!(d.render(), "e_0(e_0,e_0).(1234) + e_0(e_0,e_0).(3214)");
    }

    #[test]
    fn boundary_above_the_diagonal() {
        // dG^1_2 = G^1_1.(Id+(2143)) + alpha(1,1) + alpha(1,0).(3214);
        // the G^{-1} terms are out of range and vanish.
        let d = dg(1, 2);
        let cells: Vec<_> = d.gpart().cloned().collect();
        assert_eq!(
            cells,
            alloc::vec![
                GElem { m: 1, n: 1, sigma: Perm::identity(4) },
                GElem { m: 1, n: 1, sigma: p4(2, 1, 4, 3) },
            ]
        );
        let want = alpha(1, 1).plus(&alpha(1, 0).act(&p4(3, 2, 1, 4)));
        assert_eq!(d.tpart(), &want);
    }

    #[test]
    fn boundary_on_the_diagonal_uses_the_grouped_constant() {
        // dG^2_2 carries G^1_1.{(3214), (3214)(2143) = (2341)}.
        let d = dg(2, 2);
        let cells: Vec<_> = d.gpart().cloned().collect();
        assert_eq!(
            cells,
            alloc::vec![
                GElem { m: 1, n: 1, sigma: p4(2, 3, 4, 1) },
                GElem { m: 1, n: 1, sigma: p4(3, 2, 1, 4) },
            ]
        );
    }

    #[test]
    fn degree_bookkeeping() {
        for n in 1..=6i64 {
            for m in 1..=n {
                let d = dg(m, n);
                for g in d.gpart() {
                    assert_eq!(g.degree(), -(n - 1));
                }
                for t in d.tpart().terms() {
                    assert_eq!(t.degree(), -(n - 1));
                }
            }
        }
    }

    #[test]
    fn d_squared_vanishes_on_a_small_grid() {
        for check in check_d2(7) {
            assert!(
                check.ok(),
                "d^2 G^{}_{} = {}",
                check.m,
                check.n,
                check.residual.render()
            );
        }
    }

    #[test]
    fn d_mixed_restricts_to_the_tree_differential() {
        let t = Tree2Sum::generator(1, 2, 0).plus(&Tree2Sum::generator(0, 1, 1));
        let d = d_mixed(&GMixedSum::from_tree(t.clone()));
        assert_eq!(d.gpart().count(), 0);
        assert_eq!(d.tpart(), &d_tree(&t));
    }

    #[test]
    fn d_mixed_is_equivariant() {
        let mut s = dg(2, 3);
        s.toggle_g(GElem { m: 1, n: 2, sigma: p4(4, 1, 2, 3) });
        for sigma in all_perms(4) {
            assert_eq!(d_mixed(&s.act(&sigma)), d_mixed(&s).act(&sigma));
        }
    }

    #[test]
    fn single_term_faults_are_detected() {
        // Toggling one alpha term in a boundary breaks d^2 = 0.
        let mut broken = dg(2, 3);
        let victim = broken
            .tpart()
            .terms()
            .find(|t| !crate::tree::d_tree(&Tree2Sum::singleton((*t).clone())).is_zero())
            .cloned()
            .expect("some tree term has a nonzero differential");
        broken.tpart_mut().toggle(victim);
        assert!(!d_mixed(&broken).is_zero());
    }

    #[test]
    fn check_d2_reports_the_grid() {
        let reports = check_d2(4);
        assert_eq!(reports.len(), 4 + 3 + 2 + 1);
        assert!(reports.iter().all(|c| c.ok()));
    }

    #[test]
    fn mixed_rendering() {
        let mut s = GMixedSum::zero();
        s.toggle_g(GElem { m: 2, n: 3, sigma: Perm::identity(4) });
        s.tpart_mut().add(&Tree2Sum::generator(0, 0, 0));
        assert_eq!(s.render(), "G^2_3.(1234) + e_0(e_0,e_0).(1234)");
        assert_eq!(GMixedSum::zero().render(), "0");
    }
}
