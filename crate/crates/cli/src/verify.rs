//! The five verification sweeps behind `verify`. Each sweep produces one
//! entry per parameter tuple; tuples are generated in a fixed order and the
//! work is farmed out with rayon, so the report is identical for any worker
//! count.

use adem_cartan::bar::BarElem;
use adem_cartan::cochain::CupAlgebra;
use adem_cartan::gcell::{d_mixed, dg};
use adem_cartan::gf2::binom_may;
use adem_cartan::perm::{p4, Perm};
use adem_cartan::steenrod::{diagonal_on_class, unstable_normal_form};
use adem_cartan::tree::{
    alpha, d_tree, diagonal_coeff, normalize, u, DiagSum, DiagSymbol, Tree2Sum,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::Entry;

/// Prop-style identity sweep: (unmzero), (umm), (du), (dalpha).
pub fn identities(max_m: i64, max_n: i64, max_x: i64) -> Vec<Entry> {
    enum Job {
        Unmzero { m: i64, n: i64, x: i64 },
        Umm { m: i64, x: i64 },
        Du { m: i64, n: i64, x: i64 },
        Dalpha { n: i64, p: i64 },
    }

    let mut jobs = Vec::new();
    for m in 1..=max_m {
        for n in 1..m {
            for x in 0..=max_x {
                jobs.push(Job::Unmzero { m, n, x });
            }
        }
    }
    for m in 1..=max_m {
        for x in 0..=max_x {
            jobs.push(Job::Umm { m, x });
        }
    }
    // (du) relates indices up to (m+1, n+1), so the loop stays one short
    // of each bound.
    for m in 1..max_m {
        for n in 0..max_n {
            for x in 0..=max_x {
                jobs.push(Job::Du { m, n, x });
            }
        }
    }
    for n in 0..=max_n {
        for p in -2..=n + 2 {
            jobs.push(Job::Dalpha { n, p });
        }
    }

    let id = Perm::identity(4);
    let swap_in = p4(2, 1, 4, 3);
    let rev = p4(4, 3, 2, 1);
    jobs.par_iter()
        .map(|job| match *job {
            Job::Unmzero { m, n, x } => Entry::check(
                format!("identities/unmzero m={} n={} x={}", m, n, x),
                u(m, n, x).is_zero(),
                "",
            ),
            Job::Umm { m, x } => {
                let top = BarElem::new(x, (m - 1) % 2 == 1).expect("x >= 0");
                let e0 = BarElem::plain(0);
                let em = BarElem::plain(m as u32);
                let mut want = Tree2Sum::singleton(normalize(top, e0, em, &id));
                want.toggle(normalize(top, em, e0.acted(), &id));
                Entry::check(format!("identities/umm m={} x={}", m, x), u(m, m, x) == want, "")
            }
            Job::Du { m, n, x } => {
                let lhs = d_tree(&u(m + 1, n + 1, x));
                let a = u(m + 1, n, x);
                let b = u(m, n, x);
                let c = u(m + 1, n + 1, x - 1);
                let mut rhs = a.plus(&a.act(&swap_in));
                rhs.add(&b.twist_f());
                rhs.add(&b.act(&rev));
                rhs.add(&c);
                rhs.add(&c.twist_f());
                Entry::check(format!("identities/du m={} n={} x={}", m, n, x), lhs == rhs, "")
            }
            Job::Dalpha { n, p } => {
                let lhs = d_tree(&alpha(n, p));
                let a = alpha(n - 1, p - 1);
                let b = alpha(n - 1, p);
                let mut rhs = a.plus(&a.act(&swap_in));
                rhs.add(&b);
                rhs.add(&b.act(&rev));
                Entry::check(format!("identities/dalpha n={} p={}", n, p), lhs == rhs, "")
            }
        })
        .collect()
}

/// d(dG) = 0 over the triangle 1 <= m <= n <= max_n.
pub fn d2(max_n: i64) -> Vec<Entry> {
    let mut pairs = Vec::new();
    for n in 1..=max_n {
        for m in 1..=n {
            pairs.push((m, n));
        }
    }
    pairs
        .par_iter()
        .map(|&(m, n)| {
            let residual = d_mixed(&dg(m, n));
            let detail =
                if residual.is_zero() { String::new() } else { residual.render() };
            Entry::check(format!("d2 m={} n={}", m, n), residual.is_zero(), detail)
        })
        .collect()
}

fn power_statements(p: u32, i: i64, j: i64) -> bool {
    let cap = 1i64 << p;
    let vanish = i + j < cap || !binom_may(i, j);
    let mirror = binom_may(i, j) == binom_may(cap - i - j - 1, j);
    vanish && mirror
}

/// Binomial facts near powers of two: exhaustive per p, then sampled for
/// the next two p, then the doubling identity on a signed square.
pub fn lemma51(max_p: u32, samples: u64, seed: u64) -> Vec<Entry> {
    let mut entries: Vec<Entry> = (0..=max_p)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&p| {
            let cap = 1i64 << p;
            let mut bad = None;
            for i in 0..cap {
                for j in 0..cap {
                    if !power_statements(p, i, j) && bad.is_none() {
                        bad = Some(format!("fails at i={} j={}", i, j));
                    }
                }
            }
            let detail =
                bad.clone().unwrap_or_else(|| format!("{} pairs", cap * cap));
            Entry::check(format!("lemma51 p={}", p), bad.is_none(), detail)
        })
        .collect();

    for p in max_p + 1..=max_p + 2 {
        let cap = 1i64 << p;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(p as u64));
        let mut bad = None;
        for _ in 0..samples {
            let i = rng.gen_range(0..cap);
            let j = rng.gen_range(0..cap);
            if !power_statements(p, i, j) && bad.is_none() {
                bad = Some(format!("fails at i={} j={}", i, j));
            }
        }
        let detail = bad.clone().unwrap_or_else(|| format!("{} sampled pairs", samples));
        entries.push(Entry::check(format!("lemma51 sampled p={}", p), bad.is_none(), detail));
    }

    let mut bad = None;
    for l in -256..=256i64 {
        for p in -256..=256i64 {
            if binom_may(2 * l, 2 * p - 4 * l + 1) != binom_may(l, p - 2 * l) && bad.is_none() {
                bad = Some(format!("fails at l={} p={}", l, p));
            }
        }
    }
    entries.push(Entry::check(
        "doubling |l|,|p|<=256",
        bad.is_none(),
        bad.unwrap_or_else(|| String::from("513^2 pairs")),
    ));
    entries
}

/// Closed form for the diagonal of u, plus agreement of the two diagonal
/// expansions of each relation cell on classes of every degree.
pub fn diagonal(max_m: i64, max_n: i64, max_x: i64, max_p: i64) -> Vec<Entry> {
    enum Job {
        U { m: i64, n: i64, x: i64 },
        Pair { n: i64, p: i64 },
    }
    let mut jobs = Vec::new();
    for m in 1..=max_m {
        for n in 0..=max_n {
            for x in 0..=max_x {
                jobs.push(Job::U { m, n, x });
            }
        }
    }
    for n in 0..=max_p {
        for p in 0..=n {
            jobs.push(Job::Pair { n, p });
        }
    }

    jobs.par_iter()
        .map(|job| match *job {
            Job::U { m, n, x } => {
                let got = diagonal_coeff(&u(m, n, x));
                // Binomial formula for n >= 1; the n = 0 base case is the
                // bare double square D_x D_0.
                let survives = n == 0 || (n % 2 == 0 && binom_may(n - 2 * m, 2 * m - 1));
                let want = if survives {
                    DiagSum::singleton(DiagSymbol {
                        x: x as u32,
                        lo: (n / 2) as u32,
                        hi: (n / 2) as u32,
                    })
                } else {
                    DiagSum::zero()
                };
                let ok = got == want;
                let detail = if ok {
                    String::new()
                } else {
                    format!("got {} want {}", got.render(), want.render())
                };
                Entry::check(format!("diagonal/u m={} n={} x={}", m, n, x), ok, detail)
            }
            Job::Pair { n, p } => {
                let (lhs, rhs) = adem_cartan::tree::adem_diagonal(n, p);
                let mut bad = None;
                for q in 0..=2 * n + 2 {
                    let l = unstable_normal_form(&diagonal_on_class(&lhs, q), q);
                    let r = unstable_normal_form(&diagonal_on_class(&rhs, q), q);
                    match (l, r) {
                        (Ok(l), Ok(r)) if l == r => {}
                        (Ok(l), Ok(r)) => {
                            bad = Some(format!("q={}: {} vs {}", q, l.render(), r.render()));
                            break;
                        }
                        (l, r) => {
                            bad = Some(format!("q={}: {:?} vs {:?}", q, l.is_err(), r.is_err()));
                            break;
                        }
                    }
                }
                let detail = bad.clone().unwrap_or_else(|| format!("q<={}", 2 * n + 2));
                Entry::check(format!("diagonal/pair n={} p={}", n, p), bad.is_none(), detail)
            }
        })
        .collect()
}

fn random_cochain(
    a: &CupAlgebra,
    degree: i64,
    rng: &mut ChaCha8Rng,
) -> adem_cartan::cochain::Cochain {
    let mut c = adem_cartan::cochain::Cochain::zero(degree);
    for j in 0..a.dim(degree) {
        if rng.gen::<bool>() {
            c.toggle(j);
        }
    }
    c
}

/// The exhaustive relation suite on a loaded model, then random cochain
/// pairs through the coboundary identity.
pub fn relations(a: &CupAlgebra, pairs: u64, seed: u64) -> Vec<Entry> {
    let mut entries = Vec::new();
    match adem_cartan::cochain::cohomology(a) {
        Ok(h) => {
            let report = adem_cartan::cochain::verify_relations(a, &h);
            for e in report.entries {
                let detail = match e.first_failure {
                    Some(first) => first,
                    None => format!("checked {}", e.checked),
                };
                entries.push(Entry::check(
                    format!("relations/{}", e.check),
                    e.failures == 0,
                    detail,
                ));
            }
        }
        Err(err) => {
            entries.push(Entry::check("relations/cohomology", false, format!("{}", err)));
            return entries;
        }
    }

    let top = a.top_degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = None;
    for _ in 0..pairs {
        let p = rng.gen_range(0..=top);
        let q = rng.gen_range(0..=top);
        let i = rng.gen_range(0..=a.i_max());
        let u = random_cochain(a, p, &mut rng);
        let v = random_cochain(a, q, &mut rng);
        match a.coboundary_defect(i, &u, &v) {
            Ok(defect) if defect.is_zero() => {}
            Ok(defect) => {
                if bad.is_none() {
                    bad = Some(format!(
                        "i={} |u|={} |v|={} leaves {}",
                        i,
                        p,
                        q,
                        a.render(&defect)
                    ));
                }
            }
            Err(err) => {
                if bad.is_none() {
                    bad = Some(format!("i={} |u|={} |v|={}: {}", i, p, q, err));
                }
            }
        }
    }
    entries.push(Entry::check(
        "relations/coboundary-random",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("{} pairs, seed {}", pairs, seed)),
    ));
    entries
}
