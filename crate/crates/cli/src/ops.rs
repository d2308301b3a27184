//! The non-sweep subcommands: expansion rendering, Adem reduction, the
//! Steenrod table, structure solving, and secondary operation evaluation.

use std::path::Path;

use adem_cartan::cochain::{cohomology, CohomologyModel, Cochain, CupAlgebra};
use adem_cartan::gcell::dg;
use adem_cartan::solver::{
    assemble, functional_constant, secondary_rep, solve_structure, AdemRelationData, GSolution,
    GSystem, SecondaryError, SolveError,
};
use adem_cartan::steenrod::{normal_form, parse_sq, RewriteError, SqMode};
use adem_cartan::tree::{alpha, u};

use crate::report::Entry;

/// Failures that end the run before any report is produced. Mathematical
/// verdicts are not errors; they land in the report with exit code 1.
pub enum CliError {
    /// Bad flags, unparsable input, unusable files: exit 2.
    Usage(String),
    /// Fuel exhaustion and friends: exit 3.
    Resource(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) => m,
            CliError::Resource(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn expand(
    what: &str,
    m: Option<i64>,
    n: Option<i64>,
    x: Option<i64>,
    p: Option<i64>,
) -> Result<String, CliError> {
    let need = |flag: &str, v: Option<i64>| v.ok_or_else(|| usage(format!("--{} is required", flag)));
    match what {
        "u" => {
            let (m, n, x) = (need("m", m)?, need("n", n)?, need("x", x)?);
            if m < 1 || x < 0 {
                return Err(usage("u needs m >= 1 and x >= 0"));
            }
            Ok(u(m, n, x).render())
        }
        "alpha" => {
            let (n, p) = (need("n", n)?, need("p", p)?);
            if n < 0 {
                return Err(usage("alpha needs n >= 0"));
            }
            Ok(alpha(n, p).render())
        }
        "dg" => {
            let (m, n) = (need("m", m)?, need("n", n)?);
            if m < 1 || n < m {
                return Err(usage("dg needs 1 <= m <= n"));
            }
            Ok(dg(m, n).render())
        }
        other => Err(usage(format!("unknown expansion {}; expected u, alpha or dg", other))),
    }
}

pub fn adem_reduce(expr: &str, mode: SqMode) -> Result<String, CliError> {
    let poly = parse_sq(expr).map_err(|e| usage(format!("{}", e)))?;
    match normal_form(&poly, mode) {
        Ok(nf) => Ok(nf.render()),
        Err(RewriteError::FuelExhausted { .. }) => {
            Err(CliError::Resource(String::from("rewriting ran out of fuel")))
        }
        Err(e) => Err(usage(format!("{}", e))),
    }
}

fn load_model(path: &Path) -> Result<(CupAlgebra, CohomologyModel), CliError> {
    let a = crate::formats::load_complex(path).map_err(|e| usage(format!("{:#}", e)))?;
    let h = cohomology(&a)
        .map_err(|e| usage(format!("{}: not a valid cochain model: {}", path.display(), e)))?;
    Ok((a, h))
}

/// Sq^r on every nonzero class, r running one past the class degree so the
/// instability cutoff is visible in the table.
pub fn sq_table(path: &Path) -> Result<Vec<Entry>, CliError> {
    let (a, h) = load_model(path)?;
    let mut entries = Vec::new();
    for q in 0..=h.top_degree() {
        for class in h.all_classes(q) {
            if class.is_zero() {
                continue;
            }
            let name = a.render(&h.representative(&class));
            for r in 0..=q + 1 {
                let value = adem_cartan::cochain::sq(&a, &h, &class, r)
                    .map_err(|e| usage(format!("Sq^{} on {}: {}", r, name, e)))?;
                let mut rendered = a.render(&h.representative(&value));
                if r > q {
                    rendered.push_str("  [instability]");
                }
                entries.push(Entry::info(format!("Sq^{}({})", r, name), rendered));
            }
        }
    }
    Ok(entries)
}

fn assemble_and_describe(
    a: &CupAlgebra,
    n_max: i64,
) -> Result<(GSystem, Vec<Entry>), CliError> {
    let sys = assemble(a, n_max)
        .map_err(|e| usage(format!("the model cannot evaluate the boundary trees: {}", e)))?;
    let entries = vec![
        Entry::info("unknowns", sys.ncols().to_string()),
        Entry::info("rows", sys.nrows().to_string()),
    ];
    Ok((sys, entries))
}

fn solve_and_describe(
    a: &CupAlgebra,
    sys: &GSystem,
    entries: &mut Vec<Entry>,
) -> Result<GSolution, i32> {
    match solve_structure(a, sys) {
        Ok(sol) => {
            entries.push(Entry::check("solution", true, "found and re-verified"));
            entries.push(Entry::info("kernel dimension", sol.kernel.len().to_string()));
            Ok(sol)
        }
        Err(SolveError::Inconsistent { witness }) => {
            entries.push(Entry::check("solution", false, format!("inconsistent: {}", witness)));
            Err(1)
        }
        Err(SolveError::VerificationFailed { witness }) => {
            entries.push(Entry::check("solution", false, format!("verification: {}", witness)));
            Err(1)
        }
    }
}

/// `G^1_2(alpha,beta,alpha,beta) + G^1_2(beta,alpha,beta,alpha)`, read off
/// on the product class. Constant 1 over the solution space exactly when
/// the diagonal product obstruction is present.
const TORUS_DIAGONAL: &str = "torus-diagonal";

fn build_functional(
    name: &str,
    a: &CupAlgebra,
    sys: &GSystem,
) -> Result<(adem_cartan::gf2::BitVec, bool), CliError> {
    match name {
        TORUS_DIAGONAL => {
            let f = sys
                .functional_by_names(
                    a,
                    &[
                        (1, 2, ["a(x)1", "1(x)a", "a(x)1", "1(x)a"], "a(x)a"),
                        (1, 2, ["1(x)a", "a(x)1", "1(x)a", "a(x)1"], "a(x)a"),
                    ],
                )
                .ok_or_else(|| {
                    usage("torus-diagonal needs basis names a(x)1, 1(x)a and a(x)a in the model")
                })?;
            Ok((f, true))
        }
        other => Err(usage(format!(
            "unknown functional {}; known: {}",
            other, TORUS_DIAGONAL
        ))),
    }
}

pub fn solve(
    path: &Path,
    max_n: i64,
    check_functional: Option<&str>,
) -> Result<(Vec<Entry>, i32), CliError> {
    if max_n < 1 {
        return Err(usage("--max-n must be at least 1"));
    }
    let a = crate::formats::load_complex(path).map_err(|e| usage(format!("{:#}", e)))?;
    let (sys, mut entries) = assemble_and_describe(&a, max_n)?;
    let sol = match solve_and_describe(&a, &sys, &mut entries) {
        Ok(sol) => sol,
        Err(code) => return Ok((entries, code)),
    };

    let mut code = 0;
    if let Some(name) = check_functional {
        let (f, expected) = build_functional(name, &a, &sys)?;
        let ok = functional_constant(&sol, &f, expected);
        let detail = if ok {
            format!("constant {} over the solution space", expected as u8)
        } else if functional_constant(&sol, &f, !expected) {
            format!("constant {} over the solution space", !expected as u8)
        } else {
            String::from("not constant over the solution space")
        };
        entries.push(Entry::check(format!("functional {}", name), ok, detail));
        if !ok {
            code = 1;
        }
    }
    Ok((entries, code))
}

fn parse_relation(text: &str) -> Result<Vec<(i64, i64)>, CliError> {
    let poly = parse_sq(text).map_err(|e| usage(format!("{}", e)))?;
    let mut pairs = Vec::new();
    for mono in poly.terms() {
        match mono.exps[..] {
            [a, b] => pairs.push((a, b)),
            _ => {
                return Err(usage(format!(
                    "relation term {} is not a two-square composite",
                    mono.render()
                )))
            }
        }
    }
    if pairs.is_empty() {
        return Err(usage("the relation reduced to zero"));
    }
    Ok(pairs)
}

fn parse_cocycle(a: &CupAlgebra, text: &str) -> Result<Cochain, CliError> {
    let mut degree: Option<i64> = None;
    let mut picks = Vec::new();
    for raw in text.split('+') {
        let name = raw.trim();
        if name.is_empty() {
            return Err(usage("empty summand in --cocycle"));
        }
        let mut found = None;
        for d in 0..=a.top_degree() {
            if let Some(j) = a.index_of(d, name) {
                found = Some((d, j));
                break;
            }
        }
        let (d, j) = found.ok_or_else(|| usage(format!("unknown basis name {}", name)))?;
        if *degree.get_or_insert(d) != d {
            return Err(usage("--cocycle mixes degrees"));
        }
        picks.push(j);
    }
    let mut c = Cochain::zero(degree.expect("at least one summand"));
    for j in picks {
        c.toggle(j);
    }
    Ok(c)
}

fn parse_target(text: &str) -> Result<(i64, i64), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(usage("--target takes m,p"));
    }
    let m = parts[0].parse().map_err(|_| usage("--target m is not an integer"))?;
    let p = parts[1].parse().map_err(|_| usage("--target p is not an integer"))?;
    Ok((m, p))
}

pub fn secondary(
    path: &Path,
    cocycle: &str,
    relation: &str,
    target: &str,
    max_n: Option<i64>,
) -> Result<(Vec<Entry>, i32), CliError> {
    let (a, h) = load_model(path)?;
    let pairs = parse_relation(relation)?;
    let c = parse_cocycle(&a, cocycle)?;
    let (m, p) = parse_target(target)?;
    let r = AdemRelationData::new(pairs, c.degree, (m, p))
        .map_err(|e| usage(format!("bad relation data: {}", e)))?;
    let n_max = max_n.unwrap_or(p + 1);
    if n_max < p + 1 {
        return Err(usage(format!("the target cell needs --max-n >= {}", p + 1)));
    }

    let (sys, mut entries) = assemble_and_describe(&a, n_max)?;
    let sol = match solve_and_describe(&a, &sys, &mut entries) {
        Ok(sol) => sol,
        Err(code) => return Ok((entries, code)),
    };

    match secondary_rep(&a, &sol.action, &c, &r) {
        Ok(sc) => {
            entries.push(Entry::info("value degree", sc.degree.to_string()));
            entries.push(Entry::info(
                "quotient dimension",
                format!("{} (ambient {})", sc.quotient_dim, sc.ambient_dim),
            ));
            let coords: Vec<String> =
                (0..sc.quotient_dim).map(|i| u8::from(sc.coords.get(i)).to_string()).collect();
            entries.push(Entry::info("coordinates", coords.join(" ")));
            let named = render_quotient_element(&a, &h, &r, &sc)?;
            entries.push(Entry::info("class", named));
            Ok((entries, 0))
        }
        Err(SecondaryError::NotACocycle) => Err(usage("--cocycle is not closed")),
        Err(SecondaryError::Eval(e)) => Err(usage(format!("evaluation failed: {}", e))),
        Err(SecondaryError::Cohomology(e)) => Err(usage(format!("{}", e))),
        Err(e) => {
            entries.push(Entry::check("secondary", false, format!("{}", e)));
            Ok((entries, 1))
        }
    }
}

/// Spell a quotient element through representatives: each coordinate bit
/// picks a representative vector over the degree-t class basis, and each
/// class renders through its cochain representative.
fn render_quotient_element(
    a: &CupAlgebra,
    h: &CohomologyModel,
    r: &AdemRelationData,
    sc: &adem_cartan::solver::SecondaryClass,
) -> Result<String, CliError> {
    if sc.is_zero() {
        return Ok(String::from("0"));
    }
    let t = sc.degree;
    let ms: Vec<i64> = r.pairs.iter().map(|&(m, _)| m).collect();
    let quot = adem_cartan::solver::sq_image_quotient(a, h, t, &ms)
        .map_err(|e| usage(format!("{}", e)))?;
    let mut on_classes = adem_cartan::gf2::BitVec::zeros(sc.ambient_dim);
    for (i, rep) in quot.representatives().iter().enumerate() {
        if sc.coords.get(i) {
            on_classes.xor_assign(rep);
        }
    }
    let mut total = Cochain::zero(t);
    for j in 0..h.dim(t) {
        if on_classes.get(j) {
            total.add(&h.representative(&h.basis_class(t, j)));
        }
    }
    Ok(a.render(&total))
}
