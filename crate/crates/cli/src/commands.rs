//! The four subcommands. Each builds a [`Report`] (or, for `emit`, a table
//! document) from a resolved [`RunConfig`].

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use anyhow::{anyhow, bail, Result};
use clap::ValueEnum;

use ortho_diffeq_core::diffop::coefficients::{
    coeff_jacobi_c, coeff_laguerre_a, CoefficientFamily, CoefficientKind,
};
use ortho_diffeq_core::diffop::pencils::{
    classical_jacobi, classical_laguerre, jacobi_parity_annihilator, jacobi_symmetric_mass,
    laguerre_annihilator, laguerre_point_mass, sobolev_alpha0_coefficient, sobolev_laguerre_alpha0,
};
use ortho_diffeq_core::diffop::verify_family;
use ortho_diffeq_core::hyper::{
    jacobi_cstar_parity_split, jacobi_cstar_sum_check, laguerre_a_sum_check, CheckResult, CheckStatus,
};
use ortho_diffeq_core::identities::{
    gauss_unit_sums, jacobi_mass_equations, laguerre_a_integer_sums, laguerre_shift_sums, ExactCheck,
};
use ortho_diffeq_core::scalar::{as_nonneg_integer, int};
use ortho_diffeq_core::search::{
    jacobi_symmetric_problem, sobolev_laguerre_problem, FixedForm, HoldoutReport, SearchProblem, SearchSolution,
    Structure, UnknownBlock,
};
use ortho_diffeq_core::{BlockKey, Error, FamilyKind, FamilyParams, Poly, Rational};

use crate::config::{Format, RunConfig, StructureArg};
use crate::report::{Item, Report, Status};

pub fn target_name<T: ValueEnum>(t: &T) -> String {
    t.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

pub fn parse_target<T: ValueEnum>(command: &str, s: &str) -> Result<T> {
    T::from_str(s, false).map_err(|_| {
        let known: Vec<String> = T::value_variants().iter().map(target_name).collect();
        anyhow!("unknown {command} target {s:?}; expected one of: {}", known.join(", "))
    })
}

fn range_text(r: &RangeInclusive<usize>) -> String {
    format!("{}..{}", r.start(), r.end())
}

fn list_text(v: &[usize]) -> String {
    match (v.first(), v.last()) {
        (Some(a), Some(b)) if b - a + 1 == v.len() => format!("{a}..{b}"),
        _ => v.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
    }
}

fn kebab<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

fn default_order(alpha: &Rational, what: &str) -> Result<usize> {
    as_nonneg_integer(alpha)
        .map(|a| 2 * a + 4)
        .ok_or_else(|| anyhow!("{what}: alpha = {alpha} is not a non-negative integer, so --order is required"))
}

// ---------------------------------------------------------------- verify

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    /// Point mass at the origin: classical operator plus `M sum a_i D^i`.
    LaguerrePointMass,
    /// The transcribed order-ten operator for Sobolev-type Laguerre at alpha = 0.
    SobolevLaguerreAlpha0,
    /// `sum b*_i D^i + M sum c*_i D^i` on the Sobolev-type Laguerre family (n >= 1).
    LaguerreAnnihilator,
    /// Parity annihilator on the symmetric Jacobi family.
    JacobiParity,
    /// Classical symmetric Jacobi operator plus `M sum c_i D^i`.
    JacobiSymmetricMass,
    ClassicalLaguerre,
    ClassicalJacobi,
}

pub fn verify(cfg: &RunConfig, target: VerifyTarget) -> Result<Report> {
    use VerifyTarget::*;
    let a = cfg.alpha_or(int(0))?;
    let (pencil, family, default_n) = match target {
        LaguerrePointMass => (laguerre_point_mass(&a), FamilyParams::laguerre(FamilyKind::LaguerreM, a.clone())?, 0..=20),
        SobolevLaguerreAlpha0 => {
            if a != int(0) {
                bail!("sobolev-laguerre-alpha0 is only defined at alpha = 0");
            }
            (sobolev_laguerre_alpha0(), FamilyParams::laguerre(FamilyKind::LaguerreMN, a.clone())?, 0..=20)
        }
        LaguerreAnnihilator => (laguerre_annihilator(&a), FamilyParams::laguerre(FamilyKind::LaguerreMN, a.clone())?, 1..=15),
        JacobiParity => (
            jacobi_parity_annihilator(),
            FamilyParams::new(FamilyKind::JacobiSymmetricMM, a.clone(), a.clone())?,
            0..=20,
        ),
        JacobiSymmetricMass => (
            jacobi_symmetric_mass(&a),
            FamilyParams::new(FamilyKind::JacobiSymmetricMM, a.clone(), a.clone())?,
            0..=20,
        ),
        ClassicalLaguerre => (classical_laguerre(&a), FamilyParams::laguerre(FamilyKind::LaguerreClassical, a.clone())?, 0..=20),
        ClassicalJacobi => {
            let b = cfg.beta()?.unwrap_or_else(|| int(0));
            (
                classical_jacobi(&a, &b),
                FamilyParams::new(FamilyKind::JacobiClassical, a.clone(), b)?,
                0..=20,
            )
        }
    };
    let ns = cfg.n_range(default_n)?;

    let mut report = Report::new("verify", &target_name(&target));
    report.param("alpha", &family.alpha);
    if family.kind.is_jacobi() {
        report.param("beta", &family.beta);
    }
    report.param("n", range_text(&ns));

    let result = verify_family(&pencil, &family, ns)?;
    for e in &result.entries {
        let keys: BTreeSet<BlockKey> = pencil.active_keys().into_iter().chain(e.residual.keys()).collect();
        for key in keys {
            let r = e.residual.block(key);
            let item = Item::named("residual").n(e.n).block(key).residual(&r);
            if r.is_zero() {
                report.push(item);
            } else {
                report.push_failure(item, Status::Fail);
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------- search

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchTarget {
    /// Mass block of the point-mass Laguerre operator.
    LaguerreM,
    /// `M`, `N` and `MN` blocks for the Sobolev-type Laguerre family.
    Sobolev,
    /// Mass block for the symmetric Jacobi family.
    JacobiSymmetric,
    /// A full problem given as `[problem]` in the config file.
    Custom,
}

type ExpectedFn = Box<dyn Fn(BlockKey, usize, usize) -> Poly>;

fn holdout_after(train: &[usize], count: usize) -> RangeInclusive<usize> {
    let start = train.iter().max().map_or(0, |m| m + 1);
    start..=start + count - 1
}

pub fn search(cfg: &RunConfig, target: SearchTarget) -> Result<Report> {
    let mut report = Report::new("search", &target_name(&target));
    let (problem, expected): (SearchProblem, Option<ExpectedFn>) = match target {
        SearchTarget::LaguerreM => {
            let a = cfg.alpha_or(int(0))?;
            let order = match cfg.order {
                Some(o) => o,
                None => default_order(&a, "laguerre-m")?,
            };
            let train = cfg.n_train(0..=(3 * order).max(12))?;
            let holdout = cfg.n_holdout(holdout_after(&train, 8))?;
            let problem = SearchProblem {
                family: FamilyParams::laguerre(FamilyKind::LaguerreM, a.clone())?,
                fixed: FixedForm::ClassicalLaguerre,
                unknowns: vec![UnknownBlock::new(BlockKey::M, order)],
                normalizations: Vec::new(),
                n_train: train,
                n_holdout: holdout,
            };
            let f: ExpectedFn = Box::new(move |_, i, n| coeff_laguerre_a(&a, i, n));
            (problem, Some(f))
        }
        SearchTarget::Sobolev => {
            let a = cfg.alpha_or(int(0))?;
            let orders = match &cfg.orders {
                Some(o) if o.len() == 3 => (o[0], o[1], o[2]),
                Some(o) => bail!("--orders takes three values M,N,MN, got {}", o.len()),
                None => {
                    let k = as_nonneg_integer(&a).ok_or_else(|| {
                        anyhow!("sobolev: alpha = {a} is not a non-negative integer, so --orders is required")
                    })?;
                    (2 * k + 4, 2 * k + 8, 4 * k + 10)
                }
            };
            let total = orders.0 + orders.1 + orders.2;
            let train = cfg.n_train(1..=(total + 2).max(25))?;
            let holdout = cfg.n_holdout(holdout_after(&train, 3))?;
            let alpha0 = a == int(0);
            let problem =
                sobolev_laguerre_problem(a, orders, cfg.sum_vanishing.unwrap_or(false), train, holdout)?;
            let f: Option<ExpectedFn> =
                alpha0.then(|| Box::new(sobolev_alpha0_coefficient) as ExpectedFn);
            (problem, f)
        }
        SearchTarget::JacobiSymmetric => {
            let a = cfg.alpha_or(int(0))?;
            let order = match cfg.order {
                Some(o) => o,
                None => default_order(&a, "jacobi-symmetric")?,
            };
            let structure = match cfg.structure.unwrap_or(StructureArg::Divisible) {
                StructureArg::Monomial => Structure::Monomial,
                StructureArg::Divisible => Structure::DivisibleByOneMinusXSquared,
            };
            let train = cfg.n_train(0..=(2 * order).max(15))?;
            let holdout = cfg.n_holdout(holdout_after(&train, 3))?;
            let normalize = cfg.normalize.unwrap_or(true);
            let problem = jacobi_symmetric_problem(a.clone(), order, structure, normalize, train, holdout)?;
            let f: Option<ExpectedFn> =
                normalize.then(|| Box::new(move |_: BlockKey, i, n| coeff_jacobi_c(&a, i, n)) as ExpectedFn);
            (problem, f)
        }
        SearchTarget::Custom => {
            let p = cfg
                .problem
                .clone()
                .ok_or_else(|| anyhow!("search custom needs a [problem] table in the config file"))?;
            (p, None)
        }
    };

    report.param("alpha", &problem.family.alpha);
    report.param("family", kebab(&problem.family.kind));
    for u in &problem.unknowns {
        report.param(&format!("order[{}]", u.key), u.max_order);
    }
    report.param("n-train", list_text(&problem.n_train));
    report.param("n-holdout", list_text(&problem.n_holdout));

    let sol = match problem.solve() {
        Ok(s) => s,
        Err(Error::Inconsistent { row }) => {
            report.push_failure(Item::named("inconsistent-row").actual(row), Status::Inconsistent);
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    search_items(&mut report, &sol, expected.as_deref());
    Ok(report)
}

fn search_items(report: &mut Report, sol: &SearchSolution, expected: Option<&dyn Fn(BlockKey, usize, usize) -> Poly>) {
    let d = &sol.determination;
    for (name, v) in [
        ("columns", d.columns),
        ("rows", d.rows),
        ("rank", d.rank),
        ("nullspace-dim", d.nullspace_dim),
        ("n-train", d.n_train),
        ("required-n-train", d.required_n_train),
    ] {
        report.push(Item::named(name).actual(v));
    }

    let unique = sol.nullspace_dim() == 0;
    let expected = expected.filter(|_| unique);
    let v = sol.particular();
    for u in &sol.problem.unknowns {
        for i in 1..=u.max_order {
            let got = sol.coefficient(v, u.key, i);
            let mut item = Item::named(format!("c_{i}")).block(u.key).actual(&got);
            if let Some(f) = expected {
                let e = f(u.key, i, 0);
                item = item.expected(&e);
                if e != got {
                    report.push_failure(item, Status::Fail);
                    continue;
                }
            }
            report.push(item);
        }
        for &n in &sol.problem.n_train {
            let Some(got) = sol.order_zero(v, u.key, n) else {
                continue;
            };
            let mut item = Item::named("c_0").n(n).block(u.key).actual(&got);
            if let Some(f) = expected {
                let e = f(u.key, 0, n).coeff(0);
                item = item.expected(&e);
                if e != got {
                    report.push_failure(item, Status::Fail);
                    continue;
                }
            }
            report.push(item);
        }
    }

    for (k, basis) in sol.nullspace().iter().enumerate() {
        for u in &sol.problem.unknowns {
            for i in 1..=u.max_order {
                let c = sol.coefficient(basis, u.key, i);
                if !c.is_zero() {
                    report.push(Item::named(format!("basis[{k}] c_{i}")).block(u.key).actual(&c));
                }
            }
            for &n in &sol.problem.n_train {
                if let Some(c) = sol.order_zero(basis, u.key, n).filter(|c| *c != int(0)) {
                    report.push(Item::named(format!("basis[{k}] c_0")).n(n).block(u.key).actual(&c));
                }
            }
        }
    }

    match &sol.holdout {
        HoldoutReport::NotValidated => report.push(Item::named("holdout").actual("not-validated")),
        HoldoutReport::Validated {
            particular_pass,
            failures,
            ..
        } => {
            report.push(Item::named("holdout").actual(if failures.is_empty() { "pass" } else { "fail" }));
            for f in failures {
                let name = match f.vector {
                    None => "holdout particular".to_string(),
                    Some(k) => format!("holdout basis[{k}]"),
                };
                // With a nontrivial nullspace the particular vector is only one
                // representative, so its failure is a symptom of under-determination.
                let status = if f.vector.is_none() && !d.under_determined {
                    Status::Fail
                } else {
                    Status::UnderDetermined
                };
                report.push_failure(Item::named(name).n(f.n).residual(&f.residual), status);
            }
            if *particular_pass == Some(false) && !d.under_determined {
                report.raise(Status::Fail);
            }
        }
    }
    if d.under_determined {
        report.push_failure(
            Item::named("under-determined")
                .expected(format!("n-train >= {}", d.required_n_train))
                .actual(d.n_train),
            Status::UnderDetermined,
        );
    }
}

// ---------------------------------------------------------------- identities

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdentityTarget {
    /// Sums of the point-mass Laguerre coefficients: exact for integer alpha,
    /// numeric against the closed form otherwise.
    LaguerreASum,
    /// Shifted-derivative sums behind the Laguerre annihilator.
    LaguerreShift,
    /// The pair of equations equivalent to the symmetric Jacobi mass operator.
    JacobiMassEquations,
    /// Terminating Gauss sums at unit argument.
    GaussUnit,
    /// `sum c*_i` at `x = +-1` against `2 1F1(-alpha-1; 3; -2x)`.
    JacobiCstarSum,
    /// Even and odd parts of the `c*` sums.
    JacobiCstarParity,
}

fn push_exact(report: &mut Report, c: &ExactCheck) {
    let name = match c.index {
        Some(k) => format!("{}[{k}]", c.name),
        None => c.name.clone(),
    };
    let mut item = Item::named(name).expected(&c.expected).actual(&c.actual);
    if let Some(n) = c.n {
        item = item.n(n);
    }
    if c.passed() {
        report.push(item);
    } else {
        report.push_failure(item, Status::Fail);
    }
}

fn sci(v: f64) -> String {
    format!("{v:e}")
}

fn push_numeric(report: &mut Report, r: &CheckResult) {
    let item = Item::named(&r.name)
        .expected(sci(r.rhs))
        .actual(sci(r.lhs))
        .residual(sci(r.difference))
        .tolerance(sci(r.tolerance));
    match r.status {
        CheckStatus::Pass => report.push(item),
        CheckStatus::Mismatch => report.push_failure(item, Status::Fail),
        CheckStatus::NonConvergent => report.push_failure(item, Status::NonConvergent),
    }
    report.push(Item::named(format!("{} last-term", r.name)).actual(sci(r.last_term)));
}

pub fn identities(cfg: &RunConfig, target: IdentityTarget) -> Result<Report> {
    use IdentityTarget::*;
    let mut report = Report::new("identities", &target_name(&target));
    let a = cfg.alpha_or(int(0))?;
    report.param("alpha", &a);
    match target {
        LaguerreASum => match as_nonneg_integer(&a) {
            Some(k) => {
                for c in laguerre_a_integer_sums(k) {
                    push_exact(&mut report, &c);
                }
            }
            None => {
                let x = cfg.x()?.unwrap_or_else(|| int(1));
                let (terms, tol) = (cfg.terms()?, cfg.tol()?);
                report.param("x", &x);
                report.param("terms", terms);
                report.param("tol", sci(tol));
                push_numeric(&mut report, &laguerre_a_sum_check(&a, &x, terms, tol)?);
            }
        },
        LaguerreShift => {
            let ns = cfg.n_range(1..=15)?;
            let kmax = cfg.imax.unwrap_or(2);
            report.param("n", range_text(&ns));
            report.param("imax", kmax);
            for n in ns {
                for k in 0..=kmax {
                    for c in laguerre_shift_sums(&a, n, k)? {
                        push_exact(&mut report, &c);
                    }
                }
            }
        }
        JacobiMassEquations => {
            let ns = cfg.n_range(0..=10)?;
            report.param("n", range_text(&ns));
            for n in ns {
                for c in jacobi_mass_equations(&a, n)? {
                    push_exact(&mut report, &c);
                }
            }
        }
        GaussUnit => {
            let imax = cfg.imax.unwrap_or(30);
            report.param("imax", imax);
            for i in 1..=imax {
                for c in gauss_unit_sums(&a, i)? {
                    push_exact(&mut report, &c);
                }
            }
        }
        JacobiCstarSum | JacobiCstarParity => {
            let (terms, tol) = (cfg.terms()?, cfg.tol()?);
            report.param("terms", terms);
            report.param("tol", sci(tol));
            for sign in cfg.signs()? {
                if target == JacobiCstarSum {
                    push_numeric(&mut report, &jacobi_cstar_sum_check(&a, sign, terms, tol)?);
                } else {
                    for r in jacobi_cstar_parity_split(&a, sign, terms, tol)? {
                        push_numeric(&mut report, &r);
                    }
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------- emit

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EmitTarget {
    LaguerreA,
    LaguerreBstar,
    LaguerreCstar,
    JacobiB,
    JacobiC,
    JacobiCstar,
    SobolevAlpha0One,
    SobolevAlpha0M,
    SobolevAlpha0N,
    SobolevAlpha0Mn,
}

impl EmitTarget {
    fn kind(self) -> CoefficientKind {
        match self {
            EmitTarget::LaguerreA => CoefficientKind::LaguerreA,
            EmitTarget::LaguerreBstar => CoefficientKind::LaguerreBStar,
            EmitTarget::LaguerreCstar => CoefficientKind::LaguerreCStar,
            EmitTarget::JacobiB => CoefficientKind::JacobiB,
            EmitTarget::JacobiC => CoefficientKind::JacobiC,
            EmitTarget::JacobiCstar => CoefficientKind::JacobiCStar,
            EmitTarget::SobolevAlpha0One => CoefficientKind::SobolevAlpha0(BlockKey::ONE),
            EmitTarget::SobolevAlpha0M => CoefficientKind::SobolevAlpha0(BlockKey::M),
            EmitTarget::SobolevAlpha0N => CoefficientKind::SobolevAlpha0(BlockKey::N),
            EmitTarget::SobolevAlpha0Mn => CoefficientKind::SobolevAlpha0(BlockKey::MN),
        }
    }

    /// Symbol used for the table keys.
    pub fn symbol(self) -> &'static str {
        match self {
            EmitTarget::LaguerreA => "a",
            EmitTarget::LaguerreBstar => "bstar",
            EmitTarget::LaguerreCstar | EmitTarget::JacobiCstar => "cstar",
            EmitTarget::JacobiB => "b",
            _ => "c",
        }
    }

    fn latex_symbol(self) -> &'static str {
        match self {
            EmitTarget::LaguerreBstar => "b^{*}",
            EmitTarget::LaguerreCstar | EmitTarget::JacobiCstar => "c^{*}",
            other => other.symbol(),
        }
    }
}

/// Coefficient table `i -> c_i` for `i = 1..=imax`, preceded by `c_0` at
/// degree `n` when `n` is given.
pub fn emit(cfg: &RunConfig, target: EmitTarget, format: Format) -> Result<String> {
    let kind = target.kind();
    let alpha = cfg.alpha_or(int(0))?;
    if matches!(kind, CoefficientKind::SobolevAlpha0(_)) && alpha != int(0) {
        bail!("sobolev-alpha0 tables exist only at alpha = 0");
    }
    let fam = CoefficientFamily::new(kind, alpha);
    let imax = cfg.imax.or_else(|| fam.formal_order()).unwrap_or(10);
    let n = match cfg.n.as_deref() {
        Some(s) => {
            let r = crate::config::parse_range("n", s)?;
            if r.start() != r.end() {
                bail!("emit takes a single degree for --n");
            }
            Some(*r.start())
        }
        None => None,
    };
    let mut rows: Vec<(usize, Poly)> = Vec::new();
    if let Some(n) = n {
        rows.push((0, fam.coefficient(0, n)));
    }
    rows.extend((1..=imax).map(|i| (i, fam.coefficient(i, n.unwrap_or(0)))));

    let sym = target.symbol();
    Ok(match format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(i, p)| (format!("{sym}_{i}"), serde_json::Value::String(p.to_string())))
                .collect();
            let mut s = serde_json::to_string_pretty(&map).expect("table serializes");
            s.push('\n');
            s
        }
        Format::Text => rows.iter().map(|(i, p)| format!("{sym}_{i} = {p}\n")).collect(),
        Format::Latex => {
            let lsym = target.latex_symbol();
            let lines: Vec<String> = rows
                .iter()
                .map(|(i, p)| format!("{lsym}_{{{i}}}(x) &= {}", p.to_latex()))
                .collect();
            format!("\\begin{{aligned}}\n{}\n\\end{{aligned}}\n", lines.join(" \\\\\n"))
        }
    })
}
