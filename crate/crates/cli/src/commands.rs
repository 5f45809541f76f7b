use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use revzeta::algebra::{expand_rational, format_rational, RationalFunction, TruncatedSeries};
use revzeta::budget::WorkBudget;
use revzeta::document::{emit_system_string, parse_system, SystemDocument};
use revzeta::error::{Error, ErrorKind};
use revzeta::fixtures;
use revzeta::group::{coset_enumeration_index, enumerate_subgroups, CosetIndex};
use revzeta::sft::ReversalSft;
use revzeta::sofic::{build_joint_state_chain, JointStateChain, LabeledPresentation, SoficError};
use revzeta::zeta::{
    artin_mazur, artin_mazur_sofic, flip_zeta, generating_g, generating_h, lind_zeta_direct,
    lind_zeta_product, ordinary_gf_rational, ordinary_gf_rational_sofic, Convention, CountProvider,
    FixedPointOracle, SftBruteForce, SftTrace, SoficBruteForce, SoficTheoremC, ZetaResult,
};

use crate::{Cli, Command, ConventionArg, Method, ZetaKind};

pub struct Output {
    pub text: String,
    pub json: Value,
    pub status: i32,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            status: 0,
        }
    }
}

pub fn run(cli: Cli) -> Result<Output, Error> {
    match cli.command {
        Command::Validate { system } => validate(&load(&system)?),
        Command::Counts { system, m_max } => counts(&load(&system)?, m_max),
        Command::Gf {
            system,
            convention,
            order,
            rational,
        } => gf(&load(&system)?, convention, order, rational),
        Command::Zeta {
            system,
            method,
            order,
            kind,
        } => zeta(&load(&system)?, method, order, kind),
        Command::Subgroups {
            r,
            index_max,
            verify,
        } => subgroups(r, index_max, verify),
        Command::Jsc { system } => jsc(&load(&system)?),
        Command::Crosscheck { system, order } => crosscheck(&load(&system)?, order),
        Command::Example { name, output, list } => example(&name, output.as_deref(), list),
    }
}

fn load(system: &str) -> Result<SystemDocument, Error> {
    let path = Path::new(system);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: system.to_string(),
            source,
        })?;
        return Ok(parse_system(&text)?);
    }
    fixtures::named_system(system).ok_or_else(|| {
        Error::Usage(format!(
            "{system:?} is neither a readable file nor a built-in system"
        ))
    })
}

fn budget() -> Result<WorkBudget, Error> {
    Ok(WorkBudget::from_env()?)
}

/// Primary (closed-form) and oracle (enumeration) count providers.
struct Backends {
    primary: Box<dyn CountProvider>,
    oracle: Box<dyn FixedPointOracle>,
    closed: Closed,
}

enum Closed {
    Sft(ReversalSft),
    Sofic(Box<SoficTheoremC>),
}

fn backends(doc: &SystemDocument) -> Result<Backends, Error> {
    let b = budget()?;
    Ok(match doc {
        SystemDocument::Sft(sys) => Backends {
            primary: Box::new(SftTrace::new(sys.clone())),
            oracle: Box::new(SftBruteForce::new(sys.clone(), b)),
            closed: Closed::Sft(sys.clone()),
        },
        SystemDocument::Sofic(p) => {
            let jsc = build_joint_state_chain(p, b)?;
            let tc = SoficTheoremC::new(jsc.chain(), b)?;
            Backends {
                primary: Box::new(tc.clone()),
                oracle: Box::new(SoficBruteForce::new(p.clone(), b)),
                closed: Closed::Sofic(Box::new(tc)),
            }
        }
    })
}

fn half_order(doc: &SystemDocument) -> usize {
    match doc {
        SystemDocument::Sft(s) => s.r(),
        SystemDocument::Sofic(p) => p.r(),
    }
}

fn divisors(r: usize) -> impl Iterator<Item = usize> {
    (1..=r).filter(move |k| r.is_multiple_of(*k))
}

fn series_text(s: &TruncatedSeries) -> String {
    s.to_strings().join(", ")
}

fn validate(doc: &SystemDocument) -> Result<Output, Error> {
    match doc {
        SystemDocument::Sft(sys) => {
            let text = format!(
                "valid reversal SFT: {} symbols, order {}, tau has order {}\n\
                 J is a permutation, J^{} = I, AJ = JA^T, AJ^2 = J^2A\n",
                sys.len(),
                sys.order(),
                2 * sys.minimal_half_order(),
                sys.order()
            );
            let json = json!({
                "kind": "sft",
                "valid": true,
                "symbols": sys.len(),
                "order": sys.order(),
                "tau_order": 2 * sys.minimal_half_order(),
            });
            Ok(Output::ok(text, json))
        }
        SystemDocument::Sofic(p) => {
            if let Some(w) = p.tau_closure_witness()? {
                return Err(SoficError::NotTauClosed(w).into());
            }
            let (jsc, status) = chain_or_certificate(p)?;
            let cert = jsc.as_ref().map(|j| j.certificate().clone());
            let cert = match (cert, status) {
                (Some(c), _) => c,
                (None, Err(c)) => c,
                (None, Ok(())) => unreachable!(),
            };
            let text = format!(
                "tau-closed sofic presentation: {} states, {} labels, order {}\ncertificate: {cert}\n",
                p.states().len(),
                p.labels().len(),
                p.order()
            );
            let json = json!({
                "kind": "sofic",
                "tau_closed": true,
                "certificate": serde_json::to_value(&cert).expect("serializable"),
                "passed": cert.passed(),
            });
            Ok(Output {
                text,
                json,
                status: if cert.passed() { 0 } else { 4 },
            })
        }
    }
}

type ChainAttempt = (
    Option<JointStateChain>,
    Result<(), revzeta::sofic::Certificate>,
);

/// The chain, or the failing certificate when the property checks fail.
fn chain_or_certificate(p: &LabeledPresentation) -> Result<ChainAttempt, Error> {
    match build_joint_state_chain(p, budget()?) {
        Ok(j) => Ok((Some(j), Ok(()))),
        Err(SoficError::PropertyFailure(c)) => Ok((None, Err(*c))),
        Err(e) => Err(e.into()),
    }
}

fn counts(doc: &SystemDocument, m_max: usize) -> Result<Output, Error> {
    let r = half_order(doc);
    let be = backends(doc)?;
    let names = [be.primary.backend(), be.oracle.backend()];
    let mut text = format!("f(m, 2l) from {} and {}\n", names[0], names[1]);
    let mut header = String::from("m");
    for l in 0..r {
        let _ = write!(header, "\tl={l}");
    }
    text.push_str(&header);
    text.push('\n');
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for m in 1..=m_max {
        let mut line = m.to_string();
        for l in 0..r {
            let a = be.primary.automorphism_count(r, m, l)?;
            let b = be.oracle.automorphism_count(r, m, l)?;
            if a == b {
                let _ = write!(line, "\t{a}");
            } else {
                mismatches += 1;
                let _ = write!(line, "\t{a}!={b}");
            }
            rows.push(json!({ "m": m, "l": l, names[0]: a.to_string(), names[1]: b.to_string() }));
        }
        text.push_str(&line);
        text.push('\n');
    }
    if mismatches > 0 {
        let _ = writeln!(text, "{mismatches} mismatches");
    }
    Ok(Output {
        text,
        json: json!({ "backends": names, "rows": rows, "agree": mismatches == 0 }),
        status: if mismatches == 0 { 0 } else { 4 },
    })
}

fn gf(
    doc: &SystemDocument,
    conv: ConventionArg,
    order: usize,
    rational: bool,
) -> Result<Output, Error> {
    let r = half_order(doc);
    let be = backends(doc)?;
    let convention = match conv {
        ConventionArg::Log => Convention::Log,
        ConventionArg::Ordinary => Convention::Ordinary,
    };
    let mut text = String::new();
    let mut g_json = Vec::new();
    for k in divisors(r) {
        let g = generating_g(be.primary.as_ref(), k, order, convention)?;
        let _ = writeln!(text, "g_{}: {}", 2 * k, series_text(&g));
        g_json.push(json!({ "k": k, "coefficients": g.to_strings() }));
    }
    let mut h_json = Vec::new();
    for d in divisors(r).filter(|d| d % 2 == 1) {
        let h = generating_h(be.primary.as_ref(), d, order)?;
        let _ = writeln!(text, "h_{}: {}", 2 * d, series_text(&h));
        h_json.push(json!({ "d": d, "coefficients": h.to_strings() }));
    }
    let mut closed_json = Vec::new();
    if rational {
        let mut total: Option<RationalFunction> = None;
        for l in 0..r {
            let f = match &be.closed {
                Closed::Sft(sys) => ordinary_gf_rational(sys, l)?,
                Closed::Sofic(tc) => ordinary_gf_rational_sofic(tc.full(), l, budget()?)?,
            };
            let _ = writeln!(text, "sum_m f(m, {}) t^m = {f}", 2 * l);
            closed_json.push(json!({ "l": l, "rational": f.to_string() }));
            total = Some(match total {
                None => f,
                Some(t) => t.add(&f),
            });
        }
        if let Some(t) = &total {
            let _ = writeln!(text, "g_{} (ordinary) = {t}", 2 * r);
        }
    }
    let json = json!({
        "convention": match convention { Convention::Log => "log", Convention::Ordinary => "ordinary" },
        "g": g_json,
        "h": h_json,
        "rational": closed_json,
    });
    Ok(Output::ok(text, json))
}

fn render_zeta(z: &ZetaResult) -> String {
    let mut text = format!("{}\n", z.provenance);
    for f in &z.factors {
        let shown = f.to_string();
        if shown.len() > 160 {
            let _ = writeln!(
                text,
                "  factor {}... ({} characters; see --json)",
                &shown[..120],
                shown.len()
            );
        } else {
            let _ = writeln!(text, "  factor {shown}");
        }
    }
    for (i, c) in z.series.coeffs().iter().enumerate() {
        let _ = writeln!(text, "  c_{i} = {}", format_rational(c));
    }
    text
}

fn direct_series(
    doc: &SystemDocument,
    be: &Backends,
    kind: ZetaKind,
    order: usize,
) -> Result<TruncatedSeries, Error> {
    match kind {
        ZetaKind::Lind | ZetaKind::Flip => Ok(lind_zeta_direct(be.oracle.as_ref(), order)?),
        ZetaKind::ArtinMazur => {
            let r = half_order(doc);
            let mut s = TruncatedSeries::zero(order);
            for m in 1..=order {
                let p = be.oracle.automorphism_count(r, m, 0)?;
                s.set_coeff(m, num_rational::BigRational::new(p, m.into()));
            }
            Ok(s.exp().map_err(revzeta::zeta::ZetaError::from)?)
        }
    }
}

fn closed_zeta(be: &Backends, kind: ZetaKind, order: usize) -> Result<ZetaResult, Error> {
    Ok(match kind {
        ZetaKind::Lind => lind_zeta_product(be.primary.as_ref(), order)?,
        ZetaKind::Flip => flip_zeta(be.primary.as_ref(), order)?,
        ZetaKind::ArtinMazur => match &be.closed {
            Closed::Sft(sys) => artin_mazur(sys, order)?,
            Closed::Sofic(tc) => artin_mazur_sofic(tc.full(), order, budget()?)?,
        },
    })
}

fn zeta(
    doc: &SystemDocument,
    method: Method,
    order: usize,
    kind: ZetaKind,
) -> Result<Output, Error> {
    let be = backends(doc)?;
    if kind == ZetaKind::Flip && half_order(doc) != 1 {
        return Err(revzeta::zeta::ZetaError::NotFlip { r: half_order(doc) }.into());
    }
    let closed = match method {
        Method::Product | Method::Both => Some(closed_zeta(&be, kind, order)?),
        Method::Direct => None,
    };
    let direct = match method {
        Method::Direct | Method::Both => Some(direct_series(doc, &be, kind, order)?),
        Method::Product => None,
    };
    let mut text = String::new();
    let mut json = json!({ "order": order });
    let mut status = 0;
    if let Some(z) = &closed {
        if !z.factors_match()? {
            return Err(Error::Consistency(
                "factor expansion differs from the series".into(),
            ));
        }
        text.push_str(&render_zeta(z));
        json["product"] = z.to_json();
    }
    if let Some(d) = &direct {
        if closed.is_none() {
            text.push_str("direct subgroup sum\n");
            for (i, c) in d.coeffs().iter().enumerate() {
                let _ = writeln!(text, "  c_{i} = {}", format_rational(c));
            }
        }
        json["direct"] = json!(d.to_strings());
    }
    if let (Some(z), Some(d)) = (&closed, &direct) {
        match (0..=order).find(|&i| z.series.coeff(i) != d.coeff(i)) {
            None => {
                text.push_str("all agree\n");
                json["agree"] = json!(true);
            }
            Some(i) => {
                let _ = writeln!(
                    text,
                    "MISMATCH at t^{i}: {} vs direct {}",
                    format_rational(&z.series.coeff(i)),
                    format_rational(&d.coeff(i))
                );
                json["agree"] = json!(false);
                json["first_mismatch"] = json!(i);
                status = 4;
            }
        }
    }
    Ok(Output { text, json, status })
}

fn subgroups(r: usize, index_max: usize, verify: bool) -> Result<Output, Error> {
    if r == 0 {
        return Err(Error::Usage("--r must be positive".into()));
    }
    let list = enumerate_subgroups(r, index_max);
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut bad = 0;
    for (d, index) in &list {
        let spec = d.fixed_spec();
        let conds: Vec<String> = spec
            .conditions
            .iter()
            .map(|c| format!("T^{} R^{}", c.shift, c.reversal))
            .collect();
        let mut row = json!({
            "subgroup": d.to_string(),
            "index": index,
            "generators": d.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "fixed_spec": serde_json::to_value(&spec).expect("serializable"),
        });
        let mut line = format!("{d}\tindex {index}\tfixes {}", conds.join(", "));
        if verify {
            let found = coset_enumeration_index(&d.generators(), r, 20_000);
            let ok = found == CosetIndex::Finite(*index);
            if !ok {
                bad += 1;
            }
            let _ = write!(line, "\tcosets {}", if ok { "ok" } else { "MISMATCH" });
            row["coset_index"] = match found {
                CosetIndex::Finite(n) => json!(n),
                CosetIndex::Exceeded => json!(null),
            };
        }
        text.push_str(&line);
        text.push('\n');
        rows.push(row);
    }
    let mut by_index = std::collections::BTreeMap::new();
    for (_, i) in &list {
        *by_index.entry(*i).or_insert(0usize) += 1;
    }
    let summary: Vec<String> = by_index
        .iter()
        .map(|(i, n)| format!("{n} of index {i}"))
        .collect();
    let _ = writeln!(text, "{} subgroups: {}", list.len(), summary.join(", "));
    Ok(Output {
        text,
        json: json!({ "r": r, "index_max": index_max, "subgroups": rows, "count_by_index": by_index }),
        status: if bad == 0 { 0 } else { 4 },
    })
}

fn jsc(doc: &SystemDocument) -> Result<Output, Error> {
    let p = match doc {
        SystemDocument::Sofic(p) => p.clone(),
        SystemDocument::Sft(sys) => LabeledPresentation::from_sft(sys)?,
    };
    let (chain, status) = chain_or_certificate(&p)?;
    let Some(j) = chain else {
        let cert = status.expect_err("no chain means a failing certificate");
        return Ok(Output {
            text: format!("certificate: {cert}\n"),
            json: json!({ "certificate": serde_json::to_value(&cert).expect("serializable") }),
            status: 4,
        });
    };
    let trimmed = j.presentation();
    let set = |s: &[usize]| -> String {
        let names: Vec<&str> = s.iter().map(|&i| trimmed.states()[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    };
    let mut text = String::new();
    let futures = j.futures();
    let pasts = j.pasts();
    for (i, f) in futures.iter().enumerate() {
        let _ = writeln!(text, "F{i} = {}", set(f));
    }
    for (i, p) in pasts.iter().enumerate() {
        let _ = writeln!(text, "P{i} = {}", set(p));
    }
    let sys = j.chain().system();
    let _ = writeln!(
        text,
        "{} joint states: {}",
        sys.len(),
        sys.alphabet().join(" ")
    );
    let tau: Vec<&str> = sys
        .tau()
        .iter()
        .map(|&t| sys.alphabet()[t].as_str())
        .collect();
    let _ = writeln!(text, "tau_J: {}", tau.join(" "));
    let _ = writeln!(text, "A =\n{}", sys.a());
    let _ = writeln!(text, "certificate: {}", j.certificate());
    let a_rows: Vec<Vec<String>> = sys
        .a()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect();
    let json = json!({
        "futures": futures.iter().map(|f| f.iter().map(|&i| trimmed.states()[i].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "pasts": pasts.iter().map(|f| f.iter().map(|&i| trimmed.states()[i].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "states": sys.alphabet(),
        "tau": tau,
        "A": a_rows,
        "labels": j.chain().labeling().iter().map(|&l| j.chain().labels()[l].clone()).collect::<Vec<_>>(),
        "certificate": serde_json::to_value(j.certificate()).expect("serializable"),
    });
    Ok(Output::ok(text, json))
}

struct Checks {
    text: String,
    rows: Vec<Value>,
    failed: Option<String>,
    skipped: usize,
}

impl Checks {
    /// Runs a check; one that runs out of work budget is reported as skipped.
    fn attempt<F>(&mut self, name: String, check: F) -> Result<(), Error>
    where
        F: FnOnce() -> Result<Option<String>, Error>,
    {
        match check() {
            Ok(mismatch) => self.record(name, mismatch),
            Err(e) if e.kind() == ErrorKind::Budget => {
                let _ = writeln!(self.text, "skip\t{name}: {e}");
                self.rows
                    .push(json!({ "check": name, "skipped": e.to_string() }));
                self.skipped += 1;
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }

    fn record(&mut self, name: String, mismatch: Option<String>) {
        let line = match &mismatch {
            None => format!("ok\t{name}"),
            Some(m) => format!("FAIL\t{name}: {m}"),
        };
        self.text.push_str(&line);
        self.text.push('\n');
        self.rows
            .push(json!({ "check": name, "passed": mismatch.is_none(), "detail": mismatch }));
        if self.failed.is_none() {
            self.failed = mismatch.map(|m| format!("{name}: {m}"));
        }
    }
}

fn first_series_mismatch(a: &TruncatedSeries, b: &TruncatedSeries) -> Option<String> {
    let n = a.order().max(b.order());
    (0..=n).find(|&i| a.coeff(i) != b.coeff(i)).map(|i| {
        format!(
            "t^{i}: {} vs {}",
            format_rational(&a.coeff(i)),
            format_rational(&b.coeff(i))
        )
    })
}

fn crosscheck(doc: &SystemDocument, order: usize) -> Result<Output, Error> {
    let r = half_order(doc);
    let be = backends(doc)?;
    let (p, o) = (be.primary.as_ref(), be.oracle.as_ref());
    let mut c = Checks {
        text: String::new(),
        rows: Vec::new(),
        failed: None,
        skipped: 0,
    };
    for k in divisors(r) {
        let mut mismatch = None;
        'outer: for m in 1..=order {
            for l in 0..k {
                let (a, b) = (
                    p.automorphism_count(k, m, l)?,
                    o.automorphism_count(k, m, l)?,
                );
                if a != b {
                    mismatch = Some(format!("f({m}, {}) = {a} vs {b}", 2 * l));
                    break 'outer;
                }
            }
        }
        c.record(
            format!("X_{} counts, {} vs {}", 2 * k, p.backend(), o.backend()),
            mismatch,
        );
    }
    for d in divisors(r).filter(|d| d % 2 == 1) {
        let mut mismatch = None;
        for m in 1..=order.div_ceil(2) {
            let (a, b) = (p.flip_triple(d, m)?, o.flip_triple(d, m)?);
            if a != b {
                mismatch = Some(format!("m = {m}: {a:?} vs {b:?}"));
                break;
            }
        }
        c.record(
            format!(
                "sub-flip phi^{d} counts, {} vs {}",
                p.backend(),
                o.backend()
            ),
            mismatch,
        );
    }
    for l in 0..r {
        c.attempt(format!("ordinary gf closed form, l = {l}"), || {
            let f = match &be.closed {
                Closed::Sft(sys) => ordinary_gf_rational(sys, l)?,
                Closed::Sofic(tc) => ordinary_gf_rational_sofic(tc.full(), l, budget()?)?,
            };
            let s = expand_rational(&f, order);
            let mut want = TruncatedSeries::zero(order);
            for m in 1..=order {
                let count = p.automorphism_count(r, m, l)?;
                want.set_coeff(m, num_rational::BigRational::from_integer(count));
            }
            Ok(first_series_mismatch(&s, &want))
        })?;
    }
    c.attempt("Artin-Mazur closed form vs enumeration".into(), || {
        let am = closed_zeta(&be, ZetaKind::ArtinMazur, order)?;
        let am_direct = direct_series(doc, &be, ZetaKind::ArtinMazur, order)?;
        Ok(first_series_mismatch(&am.series, &am_direct))
    })?;
    let product = lind_zeta_product(p, order)?;
    if !product.factors_match()? {
        c.record(
            "Lind zeta factors".into(),
            Some("factor expansion differs from series".into()),
        );
    }
    let direct = lind_zeta_direct(o, order)?;
    c.record(
        "Lind zeta product vs subgroup sum".into(),
        first_series_mismatch(&product.series, &direct),
    );
    if r == 1 {
        let fz = flip_zeta(p, order)?;
        c.record(
            "flip zeta vs subgroup sum".into(),
            first_series_mismatch(&fz.series, &direct),
        );
    }
    let agree = c.failed.is_none();
    let mut text = c.text;
    match &c.failed {
        None if c.skipped > 0 => {
            let _ = writeln!(
                text,
                "all agree ({} check(s) skipped over the work budget)",
                c.skipped
            );
        }
        None => text.push_str("all agree\n"),
        Some(m) => {
            let _ = writeln!(text, "first mismatch: {m}");
        }
    }
    Ok(Output {
        text,
        json: json!({
            "order": order,
            "checks": c.rows,
            "all_agree": agree,
            "skipped": c.skipped,
            "first_mismatch": c.failed,
        }),
        status: if agree { 0 } else { 4 },
    })
}

fn example(name: &str, output: Option<&Path>, list: bool) -> Result<Output, Error> {
    if list {
        let names: Vec<&str> = fixtures::named_systems()
            .into_iter()
            .map(|(n, _)| n)
            .collect();
        return Ok(Output::ok(format!("{}\n", names.join("\n")), json!(names)));
    }
    let doc = fixtures::named_system(name)
        .ok_or_else(|| Error::Usage(format!("no built-in system named {name:?}")))?;
    let body = emit_system_string(&doc);
    match output {
        Some(path) => {
            std::fs::write(path, format!("{body}\n")).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Output::ok(
                format!("wrote {name} to {}\n", path.display()),
                json!({ "written": path.display().to_string(), "name": name }),
            ))
        }
        None => Ok(Output::ok(
            format!("{body}\n"),
            serde_json::from_str(&body).expect("emitted JSON parses"),
        )),
    }
}
