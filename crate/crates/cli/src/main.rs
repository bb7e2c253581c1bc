use clap::{Args, Parser, Subcommand, ValueEnum};
use lcong::lfunc::afe::{lambda_at, TwistedLData};
use lcong::lfunc::periods::{canonical_ratios, PeriodChoice};
use lcong::padic::{self, AnFormula, Verdict};
use lcong::pipeline::{self, RowRecord, RunConfig, Session};
use lcong::qseries::cache;
use lcong::reference;
use lcong::{ArtinRep, Error, FormId};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lcong", version, about = "Twisted critical L-values and p-adic congruences")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// 5w4, 7w4, 5w6, 121w4 or eis:LEVEL:WEIGHT:EXPR
    #[arg(long, global = true)]
    form: Option<String>,
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Comma-separated m values.
    #[arg(long, global = true, value_delimiter = ',')]
    m: Vec<u64>,
    /// Comma-separated n values (for `coeffs`: the number of coefficients).
    #[arg(long, global = true, value_delimiter = ',')]
    n: Vec<u64>,
    #[arg(long, global = true, default_value_t = pipeline::DEFAULT_DIGITS)]
    digits: u32,
    /// Largest number of Dirichlet coefficients a run may use.
    #[arg(long, global = true, default_value_t = pipeline::DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Periods::Naive)]
    periods: Periods,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    #[arg(long, global = true, env = "LCONG_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Periods {
    Naive,
    Canonical,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rep {
    Sigma,
    Rho,
    Trivial,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate (or load) the coefficient cache and print a summary.
    Coeffs,
    /// Reproduce L*-table rows.
    TableRow,
    /// Run the congruence, root-number, period and B-table suites.
    Verify,
    /// Λ and L at given points.
    Lambda {
        #[arg(long, value_enum, default_value_t = Rep::Sigma)]
        rep: Rep,
        /// Real evaluation points; defaults to the critical integers.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        s: Vec<f64>,
    },
    /// Closed-form and fitted root numbers of σ and ρ_m.
    RootNumbers,
}

/// Outcome severity, ordered so that the maximum decides the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Inconclusive,
    Refused,
    Mismatch,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Mismatch => 1,
            Status::Inconclusive => 2,
            Status::Refused => 3,
        }
    }

    fn of_error(e: &Error) -> Status {
        match e {
            Error::Resource { .. } => Status::Refused,
            Error::PrecisionUnderflow(_) | Error::InsufficientCoefficients { .. } => Status::Inconclusive,
            _ => Status::Mismatch,
        }
    }
}

#[derive(Serialize)]
struct Check {
    suite: &'static str,
    subject: String,
    status: Status,
    detail: String,
}

impl Check {
    fn new(suite: &'static str, subject: String, ok: bool, detail: String) -> Self {
        let status = if ok { Status::Pass } else { Status::Mismatch };
        Check { suite, subject, status, detail }
    }

    fn failed(suite: &'static str, subject: String, e: &Error) -> Self {
        Check { suite, subject, status: Status::of_error(e), detail: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match run(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            Status::of_error(&e)
        }
    };
    ExitCode::from(status.code())
}

fn config(c: &Common) -> RunConfig {
    RunConfig {
        p: c.p,
        digits: c.digits,
        budget: c.budget,
        cache_dir: c.cache_dir.clone(),
        periods: match c.periods {
            Periods::Naive => PeriodChoice::Numerical,
            Periods::Canonical => PeriodChoice::Canonical,
        },
        ..RunConfig::default()
    }
}

fn forms(c: &Common) -> lcong::Result<Vec<FormId>> {
    match &c.form {
        Some(s) => Ok(vec![s.parse()?]),
        None => Ok(FormId::TABULATED.to_vec()),
    }
}

fn one_form(c: &Common) -> lcong::Result<FormId> {
    c.form.as_deref().ok_or_else(|| Error::InvalidInput("--form is required".into()))?.parse()
}

fn ns(c: &Common) -> lcong::Result<Vec<u32>> {
    c.n.iter().map(|&n| u32::try_from(n).map_err(|_| Error::InvalidInput(format!("n = {n}")))).collect()
}

fn run(cli: &Cli) -> lcong::Result<Status> {
    let c = &cli.common;
    match &cli.cmd {
        Cmd::Coeffs => coeffs(c),
        Cmd::TableRow => table_row(c),
        Cmd::Verify => verify(c),
        Cmd::Lambda { rep, s } => lambda(c, *rep, s),
        Cmd::RootNumbers => root_numbers(c),
    }
}

fn emit<T: Serialize>(format: Format, items: &[T], tsv: impl Fn(&T) -> String, header: &str) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(items).expect("serialisable")),
        Format::Tsv => {
            println!("{header}");
            for it in items {
                println!("{}", tsv(it));
            }
        }
    }
}

#[derive(Serialize)]
struct CoeffSummary {
    form: String,
    level: u64,
    weight: u32,
    n_max: usize,
    cache: Option<String>,
    first: Vec<String>,
    checksum: String,
}

/// Σ a_n·31^n mod 2^61 − 1 over the first 30 coefficients.
fn checksum(a: &[rug::Integer]) -> String {
    let m = rug::Integer::from(rug::Integer::u_pow_u(2, 61)) - 1u32;
    let mut acc = rug::Integer::new();
    for x in a.iter().rev() {
        acc = (acc * 31u32 + x) % &m;
    }
    if acc < 0 {
        acc += &m;
    }
    format!("{acc:016x}")
}

fn coeffs(c: &Common) -> lcong::Result<Status> {
    let id = one_form(c)?;
    let n_max = c.n.first().copied().unwrap_or(30) as usize;
    if n_max > c.budget {
        return Err(Error::Resource { what: "coefficients".into(), demand: n_max as u64, budget: c.budget as u64 });
    }
    let form = cache::obtain(&id, n_max, c.cache_dir.as_deref())?;
    let shown: Vec<rug::Integer> = (1..=n_max.min(30)).map(|i| form.a(i)).collect();
    let summary = CoeffSummary {
        form: id.to_string(),
        level: form.level,
        weight: form.weight,
        n_max: form.n_max(),
        cache: c.cache_dir.as_ref().map(|d| cache::cache_path(d, &id).display().to_string()),
        checksum: checksum(&shown),
        first: shown.iter().map(|x| x.to_string()).collect(),
    };
    emit(
        c.format,
        &[summary],
        |s| format!("{}\t{}\t{}\t{}\t{}", s.form, s.n_max, s.checksum, s.first.join(","), s.cache.clone().unwrap_or_default()),
        "form\tn_max\tchecksum\tfirst\tcache",
    );
    Ok(Status::Pass)
}

/// m in 2..=limit admissible for ρ and within budget, for refusal messages.
fn feasible_m(session: &Session, id: &FormId, limit: u64) -> Vec<u64> {
    let p = session.cfg.p;
    (2..=limit)
        .filter(|&m| {
            ArtinRep::rho(p, m)
                .and_then(|r| session.demand(id, &r))
                .is_ok_and(|d| d <= session.cfg.budget)
        })
        .collect()
}

/// Refuses up front when any requested m exceeds the budget.
fn precheck(session: &Session, id: &FormId, ms: &[u64]) -> lcong::Result<()> {
    let p = session.cfg.p;
    for &m in ms {
        let need = session.demand(id, &ArtinRep::rho(p, m)?)?;
        if need > session.cfg.budget {
            let limit = ms.iter().copied().max().unwrap_or(12).max(12);
            eprintln!("{id} m = {m}: feasible m within budget: {:?}", feasible_m(session, id, limit));
            return Err(Error::Resource { what: format!("{id} m = {m}"), demand: need as u64, budget: session.cfg.budget as u64 });
        }
    }
    Ok(())
}

const ROW_HEADER: &str = "form\tm\tn\tL*(rho)\tP3(rho)\tP3(sigma)\tN(f,rho)\tL(sigma)\tL(rho)\tmod p\tmod p^2\tcheck";

fn row_tsv(r: &(RowRecord, String)) -> String {
    let (rec, check) = r;
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:?}\t{:?}\t{}",
        rec.form,
        rec.m,
        rec.n,
        rec.lstar_rho.exact.clone().unwrap_or_else(|| format!("~{}", rec.lstar_rho.decimal)),
        rec.p3_rho_display,
        rec.p3_sigma,
        rec.conductor_rho,
        rec.residue_sigma,
        rec.residue_rho,
        rec.verdict_mod_p,
        rec.verdict_mod_p2,
        check
    )
}

#[derive(Serialize)]
struct RowOut<'a> {
    #[serde(flatten)]
    record: &'a RowRecord,
    check: &'a str,
}

fn row_status(rec: &RowRecord) -> (Status, String) {
    let refs = reference::rows_for(&rec.form.parse().expect("own form"), rec.m);
    let mut status = Status::Pass;
    let mut notes = Vec::new();
    if rec.lstar_rho.exact.is_none() {
        status = Status::Inconclusive;
        notes.push("no exact reconstruction".to_string());
    }
    match refs.iter().find(|r| r.n == rec.n) {
        Some(r) => {
            let diffs = pipeline::compare_row(rec, r);
            if !diffs.is_empty() {
                status = status.max(Status::Mismatch);
            }
            notes.extend(diffs);
        }
        None => notes.push("untabulated".into()),
    }
    match rec.verdict_mod_p {
        Verdict::Fails => {
            status = status.max(Status::Mismatch);
            notes.push("mod p fails".into());
        }
        Verdict::Inconclusive => status = status.max(Status::Inconclusive),
        _ => {}
    }
    if rec.verdict_mod_p2 == Verdict::Fails {
        status = status.max(Status::Mismatch);
        notes.push("mod p^2 fails".into());
    }
    let text = if notes.is_empty() { "ok".to_string() } else { notes.join("; ") };
    (status, text)
}

fn table_row(c: &Common) -> lcong::Result<Status> {
    let id = one_form(c)?;
    if c.m.is_empty() {
        return Err(Error::InvalidInput("--m is required".into()));
    }
    let mut session = Session::new(config(c));
    precheck(&session, &id, &c.m)?;
    let ns = if c.n.is_empty() { pipeline::table_ns(&mut session, &id)? } else { ns(c)? };
    let mut rows = Vec::new();
    let mut status = Status::Pass;
    for &m in &c.m {
        for rec in session.table_row(&id, m, &ns)? {
            let (s, note) = row_status(&rec);
            status = status.max(s);
            rows.push((rec, note));
        }
    }
    match c.format {
        Format::Json => {
            let out: Vec<RowOut> = rows.iter().map(|(r, n)| RowOut { record: r, check: n }).collect();
            println!("{}", serde_json::to_string_pretty(&out).expect("serialisable"));
        }
        Format::Tsv => emit(Format::Tsv, &rows, row_tsv, ROW_HEADER),
    }
    Ok(status)
}

fn verify(c: &Common) -> lcong::Result<Status> {
    let mut checks = Vec::new();
    for id in forms(c)? {
        let mut session = Session::new(config(c));
        let ms: Vec<u64> = if c.m.is_empty() { reference::desk_scale_m(&id).to_vec() } else { c.m.clone() };
        if let Err(e) = precheck(&session, &id, &ms) {
            checks.push(Check::failed("budget", id.to_string(), &e));
            continue;
        }
        suite_root_numbers(&mut session, &id, &ms, &mut checks);
        suite_congruences(&mut session, &id, &ms, &mut checks);
        if id == FormId::F121w4 {
            suite_periods(&mut session, &id, &mut checks);
        }
        let bms: Vec<u64> = if c.m.is_empty() { reference::b_table_m(&id).to_vec() } else { c.m.clone() };
        suite_b_tables(&mut session, &id, &bms, &mut checks);
    }
    let status = checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass);
    emit(
        c.format,
        &checks,
        |k| format!("{}\t{}\t{:?}\t{}", k.suite, k.subject, k.status, k.detail),
        "suite\tsubject\tstatus\tdetail",
    );
    Ok(status)
}

fn suite_root_numbers(session: &mut Session, id: &FormId, ms: &[u64], out: &mut Vec<Check>) {
    let p = session.cfg.p;
    let mut reps = vec![ArtinRep::sigma(p)];
    reps.extend(ms.iter().map(|&m| ArtinRep::rho(p, m)));
    for rep in reps {
        let rep = match rep {
            Ok(r) => r,
            Err(e) => {
                out.push(Check::failed("root-number", id.to_string(), &e));
                continue;
            }
        };
        let subject = format!("{id} {}", rep.label());
        match session.twisted(id, &rep) {
            Ok(tv) => {
                let fit = tv.root_fit.as_ref().map(|f| f.w).unwrap_or(f64::NAN);
                let close = (fit - tv.root_number as f64).abs() <= 1e-10;
                let mut ok = close && tv.root_number_closed.is_some_and(|w| w == tv.root_number);
                if rep.m().is_none() {
                    let want = reference::SIGMA_ROOT_NUMBERS.iter().find(|(f, _)| f == id).map(|(_, w)| *w);
                    ok &= want.is_none_or(|w| w == tv.root_number);
                }
                out.push(Check::new("root-number", subject, ok, format!("closed {:?}, fit {fit:.3e}", tv.root_number_closed)));
            }
            Err(e) => out.push(Check::failed("root-number", subject, &e)),
        }
    }
}

fn suite_congruences(session: &mut Session, id: &FormId, ms: &[u64], out: &mut Vec<Check>) {
    let ns = match pipeline::table_ns(session, id) {
        Ok(ns) => ns,
        Err(e) => {
            out.push(Check::failed("congruence", id.to_string(), &e));
            return;
        }
    };
    for &m in ms {
        let subject = format!("{id} m={m}");
        match session.table_row(id, m, &ns) {
            Ok(recs) => {
                for rec in recs {
                    let (mut status, mut note) = row_status(&rec);
                    let needs_p2 = matches!(id, FormId::F7w4 | FormId::F121w4);
                    if needs_p2 && rec.verdict_mod_p2 == Verdict::NotApplicable {
                        note.push_str("; mod p^2 not applicable");
                    }
                    if *id == FormId::F7w4 {
                        let divisible = rec.residue_sigma == "0" || rec.valuation_sigma_can.is_some_and(|v| v >= 1);
                        if !divisible {
                            status = status.max(Status::Mismatch);
                            note.push_str("; Manin divisibility fails");
                        }
                    }
                    out.push(Check { suite: "congruence", subject: format!("{subject} n={}", rec.n), status, detail: note });
                }
            }
            Err(e) => out.push(Check::failed("congruence", subject, &e)),
        }
    }
}

fn suite_periods(session: &mut Session, id: &FormId, out: &mut Vec<Check>) {
    match session.periods(id, PeriodChoice::Numerical).and_then(|p| canonical_ratios(&p)) {
        Ok(r) => {
            let ok = r.c_plus_exact == Some(22.into()) && r.c_minus_exact == Some(rug::Rational::from((1, 3)));
            out.push(Check::new(
                "periods",
                id.to_string(),
                ok,
                format!("Omega+/Omega+can = 1/{:.20}, Omega-/Omega-can = {:.20}", r.c_plus.to_f64(), 1.0 / r.c_minus.to_f64()),
            ));
        }
        Err(e) => out.push(Check::failed("periods", id.to_string(), &e)),
    }
    for m in [3u64, 7] {
        match session.table_row(id, m, &[1]) {
            Ok(recs) => {
                let unit = recs[0].residue_sigma.ends_with("+O(3)") && !recs[0].residue_sigma.starts_with('0');
                out.push(Check::new("periods", format!("{id} naive L(sigma,1) m={m}"), unit, recs[0].residue_sigma.clone()));
            }
            Err(e) => out.push(Check::failed("periods", format!("{id} m={m}"), &e)),
        }
    }
}

fn suite_b_tables(session: &mut Session, id: &FormId, ms: &[u64], out: &mut Vec<Check>) {
    let p = session.cfg.p;
    for &m in ms {
        let subject = format!("{id} m={m}");
        let Some(row) = reference::b_row(id, m) else { continue };
        let computed: lcong::Result<Vec<(String, Option<String>)>> = (|| {
            let rho = ArtinRep::rho(p, m)?;
            let mut cols = Vec::new();
            for &(n, _) in padic::b_columns(id) {
                let cv = session.critical_value(id, &rho, n, PeriodChoice::Numerical)?;
                let l = cv.exact.ok_or_else(|| Error::PrecisionUnderflow(format!("L*(rho,{n}) not reconstructed")))?;
                let rec = padic::show_b(&padic::table_b_value(id, &rho, n, &l, AnFormula::Reconciled)?);
                let lit = padic::table_b_value(id, &rho, n, &l, AnFormula::Literal).ok().map(|b| padic::show_b(&b));
                cols.push((rec, lit));
            }
            Ok(cols)
        })();
        match computed {
            Ok(cols) => {
                let rec: Vec<&str> = cols.iter().map(|c| c.0.as_str()).collect();
                let same = rec.len() == row.cols.len()
                    && rec.iter().zip(row.cols).all(|(a, b)| lcong::factored::parse_factored(a).ok() == lcong::factored::parse_factored(b).ok());
                out.push(Check::new("b-table", subject.clone(), same, format!("computed {rec:?}, tabulated {:?}", row.cols)));
                let lit: Vec<String> = cols.iter().map(|c| c.1.clone().unwrap_or_else(|| "n/a".into())).collect();
                let first_ok = lit.first().map(String::as_str) == rec.first().copied();
                let differs: Vec<usize> = (1..lit.len()).filter(|&i| lit[i] != rec[i]).collect();
                out.push(Check::new(
                    "b-table-literal",
                    subject,
                    first_ok,
                    format!("literal A_n gives {lit:?}; columns differing from the tables: {differs:?}"),
                ));
            }
            Err(e) => out.push(Check::failed("b-table", subject, &e)),
        }
    }
}

#[derive(Serialize)]
struct LambdaOut {
    form: String,
    rep: String,
    s: f64,
    lambda: String,
    lambda_err: f64,
    l: String,
    l_err: f64,
}

fn lambda(c: &Common, rep: Rep, points: &[f64]) -> lcong::Result<Status> {
    let id = one_form(c)?;
    let mut session = Session::new(config(c));
    let rep = match rep {
        Rep::Sigma => ArtinRep::sigma(c.p)?,
        Rep::Trivial => ArtinRep::trivial(c.p)?,
        Rep::Rho => ArtinRep::rho(c.p, *c.m.first().ok_or_else(|| Error::InvalidInput("--m is required for rho".into()))?)?,
    };
    let tv = session.twisted(&id, &rep)?;
    let mut values = Vec::new();
    if points.is_empty() {
        values.extend(tv.values.iter().cloned());
    } else {
        let (_, h2) = session.shape(&id, &rep)?;
        let form = session.form(&id, tv.n_terms)?;
        let data = TwistedLData::from_form(&form, &rep, tv.n_terms, h2)?;
        for &s in points {
            values.push(lambda_at(&data, s, tv.root_number, 1.0, c.digits)?);
        }
    }
    let digits = c.digits as usize;
    let out: Vec<LambdaOut> = values
        .iter()
        .map(|v| LambdaOut {
            form: id.to_string(),
            rep: rep.label(),
            s: v.s,
            lambda: v.lambda.to_string_radix(10, Some(digits)),
            lambda_err: v.lambda_err,
            l: v.l.to_string_radix(10, Some(digits)),
            l_err: v.l_err,
        })
        .collect();
    emit(
        c.format,
        &out,
        |v| format!("{}\t{}\t{}\t{}\t{:.2e}\t{}\t{:.2e}", v.form, v.rep, v.s, v.lambda, v.lambda_err, v.l, v.l_err),
        "form\trep\ts\tLambda\terr\tL\terr",
    );
    Ok(Status::Pass)
}

fn root_numbers(c: &Common) -> lcong::Result<Status> {
    let mut checks = Vec::new();
    for id in forms(c)? {
        let mut session = Session::new(config(c));
        let ms: Vec<u64> = if c.m.is_empty() { reference::desk_scale_m(&id).to_vec() } else { c.m.clone() };
        suite_root_numbers(&mut session, &id, &ms, &mut checks);
    }
    let status = checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass);
    emit(
        c.format,
        &checks,
        |k| format!("{}\t{:?}\t{}", k.subject, k.status, k.detail),
        "subject\tstatus\tdetail",
    );
    Ok(status)
}
