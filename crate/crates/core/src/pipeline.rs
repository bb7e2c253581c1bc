//! End-to-end computations: coefficients on demand, critical values, table rows.

use crate::artin::ArtinRep;
use crate::error::{Error, Result};
use crate::factored::format_factored;
use crate::lfunc::afe::{critical_lambda, solve_root_number, LShape, LambdaValue, RootNumberFit, TwistedLData};
use crate::lfunc::lstar::{central_vanishing, lstar, CriticalValue};
use crate::lfunc::periods::{canonical_ratios, compute_periods, period_demand, periods_for, PeriodChoice, Periods};
use crate::padic::{self, PadicNumber, Verdict};
use crate::qseries::{build_form, cache, Form, FormId};
use crate::reference::TableRow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

pub const DEFAULT_DIGITS: u32 = 30;
pub const DEFAULT_BUDGET: usize = 60_000_000;
/// Digits used by the numerical root-number fit.
pub const ROOT_DIGITS: u32 = 20;
const SPLIT: f64 = 1.1;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: u64,
    pub digits: u32,
    /// Largest number of Dirichlet coefficients a run may use.
    pub budget: usize,
    pub cache_dir: Option<PathBuf>,
    pub periods: PeriodChoice,
    pub padic_prec: u32,
    /// Also fit w numerically and compare with the closed form.
    pub check_root_numbers: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 3,
            digits: DEFAULT_DIGITS,
            budget: DEFAULT_BUDGET,
            cache_dir: None,
            periods: PeriodChoice::Numerical,
            padic_prec: padic::DEFAULT_PREC,
            check_root_numbers: true,
        }
    }
}

/// Critical values of one twisted L-function.
#[derive(Clone, Debug)]
pub struct TwistedValues {
    pub rep: ArtinRep,
    pub shape: LShape,
    pub h2_override: bool,
    pub root_number_closed: Option<i32>,
    pub root_fit: Option<RootNumberFit>,
    pub root_number: i32,
    pub n_terms: usize,
    /// Index n−1 holds s = n.
    pub values: Vec<LambdaValue>,
}

/// Canonical c± for the forms where they are known.
pub fn canonical_constants(id: &FormId) -> (Rational, Rational) {
    match id {
        FormId::F121w4 => (Rational::from(22), Rational::from((1, 3))),
        _ => (Rational::from(1), Rational::from(1)),
    }
}

/// Caches forms, periods and σ-values across rows.
pub struct Session {
    pub cfg: RunConfig,
    forms: HashMap<String, Arc<Form>>,
    periods: HashMap<(String, bool), Periods>,
    twisted: HashMap<(String, String), Arc<TwistedValues>>,
}

fn probe(id: &FormId) -> Result<Form> {
    build_form(id, 16)
}

impl Session {
    pub fn new(cfg: RunConfig) -> Self {
        Session { cfg, forms: HashMap::new(), periods: HashMap::new(), twisted: HashMap::new() }
    }

    fn refuse(&self, what: &str, need: usize) -> Result<()> {
        if need > self.cfg.budget {
            return Err(Error::Resource { what: what.into(), demand: need as u64, budget: self.cfg.budget as u64 });
        }
        Ok(())
    }

    /// The form with at least `n` coefficients.
    pub fn form(&mut self, id: &FormId, n: usize) -> Result<Arc<Form>> {
        self.refuse("coefficients", n)?;
        let key = id.tag();
        if let Some(f) = self.forms.get(&key) {
            if f.n_max() >= n {
                return Ok(f.clone());
            }
        }
        let f = Arc::new(cache::obtain(id, n.max(16), self.cfg.cache_dir.as_deref())?);
        self.forms.insert(key, f.clone());
        Ok(f)
    }

    /// Shape of L(f,φ,s), with the H2 override applied when needed.
    pub fn shape(&self, id: &FormId, rep: &ArtinRep) -> Result<(LShape, bool)> {
        let f = probe(id)?;
        match TwistedLData::shape_of(&f, rep, false) {
            Ok(s) => Ok((s, false)),
            Err(Error::H2Violation(_)) => Ok((TwistedLData::shape_of(&f, rep, true)?, true)),
            Err(e) => Err(e),
        }
    }

    /// Coefficients needed for L(f,φ,n), n = 1..k−1, and the optional root-number fit.
    pub fn demand(&self, id: &FormId, rep: &ArtinRep) -> Result<usize> {
        let (shape, _) = self.shape(id, rep)?;
        let s: Vec<f64> = (1..shape.weight).map(f64::from).collect();
        let mut n = shape.demand(self.cfg.digits, &s, &[1.0])?;
        if self.cfg.check_root_numbers {
            n = n.max(shape.demand(ROOT_DIGITS, &s, &[1.0, SPLIT])?);
        }
        Ok(n)
    }

    pub fn twisted(&mut self, id: &FormId, rep: &ArtinRep) -> Result<Arc<TwistedValues>> {
        let key = (id.tag(), rep.label());
        if let Some(v) = self.twisted.get(&key) {
            return Ok(v.clone());
        }
        let (shape, h2) = self.shape(id, rep)?;
        let n = self.demand(id, rep)?;
        let form = self.form(id, n)?;
        let data = TwistedLData::from_form(&form, rep, n, h2)?;
        let root_fit = if self.cfg.check_root_numbers { Some(solve_root_number(&data, ROOT_DIGITS)?) } else { None };
        if let (Some(w), Some(fit)) = (data.root_number, &root_fit) {
            if w != fit.sign {
                return Err(Error::FunctionalEquation(format!(
                    "{}: closed form {w}, numerical fit {:.3e}",
                    data.label, fit.w
                )));
            }
        }
        let root_number = match (data.root_number, &root_fit) {
            (Some(w), _) => w,
            (None, Some(fit)) => fit.sign,
            (None, None) => solve_root_number(&data, ROOT_DIGITS)?.sign,
        };
        let values = critical_lambda(&data, root_number, self.cfg.digits)?;
        let tv = Arc::new(TwistedValues {
            rep: rep.clone(),
            shape,
            h2_override: h2,
            root_number_closed: data.root_number,
            root_fit,
            root_number,
            n_terms: n,
            values,
        });
        self.twisted.insert(key, tv.clone());
        Ok(tv)
    }

    /// Ω± under the configured choice; canonical ratios are re-verified on first use.
    pub fn periods(&mut self, id: &FormId, choice: PeriodChoice) -> Result<Periods> {
        let key = (id.tag(), choice == PeriodChoice::Canonical);
        if let Some(p) = self.periods.get(&key) {
            return Ok(p.clone());
        }
        let digits = self.cfg.digits + 10;
        let n = period_demand(&probe(id)?, digits)?;
        let form = self.form(id, n)?;
        let per = match choice {
            PeriodChoice::Numerical => compute_periods(&form, digits)?,
            PeriodChoice::Canonical => {
                let naive = self.periods(id, PeriodChoice::Numerical)?;
                let ratios = canonical_ratios(&naive)?;
                let (cp, cm) = canonical_constants(id);
                if ratios.c_plus_exact.as_ref() != Some(&cp) || ratios.c_minus_exact.as_ref() != Some(&cm) {
                    return Err(Error::Internal(format!(
                        "canonical period ratios {} and {} do not match the configured constants",
                        ratios.c_plus.to_f64(),
                        ratios.c_minus.to_f64()
                    )));
                }
                periods_for(&form, choice, digits)?
            }
        };
        self.periods.insert(key, per.clone());
        Ok(per)
    }

    pub fn critical_value(&mut self, id: &FormId, rep: &ArtinRep, n: u32, choice: PeriodChoice) -> Result<CriticalValue> {
        let tv = self.twisted(id, rep)?;
        let per = self.periods(id, choice)?;
        let v = tv
            .values
            .get(n as usize - 1)
            .ok_or_else(|| Error::InvalidInput(format!("n = {n} outside 1..{}", tv.shape.weight - 1)))?;
        lstar(v, rep, &per)
    }

    /// L(f,φ,k/2) = 0, or None for odd weight.
    pub fn central_vanishing(&mut self, id: &FormId, rep: &ArtinRep) -> Result<Option<bool>> {
        let tv = self.twisted(id, rep)?;
        let k = tv.shape.weight;
        if k % 2 == 1 {
            return Ok(None);
        }
        central_vanishing(&tv.values[(k / 2 - 1) as usize], self.cfg.digits).map(Some)
    }

    pub fn table_row(&mut self, id: &FormId, m: u64, ns: &[u32]) -> Result<Vec<RowRecord>> {
        let p = self.cfg.p;
        let sigma = ArtinRep::sigma(p)?;
        let rho = ArtinRep::rho(p, m)?;
        let form = self.form(id, 16)?;
        let choice = self.cfg.periods;
        let tv_s = self.twisted(id, &sigma)?;
        let tv_r = self.twisted(id, &rho)?;
        let vanish_s = self.central_vanishing(id, &sigma)?;
        let vanish_r = self.central_vanishing(id, &rho)?;
        let both_vanish = vanish_s == Some(true) && vanish_r == Some(true);
        let (cp, cm) = match choice {
            PeriodChoice::Canonical => (Rational::from(1), Rational::from(1)),
            PeriodChoice::Numerical => canonical_constants(id),
        };
        let mut out = Vec::new();
        for &n in ns {
            let ls = self.critical_value(id, &sigma, n, choice)?;
            let lr = self.critical_value(id, &rho, n, choice)?;
            let prec = self.cfg.padic_prec;
            let l_of = |cv: &CriticalValue, rep: &ArtinRep, h2: bool| -> Result<Option<padic::ScriptL>> {
                match &cv.exact {
                    Some(x) => padic::script_l(&form, rep, m, n, x, prec, h2).map(Some),
                    None => Ok(None),
                }
            };
            let sl_s = l_of(&ls, &sigma, tv_s.h2_override)?;
            let sl_r = l_of(&lr, &rho, tv_r.h2_override)?;
            let p3_sigma = padic::euler_product_at(&form, &sigma, m, n, tv_s.h2_override)?;
            let p3_rho = padic::euler_product_at(&form, &rho, m, n, tv_r.h2_override)?;
            let can = |sl: &Option<padic::ScriptL>, rep: &ArtinRep| -> Result<Option<PadicNumber>> {
                match sl {
                    Some(s) => padic::script_l_can(&s.value, rep, n, &cp, &cm).map(Some),
                    None => Ok(None),
                }
            };
            let can_s = can(&sl_s, &sigma)?;
            let can_r = can(&sl_r, &rho)?;
            let (mod_p, mod_p2) = match (&can_s, &can_r) {
                (Some(a), Some(b)) => (
                    padic::congruent_mod(a, b, 1),
                    if both_vanish { padic::congruent_mod(a, b, 2) } else { Verdict::NotApplicable },
                ),
                _ => (Verdict::Inconclusive, if both_vanish { Verdict::Inconclusive } else { Verdict::NotApplicable }),
            };
            let lr_zero = lr.exact.as_ref().is_some_and(|x| *x == 0);
            out.push(RowRecord {
                form: id.to_string(),
                p,
                m,
                n,
                lstar_rho: ValueField::from(&lr),
                lstar_sigma: ValueField::from(&ls),
                p3_rho: format_factored(&p3_rho),
                p3_rho_display: if lr_zero { "0".into() } else { format_factored(&p3_rho) },
                p3_sigma: format_factored(&p3_sigma),
                conductor_rho: format_factored(&Rational::from(tv_r.shape.conductor.clone())),
                conductor_rho_decimal: tv_r.shape.conductor.to_string(),
                residue_sigma: residue(&sl_s),
                residue_rho: residue(&sl_r),
                residue_sigma_can: can_s.as_ref().map(|x| x.display_digits(1)),
                residue_rho_can: can_r.as_ref().map(|x| x.display_digits(1)),
                sigma_mod_p2: can_s.as_ref().and_then(|x| x.residue_mod(2)).map(|x| x.to_string()),
                rho_mod_p2: can_r.as_ref().and_then(|x| x.residue_mod(2)).map(|x| x.to_string()),
                valuation_sigma_can: can_s.as_ref().map(|x| x.valuation),
                root_number_sigma: tv_s.root_number,
                root_number_rho: tv_r.root_number,
                root_fit_sigma: tv_s.root_fit.as_ref().map(|f| f.w),
                root_fit_rho: tv_r.root_fit.as_ref().map(|f| f.w),
                central_vanishing: both_vanish,
                verdict_mod_p: mod_p,
                verdict_mod_p2: mod_p2,
                h2_override: tv_r.h2_override,
                periods: choice,
                digits: self.cfg.digits,
                n_terms_rho: tv_r.n_terms,
            });
        }
        Ok(out)
    }
}

fn residue(sl: &Option<padic::ScriptL>) -> String {
    match sl {
        Some(s) => s.value.display_digits(1),
        None => INCONCLUSIVE.into(),
    }
}

/// A computed value with its exact reconstruction when available.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValueField {
    pub exact: Option<String>,
    pub decimal: String,
    pub error: f64,
    pub sqrt_p_absorbed: bool,
}

impl From<&CriticalValue> for ValueField {
    fn from(cv: &CriticalValue) -> Self {
        ValueField {
            exact: cv.exact.as_ref().map(format_factored),
            decimal: cv.numeric.to_string_radix(10, Some(((cv.numeric.prec() as f64) / 3.33) as usize)),
            error: cv.error,
            sqrt_p_absorbed: cv.sqrt_p_absorbed,
        }
    }
}

/// One (m, n) entry of an L*-table together with its congruence verdicts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowRecord {
    pub form: String,
    pub p: u64,
    pub m: u64,
    pub n: u32,
    pub lstar_rho: ValueField,
    pub lstar_sigma: ValueField,
    pub p3_rho: String,
    /// As printed in the tables: 0 whenever L*(ρ) = 0.
    pub p3_rho_display: String,
    pub p3_sigma: String,
    pub conductor_rho: String,
    pub conductor_rho_decimal: String,
    pub residue_sigma: String,
    pub residue_rho: String,
    pub residue_sigma_can: Option<String>,
    pub residue_rho_can: Option<String>,
    /// ℒ^can mod p², when known.
    pub sigma_mod_p2: Option<String>,
    pub rho_mod_p2: Option<String>,
    pub valuation_sigma_can: Option<i64>,
    pub root_number_sigma: i32,
    pub root_number_rho: i32,
    pub root_fit_sigma: Option<f64>,
    pub root_fit_rho: Option<f64>,
    pub central_vanishing: bool,
    pub verdict_mod_p: Verdict,
    pub verdict_mod_p2: Verdict,
    pub h2_override: bool,
    pub periods: PeriodChoice,
    pub digits: u32,
    pub n_terms_rho: usize,
}

/// Tabulated n for each form: 1..=k/2, dropping the centre when L(f,σ,k/2) = 0.
pub fn table_ns(session: &mut Session, id: &FormId) -> Result<Vec<u32>> {
    let k = id.weight();
    let sigma = ArtinRep::sigma(session.cfg.p)?;
    let vanish = session.central_vanishing(id, &sigma)? == Some(true);
    Ok((1..=k / 2).filter(|&n| !(vanish && n == k / 2)).collect())
}

/// Residue placeholder when ℒ could not be formed.
pub const INCONCLUSIVE: &str = "inconclusive";

/// Differences between a computed row and the tabulated one; unreconstructed columns are skipped.
pub fn compare_row(rec: &RowRecord, reference: &TableRow) -> Vec<String> {
    let mut bad = Vec::new();
    let mut check = |what: &str, got: Option<&str>, want: &str| {
        let same = match (got.map(crate::factored::parse_factored), crate::factored::parse_factored(want)) {
            (Some(Ok(a)), Ok(b)) => a == b,
            _ => got == Some(want),
        };
        if !same {
            bad.push(format!("{what}: computed {}, tabulated {want}", got.unwrap_or("none")));
        }
    };
    if rec.lstar_rho.exact.is_some() {
        check("L*(rho)", rec.lstar_rho.exact.as_deref(), reference.lstar);
    }
    check("P3(rho)", Some(&rec.p3_rho_display), reference.p3_rho);
    check("P3(sigma)", Some(&rec.p3_sigma), reference.p3_sigma);
    check("N(f,rho)", Some(&rec.conductor_rho), reference.conductor);
    for (what, got, want) in [("L(sigma)", &rec.residue_sigma, reference.res_sigma), ("L(rho)", &rec.residue_rho, reference.res_rho)] {
        if got != INCONCLUSIVE && got != want {
            bad.push(format!("{what}: computed {got}, tabulated {want}"));
        }
    }
    bad
}

/// Recomputes the verdict flags of a record from its residue fields.
pub fn verdicts_from_fields(rec: &RowRecord) -> (Verdict, Verdict) {
    let parse = |s: &Option<String>| s.as_ref().and_then(|x| x.parse::<Integer>().ok());
    let (a, b) = (parse(&rec.sigma_mod_p2), parse(&rec.rho_mod_p2));
    let mod_p = match (&a, &b) {
        (Some(a), Some(b)) => Verdict::from_bool(Integer::from(a - b).is_divisible_u(rec.p as u32)),
        _ => rec.verdict_mod_p,
    };
    let mod_p2 = if !rec.central_vanishing {
        Verdict::NotApplicable
    } else {
        match (&a, &b) {
            (Some(a), Some(b)) => Verdict::from_bool(a == b),
            _ => rec.verdict_mod_p2,
        }
    };
    (mod_p, mod_p2)
}
