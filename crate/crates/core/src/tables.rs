//! Bundled Dirac-series tables, branching files, and the verification harness.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirac::{dirac_gap, BranchingTable};
use crate::enumerate::in_can_k;
use crate::error::{Error, Result};
use crate::norms::{is_u_small_coeffs, spin_norm_sq_coeffs, usmall_ktypes};
use crate::rat::Rat;
use crate::realforms::{fmt_ints, get_form, infchar_from_t, make_infchar, make_ktype, Group, InfChar, KType, RealFormData};
use crate::vect::{fmt_rats, parse_rats};

pub type Assignment = BTreeMap<String, i64>;

fn show_assignment(a: &Assignment) -> String {
    a.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

fn lookup(vals: &Assignment, var: &str) -> Result<Rat> {
    vals.get(var).map(|&x| Rat::int(x)).ok_or_else(|| Error::Constraint(format!("variable {var} has no value")))
}

/// `const + Σ_v v·coeffs[v]`, componentwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineVec {
    #[serde(rename = "const")]
    pub constant: Vec<Rat>,
    #[serde(default)]
    pub coeffs: BTreeMap<String, Vec<Rat>>,
}

impl AffineVec {
    pub fn eval(&self, vals: &Assignment) -> Result<Vec<Rat>> {
        let mut out = self.constant.clone();
        for (var, c) in &self.coeffs {
            let x = lookup(vals, var)?;
            for (o, ci) in out.iter_mut().zip(c) {
                *o += ci * &x;
            }
        }
        Ok(out)
    }

    fn dims_ok(&self, n: usize) -> bool {
        self.constant.len() == n && self.coeffs.values().all(|c| c.len() == n)
    }

    fn reverse(&mut self) {
        self.constant.reverse();
        self.coeffs.values_mut().for_each(|c| c.reverse());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineScalar {
    #[serde(rename = "const")]
    pub constant: Rat,
    #[serde(default)]
    pub coeffs: BTreeMap<String, Rat>,
}

impl AffineScalar {
    pub fn eval(&self, vals: &Assignment) -> Result<Rat> {
        let mut out = self.constant.clone();
        for (var, c) in &self.coeffs {
            out += c * &lookup(vals, var)?;
        }
        Ok(out)
    }
}

impl fmt::Display for AffineScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (v, c) in &self.coeffs {
            let neg = c.is_negative();
            let a = c.abs();
            if !s.is_empty() || neg {
                s.push(if neg { '-' } else { '+' });
            }
            if a != Rat::ONE {
                s.push_str(&a.to_string());
            }
            s.push_str(v);
        }
        if !self.constant.is_zero() || s.is_empty() {
            if !s.is_empty() && !self.constant.is_negative() {
                s.push('+');
            }
            s.push_str(&self.constant.to_string());
        }
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    Ge { expr: AffineScalar, rhs: Rat },
    InSet { expr: AffineScalar, values: Vec<Rat> },
    /// `expr ≡ residue (mod 2)`
    Parity { expr: AffineScalar, residue: i64 },
}

impl Constraint {
    pub fn holds(&self, vals: &Assignment) -> Result<bool> {
        Ok(match self {
            Constraint::Ge { expr, rhs } => expr.eval(vals)? >= *rhs,
            Constraint::InSet { expr, values } => values.contains(&expr.eval(vals)?),
            Constraint::Parity { expr, residue } => {
                let v = expr.eval(vals)?;
                v.is_integer() && (v - Rat::int(*residue)).floor() % 2 == 0.into()
            }
        })
    }

    fn expr(&self) -> &AffineScalar {
        match self {
            Constraint::Ge { expr, .. } | Constraint::InSet { expr, .. } | Constraint::Parity { expr, .. } => expr,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Ge { expr, rhs } => write!(f, "{expr} ≥ {rhs}"),
            Constraint::InSet { expr, values } => {
                let vs: Vec<String> = values.iter().map(Rat::to_string).collect();
                write!(f, "{expr} ∈ {{{}}}", vs.join(","))
            }
            Constraint::Parity { expr, residue } => write!(f, "{expr} ≡ {residue} (mod 2)"),
        }
    }
}

/// How the row's Λ column was obtained: printed with the row, or recovered
/// from its spin LKT because the row prints only (λ, ν).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfcharSource {
    Lambda,
    SpinLkt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LktExpr {
    pub expr: AffineVec,
    /// The LKT belongs to the row only where these hold.
    #[serde(default)]
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringRow {
    pub x: u32,
    pub lambda_expr: AffineVec,
    pub nu_expr: AffineVec,
    pub infchar_expr: AffineVec,
    pub infchar_source: InfcharSource,
    pub spin_lkts_expr: Vec<LktExpr>,
    pub constraints: Vec<Constraint>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatteredRow {
    pub x: u32,
    pub lambda: Vec<Rat>,
    pub nu: Vec<Rat>,
    pub spin_lkts: Vec<Vec<i64>>,
    pub u_small: bool,
    #[serde(default = "yes")]
    pub mult_one: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub string_limit: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordinateOrder {
    Paper,
    Atlas,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tables {
    pub group: Group,
    pub coordinate_order: CoordinateOrder,
    pub scattered: Vec<ScatteredRow>,
    pub strings: Vec<StringRow>,
}

impl StringRow {
    pub fn variables(&self) -> Vec<String> {
        let mut vs: BTreeSet<String> = BTreeSet::new();
        let exprs = [&self.lambda_expr, &self.nu_expr, &self.infchar_expr].into_iter().chain(self.spin_lkts_expr.iter().map(|l| &l.expr));
        for e in exprs {
            vs.extend(e.coeffs.keys().cloned());
        }
        let cons = self.constraints.iter().chain(self.spin_lkts_expr.iter().flat_map(|l| &l.constraints));
        for c in cons {
            vs.extend(c.expr().coeffs.keys().cloned());
        }
        vs.into_iter().collect()
    }

    pub fn label(&self, group: Group, index: usize) -> String {
        format!("{group} string #x={} (row {})", self.x, index + 1)
    }
}

impl ScatteredRow {
    pub fn label(&self, group: Group, index: usize) -> String {
        format!("{group} scattered #x={} (row {})", self.x, index + 1)
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() }
}

/// Parses and validates a table document; rows stored in atlas order are
/// normalized to the native (Knapp) labelling.
pub fn parse_tables(text: &str) -> Result<Tables> {
    let mut t: Tables = serde_json::from_str(text).map_err(json_error)?;
    let f = get_form(t.group);
    let (n, k) = (f.h_rank(), f.k_rank());
    if t.coordinate_order == CoordinateOrder::Atlas {
        if f.atlas_reversed {
            for r in &mut t.scattered {
                r.lambda.reverse();
                r.nu.reverse();
            }
            for r in &mut t.strings {
                r.lambda_expr.reverse();
                r.nu_expr.reverse();
                r.infchar_expr.reverse();
            }
        }
        t.coordinate_order = CoordinateOrder::Paper;
    }
    let bad = |row: String, msg: &str| Error::Validation { row, msg: msg.to_string() };
    for (i, r) in t.scattered.iter().enumerate() {
        if r.lambda.len() != n || r.nu.len() != n {
            return Err(bad(r.label(t.group, i), "λ/ν have the wrong length"));
        }
        if r.spin_lkts.is_empty() || r.spin_lkts.iter().any(|m| m.len() != k) {
            return Err(bad(r.label(t.group, i), "spin LKTs missing or of the wrong length"));
        }
    }
    for (i, r) in t.strings.iter().enumerate() {
        if ![&r.lambda_expr, &r.nu_expr, &r.infchar_expr].iter().all(|e| e.dims_ok(n)) {
            return Err(bad(r.label(t.group, i), "λ/ν/Λ expressions have the wrong length"));
        }
        if r.spin_lkts_expr.is_empty() || r.spin_lkts_expr.iter().any(|l| !l.expr.dims_ok(k)) {
            return Err(bad(r.label(t.group, i), "spin LKT expressions missing or of the wrong length"));
        }
    }
    Ok(t)
}

pub fn load_tables(path: &Path) -> Result<Tables> {
    parse_tables(&std::fs::read_to_string(path)?)
}

pub fn bundled_tables_text(group: Group) -> &'static str {
    match group {
        Group::FII => include_str!("../data/FII.json"),
        Group::EIV => include_str!("../data/EIV.json"),
        Group::FI => include_str!("../data/FI.json"),
        Group::EI => include_str!("../data/EI.json"),
        Group::G2 => include_str!("../data/G2.json"),
    }
}

/// The group's tables: `$DIRAC_ATLAS_DATA/<group>.json` when that file exists,
/// the bundled copy otherwise.
pub fn group_tables(group: Group) -> Result<Tables> {
    if let Some(dir) = std::env::var_os("DIRAC_ATLAS_DATA") {
        let p = Path::new(&dir).join(format!("{group}.json"));
        if p.exists() {
            return load_tables(&p);
        }
    }
    parse_tables(bundled_tables_text(group))
}

/// Scattered and string row counts stated for each group.
pub fn expected_row_counts(group: Group) -> (usize, usize) {
    match group {
        Group::FII => (2, 10),
        Group::EIV => (2, 9),
        Group::FI => (22, 76),
        Group::EI => (13, 43),
        Group::G2 => (3, 5),
    }
}

fn check_all(cs: &[Constraint], vals: &Assignment) -> Result<Option<String>> {
    for c in cs {
        if !c.holds(vals)? {
            return Ok(Some(c.to_string()));
        }
    }
    Ok(None)
}

fn integral(v: &[Rat]) -> Option<Vec<i64>> {
    v.iter().map(Rat::to_i64).collect()
}

/// Λ and the active spin LKTs of a string row at the given variable values.
pub fn instantiate_string_row(row: &StringRow, vals: &Assignment, f: &RealFormData) -> Result<(InfChar, Vec<KType>)> {
    if let Some(c) = check_all(&row.constraints, vals)? {
        return Err(Error::Constraint(format!("{c} fails at {}", show_assignment(vals))));
    }
    let l = make_infchar(&row.infchar_expr.eval(vals)?, f)?;
    let mut lkts = Vec::new();
    for le in &row.spin_lkts_expr {
        if check_all(&le.constraints, vals)?.is_some() {
            continue;
        }
        let v = le.expr.eval(vals)?;
        let c = integral(&v).ok_or_else(|| Error::Validation { row: format!("#x={}", row.x), msg: format!("non-integral K-type {}", fmt_rats(&v)) })?;
        lkts.push(make_ktype(&c, f)?);
    }
    Ok((l, lkts))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub inputs: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerifyReport {
    pub records: Vec<CheckRecord>,
    /// Individual evaluations; passing ones are summarized, failures itemized.
    pub checks: usize,
    pub failures: usize,
}

impl VerifyReport {
    pub fn record(&mut self, id: impl Into<String>, inputs: impl Into<String>, expected: impl Into<String>, computed: impl Into<String>, pass: bool) {
        self.checks += 1;
        self.failures += usize::from(!pass);
        self.records.push(CheckRecord { id: id.into(), inputs: inputs.into(), expected: expected.into(), computed: computed.into(), pass });
    }

    pub fn merge(&mut self, o: VerifyReport) {
        self.records.extend(o.records);
        self.checks += o.checks;
        self.failures += o.failures;
    }

    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }
}

/// Tallies for one check kind across a grid: passes are counted, failures kept.
struct Tally {
    id: String,
    expected: String,
    total: usize,
    fails: Vec<CheckRecord>,
}

impl Tally {
    fn new(id: String, expected: &str) -> Tally {
        Tally { id, expected: expected.into(), total: 0, fails: vec![] }
    }

    fn add(&mut self, pass: bool, inputs: impl FnOnce() -> String, computed: impl FnOnce() -> String) {
        self.total += 1;
        if !pass {
            self.fails.push(CheckRecord { id: self.id.clone(), inputs: inputs(), expected: self.expected.clone(), computed: computed(), pass: false });
        }
    }

    fn into_report(self, grid: i64, r: &mut VerifyReport) {
        let ok = self.total - self.fails.len();
        r.checks += self.total;
        r.failures += self.fails.len();
        r.records.push(CheckRecord {
            id: self.id,
            inputs: format!("grid {grid}"),
            expected: format!("{} for all points", self.expected),
            computed: format!("{ok}/{} pass", self.total),
            pass: self.fails.is_empty(),
        });
        r.records.extend(self.fails);
    }
}

fn grid_points(vars: &[String], grid: i64) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..=grid).map(move |x| {
                    let mut b = a.clone();
                    b.insert(v.clone(), x);
                    b
                })
            })
            .collect();
    }
    out
}

/// Every constraint-satisfying point with variables in `0..=grid`: Λ is a
/// dominant infinitesimal character, each spin LKT is a K-type, has spin norm
/// ‖Λ‖², and lies in CanK(Λ).
pub fn verify_string_row_labeled(row: &StringRow, label: &str, grid: i64, f: &RealFormData) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let vars = row.variables();
    let mut points = 0usize;
    let mut t_inf = Tally::new(format!("{label}: Λ dominant"), "dominant");
    let mut t_valid = Tally::new(format!("{label}: LKT valid"), "valid K-type");
    let mut t_spin = Tally::new(format!("{label}: spin² = ‖Λ‖²"), "equal");
    let mut t_cank = Tally::new(format!("{label}: LKT ∈ CanK(Λ)"), "member");
    for vals in grid_points(&vars, grid) {
        match check_all(&row.constraints, &vals) {
            Ok(None) => {}
            Ok(Some(_)) => continue,
            Err(e) => {
                t_inf.add(false, || show_assignment(&vals), || e.to_string());
                continue;
            }
        }
        points += 1;
        let at = || show_assignment(&vals);
        let l = row.infchar_expr.eval(&vals).and_then(|c| make_infchar(&c, f));
        t_inf.add(l.is_ok(), at, || l.as_ref().err().map(ToString::to_string).unwrap_or_default());
        let Ok(l) = l else { continue };
        let target = l.norm_sq();
        for le in &row.spin_lkts_expr {
            if !matches!(check_all(&le.constraints, &vals), Ok(None)) {
                continue;
            }
            let v = le.expr.eval(&vals).unwrap_or_default();
            let mu = integral(&v).filter(|c| make_ktype(c, f).is_ok());
            t_valid.add(mu.is_some(), || format!("{} Λ={l}", at()), || fmt_rats(&v));
            let Some(mu) = mu else { continue };
            let s = spin_norm_sq_coeffs(&mu, f).norm_sq;
            t_spin.add(s == target, || format!("{} μ={}", at(), fmt_ints(&mu)), || format!("{s} vs {target}"));
            let member = in_can_k(&mu, &l, f);
            t_cank.add(member, || format!("{} μ={} Λ={l}", at(), fmt_ints(&mu)), || "not a member".into());
        }
    }
    rep.record(format!("{label}: grid nonempty"), format!("grid {grid}"), "≥ 1 point", format!("{points} points"), points > 0);
    for t in [t_inf, t_valid, t_spin, t_cank] {
        t.into_report(grid, &mut rep);
    }
    rep
}

pub fn verify_string_row(row: &StringRow, grid: i64, f: &RealFormData) -> VerifyReport {
    verify_string_row_labeled(row, &format!("{} string #x={}", f.group, row.x), grid, f)
}

/// Λ values recovered from the spin argmins of `mu`.
pub fn recovered_infchars(mu: &[i64], f: &RealFormData) -> BTreeSet<Vec<Rat>> {
    spin_norm_sq_coeffs(mu, f).prv_weights.iter().map(|w| infchar_from_t(&(w + &f.rho_c), f).coeffs).collect()
}

/// K-type validity, the u-small claim, a common recovered Λ across the spin
/// LKTs, zero Dirac gap there, and the parity of each LKT's PRV component.
pub fn verify_scattered_row_labeled(row: &ScatteredRow, label: &str, f: &RealFormData) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let mut valid = Vec::new();
    for mu in &row.spin_lkts {
        let ok = make_ktype(mu, f);
        rep.record(format!("{label}: LKT valid"), fmt_ints(mu), "valid K-type", ok.as_ref().map(|_| "valid".to_string()).unwrap_or_else(|e| e.to_string()), ok.is_ok());
        if let Ok(k) = ok {
            valid.push(k);
        }
    }
    if row.u_small {
        for k in &valid {
            let u = is_u_small_coeffs(&k.coeffs, f);
            rep.record(format!("{label}: u-small"), k.to_string(), "u-small", if u { "u-small" } else { "not u-small" }, u);
        }
    }
    let Some(first) = valid.first() else { return rep };
    let mut common = recovered_infchars(&first.coeffs, f);
    for k in &valid[1..] {
        let r = recovered_infchars(&k.coeffs, f);
        common = common.intersection(&r).cloned().collect();
    }
    let lkts: Vec<String> = valid.iter().map(ToString::to_string).collect();
    let shown = common.iter().map(|c| fmt_rats(c)).collect::<Vec<_>>().join(" ");
    rep.record(format!("{label}: Λ_rec consistent"), lkts.join(" "), "one common Λ", if common.is_empty() { "none".into() } else { shown }, !common.is_empty());
    let Some(lc) = common.first() else { return rep };
    let l = make_infchar(lc, f).expect("recovered Λ is dominant");
    for k in &valid {
        let g = dirac_gap(k, &l, f);
        rep.record(format!("{label}: Dirac gap"), format!("μ={k} Λ_rec={l}"), "0", g.to_string(), g.is_zero());
        let m = in_can_k(&k.coeffs, &l, f);
        rep.record(format!("{label}: LKT ∈ CanK(Λ_rec)"), format!("μ={k} Λ_rec={l}"), "member", if m { "member" } else { "not a member" }, m);
    }
    let parities: Vec<String> = valid
        .iter()
        .map(|k| {
            let s = spin_norm_sq_coeffs(&k.coeffs, f);
            let ps: BTreeSet<&str> = s.parities.iter().map(|p| if *p == 0 { "even" } else { "odd" }).collect();
            format!("{k}:{}", ps.into_iter().collect::<Vec<_>>().join("/"))
        })
        .collect();
    rep.record(format!("{label}: PRV parity"), lkts.join(" "), "recorded", parities.join(" "), true);
    rep
}

pub fn verify_scattered_row(row: &ScatteredRow, f: &RealFormData) -> VerifyReport {
    verify_scattered_row_labeled(row, &format!("{} scattered #x={}", f.group, row.x), f)
}

pub fn usmall_census(f: &RealFormData) -> usize {
    usmall_ktypes(f).len()
}

/// Row counts plus every scattered and string check for one table set.
pub fn verify_tables(t: &Tables, grid: i64) -> VerifyReport {
    let f = get_form(t.group);
    let mut rep = VerifyReport::default();
    let (es, et) = expected_row_counts(t.group);
    let (gs, gt) = (t.scattered.len(), t.strings.len());
    rep.record(format!("{} row counts", t.group), "bundled table", format!("{es}+{et}"), format!("{gs}+{gt}"), (es, et) == (gs, gt));
    for (i, r) in t.scattered.iter().enumerate() {
        rep.merge(verify_scattered_row_labeled(r, &r.label(t.group, i), f));
    }
    let parts: Vec<VerifyReport> = t.strings.par_iter().enumerate().map(|(i, r)| verify_string_row_labeled(r, &r.label(t.group, i), grid, f)).collect();
    for p in parts {
        rep.merge(p);
    }
    rep
}

pub fn verify_group(group: Group, grid: i64) -> Result<VerifyReport> {
    Ok(verify_tables(&group_tables(group)?, grid))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSet {
    pub reports: Vec<(String, VerifyReport)>,
    pub checks: usize,
    pub failures: usize,
}

pub fn emit_report(reports: &[(String, VerifyReport)], format: ReportFormat) -> String {
    let checks = reports.iter().map(|(_, r)| r.checks).sum::<usize>();
    let failures = reports.iter().map(|(_, r)| r.failures).sum::<usize>();
    match format {
        ReportFormat::Json => {
            let set = ReportSet { reports: reports.to_vec(), checks, failures };
            let mut s = serde_json::to_string_pretty(&set).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Text => {
            let mut s = String::new();
            for (name, r) in reports {
                s.push_str(&format!("== {name} ==\n"));
                for c in &r.records {
                    let tag = if c.pass { "PASS" } else { "FAIL" };
                    s.push_str(&format!("{tag} {} | inputs: {} | expected: {} | computed: {}\n", c.id, c.inputs, c.expected, c.computed));
                }
                s.push_str(&format!("{name}: {} checks, {} failures\n", r.checks, r.failures));
            }
            s.push_str(&format!("{checks} checks, {failures} failures\n"));
            s
        }
    }
}

pub fn parse_report_json(text: &str) -> Result<ReportSet> {
    serde_json::from_str(text).map_err(json_error)
}

fn parse_int_list(s: &str) -> Option<Vec<i64>> {
    let t = s.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
    t.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).map(|p| p.parse().ok()).collect()
}

/// Reads a branching table. Strict lines are `key=value` headers
/// (`group`, `infchar`, `height_complete_to`) and `ktype=[…] mult=m` entries;
/// with `lenient`, entry lines may also be `m [a,b,c,d] [height]` columns.
pub fn parse_branching_str(text: &str, f: &RealFormData, lenient: bool) -> Result<BranchingTable> {
    let mut group = None;
    let mut infchar = None;
    let mut height = None;
    let mut entries: Vec<(KType, u64)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, col: raw.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1, msg };
        let entry = if let Some(rest) = line.strip_prefix("ktype=") {
            let (kt, m) = rest.split_once("mult=").ok_or_else(|| err("expected `ktype=[…] mult=m`".into()))?;
            let c = parse_int_list(kt).ok_or_else(|| err(format!("bad K-type {}", kt.trim())))?;
            let m: u64 = m.trim().parse().map_err(|_| err(format!("bad multiplicity {}", m.trim())))?;
            Some((c, m))
        } else if let Some((k, v)) = line.split_once('=') {
            match k.trim() {
                "group" => group = Some(v.trim().parse::<Group>()?),
                "infchar" => {
                    let c = parse_rats(v).map_err(|e| err(e.to_string()))?;
                    infchar = Some(make_infchar(&c, f)?);
                }
                "height_complete_to" => height = Some(v.trim().parse::<i64>().map_err(|_| err(format!("bad height {}", v.trim())))?),
                other => return Err(err(format!("unknown header {other}"))),
            }
            None
        } else if lenient {
            let open = line.find(['[', '(']).ok_or_else(|| err("expected `mult [a,b,…]`".into()))?;
            let close = line[open..].find([']', ')']).map(|p| p + open).ok_or_else(|| err("unclosed K-type".into()))?;
            let m: u64 = line[..open].trim().parse().map_err(|_| err(format!("bad multiplicity {}", line[..open].trim())))?;
            let c = parse_int_list(&line[open..=close]).ok_or_else(|| err("bad K-type".into()))?;
            let tail = line[close + 1..].trim();
            if !tail.is_empty() && tail.parse::<i64>().is_err() {
                return Err(err(format!("unexpected trailing column {tail}")));
            }
            Some((c, m))
        } else {
            return Err(err(format!("unrecognized line {line}")));
        };
        if let Some((c, m)) = entry {
            let k = make_ktype(&c, f)?;
            if !seen.insert(c) {
                return Err(Error::DuplicateKType(k.to_string()));
            }
            if m == 0 {
                return Err(err("multiplicity must be positive".into()));
            }
            entries.push((k, m));
        }
    }
    let missing = |what: &str| Error::Parse { line: 0, col: 0, msg: format!("missing header {what}") };
    if let Some(g) = group {
        if g != f.group {
            return Err(Error::Validation { row: "branching header".into(), msg: format!("group {g} does not match {}", f.group) });
        }
    }
    if entries.is_empty() {
        return Err(Error::EmptyTable);
    }
    Ok(BranchingTable {
        group: f.group,
        infchar: infchar.ok_or_else(|| missing("infchar"))?,
        entries,
        height_complete_to: height.ok_or_else(|| missing("height_complete_to"))?,
    })
}

pub fn parse_branching(path: &Path, f: &RealFormData, lenient: bool) -> Result<BranchingTable> {
    parse_branching_str(&std::fs::read_to_string(path)?, f, lenient)
}

pub fn serialize_branching(bt: &BranchingTable) -> String {
    let mut s = format!("group={}\ninfchar={}\nheight_complete_to={}\n", bt.group, bt.infchar, bt.height_complete_to);
    for (k, m) in &bt.entries {
        s.push_str(&format!("ktype={k} mult={m}\n"));
    }
    s
}

pub fn bundled_fixture_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "FI_176" => include_str!("../data/branching/FI_176.txt"),
        "FI_spin_mult_big" => include_str!("../data/branching/FI_spin_mult_big.txt"),
        "G2_trivial" => include_str!("../data/branching/G2_trivial.txt"),
        _ => return None,
    })
}

pub fn bundled_fixture(name: &str, f: &RealFormData) -> Result<BranchingTable> {
    let text = bundled_fixture_text(name).ok_or_else(|| Error::Io(format!("no bundled fixture {name}")))?;
    parse_branching_str(text, f, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(pairs: &[(&str, i64)]) -> Assignment {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn rats(s: &str) -> Vec<Rat> {
        parse_rats(s).unwrap()
    }

    #[test]
    fn bundled_row_counts() {
        for g in Group::ALL {
            let t = parse_tables(bundled_tables_text(g)).unwrap();
            assert_eq!((t.scattered.len(), t.strings.len()), expected_row_counts(g), "{g}");
            assert_eq!(t.group, g);
        }
    }

    #[test]
    fn instantiate_examples() {
        let fii = get_form(Group::FII);
        let t = parse_tables(bundled_tables_text(Group::FII)).unwrap();
        let row = t.strings.iter().find(|r| r.x == 0).unwrap();
        let (l, lk) = instantiate_string_row(row, &vals(&[("a", 1), ("b", 1), ("c", 0), ("d", 1)]), fii).unwrap();
        assert_eq!(l.coeffs, rats("1,0,1,1"));
        assert_eq!(lk.iter().map(|k| k.coeffs.clone()).collect::<Vec<_>>(), vec![vec![1, 0, 0, 1]]);
        let e = instantiate_string_row(row, &vals(&[("a", 1), ("b", 0), ("c", 0), ("d", 1)]), fii).unwrap_err();
        assert!(matches!(&e, Error::Constraint(m) if m.contains('b')), "{e}");

        let g2 = get_form(Group::G2);
        let t = parse_tables(bundled_tables_text(Group::G2)).unwrap();
        let row = t.strings.iter().find(|r| r.x == 3).unwrap();
        let (l, lk) = instantiate_string_row(row, &vals(&[("a", 0)]), g2).unwrap();
        assert_eq!(l.coeffs, rats("0,1"));
        assert_eq!(lk[0].coeffs, vec![2, 2]);
    }

    #[test]
    fn string_rows_small_grid() {
        let fii = get_form(Group::FII);
        let t = parse_tables(bundled_tables_text(Group::FII)).unwrap();
        let r = verify_string_row(&t.strings[0], 4, fii);
        assert!(r.all_pass(), "{}", emit_report(&[("FII".into(), r.clone())], ReportFormat::Text));
        assert!(r.checks > 100);
    }

    #[test]
    fn grid_monotone() {
        let fi = get_form(Group::FI);
        let t = parse_tables(bundled_tables_text(Group::FI)).unwrap();
        for row in t.strings.iter().take(6) {
            let small = verify_string_row(row, 1, fi);
            let big = verify_string_row(row, 2, fi);
            assert!(small.checks <= big.checks);
            assert!(!big.all_pass() || small.all_pass());
        }
    }

    #[test]
    fn scattered_examples() {
        let fii = get_form(Group::FII);
        let t = parse_tables(bundled_tables_text(Group::FII)).unwrap();
        let row = t.scattered.iter().find(|r| r.x == 10).unwrap();
        assert_eq!(row.spin_lkts, vec![vec![0, 0, 1, 0]]);
        assert!(verify_scattered_row(row, fii).all_pass());

        let fi = get_form(Group::FI);
        let t = parse_tables(bundled_tables_text(Group::FI)).unwrap();
        let row = t.scattered.iter().find(|r| r.x == 176).unwrap();
        let r = verify_scattered_row(row, fi);
        assert!(r.all_pass());
        let par = r.records.iter().find(|c| c.id.ends_with("PRV parity")).unwrap();
        assert!(par.computed.contains("[0,0,3,1]:odd") && par.computed.contains("[0,2,0,4]:even"), "{}", par.computed);

        let g2 = get_form(Group::G2);
        let t = parse_tables(bundled_tables_text(Group::G2)).unwrap();
        let row = t.scattered.iter().find(|r| r.spin_lkts == vec![vec![0, 0]]).unwrap();
        assert_eq!(recovered_infchars(&[0, 0], g2).into_iter().collect::<Vec<_>>(), vec![rats("1,1")]);
        assert!(verify_scattered_row(row, g2).all_pass());
    }

    #[test]
    fn atlas_order_is_normalized() {
        let mut t = parse_tables(bundled_tables_text(Group::FII)).unwrap();
        let native = t.clone();
        t.coordinate_order = CoordinateOrder::Atlas;
        for r in &mut t.scattered {
            r.lambda.reverse();
            r.nu.reverse();
        }
        for r in &mut t.strings {
            r.lambda_expr.reverse();
            r.nu_expr.reverse();
            r.infchar_expr.reverse();
        }
        let back = parse_tables(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, native);
    }

    #[test]
    fn parse_errors_have_positions() {
        match parse_tables("{\n \"group\": \"FII\",\n \"coordinate_order\": 7\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let mut t = parse_tables(bundled_tables_text(Group::G2)).unwrap();
        t.scattered[1].spin_lkts[0].push(1);
        let e = parse_tables(&serde_json::to_string(&t).unwrap()).unwrap_err();
        assert!(matches!(&e, Error::Validation { row, .. } if row.contains("#x=9")), "{e}");
    }

    #[test]
    fn constraint_display() {
        let c: Constraint = serde_json::from_str(r#"{"kind":"in_set","expr":{"const":"0","coeffs":{"a":"1","f":"-1"}},"values":["0","1"]}"#).unwrap();
        assert_eq!(c.to_string(), "a-f ∈ {0,1}");
        assert!(c.holds(&vals(&[("a", 3), ("f", 2)])).unwrap());
        assert!(!c.holds(&vals(&[("a", 3), ("f", 1)])).unwrap());
        let p = Constraint::Parity { expr: AffineScalar { constant: Rat::ONE, coeffs: [("a".to_string(), Rat::ONE)].into() }, residue: 0 };
        assert!(p.holds(&vals(&[("a", 1)])).unwrap());
        assert!(!p.holds(&vals(&[("a", 2)])).unwrap());
    }

    #[test]
    fn branching_parse_and_errors() {
        let fi = get_form(Group::FI);
        let bt = bundled_fixture("FI_176", fi).unwrap();
        let ks: Vec<_> = bt.entries.iter().map(|(k, _)| k.coeffs.clone()).collect();
        assert!(ks.contains(&vec![0, 0, 3, 1]) && ks.contains(&vec![0, 2, 0, 4]));
        assert_eq!(parse_branching_str(&serialize_branching(&bt), fi, false).unwrap(), bt);

        assert_eq!(parse_branching_str("", fi, false), Err(Error::EmptyTable));
        let head = "group=FI\ninfchar=[0,1,0,1]\nheight_complete_to=60\n";
        assert!(matches!(parse_branching_str(&format!("{head}ktype=[1,0,0,0] mult=1\n"), fi, false), Err(Error::Parity(_))));
        let dup = format!("{head}ktype=[0,2,0,4] mult=1\nktype=[0,2,0,4] mult=2\n");
        assert!(matches!(parse_branching_str(&dup, fi, false), Err(Error::DuplicateKType(_))));
        let loose = format!("{head}# m  ktype  height\n1 (0, 2, 0, 4) 37\n2 [0,0,3,1]\n");
        assert!(matches!(parse_branching_str(&loose, fi, false), Err(Error::Parse { line: 5, .. })));
        let t = parse_branching_str(&loose, fi, true).unwrap();
        assert_eq!(t.entries[1].1, 2);
    }

    #[test]
    fn report_round_trip() {
        let mut r = VerifyReport::default();
        r.record("x", "in", "1", "1", true);
        r.record("injected", "μ=[0,0]", "0", "3/2", false);
        let reports = vec![("G2".to_string(), r)];
        let text = emit_report(&reports, ReportFormat::Text);
        assert!(text.contains("FAIL injected") && text.contains("expected: 0 | computed: 3/2"));
        assert!(text.ends_with("2 checks, 1 failures\n"));
        let back = parse_report_json(&emit_report(&reports, ReportFormat::Json)).unwrap();
        assert_eq!(back.reports, reports);
        assert_eq!(emit_report(&[], ReportFormat::Text), "0 checks, 0 failures\n");
    }
}
