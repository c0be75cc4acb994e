use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::rootsystem::{
    build_root_system, coset_reps_with_images, e6_system, f4_system, g2_system, subsystem_combos, subsystem_generated, Folding,
    RootSystem, SystemKind, WeylWord,
};
use crate::vect::Vect;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Group {
    FII,
    EIV,
    FI,
    EI,
    G2,
}

impl Group {
    pub const ALL: [Group; 5] = [Group::FII, Group::EIV, Group::FI, Group::EI, Group::G2];

    pub fn name(self) -> &'static str {
        match self {
            Group::FII => "FII",
            Group::EIV => "EIV",
            Group::FI => "FI",
            Group::EI => "EI",
            Group::G2 => "G2",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Group> {
        Group::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownGroup(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToAtlas,
    FromAtlas,
}

#[derive(Debug, Clone)]
pub struct RealFormData {
    pub group: Group,
    /// Δ(g, t_f): F4 for the four exceptional forms, G2 for G2(2).
    pub g_roots_t: RootSystem,
    /// Δ(g, h_f): E6 for EIV/EI, otherwise the same as `g_roots_t`.
    pub g_roots_h: RootSystem,
    pub k_roots: RootSystem,
    pub p_pos_roots: Vec<(Vect, u32)>,
    /// Noncompact multiplicity of every root of Δ(g, t_f), positive and negative.
    pub p_mult: HashMap<Vect, u32>,
    pub rho: Vect,
    pub rho_c: Vect,
    pub rho_n: Vect,
    pub xi_basis: Vec<Vect>,
    pub varpi_basis: Vec<Vect>,
    /// Coefficients of the parity functional on ϖ-coefficients (taken mod 2).
    pub parity: Option<Vec<i64>>,
    pub atlas_reversed: bool,
    pub equal_rank: bool,
    pub dim_g: usize,
    pub dim_k: usize,
    pub dim_p: usize,
    pub dim_a_f: usize,
    pub folding: Option<Folding>,
    /// Minimal-length coset representatives `w^(j)` with `w^(j)ρ`.
    pub coset_reps: Vec<(WeylWord, Vect)>,
    /// `ρ_n^(j)` with the length parity of `w^(j)`.
    pub rho_n_list: Vec<(Vect, u8)>,
}

fn k_gammas(group: Group, g: &RootSystem) -> Vec<Vect> {
    let kind = match group {
        Group::FII => SystemKind::B4,
        Group::FI => SystemKind::C3A1,
        Group::EI => SystemKind::C4,
        Group::G2 => SystemKind::A1A1,
        Group::EIV => return g.simple_roots.clone(),
    };
    let (_, combos) = subsystem_combos(kind).expect("compact subsystem data");
    combos
        .iter()
        .map(|c| Vect::lincomb(&c.iter().map(|&x| Rat::int(x)).collect::<Vec<_>>(), &g.simple_roots))
        .collect()
}

fn k_kind(group: Group) -> SystemKind {
    match group {
        Group::FII => SystemKind::B4,
        Group::FI => SystemKind::C3A1,
        Group::EI => SystemKind::C4,
        Group::G2 => SystemKind::A1A1,
        Group::EIV => SystemKind::F4,
    }
}

impl RealFormData {
    pub fn build(group: Group) -> Result<RealFormData> {
        let g_t = if group == Group::G2 { g2_system().clone() } else { f4_system().clone() };
        let gammas = k_gammas(group, &g_t);
        let k = if group == Group::EIV {
            build_root_system(SystemKind::F4)?
        } else {
            subsystem_generated(k_kind(group), &gammas, &g_t)?
        };
        let equal_rank = !matches!(group, Group::EIV | Group::EI);
        let (g_h, folding, rho, p_mult) = if equal_rank {
            let mut pm = HashMap::new();
            for r in g_t.all_roots() {
                pm.insert(r.clone(), if k.is_root(&r) { 0 } else { 1 });
            }
            (g_t.clone(), None, g_t.rho.clone(), pm)
        } else {
            let e6 = e6_system();
            let fold = Folding::e6_to_f4(e6, &g_t);
            let mut fib: HashMap<Vect, u32> = HashMap::new();
            for r in e6.all_roots() {
                *fib.entry(fold.restrict(&r)).or_default() += 1;
            }
            let mut pm = HashMap::new();
            for r in g_t.all_roots() {
                let m = fib.get(&r).copied().unwrap_or(0);
                let kc = u32::from(k.is_root(&r));
                if m < kc {
                    return Err(Error::SelfCheck(format!("compact root {r} has no E6 preimage")));
                }
                pm.insert(r, m - kc);
            }
            if fib.keys().any(|r| !g_t.is_root(r)) {
                return Err(Error::SelfCheck("restricted E6 root outside Δ(g,t_f)".into()));
            }
            let rho = fold.restrict(&e6.rho);
            (e6.clone(), Some(fold), rho, pm)
        };
        let mut p_pos_roots: Vec<(Vect, u32)> =
            g_t.positive_roots.iter().filter_map(|r| p_mult.get(r).filter(|&&m| m > 0).map(|&m| (r.clone(), m))).collect();
        p_pos_roots.sort();
        let rho_c = k.rho.clone();
        let rho_n = &rho - &rho_c;
        let parity = match group {
            Group::FI => Some(vec![1, 0, 1, 1]),
            Group::EI => Some(vec![1, 0, 1, 0]),
            Group::G2 => Some(vec![1, 1]),
            Group::FII | Group::EIV => None,
        };
        let (dim_g, dim_k, dim_a_f) = match group {
            Group::FII => (52, 36, 0),
            Group::FI => (52, 24, 0),
            Group::EIV => (78, 52, 2),
            Group::EI => (78, 36, 2),
            Group::G2 => (14, 6, 0),
        };
        // coset representatives act on t_f through W(g, t_f), positioned at the (restricted) ρ
        let coset_reps = {
            let reps = coset_reps_with_images(&k, &g_t)?;
            reps.into_iter()
                .map(|(w, _)| {
                    let img = w.apply(&rho, &g_t);
                    (w, img)
                })
                .collect::<Vec<(WeylWord, Vect)>>()
        };
        // ρ_n^(j): half the p-weighted sum of the positive system w^(j)Δ⁺(g, t_f)
        let rho_n_list = coset_reps
            .iter()
            .map(|(w, _)| {
                let v = g_t.positive_roots.iter().fold(Vect::zero(rho.dim()), |acc, r| {
                    let wr = w.apply(r, &g_t);
                    let m = p_mult.get(&wr).copied().unwrap_or(0);
                    acc.axpy(&Rat::int(m as i64), &wr)
                });
                (v.scale(&Rat::new(1, 2)), w.length_parity())
            })
            .collect();
        let f = RealFormData {
            group,
            xi_basis: g_h.fundamental_weights.clone(),
            varpi_basis: k.fundamental_weights.clone(),
            g_roots_t: g_t,
            g_roots_h: g_h,
            k_roots: k,
            p_pos_roots,
            p_mult,
            rho,
            rho_c,
            rho_n,
            parity,
            atlas_reversed: matches!(group, Group::FII | Group::FI),
            equal_rank,
            dim_g,
            dim_k,
            dim_p: dim_g - dim_k,
            dim_a_f,
            folding,
            coset_reps,
            rho_n_list,
        };
        let report = validate_form(&f);
        if let Some(c) = report.checks.iter().find(|c| !c.pass) {
            return Err(Error::SelfCheck(format!("{}: {}", c.name, c.detail)));
        }
        Ok(f)
    }

    pub fn k_rank(&self) -> usize {
        self.k_roots.rank()
    }

    pub fn h_rank(&self) -> usize {
        self.g_roots_h.rank()
    }

    /// Index `s = |W(g,t_f)| / |W(k,t_f)|`.
    pub fn s(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn ktype_vect(&self, coeffs: &[i64]) -> Vect {
        let c: Vec<Rat> = coeffs.iter().map(|&x| Rat::int(x)).collect();
        self.k_roots.from_coeffs(&c)
    }

    pub fn kweight_vect(&self, coeffs: &[Rat]) -> Vect {
        self.k_roots.from_coeffs(coeffs)
    }

    pub fn k_coeffs(&self, v: &Vect) -> Vec<Rat> {
        self.k_roots.coeffs(v)
    }

    pub fn parity_of(&self, coeffs: &[i64]) -> i64 {
        match &self.parity {
            Some(p) => p.iter().zip(coeffs).map(|(a, b)| a * b).sum::<i64>().rem_euclid(2),
            None => 0,
        }
    }

    /// h_f-level ξ-coefficients of a `t_f` vector.
    pub fn h_coeffs(&self, v: &Vect) -> Vec<Rat> {
        self.g_roots_h.coeffs(&embed_tf_weight(v, self))
    }

    /// The `t_f` vector with given h_f-level ξ-coefficients (fold-symmetric for E6 forms).
    pub fn t_from_h_coeffs(&self, c: &[Rat]) -> Vect {
        let w = self.g_roots_h.from_coeffs(c);
        match &self.folding {
            Some(f) => f.restrict(&w),
            None => w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormReport {
    pub group: Group,
    pub checks: Vec<Check>,
}

impl FormReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn validate_form(f: &RealFormData) -> FormReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, pass: bool, detail: String| checks.push(Check { name: name.to_string(), pass, detail });

    push("ρ = ρ_c + ρ_n", f.rho == &f.rho_c + &f.rho_n, format!("ρ={} ρ_c={} ρ_n={}", f.rho, f.rho_c, f.rho_n));
    let total: u32 = f.p_pos_roots.iter().map(|(_, m)| m).sum();
    let want = (f.dim_p - f.dim_a_f) / 2;
    push("Σ p-multiplicities", total as usize == want, format!("{total} vs {want}"));
    let half_sum =
        f.p_pos_roots.iter().fold(Vect::zero(f.rho.dim()), |a, (r, m)| a.axpy(&Rat::int(*m as i64), r)).scale(&Rat::new(1, 2));
    push("ρ_n = weighted half sum of Δ⁺(p)", half_sum == f.rho_n, format!("{half_sum} vs {}", f.rho_n));
    let dk = 2 * f.k_roots.positive_roots.len() + f.k_roots.rank();
    push("|Δ⁺(k)| matches dim k", dk == f.dim_k, format!("{dk} vs {}", f.dim_k));
    if f.equal_rank {
        let ok = f.p_pos_roots.iter().all(|(r, m)| *m == 1 && !f.k_roots.is_root(r))
            && f.p_pos_roots.len() + f.k_roots.positive_roots.len() == f.g_roots_t.positive_roots.len();
        push("Δ⁺(p) = Δ⁺(g) \\ Δ⁺(k)", ok, String::new());
    }
    let gam = k_gammas(f.group, &f.g_roots_t);
    push("k simple roots match γ formulas", gam == f.k_roots.simple_roots, String::new());
    let k_in_g = f.k_roots.positive_roots.iter().all(|r| f.g_roots_t.is_positive(r) && f.g_roots_t.is_root(r));
    push("Δ⁺(k) ⊆ Δ⁺(g)", k_in_g, String::new());
    let wg = if f.group == Group::G2 { 12 } else { 1152 };
    let s_ok = f.coset_reps.len() as u64 * f.k_roots.kind.weyl_order() == wg;
    push("s = |W(g)|/|W(k)|", s_ok, format!("s = {}", f.coset_reps.len()));
    let rn_ok = f.rho_n_list.len() == f.coset_reps.len()
        && f.rho_n_list.iter().zip(&f.coset_reps).all(|((rn, p), (w, img))| *rn == img - &f.rho_c && *p == w.length_parity());
    push("ρ_n^(j) = w^(j)ρ − ρ_c", rn_ok, String::new());
    let distinct: std::collections::HashSet<&Vect> = f.rho_n_list.iter().map(|(v, _)| v).collect();
    push("ρ_n^(j) pairwise distinct", distinct.len() == f.rho_n_list.len(), String::new());
    push("ρ_n^(0) = ρ_n", f.rho_n_list.first().map(|(v, _)| v) == Some(&f.rho_n), String::new());
    FormReport { group: f.group, checks }
}

static FORMS: [OnceLock<RealFormData>; 5] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// Cached, validated form data.
pub fn get_form(group: Group) -> &'static RealFormData {
    let i = Group::ALL.iter().position(|&g| g == group).expect("group listed");
    FORMS[i].get_or_init(|| RealFormData::build(group).expect("form data is internally consistent"))
}

pub fn get_form_by_name(name: &str) -> Result<&'static RealFormData> {
    Ok(get_form(name.parse()?))
}

pub fn convert_atlas_order<T: Clone>(coeffs: &[T], f: &RealFormData, _direction: Direction) -> Result<Vec<T>> {
    let n = f.h_rank();
    if coeffs.len() != n {
        return Err(Error::Dimension { expected: n, got: coeffs.len() });
    }
    let mut v = coeffs.to_vec();
    if f.atlas_reversed {
        v.reverse();
    }
    Ok(v)
}

/// The fold-symmetric h_f-vector restricting to `v`; identity for equal-rank forms.
pub fn embed_tf_weight(v: &Vect, f: &RealFormData) -> Vect {
    match &f.folding {
        Some(fold) => fold.embed(v),
        None => v.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KType {
    pub group: Group,
    pub coeffs: Vec<i64>,
}

impl KType {
    pub fn vect(&self) -> Vect {
        get_form(self.group).ktype_vect(&self.coeffs)
    }
}

impl fmt::Display for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_ints(&self.coeffs))
    }
}

pub fn fmt_ints(xs: &[i64]) -> String {
    let parts: Vec<String> = xs.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

pub fn make_ktype(coeffs: &[i64], f: &RealFormData) -> Result<KType> {
    if coeffs.len() != f.k_rank() {
        return Err(Error::Dimension { expected: f.k_rank(), got: coeffs.len() });
    }
    if coeffs.iter().any(|&c| c < 0) {
        return Err(Error::NotDominant(fmt_ints(coeffs)));
    }
    if f.parity_of(coeffs) != 0 {
        return Err(Error::Parity(fmt_ints(coeffs)));
    }
    Ok(KType { group: f.group, coeffs: coeffs.to_vec() })
}

pub fn is_valid_ktype(coeffs: &[i64], f: &RealFormData) -> bool {
    make_ktype(coeffs, f).is_ok()
}

/// A dominant real infinitesimal character.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InfChar {
    pub group: Group,
    /// ξ-coefficients with respect to Δ⁺(g, h_f).
    pub coeffs: Vec<Rat>,
    /// The h_f-level vector.
    pub vect: Vect,
    /// Its `t_f` restriction (equal to `vect` for equal-rank forms).
    pub t_vect: Vect,
}

impl InfChar {
    pub fn norm_sq(&self) -> Rat {
        self.vect.norm_sq()
    }
}

impl fmt::Display for InfChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::vect::fmt_rats(&self.coeffs))
    }
}

pub fn make_infchar(coeffs: &[Rat], f: &RealFormData) -> Result<InfChar> {
    let n = f.h_rank();
    let show = || crate::vect::fmt_rats(coeffs);
    if coeffs.len() != n {
        return Err(Error::Dimension { expected: n, got: coeffs.len() });
    }
    if coeffs.iter().any(Rat::is_negative) {
        return Err(Error::InfChar(show(), "not dominant".into()));
    }
    if !f.equal_rank && (coeffs[0] != coeffs[5] || coeffs[2] != coeffs[4]) {
        return Err(Error::InfChar(show(), "not fold-symmetric, so it does not lie in t_f*".into()));
    }
    let vect = f.g_roots_h.from_coeffs(coeffs);
    let t_vect = f.t_from_h_coeffs(coeffs);
    Ok(InfChar { group: f.group, coeffs: coeffs.to_vec(), vect, t_vect })
}

/// Infinitesimal character from a `t_f` vector (made dominant first).
pub fn infchar_from_t(v: &Vect, f: &RealFormData) -> InfChar {
    let t = f.g_roots_t.dominant(v);
    let vect = embed_tf_weight(&t, f);
    let coeffs = f.g_roots_h.coeffs(&vect);
    InfChar { group: f.group, coeffs, vect, t_vect: t }
}
