use serde::{Deserialize, Serialize};

use crate::enumerate::{can_k, cank_height_bound, in_can_k};
use crate::error::{Error, Result};
use crate::norms::spin_norm_sq;
use crate::rat::Rat;
use crate::realforms::{embed_tf_weight, fmt_ints, Group, InfChar, KType, RealFormData};
use crate::vect::Vect;

/// K-types of one module up to some height, as printed by the branching tool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingTable {
    pub group: Group,
    pub infchar: InfChar,
    pub entries: Vec<(KType, u64)>,
    /// Every K-type of height at most this value is listed (the caller's promise).
    pub height_complete_to: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiracOutcome {
    pub nonzero: bool,
    /// K̃-weights `{μ − ρ_n^(j)}` (ϖ-coefficients) with `ℓ(w^(j))` even, sorted.
    pub plus_part: Vec<Vec<i64>>,
    pub minus_part: Vec<Vec<i64>>,
    pub index_zero: bool,
    pub spin_lowest: Vec<(Vec<i64>, u64)>,
}

pub fn dirac_gap(mu: &KType, l: &InfChar, f: &RealFormData) -> Rat {
    spin_norm_sq(mu, f).norm_sq - l.norm_sq()
}

pub fn spin_lowest_ktypes(bt: &BranchingTable, f: &RealFormData) -> Result<Vec<(KType, u64)>> {
    if bt.entries.is_empty() {
        return Err(Error::EmptyTable);
    }
    let norms: Vec<Rat> = bt.entries.iter().map(|(k, _)| spin_norm_sq(k, f).norm_sq).collect();
    let min = norms.iter().min().expect("nonempty").clone();
    Ok(bt.entries.iter().zip(&norms).filter(|(_, n)| **n == min).map(|(e, _)| e.clone()).collect())
}

fn require_height(bt: &BranchingTable, f: &RealFormData) -> Result<()> {
    let need = cank_height_bound(&bt.infchar, f);
    if Rat::int(bt.height_complete_to) < need {
        let need = i64::try_from(need.ceil()).expect("small height");
        return Err(Error::IncompleteHeight { have: bt.height_complete_to, need });
    }
    Ok(())
}

/// Whether some K-type of CanK(Λ) occurs in the table. Refuses when the table
/// stops below the largest height in CanK(Λ).
pub fn has_dirac_cohomology(bt: &BranchingTable, f: &RealFormData) -> Result<bool> {
    if bt.entries.is_empty() {
        return Ok(false);
    }
    require_height(bt, f)?;
    let cank = can_k(&bt.infchar, f);
    Ok(bt.entries.iter().any(|(k, _)| cank.ktypes.contains(k)))
}

fn conjugate_to(prv: &Vect, l: &InfChar, f: &RealFormData) -> bool {
    let v = embed_tf_weight(&(prv + &f.rho_c), f);
    f.g_roots_h.dominant(&v) == l.vect
}

/// Presence and parity of Dirac cohomology: one K̃-weight per occurrence of a
/// CanK member and per achieving `j`.
pub fn dirac_cohomology(bt: &BranchingTable, f: &RealFormData) -> Result<DiracOutcome> {
    if bt.entries.is_empty() {
        return Ok(DiracOutcome { nonzero: false, plus_part: vec![], minus_part: vec![], index_zero: true, spin_lowest: vec![] });
    }
    require_height(bt, f)?;
    let spin_lowest = spin_lowest_ktypes(bt, f)?;
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    for (mu, mult) in &bt.entries {
        if !in_can_k(&mu.coeffs, &bt.infchar, f) {
            continue;
        }
        let s = spin_norm_sq(mu, f);
        for ((w, c), p) in s.prv_weights.iter().zip(&s.prv_coeffs).zip(&s.parities) {
            if !conjugate_to(w, &bt.infchar, f) {
                continue;
            }
            let part = if *p == 0 { &mut plus } else { &mut minus };
            part.extend(std::iter::repeat_n(c.clone(), *mult as usize));
        }
    }
    plus.sort();
    minus.sort();
    Ok(DiracOutcome {
        nonzero: !plus.is_empty() || !minus.is_empty(),
        index_zero: plus == minus,
        plus_part: plus,
        minus_part: minus,
        spin_lowest: spin_lowest.into_iter().map(|(k, m)| (k.coeffs, m)).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    RuledOut,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilReport {
    pub verdict: Verdict,
    pub min_spin_sq: Rat,
    pub argmin_n: i64,
    /// Number of pencil members actually evaluated.
    pub evaluated: usize,
    pub last_n: i64,
}

fn two_rho_check(f: &RealFormData) -> Vect {
    let g = &f.g_roots_t;
    g.positive_coroots.iter().fold(Vect::zero(g.dim), |acc, c| &acc + c)
}

/// The highest root of Δ⁺(g, t_f). It is compact for all five forms here.
pub fn highest_root(f: &RealFormData) -> Vect {
    let h = two_rho_check(f);
    f.g_roots_t.positive_roots.iter().max_by_key(|a| a.dot(&h)).expect("nonempty").clone()
}

/// The highest weight of p as a K-module: the highest noncompact root. Pencils
/// `μ + nβ` run along this β.
pub fn pencil_direction(f: &RealFormData) -> Vect {
    let h = two_rho_check(f);
    let beta = f.p_pos_roots.iter().map(|(a, _)| a).max_by_key(|a| a.dot(&h)).expect("p ≠ 0").clone();
    debug_assert!(f.k_roots.is_dominant(&beta));
    beta
}

/// A root of Δ(g, t_f) given by its simple-root coefficients.
pub fn root_from_simple_coeffs(c: &[Rat], f: &RealFormData) -> Result<Vect> {
    let g = &f.g_roots_t;
    if c.len() != g.rank() {
        return Err(Error::Dimension { expected: g.rank(), got: c.len() });
    }
    let v = Vect::lincomb(c, &g.simple_roots);
    if !g.is_root(&v) {
        return Err(Error::BadDirection(crate::vect::fmt_rats(c)));
    }
    Ok(v)
}

/// Screens a lowest K-type against the Dirac inequality along `lkt + nβ`:
/// every member of the pencil occurs in the module, so a member with spin
/// norm below ‖Λ‖² rules out unitarity.
pub fn pencil_screen(lkt: &KType, l: &InfChar, f: &RealFormData, direction: Option<&Vect>, n_max: i64) -> Result<PencilReport> {
    if n_max <= 0 {
        return Err(Error::BadNMax);
    }
    let beta = direction.cloned().unwrap_or_else(|| pencil_direction(f));
    if beta.dim() != f.g_roots_t.dim || !f.g_roots_t.is_root(&beta) {
        return Err(Error::BadDirection(beta.to_string()));
    }
    let step: Vec<i64> = f
        .k_coeffs(&beta)
        .iter()
        .map(|x| x.to_i64())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::BadDirection(format!("{beta} (not on the K-type lattice)")))?;
    let target = l.norm_sq();
    let patience = f.s();
    let (mut best, mut argmin): (Option<Rat>, i64) = (None, 0);
    let (mut prev, mut streak, mut evaluated, mut last_n) = (None::<Rat>, 0usize, 0usize, 0i64);
    for n in 0..=n_max {
        last_n = n;
        let mu: Vec<i64> = lkt.coeffs.iter().zip(&step).map(|(a, b)| a + n * b).collect();
        let Ok(k) = crate::realforms::make_ktype(&mu, f) else { continue };
        let v = spin_norm_sq(&k, f).norm_sq;
        evaluated += 1;
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v.clone());
            argmin = n;
        }
        streak = match &prev {
            Some(p) if v >= *p => streak + 1,
            _ => 0,
        };
        prev = Some(v);
        if streak >= patience || best.as_ref().is_some_and(|b| *b < target) {
            break;
        }
    }
    let min = best.ok_or_else(|| Error::BadDirection(format!("{beta}: no pencil member of {} is a K-type", fmt_ints(&lkt.coeffs))))?;
    let verdict = if min < target { Verdict::RuledOut } else { Verdict::Inconclusive };
    Ok(PencilReport { verdict, min_spin_sq: min, argmin_n: argmin, evaluated, last_n })
}
