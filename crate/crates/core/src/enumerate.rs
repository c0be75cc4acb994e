use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use rayon::prelude::*;

use crate::norms::{atlas_height, norm_ctx, spin_norm_sq_coeffs};
use crate::rat::Rat;
use crate::realforms::{embed_tf_weight, make_infchar, InfChar, KType, RealFormData};
use crate::vect::Vect;

/// Right-hand side of the step-(a) norm bound, `(4‖ρ‖²/‖α‖² + 1)·‖ρ‖²`.
///
/// `α` is taken short (the largest value of the ratio), and the bound is used
/// inclusively by `candidate_infchars`; that reading reproduces the published counts.
pub fn norm_bound(f: &RealFormData) -> Rat {
    let h = &f.g_roots_h;
    let rho2 = h.rho.norm_sq();
    let short = h.positive_roots.iter().map(Vect::norm_sq).min().expect("nonempty root system");
    (&(&Rat::int(4) * &rho2) / &short + Rat::ONE) * rho2
}

/// The bound with the long-root reading (the smallest value of the ratio).
pub fn norm_bound_long(f: &RealFormData) -> Rat {
    let h = &f.g_roots_h;
    let rho2 = h.rho.norm_sq();
    let long = h.positive_roots.iter().map(Vect::norm_sq).max().expect("nonempty root system");
    (&(&Rat::int(4) * &rho2) / &long + Rat::ONE) * rho2
}

/// Integer maps from ϖ-coefficients of `δ` to scaled ξ-coefficients of `δ + ρ_c`.
#[derive(Debug, Clone)]
pub struct LatticeMap {
    /// `xi(δ + ρ_c) = mat · (c + 1) / scale`
    pub mat: Vec<Vec<i64>>,
    pub scale: i64,
    pub h_cartan: Vec<Vec<i64>>,
    gram_num: Vec<Vec<i64>>,
    gram_den: i64,
}

impl LatticeMap {
    pub fn new(f: &RealFormData) -> LatticeMap {
        let h = &f.g_roots_h;
        let raw: Vec<Vec<Rat>> = h
            .coroots
            .iter()
            .map(|cv| f.varpi_basis.iter().map(|w| embed_tf_weight(w, f).dot(cv)).collect())
            .collect();
        let scale = raw.iter().flatten().fold(1i64, |a, x| a.lcm(&x.denom_i64().expect("small denominator")));
        let mat = raw
            .iter()
            .map(|row| row.iter().map(|x| (x * &Rat::int(scale)).to_i64().expect("integral after scaling")).collect())
            .collect();
        let fw = &f.varpi_basis;
        let gram: Vec<Vec<Rat>> = fw.iter().map(|x| fw.iter().map(|y| x.dot(y)).collect()).collect();
        let gram_den = gram.iter().flatten().fold(1i64, |a, x| a.lcm(&x.denom_i64().expect("small denominator")));
        let gram_num: Vec<Vec<i64>> =
            gram.iter().map(|r| r.iter().map(|x| (x * &Rat::int(gram_den)).to_i64().expect("integral")).collect()).collect();
        assert!(gram_num.iter().flatten().all(|&x| x >= 0), "fundamental weights pair nonnegatively");
        LatticeMap { mat, scale, h_cartan: h.cartan.clone(), gram_num, gram_den }
    }

    /// Scaled dominant ξ-coefficients of `{δ + ρ_c}`.
    pub fn dominant_key(&self, c: &[i64]) -> Key {
        let mut x = [0i64; 6];
        let r = self.mat.len();
        for (i, row) in self.mat.iter().enumerate() {
            x[i] = row.iter().zip(c).map(|(m, ci)| m * (ci + 1)).sum();
        }
        while let Some(i) = x[..r].iter().position(|&v| v < 0) {
            let xi = x[i];
            for j in 0..r {
                x[j] -= xi * self.h_cartan[i][j];
            }
        }
        x
    }

    /// `gram_den · ‖δ + ρ_c‖²`
    pub fn scaled_norm(&self, c: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..c.len() {
            for j in 0..c.len() {
                s += (c[i] + 1) * (c[j] + 1) * self.gram_num[i][j];
            }
        }
        s
    }

    pub fn key_to_coeffs(&self, key: &Key) -> Vec<Rat> {
        key[..self.mat.len()].iter().map(|&x| Rat::new(x, self.scale)).collect()
    }
}

pub type Key = [i64; 6];

/// Visits every valid K-type `δ` with `gram_den·‖δ+ρ_c‖² ≤ limit`, with `c_0` fixed when given.
///
/// The Gram matrix of the ϖ's is entrywise nonnegative, so the norm is monotone in
/// every coordinate and each loop can stop at the first value past the bound.
fn visit(map: &LatticeMap, f: &RealFormData, limit: i64, parity: i64, first: Option<i64>, mut visit: impl FnMut(&[i64])) {
    let n = f.k_rank();
    let mut c = vec![0i64; n];
    let start = match first {
        Some(a) => {
            c[0] = a;
            1
        }
        None => 0,
    };
    if map.scaled_norm(&c) <= limit {
        descend(map, f, limit, parity, &mut c, start, &mut visit);
    }
}

fn descend(
    map: &LatticeMap,
    f: &RealFormData,
    limit: i64,
    parity: i64,
    c: &mut Vec<i64>,
    i: usize,
    visit: &mut impl FnMut(&[i64]),
) {
    if i == c.len() {
        if f.parity_of(c) == parity {
            visit(c);
        }
        return;
    }
    loop {
        descend(map, f, limit, parity, c, i + 1, visit);
        c[i] += 1;
        if map.scaled_norm(c) > limit {
            break;
        }
    }
    c[i] = 0;
}

/// Valid K-types `δ` with `‖δ + ρ_c‖² < bound_sq`, in lexicographic order.
pub fn ktypes_within(bound_sq: &Rat, f: &RealFormData) -> Vec<KType> {
    let map = LatticeMap::new(f);
    let scaled = bound_sq * &Rat::int(map.gram_den);
    // strict: largest integer below the scaled bound
    let limit = if scaled.is_integer() { scaled.to_i64().expect("bound fits") - 1 } else { scaled.floor().try_into().expect("bound fits") };
    let mut out = Vec::new();
    visit(&map, f, limit, 0, None, |c| out.push(KType { group: f.group, coeffs: c.to_vec() }));
    out.sort();
    out
}

#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub group: crate::realforms::Group,
    pub bound: Rat,
    pub n_distinct: usize,
    pub n_ktype_sources: usize,
    pub n_not_strongly_regular: usize,
    /// K-types `δ` whose `{δ + ρ_c}` is not strongly regular.
    pub n_ktype_sources_not_strongly_regular: usize,
    /// Each distinct Λ (scaled ξ-coefficients) with the smallest contributing `δ`.
    pub witnesses: HashMap<Key, Vec<i64>>,
    pub scale: i64,
}

impl CandidateSet {
    pub fn infchar(&self, key: &Key, f: &RealFormData) -> InfChar {
        let r = f.h_rank();
        let c: Vec<Rat> = key[..r].iter().map(|&x| Rat::new(x, self.scale)).collect();
        make_infchar(&c, f).expect("candidates are dominant and fold-symmetric")
    }

    /// Sorted keys, for deterministic output.
    pub fn sorted_keys(&self) -> Vec<Key> {
        let mut k: Vec<Key> = self.witnesses.keys().copied().collect();
        k.sort();
        k
    }
}

/// Parity of the highest weights `{μ − ρ_n^(j)}` of K̃-types in `μ ⊗ Spin`.
///
/// These are the weights `δ` that the candidate enumeration pairs with `ρ_c`; they differ from
/// K-types by `ρ_n`, which changes the parity class only for FI.
pub fn spin_lattice_parity(f: &RealFormData) -> i64 {
    let rn: Vec<i64> = f.k_coeffs(&f.rho_n).iter().map(|c| c.to_i64().expect("integral ρ_n")).collect();
    f.parity_of(&rn)
}

/// All dominant `{δ + ρ_c}` with `‖δ + ρ_c‖²` within `norm_bound`,
/// `δ` running over the K̃-type lattice of `spin_lattice_parity`.
pub fn candidate_infchars(f: &RealFormData, workers: usize) -> CandidateSet {
    candidate_infchars_with_bound(f, &norm_bound(f), workers)
}

pub fn candidate_infchars_with_bound(f: &RealFormData, bound: &Rat, workers: usize) -> CandidateSet {
    let map = LatticeMap::new(f);
    let scaled = bound * &Rat::int(map.gram_den);
    let limit: i64 = scaled.floor().try_into().expect("bound fits");
    let r = f.h_rank();
    let parity = spin_lattice_parity(f);
    let nsr = |k: &Key| k[..r].iter().any(|&x| x < map.scale);

    // slices along the first coordinate
    let mut firsts = Vec::new();
    let mut a = 0;
    loop {
        let mut c = vec![0i64; f.k_rank()];
        c[0] = a;
        if map.scaled_norm(&c) > limit {
            break;
        }
        firsts.push(a);
        a += 1;
    }
    let work = |a: i64| {
        let mut local: HashMap<Key, Vec<i64>> = HashMap::new();
        let mut n_src = 0usize;
        let mut n_src_nsr = 0usize;
        visit(&map, f, limit, parity, Some(a), |c| {
            n_src += 1;
            let k = map.dominant_key(c);
            if nsr(&k) {
                n_src_nsr += 1;
            }
            local
                .entry(k)
                .and_modify(|w| {
                    if c < &w[..] {
                        *w = c.to_vec();
                    }
                })
                .or_insert_with(|| c.to_vec());
        });
        (local, n_src, n_src_nsr)
    };
    let parts: Vec<(HashMap<Key, Vec<i64>>, usize, usize)> = if workers <= 1 {
        firsts.into_iter().map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
        pool.install(|| firsts.into_par_iter().map(work).collect())
    };
    let mut witnesses: HashMap<Key, Vec<i64>> = HashMap::new();
    let (mut n_src, mut n_src_nsr) = (0, 0);
    for (local, a, b) in parts {
        n_src += a;
        n_src_nsr += b;
        for (k, w) in local {
            witnesses
                .entry(k)
                .and_modify(|v| {
                    if w < *v {
                        *v = w.clone();
                    }
                })
                .or_insert(w);
        }
    }
    let n_nsr = witnesses.keys().filter(|k| nsr(k)).count();
    CandidateSet {
        group: f.group,
        bound: bound.clone(),
        n_distinct: witnesses.len(),
        n_ktype_sources: n_src,
        n_not_strongly_regular: n_nsr,
        n_ktype_sources_not_strongly_regular: n_src_nsr,
        witnesses,
        scale: map.scale,
    }
}

/// `⟨Λ − ρ, α∨⟩ ≥ 0` for every positive root of Δ(g, h_f).
pub fn is_strongly_regular(l: &InfChar, f: &RealFormData) -> bool {
    let h = &f.g_roots_h;
    let d = &l.vect - &h.rho;
    h.positive_coroots.iter().all(|c| !d.dot(c).is_negative())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanK {
    pub ktypes: Vec<KType>,
    /// Whether some `W`-conjugate of Λ gave an integral `γ` on the K-type lattice.
    pub on_lattice: bool,
}

/// The K-types that can carry Dirac cohomology at infinitesimal character `l`.
pub fn can_k(l: &InfChar, f: &RealFormData) -> CanK {
    let ctx = norm_ctx(f);
    let target = l.norm_sq();
    let orbit = f.g_roots_t.orbit(&l.t_vect, 5000).expect("orbit of a W(F4) or W(G2) element");
    let mut gammas: BTreeSet<Vec<i64>> = BTreeSet::new();
    for v in &orbit {
        let g = f.k_coeffs(&(v - &f.rho_c));
        if g.iter().all(|x| x.is_integer() && !x.is_negative()) {
            gammas.insert(g.iter().map(|x| x.to_i64().expect("small")).collect());
        }
    }
    let on_lattice = !gammas.is_empty();
    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    for g in &gammas {
        let gv = f.ktype_vect(g);
        let korbit = f.k_roots.orbit(&gv, 5000).expect("W(k) orbit");
        for w in &korbit {
            let wc = f.k_coeffs(w);
            for (rn, _) in ctx.rho_n_coeffs() {
                let mu: Vec<i64> = wc.iter().zip(rn).map(|(a, b)| a.to_i64().expect("integral") + b).collect();
                if mu.iter().any(|&x| x < 0) || f.parity_of(&mu) != 0 || found.contains(&mu) {
                    continue;
                }
                if spin_norm_sq_coeffs(&mu, f).norm_sq == target {
                    found.insert(mu);
                }
            }
        }
    }
    CanK { ktypes: found.into_iter().map(|c| KType { group: f.group, coeffs: c }).collect(), on_lattice }
}

/// Membership in CanK without building the set: valid, spin norm ‖Λ‖², and some
/// minimizing `j` has `{μ − ρ_n^(j)} + ρ_c` conjugate to Λ.
pub fn in_can_k(mu: &[i64], l: &InfChar, f: &RealFormData) -> bool {
    if mu.len() != f.k_rank() || mu.iter().any(|&x| x < 0) || f.parity_of(mu) != 0 {
        return false;
    }
    let s = spin_norm_sq_coeffs(mu, f);
    if s.norm_sq != l.norm_sq() {
        return false;
    }
    s.prv_weights.iter().any(|w| {
        let v = embed_tf_weight(&(w + &f.rho_c), f);
        f.g_roots_h.dominant(&v) == l.vect
    })
}

/// The largest atlas height over CanK(Λ); zero when CanK is empty.
pub fn cank_height_bound(l: &InfChar, f: &RealFormData) -> Rat {
    can_k(l, f).ktypes.iter().map(|m| atlas_height(m, f)).max().unwrap_or(Rat::ZERO)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realforms::{get_form, Group};

    fn ic(g: Group, c: &[Rat]) -> InfChar {
        make_infchar(c, get_form(g)).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| Rat::int(x)).collect()
    }

    #[test]
    fn bounds() {
        assert_eq!(norm_bound_long(get_form(Group::FI)), Rat::int(3081));
        assert_eq!(norm_bound(get_form(Group::FI)), Rat::int(6123));
        assert_eq!(norm_bound(get_form(Group::EI)), Rat::int(12246));
        assert_eq!(norm_bound_long(get_form(Group::EIV)), Rat::int(12246));
        assert_eq!(norm_bound(get_form(Group::G2)), Rat::int(406));
    }

    #[test]
    fn ktypes_within_is_strict_and_complete() {
        let f = get_form(Group::G2);
        let rc = f.rho_c.norm_sq();
        assert!(ktypes_within(&rc, f).is_empty());
        let b = Rat::int(60);
        let got = ktypes_within(&b, f);
        let mut want = Vec::new();
        for a in 0..20 {
            for c in 0..20 {
                if (a + c) % 2 == 0 && (&f.ktype_vect(&[a, c]) + &f.rho_c).norm_sq() < b {
                    want.push(vec![a, c]);
                }
            }
        }
        assert_eq!(got.into_iter().map(|k| k.coeffs).collect::<Vec<_>>(), want);
        let fi = get_form(Group::FI);
        let b = Rat::int(40);
        let got = ktypes_within(&b, fi).len();
        let mut want = 0;
        for a in 0..12 {
            for bb in 0..12 {
                for c in 0..12 {
                    for d in 0..12 {
                        let k = [a, bb, c, d];
                        if fi.parity_of(&k) == 0 && (&fi.ktype_vect(&k) + &fi.rho_c).norm_sq() < b {
                            want += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(got, want);
    }

    #[test]
    fn g2_candidates_by_brute_force() {
        let f = get_form(Group::G2);
        let set = candidate_infchars(f, 1);
        let bound = norm_bound(f);
        let mut want = std::collections::HashSet::new();
        for a in 0..40 {
            for b in 0..40 {
                if (a + b) % 2 != 0 {
                    continue;
                }
                let v = &f.ktype_vect(&[a, b]) + &f.rho_c;
                if v.norm_sq() <= bound {
                    want.insert(f.g_roots_h.coeffs(&f.g_roots_h.dominant(&v)));
                }
            }
        }
        assert_eq!(set.n_distinct, want.len());
        for k in set.sorted_keys() {
            let l = set.infchar(&k, f);
            assert!(want.contains(&l.coeffs));
            let w = &set.witnesses[&k];
            assert!(f.g_roots_h.is_conjugate(&(&f.ktype_vect(w) + &f.rho_c), &l.vect).unwrap());
            assert_eq!(
                set.witnesses.keys().filter(|k| !is_strongly_regular(&set.infchar(k, f), f)).count(),
                set.n_not_strongly_regular
            );
        }
        let par = candidate_infchars(f, 3);
        assert_eq!(par.witnesses, set.witnesses);
    }

    #[test]
    fn strongly_regular_examples() {
        let f = get_form(Group::FI);
        let rho = ic(Group::FI, &ints(&[1, 1, 1, 1]));
        assert!(is_strongly_regular(&rho, f));
        let half = ic(Group::FI, &vec![Rat::new(1, 2); 4]);
        assert!(!is_strongly_regular(&half, f));
        let ei = get_form(Group::EI);
        assert!(!is_strongly_regular(&ic(Group::EI, &ints(&[1, 5, 5, 0, 5, 1])), ei));
    }

    #[test]
    fn cank_examples() {
        let g2 = get_form(Group::G2);
        let c = can_k(&ic(Group::G2, &ints(&[1, 1])), g2);
        assert!(c.ktypes.iter().any(|k| k.coeffs == vec![0, 0]));
        for k in &c.ktypes {
            assert!(in_can_k(&k.coeffs, &ic(Group::G2, &ints(&[1, 1])), g2));
        }
        let fi = get_form(Group::FI);
        // Λ recovered from [0,2,0,4] at its minimizing j
        let s = spin_norm_sq_coeffs(&[0, 2, 0, 4], fi);
        let l = crate::realforms::infchar_from_t(&(&s.prv_weights[0] + &fi.rho_c), fi);
        let c = can_k(&l, fi);
        let got: Vec<Vec<i64>> = c.ktypes.iter().map(|k| k.coeffs.clone()).collect();
        assert!(got.contains(&vec![0, 0, 3, 1]) && got.contains(&vec![0, 2, 0, 4]), "{got:?}");
        for k in &got {
            assert!(in_can_k(k, &l, fi));
        }
        assert!(cank_height_bound(&l, fi) >= atlas_height(&KType { group: Group::FI, coeffs: vec![0, 2, 0, 4] }, fi));
        // off-lattice Λ
        let odd = ic(Group::G2, &[Rat::new(1, 3), Rat::ONE]);
        let c = can_k(&odd, g2);
        assert!(c.ktypes.is_empty() && !c.on_lattice);
        assert_eq!(cank_height_bound(&odd, g2), Rat::ZERO);
    }
}
