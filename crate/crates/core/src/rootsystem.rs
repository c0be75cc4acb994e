use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rat::Rat;
use crate::vect::Vect;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemKind {
    G2,
    F4,
    E6,
    B4,
    C4,
    C3A1,
    A1A1,
}

impl SystemKind {
    pub const ALL: [SystemKind; 7] =
        [SystemKind::G2, SystemKind::F4, SystemKind::E6, SystemKind::B4, SystemKind::C4, SystemKind::C3A1, SystemKind::A1A1];

    pub fn positive_count(self) -> usize {
        match self {
            SystemKind::G2 => 6,
            SystemKind::F4 => 24,
            SystemKind::E6 => 36,
            SystemKind::B4 | SystemKind::C4 => 16,
            SystemKind::C3A1 => 10,
            SystemKind::A1A1 => 2,
        }
    }

    /// Classical order of the Weyl group.
    pub fn weyl_order(self) -> u64 {
        match self {
            SystemKind::G2 => 12,
            SystemKind::F4 => 1152,
            SystemKind::E6 => 51840,
            SystemKind::B4 | SystemKind::C4 => 384,
            SystemKind::C3A1 => 96,
            SystemKind::A1A1 => 4,
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SystemKind::G2 => "G2",
            SystemKind::F4 => "F4",
            SystemKind::E6 => "E6",
            SystemKind::B4 => "B4",
            SystemKind::C4 => "C4",
            SystemKind::C3A1 => "C3xA1",
            SystemKind::A1A1 => "A1xA1",
        };
        f.write_str(s)
    }
}

impl FromStr for SystemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase().replace(['×', '*', ' '], "X");
        Ok(match t.as_str() {
            "G2" => SystemKind::G2,
            "F4" => SystemKind::F4,
            "E6" => SystemKind::E6,
            "B4" => SystemKind::B4,
            "C4" => SystemKind::C4,
            "C3XA1" | "C3A1" => SystemKind::C3A1,
            "A1XA1" | "A1A1" => SystemKind::A1A1,
            _ => return Err(Error::UnknownSystem(s.to_string())),
        })
    }
}

/// A Weyl group element as a word in simple reflections (0-based indices).
///
/// The word `[i1, …, ik]` stands for `s_{i1} ⋯ s_{ik}`, so `apply` uses the
/// rightmost letter first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WeylWord {
    pub word: Vec<usize>,
}

impl WeylWord {
    pub fn identity() -> WeylWord {
        WeylWord { word: Vec::new() }
    }

    pub fn new(word: Vec<usize>) -> WeylWord {
        WeylWord { word }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn length_parity(&self) -> u8 {
        (self.word.len() % 2) as u8
    }

    pub fn apply(&self, v: &Vect, sys: &RootSystem) -> Vect {
        let mut x = v.clone();
        for &i in self.word.iter().rev() {
            x = sys.reflect(&x, i);
        }
        x
    }

    pub fn inverse(&self) -> WeylWord {
        WeylWord { word: self.word.iter().rev().copied().collect() }
    }

    /// Reduced length computed as the number of positive roots sent to negative roots.
    pub fn reduced_length(&self, sys: &RootSystem) -> usize {
        sys.positive_roots.iter().filter(|r| !sys.is_positive(&self.apply(r, sys))).count()
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, i) in self.word.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub kind: SystemKind,
    pub dim: usize,
    pub simple_roots: Vec<Vect>,
    pub coroots: Vec<Vect>,
    pub positive_roots: Vec<Vect>,
    pub positive_coroots: Vec<Vect>,
    pub rho: Vect,
    pub fundamental_weights: Vec<Vect>,
    /// `cartan[i][j] = ⟨α_i, α_j∨⟩`
    pub cartan: Vec<Vec<i64>>,
    roots: HashSet<Vect>,
    rho_w: Vect,
}

fn knapp_simple(kind: SystemKind) -> Option<Vec<Vect>> {
    let h = |n: i64| (n, 2);
    Some(match kind {
        SystemKind::G2 => vec![Vect::from_ints(&[1, -1, 0]), Vect::from_ints(&[-2, 1, 1])],
        SystemKind::F4 => vec![
            Vect::from_fracs(&[h(1), h(-1), h(-1), h(-1)]),
            Vect::from_ints(&[0, 0, 0, 1]),
            Vect::from_ints(&[0, 0, 1, -1]),
            Vect::from_ints(&[0, 1, -1, 0]),
        ],
        SystemKind::E6 => vec![
            Vect::from_fracs(&[h(1), h(-1), h(-1), h(-1), h(-1), h(-1), h(-1), h(1)]),
            Vect::from_ints(&[1, 1, 0, 0, 0, 0, 0, 0]),
            Vect::from_ints(&[-1, 1, 0, 0, 0, 0, 0, 0]),
            Vect::from_ints(&[0, -1, 1, 0, 0, 0, 0, 0]),
            Vect::from_ints(&[0, 0, -1, 1, 0, 0, 0, 0]),
            Vect::from_ints(&[0, 0, 0, -1, 1, 0, 0, 0]),
        ],
        _ => return None,
    })
}

/// Simple roots of the compact subsystems, as integer combinations of the ambient simple roots.
pub(crate) fn subsystem_combos(kind: SystemKind) -> Option<(SystemKind, Vec<Vec<i64>>)> {
    Some(match kind {
        SystemKind::B4 => (SystemKind::F4, vec![vec![2, 2, 1, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0], vec![0, 1, 0, 0]]),
        SystemKind::C3A1 => (SystemKind::F4, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![2, 4, 3, 2]]),
        SystemKind::C4 => (SystemKind::F4, vec![vec![0, 1, 1, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]]),
        SystemKind::A1A1 => (SystemKind::G2, vec![vec![1, 0], vec![3, 2]]),
        _ => return None,
    })
}

pub fn build_root_system(kind: SystemKind) -> Result<RootSystem> {
    if let Some(simple) = knapp_simple(kind) {
        return RootSystem::from_simple(kind, simple);
    }
    let (amb_kind, combos) = subsystem_combos(kind).ok_or_else(|| Error::UnknownSystem(kind.to_string()))?;
    let amb = build_root_system(amb_kind)?;
    let gammas: Vec<Vect> = combos
        .iter()
        .map(|c| Vect::lincomb(&c.iter().map(|&x| Rat::int(x)).collect::<Vec<_>>(), &amb.simple_roots))
        .collect();
    subsystem_generated(kind, &gammas, &amb)
}

/// The closed subsystem generated by reflections in `gammas`, which become its simple roots.
pub fn subsystem_generated(kind: SystemKind, gammas: &[Vect], amb: &RootSystem) -> Result<RootSystem> {
    for g in gammas {
        if !amb.is_root(g) {
            return Err(Error::NotARoot(g.to_string()));
        }
    }
    let sub = RootSystem::from_simple(kind, gammas.to_vec())?;
    for r in &sub.positive_roots {
        if !amb.is_root(r) {
            return Err(Error::NotARoot(r.to_string()));
        }
    }
    Ok(sub)
}

impl RootSystem {
    pub fn from_simple(kind: SystemKind, simple: Vec<Vect>) -> Result<RootSystem> {
        let n = simple.len();
        let dim = simple.first().map(Vect::dim).ok_or_else(|| Error::SelfCheck("no simple roots".into()))?;
        if simple.iter().any(|s| s.dim() != dim) {
            return Err(Error::SelfCheck("simple roots of different dimensions".into()));
        }
        let coroots: Vec<Vect> = simple.iter().map(|a| a.scale(&(Rat::int(2) / a.norm_sq()))).collect();
        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = simple[i].dot(&coroots[j]);
                cartan[i][j] = c.to_i64().ok_or_else(|| Error::SelfCheck(format!("non-integral Cartan entry {c}")))?;
                if i != j && cartan[i][j] > 0 {
                    return Err(Error::SelfCheck("simple roots have a positive off-diagonal Cartan entry".into()));
                }
            }
        }
        // ξ_i = Σ_k x_k α_k with Σ_k x_k ⟨α_k, α_j∨⟩ = δ_ij
        let ct: Vec<Vec<Rat>> = (0..n).map(|j| (0..n).map(|k| Rat::int(cartan[k][j])).collect()).collect();
        let mut fundamental_weights = Vec::with_capacity(n);
        for i in 0..n {
            let e: Vec<Rat> = (0..n).map(|j| if i == j { Rat::ONE } else { Rat::ZERO }).collect();
            let x = linalg::solve(&ct, &e).ok_or_else(|| Error::SelfCheck("singular Cartan matrix".into()))?;
            fundamental_weights.push(Vect::lincomb(&x, &simple));
        }
        let rho_w = fundamental_weights.iter().fold(Vect::zero(dim), |a, b| &a + b);

        let mut roots: HashSet<Vect> = simple.iter().cloned().collect();
        let mut queue: VecDeque<Vect> = simple.iter().cloned().collect();
        while let Some(r) = queue.pop_front() {
            for s in &simple {
                let q = r.reflect(s);
                if roots.insert(q.clone()) {
                    queue.push_back(q);
                }
                if roots.len() > 1000 {
                    return Err(Error::SelfCheck("root closure does not terminate".into()));
                }
            }
        }
        let mut positive_roots: Vec<Vect> = roots.iter().filter(|r| r.dot(&rho_w).is_positive()).cloned().collect();
        positive_roots.sort();
        if positive_roots.len() * 2 != roots.len() {
            return Err(Error::SelfCheck("roots do not split into positive and negative halves".into()));
        }
        // every positive root must be a nonnegative combination of the simple roots
        for r in &positive_roots {
            if fundamental_weights.iter().zip(&simple).any(|(w, a)| (r.dot(w) * Rat::int(2) / a.norm_sq()).is_negative()) {
                return Err(Error::SelfCheck(format!("{r} is not a nonnegative combination of the simple roots")));
            }
        }
        let positive_coroots = positive_roots.iter().map(|a| a.scale(&(Rat::int(2) / a.norm_sq()))).collect();
        let rho = positive_roots.iter().fold(Vect::zero(dim), |a, b| &a + b).scale(&Rat::new(1, 2));
        let sys = RootSystem { kind, dim, simple_roots: simple, coroots, positive_roots, positive_coroots, rho, fundamental_weights, cartan, roots, rho_w };
        sys.self_check()?;
        Ok(sys)
    }

    fn self_check(&self) -> Result<()> {
        let n = self.rank();
        for i in 0..n {
            for j in 0..n {
                let p = self.fundamental_weights[i].dot(&self.coroots[j]);
                if p != if i == j { Rat::ONE } else { Rat::ZERO } {
                    return Err(Error::SelfCheck(format!("⟨ξ_{i}, α_{j}∨⟩ = {p}")));
                }
            }
        }
        if self.rho != self.rho_w {
            return Err(Error::SelfCheck("ρ differs from the sum of fundamental weights".into()));
        }
        if self.positive_roots.len() != self.kind.positive_count() {
            return Err(Error::SelfCheck(format!(
                "{} has {} positive roots, expected {}",
                self.kind,
                self.positive_roots.len(),
                self.kind.positive_count()
            )));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn is_root(&self, v: &Vect) -> bool {
        self.roots.contains(v)
    }

    pub fn is_positive(&self, v: &Vect) -> bool {
        v.dot(&self.rho_w).is_positive()
    }

    pub fn all_roots(&self) -> Vec<Vect> {
        let mut v: Vec<Vect> = self.roots.iter().cloned().collect();
        v.sort();
        v
    }

    pub fn reflect(&self, v: &Vect, i: usize) -> Vect {
        let c = v.dot(&self.coroots[i]);
        v.axpy(&-c, &self.simple_roots[i])
    }

    /// `⟨v, α_i∨⟩` for each simple root: the fundamental-weight coefficients of `v`.
    pub fn coeffs(&self, v: &Vect) -> Vec<Rat> {
        self.coroots.iter().map(|c| v.dot(c)).collect()
    }

    pub fn from_coeffs(&self, c: &[Rat]) -> Vect {
        Vect::lincomb(c, &self.fundamental_weights)
    }

    pub fn is_dominant(&self, v: &Vect) -> bool {
        self.simple_roots.iter().all(|a| !v.dot(a).is_negative())
    }

    pub fn is_strictly_dominant(&self, v: &Vect) -> bool {
        self.simple_roots.iter().all(|a| v.dot(a).is_positive())
    }

    /// The dominant chamber representative `{v}` together with a word carrying `v` to it.
    pub fn make_dominant(&self, v: &Vect) -> (Vect, WeylWord) {
        let mut x = v.clone();
        let mut steps = Vec::new();
        loop {
            let Some(i) = self.simple_roots.iter().position(|a| x.dot(a).is_negative()) else {
                break;
            };
            x = self.reflect(&x, i);
            steps.push(i);
        }
        steps.reverse();
        (x, WeylWord { word: steps })
    }

    pub fn dominant(&self, v: &Vect) -> Vect {
        self.make_dominant(v).0
    }

    pub fn is_conjugate(&self, u: &Vect, v: &Vect) -> Result<bool> {
        for x in [u, v] {
            if x.dim() != self.dim {
                return Err(Error::Dimension { expected: self.dim, got: x.dim() });
            }
        }
        Ok(self.dominant(u) == self.dominant(v))
    }

    /// Full W-orbit of `v`; `None` if it exceeds `limit` elements.
    pub fn orbit(&self, v: &Vect, limit: usize) -> Option<Vec<Vect>> {
        let mut seen: HashSet<Vect> = HashSet::new();
        seen.insert(v.clone());
        let mut out = vec![v.clone()];
        let mut k = 0;
        while k < out.len() {
            let x = out[k].clone();
            k += 1;
            for i in 0..self.rank() {
                let y = self.reflect(&x, i);
                if seen.insert(y.clone()) {
                    if out.len() >= limit {
                        return None;
                    }
                    out.push(y);
                }
            }
        }
        Some(out)
    }

    /// |W| via orbit-stabilizer on the regular element ρ (enumerates the orbit).
    pub fn weyl_order_by_orbit(&self, limit: usize) -> Option<usize> {
        self.orbit(&self.rho, limit).map(|o| o.len())
    }

    /// Lexicographically smallest reduced word `w` with `w·ρ = v`, for `v` in the orbit of ρ.
    pub fn word_of_rho_image(&self, v: &Vect) -> WeylWord {
        let mut x = v.clone();
        let mut word = Vec::new();
        while let Some(i) = self.simple_roots.iter().position(|a| x.dot(a).is_negative()) {
            word.push(i);
            x = self.reflect(&x, i);
        }
        debug_assert_eq!(x, self.rho);
        WeylWord { word }
    }

    /// Nearest point of the closed dominant chamber under the Euclidean form.
    pub fn project_to_dominant_cone(&self, v: &Vect) -> Vect {
        self.project_with_certificate(v).0
    }

    /// Projection plus the face multipliers `c_i ≥ 0` with `p = v + Σ c_i α_i`.
    ///
    /// Exhausts the faces of the chamber: on the face where the walls in `S` are
    /// active, `⟨p, α_i⟩ = 0` for `i ∈ S` fixes the `c_i`, and the face is accepted
    /// when `p` is dominant and every `c_i ≥ 0` (the KKT conditions).
    pub fn project_with_certificate(&self, v: &Vect) -> (Vect, Vec<Rat>) {
        let n = self.rank();
        let mut subsets: Vec<u32> = (0..(1u32 << n)).collect();
        subsets.sort_by_key(|s| (s.count_ones(), *s));
        let vpair: Vec<Rat> = self.simple_roots.iter().map(|a| v.dot(a)).collect();
        for s in subsets {
            let idx: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
            let g: Vec<Vec<Rat>> =
                idx.iter().map(|&i| idx.iter().map(|&j| self.simple_roots[i].dot(&self.simple_roots[j])).collect()).collect();
            let b: Vec<Rat> = idx.iter().map(|&i| -&vpair[i]).collect();
            let Some(c) = linalg::solve(&g, &b) else { continue };
            if c.iter().any(Rat::is_negative) {
                continue;
            }
            let mut p = v.clone();
            for (ci, &i) in c.iter().zip(&idx) {
                p = p.axpy(ci, &self.simple_roots[i]);
            }
            if self.is_dominant(&p) {
                let mut full = vec![Rat::ZERO; n];
                for (ci, &i) in c.into_iter().zip(&idx) {
                    full[i] = ci;
                }
                return (p, full);
            }
        }
        unreachable!("the dominant cone is closed and convex, so some face certifies the projection")
    }
}

/// Minimal-length representatives of `W(sub)\W(amb)`, ordered by length then word.
///
/// Each `w` satisfies: `w·ρ_amb` is strictly `sub`-dominant, i.e. `w⁻¹` maps the
/// positive roots of `sub` to positive roots of `amb`.
pub fn min_length_coset_reps(sub: &RootSystem, amb: &RootSystem) -> Result<Vec<WeylWord>> {
    Ok(coset_reps_with_images(sub, amb)?.into_iter().map(|(w, _)| w).collect())
}

pub fn coset_reps_with_images(sub: &RootSystem, amb: &RootSystem) -> Result<Vec<(WeylWord, Vect)>> {
    if sub.dim != amb.dim || sub.positive_roots.iter().any(|r| !amb.is_root(r) || !amb.is_positive(r)) {
        return Err(Error::NotContained);
    }
    let orbit = amb.orbit(&amb.rho, 100_000).ok_or_else(|| Error::SelfCheck("Weyl orbit too large to enumerate".into()))?;
    let mut reps: Vec<(WeylWord, Vect)> =
        orbit.into_iter().filter(|v| sub.is_strictly_dominant(v)).map(|v| (amb.word_of_rho_image(&v), v)).collect();
    reps.sort_by(|a, b| (a.0.len(), &a.0.word).cmp(&(b.0.len(), &b.0.word)));
    Ok(reps)
}

/// The E6 diagram folding `β1↔β6, β3↔β5` and its restriction to the 4-dimensional `t_f*`.
#[derive(Debug, Clone)]
pub struct Folding {
    pub images: Vec<Vect>,
    restricted_simple: Vec<Vect>,
    simple_gram: Vec<Vec<Rat>>,
    image_gram: Vec<Vec<Rat>>,
}

impl Folding {
    pub fn e6_to_f4(e6: &RootSystem, f4: &RootSystem) -> Folding {
        let b = &e6.simple_roots;
        let half = Rat::new(1, 2);
        let images = vec![(&b[0] + &b[5]).scale(&half), (&b[2] + &b[4]).scale(&half), b[3].clone(), b[1].clone()];
        let gram = |xs: &[Vect]| -> Vec<Vec<Rat>> { xs.iter().map(|x| xs.iter().map(|y| x.dot(y)).collect()).collect() };
        Folding {
            simple_gram: gram(&f4.simple_roots),
            image_gram: gram(&images),
            images,
            restricted_simple: f4.simple_roots.clone(),
        }
    }

    pub fn involution(v: &Vect) -> Vect {
        // β1↔β6 and β3↔β5 are realized by the linear map fixing β2, β4; compute through coordinates
        // in the β basis
        let e6 = e6_system();
        let c = e6_simple_coords(e6, v);
        let perm = [5, 1, 4, 3, 2, 0];
        let d: Vec<Rat> = perm.iter().map(|&p| c[p].clone()).collect();
        Vect::lincomb(&d, &e6.simple_roots)
    }

    /// Image of a `t_f*` vector in the E6 space.
    pub fn embed(&self, v: &Vect) -> Vect {
        let b: Vec<Rat> = self.restricted_simple.iter().map(|a| v.dot(a)).collect();
        let c = linalg::solve(&self.simple_gram, &b).expect("simple roots are independent");
        Vect::lincomb(&c, &self.images)
    }

    /// Orthogonal projection onto the fixed subspace, pulled back to `t_f*` coordinates.
    pub fn restrict(&self, w: &Vect) -> Vect {
        let b: Vec<Rat> = self.images.iter().map(|x| w.dot(x)).collect();
        let c = linalg::solve(&self.image_gram, &b).expect("images are independent");
        Vect::lincomb(&c, &self.restricted_simple)
    }
}

fn e6_simple_coords(e6: &RootSystem, v: &Vect) -> Vec<Rat> {
    let g: Vec<Vec<Rat>> = e6.simple_roots.iter().map(|x| e6.simple_roots.iter().map(|y| x.dot(y)).collect()).collect();
    let b: Vec<Rat> = e6.simple_roots.iter().map(|x| v.dot(x)).collect();
    linalg::solve(&g, &b).expect("E6 simple roots are independent")
}

/// Restriction of an E6 weight along the diagram folding.
pub fn fold_restrict(beta_weight: &Vect, folding: &Folding) -> Result<Vect> {
    if beta_weight.dim() != 8 {
        return Err(Error::Dimension { expected: 8, got: beta_weight.dim() });
    }
    Ok(folding.restrict(beta_weight))
}

static E6: std::sync::OnceLock<RootSystem> = std::sync::OnceLock::new();
static F4: std::sync::OnceLock<RootSystem> = std::sync::OnceLock::new();
static G2: std::sync::OnceLock<RootSystem> = std::sync::OnceLock::new();

pub fn e6_system() -> &'static RootSystem {
    E6.get_or_init(|| build_root_system(SystemKind::E6).expect("E6 data"))
}

pub fn f4_system() -> &'static RootSystem {
    F4.get_or_init(|| build_root_system(SystemKind::F4).expect("F4 data"))
}

pub fn g2_system() -> &'static RootSystem {
    G2.get_or_init(|| build_root_system(SystemKind::G2).expect("G2 data"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_all_kinds() {
        for k in SystemKind::ALL {
            let s = build_root_system(k).unwrap();
            assert_eq!(s.positive_roots.len(), k.positive_count(), "{k}");
            let sum = s.positive_roots.iter().fold(Vect::zero(s.dim), |a, b| &a + b);
            assert_eq!(sum, s.rho.scale(&Rat::int(2)));
        }
    }

    #[test]
    fn rho_values() {
        assert_eq!(g2_system().rho, Vect::from_ints(&[-1, -2, 3]));
        assert_eq!(f4_system().rho, Vect::from_fracs(&[(11, 2), (5, 2), (3, 2), (1, 2)]));
        assert_eq!(e6_system().rho.norm_sq(), Rat::int(78));
        assert_eq!(f4_system().rho.norm_sq(), Rat::int(39));
        assert_eq!(g2_system().rho.norm_sq(), Rat::int(14));
        // ρ = 5α1 + 3α2 in G2
        let g = g2_system();
        assert_eq!(g.rho, Vect::lincomb(&[Rat::int(5), Rat::int(3)], &g.simple_roots));
    }

    #[test]
    fn weyl_orders_by_orbit() {
        for k in [SystemKind::G2, SystemKind::F4, SystemKind::B4, SystemKind::C4, SystemKind::C3A1, SystemKind::A1A1] {
            let s = build_root_system(k).unwrap();
            assert_eq!(s.weyl_order_by_orbit(2000).unwrap() as u64, k.weyl_order(), "{k}");
        }
    }

    #[test]
    fn unknown_kind() {
        assert!("E8".parse::<SystemKind>().is_err());
        assert_eq!("c3xa1".parse::<SystemKind>().unwrap(), SystemKind::C3A1);
    }

    #[test]
    fn subsystem_rejects_non_roots() {
        let f4 = f4_system();
        let bad = vec![Vect::from_ints(&[1, 1, 1, 1])];
        assert!(matches!(subsystem_generated(SystemKind::A1A1, &bad, f4), Err(Error::NotARoot(_))));
    }

    #[test]
    fn dominant_witness() {
        let g = g2_system();
        let v = Vect::from_ints(&[4, -7, 3]);
        let (d, w) = g.make_dominant(&v);
        assert!(g.is_dominant(&d));
        assert_eq!(w.apply(&v, g), d);
        assert_eq!(g.make_dominant(&d).1, WeylWord::identity());
        let (r, w0) = g.make_dominant(&g.rho);
        assert_eq!(r, g.rho);
        assert!(w0.is_empty());
    }

    #[test]
    fn conjugacy_examples() {
        let f = f4_system();
        assert!(f.is_conjugate(&f.rho, &-&f.rho).unwrap());
        let g = g2_system();
        assert!(!g.is_conjugate(&g.fundamental_weights[0], &g.fundamental_weights[1]).unwrap());
        assert_eq!(g.fundamental_weights[0].norm_sq(), Rat::int(2));
        assert_eq!(g.fundamental_weights[1].norm_sq(), Rat::int(6));
        assert!(g.is_conjugate(&g.rho, &Vect::from_ints(&[1, 2])).is_err());
    }

    #[test]
    fn coset_reps_trivial_and_fi() {
        let f4 = f4_system();
        let same = min_length_coset_reps(f4, f4).unwrap();
        assert_eq!(same, vec![WeylWord::identity()]);
        let k = build_root_system(SystemKind::C3A1).unwrap();
        let reps = min_length_coset_reps(&k, f4).unwrap();
        let lens: Vec<usize> = reps.iter().map(WeylWord::len).collect();
        assert_eq!(lens, vec![0, 1, 2, 3, 4, 4, 5, 5, 6, 6, 7, 7]);
        for w in &reps {
            assert_eq!(w.reduced_length(f4), w.len());
        }
        let c4 = build_root_system(SystemKind::C4).unwrap();
        assert_eq!(min_length_coset_reps(&c4, f4).unwrap().len(), 3);
        let g2 = g2_system();
        let a1a1 = build_root_system(SystemKind::A1A1).unwrap();
        assert_eq!(min_length_coset_reps(&a1a1, g2).unwrap().len(), 3);
    }

    #[test]
    fn projection_examples() {
        let g = g2_system();
        assert_eq!(g.project_to_dominant_cone(&Vect::from_ints(&[1, 0, -1])), Vect::zero(3));
        assert_eq!(g.project_to_dominant_cone(&g.rho), g.rho);
    }

    #[test]
    fn folding_tallies() {
        let e6 = e6_system();
        let f4 = f4_system();
        let fold = Folding::e6_to_f4(e6, f4);
        // isometric embedding
        for a in &f4.simple_roots {
            for b in &f4.simple_roots {
                assert_eq!(fold.embed(a).dot(&fold.embed(b)), a.dot(b));
            }
        }
        assert_eq!(fold_restrict(&e6.simple_roots[1], &fold).unwrap(), f4.simple_roots[3]);
        let mut fib: std::collections::HashMap<Vect, usize> = Default::default();
        for r in e6.all_roots() {
            *fib.entry(fold.restrict(&r)).or_default() += 1;
        }
        assert_eq!(fib.len(), 48);
        let long = fib.iter().filter(|(r, &m)| r.norm_sq() == Rat::int(2) && m == 1).count();
        let short = fib.iter().filter(|(r, &m)| r.norm_sq() == Rat::ONE && m == 2).count();
        assert_eq!((long, short), (24, 24));
        let sym = &e6.simple_roots[1] + &e6.simple_roots[3];
        assert_eq!(Folding::involution(&sym), sym);
        assert_eq!(fold.embed(&fold.restrict(&sym)), sym);
        assert_eq!(Folding::involution(&e6.simple_roots[0]), e6.simple_roots[5]);
        assert!(fold_restrict(&f4.rho, &fold).is_err());
    }
}
