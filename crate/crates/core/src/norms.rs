use std::sync::OnceLock;

use num_integer::Integer;

use crate::linalg;
use crate::rat::Rat;
use crate::realforms::{embed_tf_weight, get_form, Group, KType, RealFormData};
use crate::vect::Vect;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinResult {
    pub norm_sq: Rat,
    pub argmin_js: Vec<usize>,
    /// `{μ − ρ_n^(j)}` for each `j` in `argmin_js`.
    pub prv_weights: Vec<Vect>,
    /// The same weights in ϖ-coefficients.
    pub prv_coeffs: Vec<Vec<i64>>,
    /// `ℓ(w^(j)) mod 2` for each `j` in `argmin_js`.
    pub parities: Vec<u8>,
}

/// Integer data precomputed once per form for the hot paths.
#[derive(Debug)]
pub struct NormCtx {
    pub group: Group,
    pub k_rank: usize,
    k_cartan: Vec<Vec<i64>>,
    /// `⟨ϖ_i, ϖ_j⟩ = gram_num[i][j] / gram_den`
    gram_num: Vec<Vec<i64>>,
    gram_den: i64,
    rho_n: Vec<(Vec<i64>, u8)>,
    faces: Vec<Face>,
    two_rho_check: Vect,
    zonotope: Zonotope,
}

/// A face of the h-level dominant chamber with the inverse Gram matrix of its walls.
#[derive(Debug)]
struct Face {
    idx: Vec<usize>,
    inv: Vec<Vec<Rat>>,
}

/// The centred zonotope `Σ c_α α, |c_α| ≤ m_α` in ϖ-coefficient coordinates.
#[derive(Debug, Clone)]
pub struct Zonotope {
    pub generators: Vec<(Vec<i64>, i64)>,
    /// Facet inequalities `|⟨y, x⟩| ≤ h`.
    pub facets: Vec<(Vec<i64>, i64)>,
    /// Per-coordinate bound `|x_i| ≤ box_[i]`.
    pub box_: Vec<i64>,
}

fn to_int(r: &Rat, what: &str) -> i64 {
    r.to_i64().unwrap_or_else(|| panic!("{what} is not integral: {r}"))
}

fn lcm_den(xs: impl IntoIterator<Item = Rat>) -> i64 {
    xs.into_iter().fold(1i64, |acc, x| acc.lcm(&x.denom_i64().expect("small denominator")))
}

impl NormCtx {
    pub fn new(f: &RealFormData) -> NormCtx {
        let k = &f.k_roots;
        let n = k.rank();
        let fw = &k.fundamental_weights;
        let gram: Vec<Vec<Rat>> = fw.iter().map(|x| fw.iter().map(|y| x.dot(y)).collect()).collect();
        let gram_den = lcm_den(gram.iter().flatten().cloned());
        let gram_num =
            gram.iter().map(|row| row.iter().map(|x| to_int(&(x * &Rat::int(gram_den)), "scaled Gram entry")).collect()).collect();
        let rho_n = f
            .rho_n_list
            .iter()
            .map(|(v, p)| (f.k_coeffs(v).iter().map(|c| to_int(c, "ρ_n^(j) coefficient")).collect(), *p))
            .collect();

        let h = &f.g_roots_h;
        let r = h.rank();
        let sg: Vec<Vec<Rat>> =
            h.simple_roots.iter().map(|x| h.simple_roots.iter().map(|y| x.dot(y)).collect()).collect();
        let mut subsets: Vec<u32> = (0..(1u32 << r)).collect();
        subsets.sort_by_key(|s| (s.count_ones(), *s));
        let faces = subsets
            .into_iter()
            .map(|s| {
                let idx: Vec<usize> = (0..r).filter(|i| s >> i & 1 == 1).collect();
                let g: Vec<Vec<Rat>> = idx.iter().map(|&i| idx.iter().map(|&j| sg[i][j].clone()).collect()).collect();
                let inv = linalg::inverse(&g).expect("simple roots are independent");
                Face { idx, inv }
            })
            .collect();
        let two_rho_check = h.positive_coroots.iter().fold(Vect::zero(h.dim), |a, c| &a + c);

        NormCtx {
            group: f.group,
            k_rank: n,
            k_cartan: k.cartan.clone(),
            gram_num,
            gram_den,
            rho_n,
            faces,
            two_rho_check,
            zonotope: Zonotope::new(f),
        }
    }

    /// Moves integer ϖ-coefficients into the dominant chamber of `W(k)`.
    pub fn k_dominant(&self, c: &mut [i64]) {
        while let Some(i) = c.iter().position(|&x| x < 0) {
            let ci = c[i];
            for (j, cj) in c.iter_mut().enumerate() {
                *cj -= ci * self.k_cartan[i][j];
            }
        }
    }

    /// `gram_den · ‖Σ (c_i + 1) ϖ_i‖²`, i.e. the scaled norm of `c + ρ_c`.
    fn scaled_norm_plus_rho_c(&self, c: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..c.len() {
            let ci = c[i] + 1;
            for j in 0..c.len() {
                s += ci * (c[j] + 1) * self.gram_num[i][j];
            }
        }
        s
    }

    pub fn norm_plus_rho_c(&self, c: &[i64]) -> Rat {
        Rat::new(self.scaled_norm_plus_rho_c(c), self.gram_den)
    }

    /// Spin norm from integer ϖ-coefficients, without building vectors.
    pub fn spin_coeffs(&self, mu: &[i64]) -> (Rat, Vec<(usize, Vec<i64>, u8)>) {
        let mut best = i64::MAX;
        let mut arg = Vec::new();
        let mut d = vec![0i64; mu.len()];
        for (j, (rn, p)) in self.rho_n.iter().enumerate() {
            for t in 0..mu.len() {
                d[t] = mu[t] - rn[t];
            }
            self.k_dominant(&mut d);
            let v = self.scaled_norm_plus_rho_c(&d);
            if v < best {
                best = v;
                arg.clear();
            }
            if v == best {
                arg.push((j, d.clone(), *p));
            }
        }
        (Rat::new(best, self.gram_den), arg)
    }

    /// Scaled spin norm only (the census fast path).
    pub fn spin_scaled(&self, mu: &[i64]) -> i64 {
        let mut best = i64::MAX;
        let mut d = vec![0i64; mu.len()];
        for (rn, _) in &self.rho_n {
            for t in 0..mu.len() {
                d[t] = mu[t] - rn[t];
            }
            self.k_dominant(&mut d);
            best = best.min(self.scaled_norm_plus_rho_c(&d));
        }
        best
    }

    pub fn gram_den(&self) -> i64 {
        self.gram_den
    }

    pub fn rho_n_coeffs(&self) -> &[(Vec<i64>, u8)] {
        &self.rho_n
    }

    pub fn zonotope(&self) -> &Zonotope {
        &self.zonotope
    }
}

static CTX: [OnceLock<NormCtx>; 5] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// Cached context for the canonical data of `f`'s group.
pub fn norm_ctx(f: &RealFormData) -> &'static NormCtx {
    let i = Group::ALL.iter().position(|&g| g == f.group).expect("group listed");
    CTX[i].get_or_init(|| NormCtx::new(get_form(f.group)))
}

pub fn rho_n_list(f: &RealFormData) -> &[(Vect, u8)] {
    &f.rho_n_list
}

pub fn spin_norm_sq(mu: &KType, f: &RealFormData) -> SpinResult {
    spin_norm_sq_coeffs(&mu.coeffs, f)
}

pub fn spin_norm_sq_coeffs(mu: &[i64], f: &RealFormData) -> SpinResult {
    let ctx = norm_ctx(f);
    let (norm_sq, arg) = ctx.spin_coeffs(mu);
    let mut out = SpinResult { norm_sq, argmin_js: vec![], prv_weights: vec![], prv_coeffs: vec![], parities: vec![] };
    for (j, d, p) in arg {
        out.argmin_js.push(j);
        out.prv_weights.push(f.ktype_vect(&d));
        out.prv_coeffs.push(d);
        out.parities.push(p);
    }
    out
}

/// Spin norm straight from the definition, with rational vectors throughout.
pub fn spin_norm_sq_vect(mu: &Vect, f: &RealFormData) -> Rat {
    f.rho_n_list
        .iter()
        .map(|(rn, _)| (&f.k_roots.dominant(&(mu - rn)) + &f.rho_c).norm_sq())
        .min()
        .expect("s ≥ 1")
}

/// `(‖λ_a(μ)‖², λ_a(μ))` with `λ_a` in h_f-level coordinates.
pub fn lambda_norm_sq(mu: &KType, f: &RealFormData) -> (Rat, Vect) {
    let lam = lambda_a(&mu.vect(), f);
    (lam.norm_sq(), lam)
}

/// Projection of `{μ + 2ρ_c} − ρ` onto the dominant chamber of Δ⁺(g, h_f).
pub fn lambda_a(mu: &Vect, f: &RealFormData) -> Vect {
    let h = &f.g_roots_h;
    let two_rho_c = f.rho_c.scale(&Rat::int(2));
    let v = embed_tf_weight(&(mu + &two_rho_c), f);
    let u = &h.dominant(&v) - &h.rho;
    project(&u, f, norm_ctx(f))
}

fn project(u: &Vect, f: &RealFormData, ctx: &NormCtx) -> Vect {
    let h = &f.g_roots_h;
    let q: Vec<Rat> = h.simple_roots.iter().map(|a| u.dot(a)).collect();
    if q.iter().all(|x| !x.is_negative()) {
        return u.clone();
    }
    for face in &ctx.faces {
        if face.idx.is_empty() {
            continue;
        }
        let rhs: Vec<Rat> = face.idx.iter().map(|&i| -&q[i]).collect();
        let c = linalg::mat_vec(&face.inv, &rhs);
        if c.iter().any(Rat::is_negative) {
            continue;
        }
        let mut p = u.clone();
        for (ci, &i) in c.iter().zip(&face.idx) {
            p = p.axpy(ci, &h.simple_roots[i]);
        }
        if h.is_dominant(&p) {
            return p;
        }
    }
    unreachable!("some face of the closed chamber certifies the projection")
}

pub fn lambda_norm_sq_coeffs(mu: &[i64], f: &RealFormData) -> Rat {
    lambda_a(&f.ktype_vect(mu), f).norm_sq()
}

/// `Σ_{α>0} ⟨λ_a(μ), α∨⟩` over Δ⁺(g, h_f).
pub fn atlas_height(mu: &KType, f: &RealFormData) -> Rat {
    height_of_lambda(&lambda_norm_sq(mu, f).1, f)
}

pub fn height_of_lambda(lam: &Vect, f: &RealFormData) -> Rat {
    lam.dot(&norm_ctx(f).two_rho_check)
}

impl Zonotope {
    pub fn new(f: &RealFormData) -> Zonotope {
        let generators: Vec<(Vec<i64>, i64)> = f
            .p_pos_roots
            .iter()
            .map(|(r, m)| (f.k_coeffs(r).iter().map(|c| to_int(c, "noncompact root coefficient")).collect(), *m as i64))
            .collect();
        let n = f.k_rank();
        let mut facets: Vec<(Vec<i64>, i64)> = Vec::new();
        let mut combo: Vec<usize> = (0..n - 1).collect();
        let g = generators.len();
        loop {
            let rows: Vec<&Vec<i64>> = combo.iter().map(|&i| &generators[i].0).collect();
            if let Some(y) = cofactor_normal(&rows, n) {
                if !facets.iter().any(|(z, _)| *z == y) {
                    let h = generators.iter().map(|(x, m)| m * dot_i(&y, x).abs()).sum();
                    facets.push((y, h));
                }
            }
            // next (n-1)-combination
            let mut k = n - 1;
            loop {
                if k == 0 {
                    facets.sort();
                    let box_ = (0..n).map(|i| generators.iter().map(|(x, m)| m * x[i].abs()).sum()).collect();
                    return Zonotope { generators, facets, box_ };
                }
                k -= 1;
                if combo[k] < g - (n - 1 - k) {
                    combo[k] += 1;
                    for t in k + 1..n - 1 {
                        combo[t] = combo[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|(y, h)| dot_i(y, x).abs() <= *h)
    }
}

fn dot_i(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Primitive normal (first nonzero entry positive) of the span of `n−1` vectors in ℤⁿ.
fn cofactor_normal(rows: &[&Vec<i64>], n: usize) -> Option<Vec<i64>> {
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let m: Vec<Vec<Rat>> = rows.iter().map(|r| (0..n).filter(|&t| t != i).map(|t| Rat::int(r[t])).collect()).collect();
        let d = to_int(&linalg::determinant(&m), "integer determinant");
        y.push(if i % 2 == 0 { d } else { -d });
    }
    let g = y.iter().fold(0i64, |a, &b| a.gcd(&b));
    if g == 0 {
        return None;
    }
    let sign = if y.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) { -g } else { g };
    Some(y.into_iter().map(|x| x / sign).collect())
}

/// u-small test through the zonotope's facet description.
pub fn is_u_small(mu: &KType, f: &RealFormData) -> bool {
    norm_ctx(f).zonotope.contains(&mu.coeffs)
}

pub fn is_u_small_coeffs(mu: &[i64], f: &RealFormData) -> bool {
    norm_ctx(f).zonotope.contains(mu)
}

/// u-small test as an exact LP feasibility problem (independent of the facet list).
pub fn is_u_small_lp(mu: &[i64], f: &RealFormData) -> bool {
    let z = &norm_ctx(f).zonotope;
    let n = mu.len();
    // x = c + m ∈ [0, 2m] and Σ x_α g_α = μ + Σ m_α g_α
    let a: Vec<Vec<Rat>> = (0..n).map(|i| z.generators.iter().map(|(g, _)| Rat::int(g[i])).collect()).collect();
    let b: Vec<Rat> = (0..n).map(|i| Rat::int(mu[i] + z.generators.iter().map(|(g, m)| m * g[i]).sum::<i64>())).collect();
    let ub: Vec<Rat> = z.generators.iter().map(|(_, m)| Rat::int(2 * m)).collect();
    lp_feasible(&a, &b, &ub)
}

/// Is `{x : A x = b, 0 ≤ x ≤ ub}` nonempty? Phase-one simplex with Bland's rule.
pub fn lp_feasible(a: &[Vec<Rat>], b: &[Rat], ub: &[Rat]) -> bool {
    let m = a.len();
    let nv = ub.len();
    // columns: x (nv), bound slacks (nv), artificials (m), rhs
    let cols = 2 * nv + m;
    let rows = m + nv;
    let mut t: Vec<Vec<Rat>> = vec![vec![Rat::ZERO; cols + 1]; rows];
    let mut basis = vec![0usize; rows];
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..nv {
            t[i][j] = if flip { -&a[i][j] } else { a[i][j].clone() };
        }
        t[i][2 * nv + i] = Rat::ONE;
        t[i][cols] = b[i].abs();
        basis[i] = 2 * nv + i;
    }
    for k in 0..nv {
        let r = m + k;
        t[r][k] = Rat::ONE;
        t[r][nv + k] = Rat::ONE;
        t[r][cols] = ub[k].clone();
        basis[r] = nv + k;
    }
    // objective row: minimize Σ artificials, expressed in nonbasic columns
    let mut obj = vec![Rat::ZERO; cols + 1];
    for row in t.iter().take(m) {
        for j in 0..=cols {
            if j < 2 * nv || j == cols {
                obj[j] -= &row[j];
            }
        }
    }
    loop {
        let Some(e) = (0..cols).find(|&j| obj[j].is_negative()) else {
            return obj[cols].is_zero();
        };
        let mut leave: Option<(usize, Rat)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[e].is_positive() {
                let ratio = &row[cols] / &row[e];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((l, _)) = leave else {
            // unbounded direction cannot occur for a bounded phase-one problem
            return obj[cols].is_zero();
        };
        let piv = t[l][e].clone();
        for x in t[l].iter_mut() {
            *x = &*x / &piv;
        }
        let prow = t[l].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != l && !row[e].is_zero() {
                let fct = row[e].clone();
                for j in 0..=cols {
                    if !prow[j].is_zero() {
                        row[j] -= &fct * &prow[j];
                    }
                }
            }
        }
        if !obj[e].is_zero() {
            let fct = obj[e].clone();
            for j in 0..=cols {
                if !prow[j].is_zero() {
                    obj[j] -= &fct * &prow[j];
                }
            }
        }
        basis[l] = e;
    }
}

/// All valid u-small K-types of the form, sorted.
pub fn usmall_ktypes(f: &RealFormData) -> Vec<Vec<i64>> {
    let z = &norm_ctx(f).zonotope;
    let mut out = Vec::new();
    let mut c = vec![0i64; z.box_.len()];
    loop {
        if f.parity_of(&c) == 0 && z.contains(&c) {
            out.push(c.clone());
        }
        let mut i = c.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < z.box_[i] {
                c[i] += 1;
                break;
            }
            c[i] = 0;
        }
    }
}
