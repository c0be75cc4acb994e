//! Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

use std::collections::BTreeSet;
use std::time::Instant;

use dirac_core::dirac::{dirac_cohomology, dirac_gap, has_dirac_cohomology, pencil_screen, Verdict};
use dirac_core::enumerate::candidate_infchars;
use dirac_core::norms::{lambda_norm_sq_coeffs, rho_n_list, spin_norm_sq_coeffs, usmall_ktypes};
use dirac_core::realforms::{get_form, make_infchar, make_ktype, Group, RealFormData};
use dirac_core::rootsystem::WeylWord;
use dirac_core::tables::{bundled_fixture, parse_branching_str, parse_tables, serialize_branching, verify_group};
use dirac_core::vect::parse_rats;
use dirac_core::{Rat, Vect};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = (bool, String);

fn kt(c: &[i64], f: &RealFormData) -> dirac_core::KType {
    make_ktype(c, f).expect("valid K-type")
}

fn ic(s: &str, f: &RealFormData) -> dirac_core::InfChar {
    make_infchar(&parse_rats(s).expect("rationals"), f).expect("infinitesimal character")
}

fn usmall_census() -> Outcome {
    let want = [(Group::G2, 16), (Group::FII, 27), (Group::EIV, 37), (Group::EI, 484), (Group::FI, 544)];
    let mut ok = true;
    let mut parts = vec![];
    for (g, n) in want {
        let got = usmall_ktypes(get_form(g)).len();
        ok &= got == n;
        parts.push(format!("{g}={got}/{n}"));
    }
    (ok, parts.join(" "))
}

fn candidate_counts() -> Outcome {
    let want = [(Group::FII, 311513, 38090), (Group::EIV, 1147419, 105003), (Group::FI, 369272, 95849)];
    let mut ok = true;
    let mut parts = vec![];
    for (g, n, nsr) in want {
        let t = Instant::now();
        let c = candidate_infchars(get_form(g), 1);
        ok &= c.n_distinct == n && c.n_not_strongly_regular == nsr;
        parts.push(format!(
            "{g} {}/{} (want {n}/{nsr}; δ-sources {}) {:.1}s",
            c.n_distinct,
            c.n_not_strongly_regular,
            c.n_ktype_sources,
            t.elapsed().as_secs_f64()
        ));
    }
    (ok, format!("counting distinct Λ: {}", parts.join(", ")))
}

fn counter_example() -> Outcome {
    let fi = get_form(Group::FI);
    let listed: Vec<Vec<i64>> = vec![
        vec![0, 0, 0, 7],
        vec![0, 0, 1, 6],
        vec![0, 2, 0, 5],
        vec![1, 2, 0, 4],
        vec![0, 3, 0, 3],
        vec![3, 0, 1, 3],
        vec![2, 1, 1, 2],
        vec![5, 0, 0, 2],
        vec![2, 0, 2, 1],
        vec![4, 1, 0, 1],
        vec![0, 0, 3, 0],
        vec![4, 0, 1, 0],
    ];
    let ours: Vec<Vec<i64>> =
        rho_n_list(fi).iter().map(|(v, _)| fi.k_coeffs(v).iter().map(|x| x.to_i64().expect("integral")).collect()).collect();
    let as_set = |v: &[Vec<i64>]| v.iter().cloned().collect::<BTreeSet<_>>();
    let set_ok = ours.len() == 12 && as_set(&ours) == as_set(&listed);
    let witness = |mu: &[i64], parity: u8| {
        let s = spin_norm_sq_coeffs(mu, fi);
        s.prv_coeffs.iter().zip(&s.parities).zip(&s.argmin_js).find(|((w, p), _)| **w == [0, 0, 0, 1] && **p == parity).map(|(_, j)| *j)
    };
    let even = witness(&[0, 2, 0, 4], 0);
    let odd = witness(&[0, 0, 3, 1], 1);
    let bt = bundled_fixture("FI_176", fi).expect("fixture");
    let out = dirac_cohomology(&bt, fi).expect("complete fixture");
    let ok = set_ok && even.is_some() && odd.is_some() && out.nonzero && out.index_zero;
    (
        ok,
        format!(
            "ρ_n^(j) set {} (order {}); [0,2,0,4]→[0,0,0,1] even at j={:?}; [0,0,3,1]→[0,0,0,1] odd at j={:?}; fixture nonzero={} index_zero={}",
            if set_ok { "matches" } else { "differs" },
            if ours == listed { "identical" } else { "differs" },
            even,
            odd,
            out.nonzero,
            out.index_zero
        ),
    )
}

fn ei_example() -> Outcome {
    let ei = get_form(Group::EI);
    let l = ic("1,5,5,0,5,1", ei);
    let survivors = [[11, 0, 13, 4], [13, 0, 11, 5], [10, 2, 12, 4], [12, 2, 10, 5]];
    let norm_ok = l.norm_sq() == Rat::int(634);
    let spins: Vec<Rat> = survivors.iter().map(|c| spin_norm_sq_coeffs(c, ei).norm_sq).collect();
    let spin_ok = spins.iter().all(|s| *s == Rat::int(634));
    let pencils_ok = survivors.iter().all(|c| matches!(pencil_screen(&kt(c, ei), &l, ei, None, 200), Ok(r) if r.verdict == Verdict::Inconclusive));
    let mut detail = format!("‖Λ‖²={}; spin² {:?}; survivors inconclusive={pencils_ok}", l.norm_sq(), spins.iter().map(ToString::to_string).collect::<Vec<_>>());
    let mut ok = norm_ok && spin_ok && pencils_ok;
    match std::env::var("DIRAC_EI_LKTS") {
        Ok(path) => {
            let text = std::fs::read_to_string(&path).unwrap_or_default();
            let lkts: Vec<_> = text
                .lines()
                .map(|s| s.split('#').next().unwrap_or("").trim())
                .filter(|s| !s.is_empty())
                .filter_map(|s| parse_rats(s).ok()?.iter().map(Rat::to_i64).collect::<Option<Vec<i64>>>())
                .collect();
            let ruled = lkts
                .iter()
                .filter(|c| matches!(make_ktype(c, ei).map(|k| pencil_screen(&k, &l, ei, None, 200)), Ok(Ok(r)) if r.verdict == Verdict::RuledOut))
                .count();
            ok &= lkts.len() == 1258 && ruled == 1254;
            detail.push_str(&format!("; pencil screen {ruled} of {} ruled out (want 1254 of 1258)", lkts.len()));
        }
        Err(_) => detail.push_str("; 1254-of-1258 count not checked (optional LKT file not supplied)"),
    }
    (ok, detail)
}

fn spin_mult_big() -> Outcome {
    let fi = get_form(Group::FI);
    let l = ic("1,0,1/2,1/2", fi);
    let five = [[0, 2, 0, 6], [1, 2, 0, 5], [3, 0, 1, 4], [0, 3, 0, 4], [2, 1, 1, 3]];
    let spins: Vec<Rat> = five.iter().map(|c| spin_norm_sq_coeffs(c, fi).norm_sq).collect();
    let gaps_ok = five.iter().all(|c| dirac_gap(&kt(c, fi), &l, fi).is_positive());
    let bt = bundled_fixture("FI_spin_mult_big", fi).expect("fixture");
    let has = has_dirac_cohomology(&bt, fi);
    let ok = l.norm_sq() == Rat::new(15, 2) && spins.iter().all(|s| *s == Rat::int(9)) && gaps_ok && has == Ok(false);
    (ok, format!("‖Λ‖²={}; spin² {:?}; has_dirac_cohomology={has:?}", l.norm_sq(), spins.iter().map(ToString::to_string).collect::<Vec<_>>()))
}

fn spin_equals_lambda(f: &RealFormData, max: i64) -> BTreeSet<Vec<i64>> {
    let n = f.k_rank();
    let mut out = BTreeSet::new();
    let mut c = vec![0i64; n];
    'outer: loop {
        if f.parity_of(&c) == 0 && spin_norm_sq_coeffs(&c, f).norm_sq == lambda_norm_sq_coeffs(&c, f) {
            out.insert(c.clone());
        }
        for i in 0..n {
            c[i] += 1;
            if c[i] <= max {
                continue 'outer;
            }
            c[i] = 0;
        }
        break;
    }
    out
}

fn families() -> Outcome {
    let mut g2_fam = BTreeSet::new();
    for a in 0..=40i64 {
        for b in 0..=40i64 {
            if a + b >= 1 {
                g2_fam.insert(vec![a + 3 * b + 2, a + b]);
            }
            if b >= 1 {
                g2_fam.insert(vec![2 * a + 3 * b + 3, b - 1]);
            }
            if a >= 1 {
                g2_fam.insert(vec![a - 1, a + 2 * b + 1]);
            }
        }
    }
    g2_fam.retain(|v| v.iter().all(|&x| x <= 30));
    let g2 = spin_equals_lambda(get_form(Group::G2), 30);

    let mut fii_fam = BTreeSet::new();
    let r = 0..=20i64;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    if a >= 1 && b >= 1 && c + d >= 1 {
                        fii_fam.insert(vec![b + c, a - 1, b - 1, c + d]);
                    }
                    if a >= 1 && b >= 1 && d >= 1 {
                        fii_fam.insert(vec![b - 1, a - 1, b + c, d - 1]);
                    }
                    if a >= 1 && b >= 1 && c >= 1 {
                        fii_fam.insert(vec![b + c + d + 1, a - 1, b - 1, c - 1]);
                    }
                }
            }
        }
    }
    fii_fam.retain(|v| v.iter().all(|&x| x <= 15));
    let fii = spin_equals_lambda(get_form(Group::FII), 15);
    let ok = g2 == g2_fam && fii == fii_fam;
    (ok, format!("G2 ≤30: {} computed / {} in families; FII ≤15: {} computed / {} in families", g2.len(), g2_fam.len(), fii.len(), fii_fam.len()))
}

fn verification() -> Outcome {
    let mut ok = true;
    let mut parts = vec![];
    for g in Group::ALL {
        let t = parse_tables(dirac_core::tables::bundled_tables_text(g)).expect("bundled tables");
        let r = verify_group(g, 4).expect("bundled tables");
        ok &= r.all_pass();
        parts.push(format!("{g} {}+{} rows, {} checks, {} failures", t.scattered.len(), t.strings.len(), r.checks, r.failures));
    }
    (ok, format!("grid 4: {}", parts.join("; ")))
}

fn fix_parity(mut c: Vec<i64>, f: &RealFormData) -> Vec<i64> {
    if f.parity_of(&c) != 0 {
        let p = f.parity.as_ref().expect("parity functional");
        c[p.iter().position(|x| x % 2 != 0).expect("nontrivial")] += 1;
    }
    c
}

fn properties() -> Outcome {
    let mut ok = true;
    let mut parts = vec![];
    for g in Group::ALL {
        let f = get_form(g);
        let mut runner = TestRunner::new(Config { cases: 10_000, failure_persistence: None, ..Config::default() });
        let res = runner.run(&prop::collection::vec(0i64..=30, f.k_rank()), |c| {
            let c = fix_parity(c, f);
            prop_assert!(spin_norm_sq_coeffs(&c, f).norm_sq >= lambda_norm_sq_coeffs(&c, f), "{:?}", c);
            Ok(())
        });
        ok &= res.is_ok();
        parts.push(format!("{g} spin≥lambda {}", if res.is_ok() { "10000 ok" } else { "violated" }));
    }
    let mut runner = TestRunner::new(Config { cases: 2_000, failure_persistence: None, ..Config::default() });
    let sys_strategy = (0usize..3, prop::collection::vec((-12i64..=12, 1i64..=4), 8), prop::collection::vec(0usize..8, 0..12));
    let res = runner.run(&sys_strategy, |(s, xs, word)| {
        let sys = [dirac_core::rootsystem::f4_system(), dirac_core::rootsystem::e6_system(), dirac_core::rootsystem::g2_system()][s];
        let v = Vect::from_fracs(&xs[..sys.dim]);
        let word: Vec<usize> = word.into_iter().map(|i| i % sys.rank()).collect();
        let w = WeylWord::new(word).apply(&v, sys);
        prop_assert_eq!(sys.dominant(&w), sys.dominant(&v));
        let (p, c) = sys.project_with_certificate(&v);
        let d = &v - &p;
        prop_assert!(sys.is_dominant(&p) && c.iter().all(|x| !x.is_negative()));
        prop_assert!(sys.fundamental_weights.iter().all(|x| !d.dot(x).is_positive()));
        Ok(())
    });
    ok &= res.is_ok();
    parts.push(format!("W-invariance + polar cone {}", if res.is_ok() { "2000 ok" } else { "violated" }));
    let fi = get_form(Group::FI);
    let bt = bundled_fixture("FI_spin_mult_big", fi).expect("fixture");
    let rt = parse_branching_str(&serialize_branching(&bt), fi, false).as_ref() == Ok(&bt);
    let tables_rt = Group::ALL.iter().all(|&g| {
        let t = parse_tables(dirac_core::tables::bundled_tables_text(g)).expect("tables");
        parse_tables(&serde_json::to_string(&t).expect("json")).as_ref() == Ok(&t)
    });
    ok &= rt && tables_rt;
    parts.push(format!("branching round-trip {rt}, table round-trip {tables_rt}"));
    (ok, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("u-small census", usmall_census),
        ("candidate infinitesimal characters", candidate_counts),
        ("FI #x=176 Dirac index", counter_example),
        ("EI pencil example", ei_example),
        ("FI five spin-lowest K-types", spin_mult_big),
        ("spin = lambda families", families),
        ("table verification", verification),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = run();
        failed += usize::from(!ok);
        println!("criterion {} {} — {name}: {detail} [{:.1}s]", i + 1, if ok { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
