use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dirac_core::dirac::{dirac_cohomology, has_dirac_cohomology, pencil_screen, root_from_simple_coeffs, Verdict};
use dirac_core::enumerate::{can_k, cank_height_bound, candidate_infchars, candidate_infchars_with_bound, is_strongly_regular};
use dirac_core::norms::{atlas_height, is_u_small, lambda_norm_sq, spin_norm_sq};
use dirac_core::realforms::{convert_atlas_order, fmt_ints, get_form, make_infchar, make_ktype, Direction, Group, InfChar, KType, RealFormData};
use dirac_core::tables::{emit_report, parse_branching, usmall_census, verify_group, ReportFormat};
use dirac_core::vect::{fmt_rats, parse_rats};
use dirac_core::Rat;

#[derive(Parser)]
#[command(name = "dirac", version, about = "Exact computations for Dirac series of FII, EIV, FI, EI and G2(2)")]
struct Cli {
    /// Read and print λ/ν/Λ-type coordinates (infinitesimal characters, pencil
    /// directions) in the external tool's order instead of the native (Knapp) labelling.
    #[arg(long, global = true)]
    atlas_order: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lambda norm, spin norm, height and u-smallness of a K-type.
    Norms {
        group: Group,
        #[arg(long, allow_hyphen_values = true)]
        ktype: String,
    },
    /// Number of u-small K-types.
    UsmallCount { group: Group },
    /// Candidate infinitesimal characters.
    Enumerate {
        group: Group,
        #[arg(long)]
        report_both_counts: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Override the norm bound (p/q).
        #[arg(long)]
        bound: Option<String>,
    },
    StronglyRegular {
        group: Group,
        #[arg(long)]
        infchar: String,
    },
    /// K-types that can carry Dirac cohomology at Λ.
    Cank {
        group: Group,
        #[arg(long)]
        infchar: String,
    },
    /// Dirac cohomology from a branching table.
    Dirac {
        group: Group,
        #[arg(long)]
        branching: PathBuf,
        /// Also accept `mult [ktype] [height]` column lines.
        #[arg(long)]
        lenient: bool,
    },
    /// Screens lowest K-types with the Dirac inequality along a pencil.
    Pencil {
        group: Group,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "lkt_file")]
        lkt: Option<String>,
        /// One lowest K-type per line; prints the number ruled out.
        #[arg(long)]
        lkt_file: Option<PathBuf>,
        #[arg(long)]
        infchar: String,
        /// Pencil root as simple-root coefficients of Δ⁺(g, t_f); default the highest weight of p.
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
        #[arg(long, default_value_t = 200)]
        nmax: i64,
    },
    /// Re-derive the checkable claims of the bundled tables.
    Verify {
        /// A group or `all`.
        target: String,
        #[arg(long, default_value_t = 4)]
        grid: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn ints(s: &str) -> Result<Vec<i64>> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    t.split(',').map(|p| p.trim().parse::<i64>().with_context(|| format!("bad integer {p:?} in {s:?}"))).collect()
}

fn rats(s: &str) -> Result<Vec<Rat>> {
    parse_rats(s).with_context(|| format!("bad rational list {s:?}"))
}

struct Ctx {
    atlas: bool,
}

impl Ctx {
    fn order<T: Clone>(&self, v: Vec<T>, f: &RealFormData, d: Direction) -> Result<Vec<T>> {
        Ok(if self.atlas { convert_atlas_order(&v, f, d)? } else { v })
    }

    fn infchar(&self, s: &str, f: &RealFormData) -> Result<InfChar> {
        let c = self.order(rats(s)?, f, Direction::FromAtlas)?;
        Ok(make_infchar(&c, f)?)
    }

    fn show(&self, l: &InfChar, f: &RealFormData) -> Result<String> {
        Ok(fmt_rats(&self.order(l.coeffs.clone(), f, Direction::ToAtlas)?))
    }
}

fn ktype(s: &str, f: &RealFormData) -> Result<KType> {
    Ok(make_ktype(&ints(s)?, f)?)
}

fn run(cli: Cli) -> Result<bool> {
    let ctx = Ctx { atlas: cli.atlas_order };
    match cli.cmd {
        Cmd::Norms { group, ktype: k } => {
            let f = get_form(group);
            let mu = ktype(&k, f)?;
            let (lam, la) = lambda_norm_sq(&mu, f);
            let s = spin_norm_sq(&mu, f);
            println!("ktype      {mu}");
            println!("lambda²    {lam}");
            println!("lambda_a   {la}");
            println!("spin²      {}", s.norm_sq);
            println!("height     {}", atlas_height(&mu, f));
            println!("u-small    {}", is_u_small(&mu, f));
            for ((j, w), p) in s.argmin_js.iter().zip(&s.prv_coeffs).zip(&s.parities) {
                println!("prv        j={j} {} {}", fmt_ints(w), if *p == 0 { "even" } else { "odd" });
            }
        }
        Cmd::UsmallCount { group } => println!("{}", usmall_census(get_form(group))),
        Cmd::Enumerate { group, report_both_counts, workers, bound } => {
            if workers == 0 {
                bail!("--workers must be at least 1");
            }
            let f = get_form(group);
            let c = match bound {
                Some(b) => candidate_infchars_with_bound(f, &b.parse::<Rat>().map_err(|e| anyhow::anyhow!("{e}"))?, workers),
                None => candidate_infchars(f, workers),
            };
            println!("bound                {}", c.bound);
            println!("distinct Λ           {}", c.n_distinct);
            println!("not strongly regular {}", c.n_not_strongly_regular);
            if report_both_counts {
                println!("contributing δ       {}", c.n_ktype_sources);
                println!("  of which not s.r.  {}", c.n_ktype_sources_not_strongly_regular);
                println!("counting             distinct Λ (the δ count is reported for comparison)");
            }
        }
        Cmd::StronglyRegular { group, infchar } => {
            let f = get_form(group);
            println!("{}", is_strongly_regular(&ctx.infchar(&infchar, f)?, f));
        }
        Cmd::Cank { group, infchar } => {
            let f = get_form(group);
            let l = ctx.infchar(&infchar, f)?;
            let c = can_k(&l, f);
            println!("Λ {} ‖Λ‖² {}", ctx.show(&l, f)?, l.norm_sq());
            for k in &c.ktypes {
                println!("{k} height {}", atlas_height(k, f));
            }
            println!("{} K-types, max height {}", c.ktypes.len(), cank_height_bound(&l, f));
        }
        Cmd::Dirac { group, branching, lenient } => {
            let f = get_form(group);
            let bt = parse_branching(&branching, f, lenient).with_context(|| format!("reading {}", branching.display()))?;
            let has = has_dirac_cohomology(&bt, f)?;
            let out = dirac_cohomology(&bt, f)?;
            println!("Λ {} ‖Λ‖² {}", ctx.show(&bt.infchar, f)?, bt.infchar.norm_sq());
            for (k, m) in &out.spin_lowest {
                let kt = make_ktype(k, f)?;
                println!("spin-lowest {} mult {m} spin² {}", fmt_ints(k), spin_norm_sq(&kt, f).norm_sq);
            }
            println!("has_dirac_cohomology {has}");
            println!("nonzero {}", out.nonzero);
            let show = |v: &[Vec<i64>]| v.iter().map(|w| fmt_ints(w)).collect::<Vec<_>>().join(" ");
            println!("plus  {{{}}}", show(&out.plus_part));
            println!("minus {{{}}}", show(&out.minus_part));
            println!("index_zero {}", out.index_zero);
        }
        Cmd::Pencil { group, lkt, lkt_file, infchar, direction, nmax } => {
            let f = get_form(group);
            let l = ctx.infchar(&infchar, f)?;
            let dir = match direction {
                Some(d) => Some(root_from_simple_coeffs(&ctx.order(rats(&d)?, f, Direction::FromAtlas)?, f)?),
                None => None,
            };
            let mut lkts = Vec::new();
            if let Some(k) = lkt {
                lkts.push(ktype(&k, f)?);
            }
            if let Some(p) = lkt_file {
                let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                for (i, line) in text.lines().enumerate() {
                    let line = line.split('#').next().unwrap_or("").trim();
                    if !line.is_empty() {
                        lkts.push(ktype(line, f).with_context(|| format!("{}:{}", p.display(), i + 1))?);
                    }
                }
            }
            let mut ruled = 0;
            for k in &lkts {
                let r = pencil_screen(k, &l, f, dir.as_ref(), nmax)?;
                let v = match r.verdict {
                    Verdict::RuledOut => {
                        ruled += 1;
                        "ruled_out"
                    }
                    Verdict::Inconclusive => "inconclusive",
                };
                println!("{k} {v} min spin² {} at n={} (‖Λ‖² {}, {} members)", r.min_spin_sq, r.argmin_n, l.norm_sq(), r.evaluated);
            }
            if lkts.len() > 1 {
                println!("{ruled} of {} ruled out", lkts.len());
            }
        }
        Cmd::Verify { target, grid, out, format, workers } => {
            if grid < 1 {
                bail!("--grid must be at least 1");
            }
            if workers == 0 {
                bail!("--workers must be at least 1");
            }
            rayon::ThreadPoolBuilder::new().num_threads(workers).build_global().ok();
            let groups: Vec<Group> = if target.eq_ignore_ascii_case("all") { Group::ALL.to_vec() } else { vec![target.parse()?] };
            let mut reports = Vec::new();
            for g in groups {
                reports.push((g.to_string(), verify_group(g, grid)?));
            }
            let fmt = match format {
                Format::Text => ReportFormat::Text,
                Format::Json => ReportFormat::Json,
            };
            let text = emit_report(&reports, fmt);
            match out {
                Some(p) => std::fs::write(&p, &text).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
            let failures: usize = reports.iter().map(|(_, r)| r.failures).sum();
            if failures > 0 {
                eprintln!("{failures} failures");
            }
            return Ok(failures == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
