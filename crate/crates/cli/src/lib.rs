//! Command-line front end for `lcy-periods`.
//!
//! Every command returns its whole report as text together with an exit
//! code: 0 on success, 1 when the input or arguments are invalid, 2 when an
//! internal check fails (for example the period routes disagree).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use lcy_periods::field::{parse_scalar, LaurentScalar};
use lcy_periods::pair::{LooijengaPair, PicClass};
use lcy_periods::periods::{self, na_period, na_period_cech};
use lcy_periods::skeleton::{build_skeleton, local_fan, Mat2};
use lcy_periods::toric::{catalogue, Fan2D};
use lcy_periods::tropical::{self, h1_compute};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

/// A pair as written in a JSON input file. Blowup keys are 1-based ray
/// indices; values are scalar expressions.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDocument {
    pub fan: Vec<[i64; 2]>,
    #[serde(default)]
    pub blowups: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub allow_nongeneric: bool,
}

#[derive(Parser, Debug)]
#[command(name = "lcy", version, about = "Periods of Looijenga pairs over Q(t)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Pair document (JSON).
    file: String,
    /// Accept blowup parameters with coinciding reductions on a ray.
    #[arg(long)]
    allow_nongeneric: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a document describes a valid pair.
    Validate(Input),
    /// Print n, the blowup counts, the charge, s and rank D⊥.
    Info(Input),
    /// Print the spoke and wing basis of D⊥.
    Dperp(Input),
    /// Tropicalize a class (default: every basis element of D⊥).
    Tropicalize {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        class: Option<String>,
    },
    /// H₁ of the skeleton with coefficients in the invariant cotangent sheaf.
    Homology {
        #[command(flatten)]
        input: Input,
        /// Also compute torsion with the twisted cellular complex.
        #[arg(long)]
        torsion: bool,
    },
    /// Integral and K-affine monodromy around the singular vertices.
    Monodromy(Input),
    /// The local toric fan along a boundary curve.
    LocalFan {
        /// Intersection numbers b₁..b_r, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Vec<i64>,
        /// Multiplicities N₀, N₁..N_r, N_∞, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mult: Vec<i64>,
    },
    /// Non-archimedean periods, by closed form and by the Čech walk.
    Periods {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        class: Option<String>,
    },
    /// Compare the algebraic and non-archimedean periods on a basis of D⊥.
    Compare {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run compare on random pairs over the fan catalogue.
    Sweep {
        #[arg(long, default_value_t = 50)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failure carrying its exit code.
struct Failure(i32, String);

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INVALID, msg.into())
}

fn internal(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INTERNAL, msg.into())
}

/// Runs one command line (`args[0]` is the program name).
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    match dispatch(cli.command) {
        Ok(out) => (EXIT_OK, out),
        Err(Failure(code, msg)) => (code, format!("error: {msg}\n")),
    }
}

fn dispatch(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::Validate(input) => {
            let pair = load(&input)?;
            let kind = if pair.is_generic() { "generic" } else { "non-generic" };
            Ok(format!("valid ({kind}) n={} blowups={}\n", pair.n(), pair.total_blowups()))
        }
        Command::Info(input) => Ok(format!("{}\n", info_line(&load(&input)?))),
        Command::Dperp(input) => {
            let pair = load(&input)?;
            let (wings, spokes) = pair.wing_spoke_decomposition();
            let mut out = format!("rank(Dperp)={}\n", spokes.len() + wings.len());
            for (k, g) in spokes.iter().enumerate() {
                writeln!(out, "spoke {}: {g}", k + 1).unwrap();
            }
            for (k, g) in wings.iter().enumerate() {
                writeln!(out, "wing {}: {g}", k + 1).unwrap();
            }
            Ok(out)
        }
        Command::Tropicalize { input, class } => {
            let pair = load(&input)?;
            let mut out = String::new();
            for (label, a) in classes(&pair, class.as_deref())? {
                let c = tropical::tropicalize(&pair, &a).map_err(|e| invalid(format!("{label}: {e}")))?;
                let d = c.defect(&pair);
                if d != [0, 0] {
                    return Err(internal(format!("{label}: tropicalization is unbalanced")));
                }
                writeln!(out, "{label}: {c}").unwrap();
            }
            Ok(out)
        }
        Command::Homology { input, torsion } => {
            let pair = load(&input)?;
            let h = h1_compute(&pair, torsion);
            let mut out = format!("{h}\n");
            for (k, c) in tropical::wings_and_spokes(&pair).iter().enumerate() {
                writeln!(out, "generator {}: {c}", k + 1).unwrap();
            }
            Ok(out)
        }
        Command::Monodromy(input) => monodromy_report(&load(&input)?),
        Command::LocalFan { b, mult } => {
            let f = local_fan(&b, &mult).map_err(|e| invalid(e.to_string()))?;
            let mut out = String::new();
            let r = f.r();
            let name = |k: usize| if k == r { "u_inf".to_string() } else { format!("u_{k}") };
            for (k, u) in f.rays.iter().enumerate() {
                writeln!(out, "{} = {}", name(k), vector(u)).unwrap();
            }
            writeln!(out, "u_{r} = {} (adjoined)", vector(&f.u_r())).unwrap();
            writeln!(out, "relation u_0 + u_inf = sum b_i u_i: {}", lcy_periods::skeleton::local_fan_relation_holds(&f)).unwrap();
            for (label, cone) in ["sigma_0", "sigma_inf"].iter().zip(f.cones()) {
                let rows: Vec<String> = cone.to_rows().iter().map(|row| vector(row)).collect();
                writeln!(out, "{label}: {}", rows.join(" ")).unwrap();
            }
            Ok(out)
        }
        Command::Periods { input, class } => {
            let pair = load(&input)?;
            let mut out = String::new();
            for (label, a) in classes(&pair, class.as_deref())? {
                let c = tropical::tropicalize(&pair, &a).map_err(|e| invalid(format!("{label}: {e}")))?;
                let closed = na_period(&pair, &c).map_err(|e| internal(e.to_string()))?;
                let cech = na_period_cech(&pair, &c).map_err(|e| internal(e.to_string()))?;
                if closed != cech {
                    return Err(internal(format!("{label}: closed form {closed} != cech {cech}")));
                }
                writeln!(out, "{label}: period={closed} val={}", valuation(&closed.value)).unwrap();
            }
            Ok(out)
        }
        Command::Compare { input, seed } => {
            let pair = load(&input)?;
            compare_checked(&pair, seed).map(|r| format!("{r}\n"))
        }
        Command::Sweep { count, seed } => sweep(count, seed),
    }
}

fn vector(u: &[i64]) -> String {
    let parts: Vec<String> = u.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn matrix(m: &Mat2) -> String {
    format!("[[{},{}],[{},{}]]", m[0][0], m[0][1], m[1][0], m[1][1])
}

fn valuation(x: &LaurentScalar) -> String {
    match x.val() {
        lcy_periods::field::Valuation::Finite(v) => v.to_string(),
        lcy_periods::field::Valuation::Infinity => "inf".into(),
    }
}

/// "n=3 k=(1,1,1) Q=3 s=0 rank(Dperp)=1"
pub fn info_line(pair: &LooijengaPair) -> String {
    let k: Vec<String> = pair.k().iter().map(ToString::to_string).collect();
    format!(
        "n={} k=({}) Q={} s={} rank(Dperp)={}",
        pair.n(),
        k.join(","),
        pair.charge(),
        pair.s_rank(),
        pair.dperp_kernel().len()
    )
}

fn classes(pair: &LooijengaPair, class: Option<&str>) -> Result<Vec<(String, PicClass)>, Failure> {
    match class {
        Some(text) => {
            let a = pair.parse_class(text).map_err(|e| invalid(format!("--class: {e}")))?;
            Ok(vec![(text.trim().to_string(), a)])
        }
        None => Ok(pair.dperp_basis().into_iter().enumerate().map(|(k, g)| (format!("generator {}", k + 1), g)).collect()),
    }
}

fn monodromy_report(pair: &LooijengaPair) -> Result<String, Failure> {
    let skel = build_skeleton(pair);
    let mut out = String::new();
    for v in skel.vertices() {
        let m = skel.int_monodromy(v.ray, v.slot, v.slot).map_err(|e| internal(e.to_string()))?;
        let k = skel.kaffine_monodromy(v.ray, v.slot).map_err(|e| internal(e.to_string()))?;
        writeln!(
            out,
            "vertex [{},{}] at {}: int={} kaffine={}",
            v.ray + 1,
            v.slot + 1,
            vector(&v.position),
            matrix(&m),
            k
        )
        .unwrap();
    }
    for i in 0..pair.n() {
        let k = pair.k()[i];
        if k > 1 {
            let m = skel.int_monodromy(i, 0, k - 1).map_err(|e| internal(e.to_string()))?;
            let t = skel.kaffine_monodromy_range(i, 0, k - 1).map_err(|e| internal(e.to_string()))?;
            writeln!(out, "ray {} slots 1..{k}: int={} kaffine={t}", i + 1, matrix(&m)).unwrap();
        }
    }
    if out.is_empty() {
        out.push_str("no singular vertices\n");
    }
    Ok(out)
}

/// Runs compare, then again with the next seed to catch seed dependence.
fn compare_checked(pair: &LooijengaPair, seed: u64) -> Result<periods::CompareReport, Failure> {
    let r = periods::compare(pair, seed).map_err(|e| internal(e.to_string()))?;
    let again = periods::compare(pair, seed.wrapping_add(1)).map_err(|e| internal(e.to_string()))?;
    for (a, b) in r.rows.iter().zip(&again.rows) {
        if a.algebraic != b.algebraic {
            return Err(internal(format!(
                "seed dependence: algebraic period {} (seed {seed}) vs {} (seed {})",
                a.algebraic,
                b.algebraic,
                seed.wrapping_add(1)
            )));
        }
    }
    if !r.pass() {
        return Err(internal(format!("period routes disagree\n{r}")));
    }
    Ok(r)
}

/// Loads and validates a pair document.
pub fn load_document(text: &str, allow_nongeneric: bool) -> Result<LooijengaPair, String> {
    let doc: PairDocument = serde_json::from_str(text).map_err(|e| format!("invalid document: {e}"))?;
    let fan = Fan2D::new(doc.fan).map_err(|e| e.to_string())?;
    let n = fan.n();
    let mut blowups: Vec<Vec<LaurentScalar>> = vec![Vec::new(); n];
    for (key, values) in &doc.blowups {
        let ray: usize = key.trim().parse().map_err(|_| format!("blowups: ray key {key:?} is not an integer"))?;
        if ray == 0 || ray > n {
            return Err(format!("blowups: ray {ray} out of range 1..={n}"));
        }
        for (j, text) in values.iter().enumerate() {
            let mu = parse_scalar(text).map_err(|e| format!("blowups[{key}][{}]: {e}", j + 1))?;
            blowups[ray - 1].push(mu);
        }
    }
    let pair = LooijengaPair::new(fan, blowups).map_err(|e| e.to_string())?;
    if !pair.is_generic() && !(allow_nongeneric || doc.allow_nongeneric) {
        return Err("blowup parameters on a ray share a reduction at t = 0; pass --allow-nongeneric to accept".into());
    }
    Ok(pair)
}

fn load(input: &Input) -> Result<LooijengaPair, Failure> {
    let text = std::fs::read_to_string(&input.file).map_err(|e| invalid(format!("{}: {e}", input.file)))?;
    load_document(&text, input.allow_nongeneric).map_err(|e| invalid(format!("{}: {e}", input.file)))
}

/// A random generic pair over the catalogue: up to two blowups per ray with
/// μ = a + b·t, a and b rationals, a ≠ 0 and distinct on each ray.
pub fn random_pair(rng: &mut ChaCha8Rng) -> (&'static str, LooijengaPair) {
    let mut cat = catalogue();
    let (name, fan) = cat.swap_remove(rng.gen_range(0..cat.len()));
    let rational = |rng: &mut ChaCha8Rng, nonzero: bool| loop {
        let p: i64 = rng.gen_range(-9..=9);
        let q: i64 = rng.gen_range(1..=5);
        if !nonzero || p != 0 {
            break LaurentScalar::from_ratio(p, q).expect("nonzero denominator");
        }
    };
    let blowups = (0..fan.n())
        .map(|_| {
            let k = rng.gen_range(0..=2);
            let mut consts: Vec<LaurentScalar> = Vec::new();
            while consts.len() < k {
                let a = rational(rng, true);
                if !consts.contains(&a) {
                    consts.push(a);
                }
            }
            consts
                .into_iter()
                .map(|a| {
                    let b = rational(rng, false);
                    &a + &(&b * &LaurentScalar::t())
                })
                .collect()
        })
        .collect();
    (name, LooijengaPair::new(fan, blowups).expect("distinct unit parameters"))
}

fn sweep(count: u64, seed: u64) -> Result<String, Failure> {
    let mut out = String::new();
    let mut failures = 0;
    for trial in 0..count {
        let s = seed.wrapping_add(trial);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let (name, pair) = random_pair(&mut rng);
        let rank = pair.dperp_kernel().len() as i64;
        let ranks_ok = rank == pair.charge() - 2 + pair.s_rank() as i64
            && rank == tropical::balanced_rank(&pair) as i64
            && (pair.occupied_rays() < 3 || rank == pair.total_blowups() as i64 - 2)
            && pair.charge() >= 0
            && (pair.charge() == 0) == (pair.total_blowups() == 0);
        let verdict = match compare_checked(&pair, s) {
            Ok(r) if ranks_ok => format!("PASS generators={}", r.rows.len()),
            Ok(_) => "FAIL rank identities".to_string(),
            Err(Failure(_, msg)) => format!("FAIL {}", msg.lines().next().unwrap_or("")),
        };
        if verdict.starts_with("FAIL") {
            failures += 1;
        }
        writeln!(out, "trial {} seed={s} fan={name} {} {verdict}", trial + 1, info_line(&pair)).unwrap();
    }
    writeln!(out, "sweep: {}/{count} PASS", count - failures).unwrap();
    if failures > 0 {
        return Err(internal(out));
    }
    Ok(out)
}
