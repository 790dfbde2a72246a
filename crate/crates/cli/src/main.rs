//! Batch front end: reductions, lifts, classification, parameter-space
//! enumeration, definable volumes, and the verification suites, with
//! deterministic JSON/CSV output.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! precondition errors.

mod expr;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use serde_json::json;

use ordlie::error::Error;
use ordlie::fields::{CycInt, FqElem};
use ordlie::laurent::{rat, LocalField, Rat};
use ordlie::lie::{
    is_restricted, AlgebraType, LieElement, RestrictedOutcome,
};
use ordlie::matrix::Matrix;
use ordlie::params::{enumerate_s, mu, EndoscopicPair};
use ordlie::pasdsl;
use ordlie::poly::{r_lift, SlopeConstants};
use ordlie::quotfourier::{
    finite_ft, gauss_integral, lambda_char, orbit_sum, FiniteFunction, QuotientSpace,
};
use ordlie::volumes::{fl_r0_check, volume, VolumeMode};

#[derive(Parser)]
#[command(name = "ordlie", version, about = "exact slope classification and volumes over F_q((t))")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Worker threads for enumeration (default: ORDLIE_JOBS or all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write the JSON/CSV report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Omit the timestamp field for byte-identical reruns.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Args)]
struct ElemInput {
    /// Matrix literal, e.g. "[[0,1],[t,0]]".
    #[arg(long, conflicts_with = "fixture")]
    elem: Option<String>,

    /// Named fixture: sl2-depth0 or sl2-barycenter.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// r-reduction of a slope-r polynomial over F_q((t)).
    Reduce {
        #[arg(long)]
        q: u64,
        /// Slope as L/N.
        #[arg(long)]
        r: String,
        /// Polynomial literal, e.g. "λ^6 - t^2".
        #[arg(long)]
        poly: String,
    },
    /// Canonical slope-r lift of a residue polynomial.
    Lift {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: String,
        #[arg(long)]
        poly: String,
    },
    /// Restricted-element test with a witness or a rejection reason.
    Classify {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        r: String,
        #[arg(long)]
        q: u64,
        /// Truncation level of the inputs.
        #[arg(long, default_value_t = 4)]
        prec: u32,
        #[command(flatten)]
        elem: ElemInput,
    },
    /// Classification point of a restricted element.
    Mu {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        r: String,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 4)]
        prec: u32,
        #[command(flatten)]
        elem: ElemInput,
    },
    /// List the points of the parameter space S at slope r.
    EnumParams {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        r: String,
        #[arg(long)]
        q: u64,
    },
    /// Volume of the definable set cut out by a formula file.
    Volume {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        q: u64,
        #[arg(long = "K")]
        k: u32,
        #[arg(long)]
        formula_file: PathBuf,
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Normalized r = 0 identity over an endoscopic pair (stable face).
    FlCheck {
        /// Pair literal g/h1[+h2], e.g. "sp:2/sp:2" or "so:5/so:3+so:3".
        #[arg(long)]
        pair: String,
        #[arg(long)]
        r: String,
        #[arg(long)]
        q: u64,
        #[arg(long = "K", default_value_t = 1)]
        k: u32,
    },
    /// Fourier inversion and the coset-indicator identity on the residue
    /// quotient.
    FourierCheck {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Gauss-integral orbit formula and the vanishing identity over the
    /// truncated group.
    GaussCheck {
        #[arg(long)]
        q: u64,
        #[arg(long = "K", default_value_t = 2)]
        k: u32,
    },
}

fn parse_slope(s: &str) -> Result<Rat, Error> {
    let parts: Vec<&str> = s.split('/').collect();
    let bad = || Error::InvalidArgument(format!("bad slope literal {s}"));
    match parts.as_slice() {
        [n] => n.parse::<i64>().map(Rat::from_integer).map_err(|_| bad()),
        [n, d] => {
            let n: i64 = n.parse().map_err(|_| bad())?;
            let d: i64 = d.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(n, d))
        }
        _ => Err(bad()),
    }
}

fn load_element(
    input: &ElemInput,
    alg: AlgebraType,
    fld: &LocalField,
    prec: u32,
) -> Result<LieElement, Error> {
    let mat = match (&input.elem, &input.fixture) {
        (Some(lit), None) => expr::parse_matrix(lit, fld)?,
        (None, Some(name)) => match name.as_str() {
            "sl2-depth0" => Matrix::from_rows(vec![
                vec![fld.zero(), fld.one()],
                vec![fld.one(), fld.zero()],
            ]),
            "sl2-barycenter" => Matrix::from_rows(vec![
                vec![fld.zero(), fld.one()],
                vec![fld.t_pow(1), fld.zero()],
            ]),
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown fixture {other} (expected sl2-depth0 or sl2-barycenter)"
                )))
            }
        },
        _ => {
            return Err(Error::InvalidArgument(
                "provide exactly one of --elem or --fixture".into(),
            ))
        }
    };
    let mat = mat.map(|c| c.truncate(rat(prec as i64, 1)));
    LieElement::new(alg, mat)
}

struct Output {
    out: Option<PathBuf>,
    timestamp: bool,
}

impl Output {
    fn emit(&self, mut value: serde_json::Value) -> Result<(), Error> {
        if self.timestamp {
            if let Some(obj) = value.as_object_mut() {
                let now = std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                obj.insert("timestamp".into(), json!(now));
            }
        }
        let rendered = match &self.out {
            Some(path) if path.extension().map(|e| e == "csv").unwrap_or(false) => {
                json_to_csv(&value)
            }
            _ => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
        };
        match &self.out {
            Some(path) => std::fs::write(path, rendered)
                .map_err(|e| Error::InvalidArgument(format!("cannot write {path:?}: {e}"))),
            None => {
                print!("{rendered}");
                std::io::stdout().flush().ok();
                Ok(())
            }
        }
    }
}

/// Flatten a report into CSV: a `rows` array becomes records, anything else
/// becomes a single-record table.
fn json_to_csv(value: &serde_json::Value) -> String {
    let rows: Vec<&serde_json::Value> = match value.get("rows").and_then(|r| r.as_array()) {
        Some(arr) => arr.iter().collect(),
        None => vec![value],
    };
    let mut cols: Vec<String> = Vec::new();
    for row in &rows {
        if let Some(obj) = row.as_object() {
            for k in obj.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
    }
    let mut out = cols.join(",") + "\n";
    for row in &rows {
        let rec: Vec<String> = cols
            .iter()
            .map(|c| {
                row.get(c)
                    .map(|v| match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .unwrap_or_default()
                    .replace(',', ";")
            })
            .collect();
        out.push_str(&rec.join(","));
        out.push('\n');
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli
        .jobs
        .or_else(|| std::env::var("ORDLIE_JOBS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .ok();
    }
    let output = Output {
        out: cli.out.clone(),
        timestamp: !cli.no_timestamp,
    };
    match run(cli, &output) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli, output: &Output) -> Result<bool, Error> {
    match cli.command {
        Cmd::Reduce { q, r, poly } => {
            let r = parse_slope(&r)?;
            let fld = LocalField::base(q);
            let p = expr::parse_poly(&poly)?.to_laurent_poly(&fld);
            let consts = SlopeConstants::new(r, p.degree() as i64)?;
            let red = p.r_reduction(&consts)?;
            let pretty = expr::pretty_fq_poly(&red);
            println!("{pretty}");
            output.emit(json!({
                "command": "reduce",
                "q": q,
                "r": format!("{}/{}", r.numer(), r.denom()),
                "input": poly,
                "reduction": pretty,
                "coefficients": red.coeffs().iter().map(|c| c.value()).collect::<Vec<_>>(),
            }))?;
            Ok(true)
        }
        Cmd::Lift { q, r, poly } => {
            let r = parse_slope(&r)?;
            let fld = LocalField::base(q);
            let red = expr::parse_poly(&poly)?.to_fq_poly(q)?;
            let consts = SlopeConstants::new(r, (red.degree() as i64) * r.denom().max(&1))?;
            // the lift has degree n * g
            let consts = SlopeConstants::new(r, consts.n * red.degree() as i64)?;
            let lifted = r_lift(&red, &consts, &fld)?;
            let pretty = expr::pretty_laurent_poly(&lifted);
            println!("{pretty}");
            output.emit(json!({
                "command": "lift",
                "q": q,
                "r": format!("{}/{}", r.numer(), r.denom()),
                "input": poly,
                "lift": pretty,
            }))?;
            Ok(true)
        }
        Cmd::Classify {
            algebra,
            r,
            q,
            prec,
            elem,
        } => {
            let alg = AlgebraType::parse(&algebra)?;
            let r = parse_slope(&r)?;
            let fld = LocalField::base(q);
            let x = load_element(&elem, alg, &fld, prec)?;
            if !ordlie::lie::is_member(&x)? {
                return Err(Error::InvalidArgument(
                    "element is not in the algebra".into(),
                ));
            }
            let verdict = is_restricted(&x, r)?;
            let report = match &verdict {
                RestrictedOutcome::Accepted(w) => {
                    println!("accepted: slope {r}, reduction {}", expr::pretty_fq_poly(&w.reduction));
                    json!({
                        "command": "classify",
                        "verdict": "accepted",
                        "r": format!("{}/{}", r.numer(), r.denom()),
                        "reduction": expr::pretty_fq_poly(&w.reduction),
                        "zero_multiplicity": w.zero_mult,
                        "pfaffian_ac": w.pfaff_ac.map(|p| p.value()),
                    })
                }
                RestrictedOutcome::Rejected(why) => {
                    println!("rejected: {why}");
                    json!({
                        "command": "classify",
                        "verdict": "rejected",
                        "reason": format!("{why}"),
                    })
                }
            };
            output.emit(report)?;
            Ok(true)
        }
        Cmd::Mu {
            algebra,
            r,
            q,
            prec,
            elem,
        } => {
            let alg = AlgebraType::parse(&algebra)?;
            let r = parse_slope(&r)?;
            let fld = LocalField::base(q);
            let x = load_element(&elem, alg, &fld, prec)?;
            let y = mu(&x, r)?;
            println!("{}", expr::pretty_fq_poly(&y.reduction()));
            output.emit(json!({
                "command": "mu",
                "point": y,
                "pretty": expr::pretty_fq_poly(&y.reduction()),
            }))?;
            Ok(true)
        }
        Cmd::EnumParams { algebra, r, q } => {
            let alg = AlgebraType::parse(&algebra)?;
            let r = parse_slope(&r)?;
            let pts = enumerate_s(alg, r, q)?;
            println!("{} points", pts.len());
            for p in &pts {
                println!("  {}", expr::pretty_fq_poly(&p.reduction()));
            }
            output.emit(json!({
                "command": "enum-params",
                "algebra": alg.label(),
                "r": format!("{}/{}", r.numer(), r.denom()),
                "q": q,
                "count": pts.len(),
                "rows": pts,
            }))?;
            Ok(true)
        }
        Cmd::Volume {
            algebra,
            q,
            k,
            formula_file,
            mode,
            samples,
            seed,
        } => {
            let alg = AlgebraType::parse(&algebra)?;
            let fld = LocalField::base(q);
            let src = std::fs::read_to_string(&formula_file).map_err(|e| {
                Error::InvalidArgument(format!("cannot read {formula_file:?}: {e}"))
            })?;
            let f = match pasdsl::parse(&src) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("{e}");
                    return Err(e);
                }
            };
            let mode = match mode.as_str() {
                "exhaustive" => VolumeMode::Exhaustive,
                "montecarlo" => VolumeMode::MonteCarlo { samples, seed },
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown mode {other} (exhaustive or montecarlo)"
                    )))
                }
            };
            let rep = volume(&f, alg, &fld, k, mode)?;
            match rep.samples {
                Some(n) => println!(
                    "volume ~ [{}, {}] ({} of {} samples true, {} unknown, radius {:.4})",
                    rep.lower,
                    rep.upper,
                    rep.true_count,
                    n,
                    rep.unknown_count,
                    rep.confidence_radius.unwrap_or(0.0)
                ),
                None => println!(
                    "volume in [{}, {}] ({} of {} true, {} unknown)",
                    rep.lower, rep.upper, rep.true_count, rep.total, rep.unknown_count
                ),
            }
            output.emit(serde_json::to_value(&rep).expect("serializable"))?;
            Ok(true)
        }
        Cmd::FlCheck { pair, r, q, k } => {
            let r = parse_slope(&r)?;
            if !r.is_integer() || r.to_integer() != 0 {
                return Err(Error::Unsupported(
                    "the normalized identity check runs at r = 0".into(),
                ));
            }
            let (g_lit, h_lit) = pair
                .split_once('/')
                .ok_or_else(|| Error::InvalidArgument("pair literal is g/h1[+h2]".into()))?;
            let g = AlgebraType::parse(g_lit)?;
            let (h1, h2) = match h_lit.split_once('+') {
                Some((a, b)) => (AlgebraType::parse(a)?, AlgebraType::parse(b)?),
                None => {
                    // h = g shorthand: pad with the rank-0 factor of the
                    // family the pair list expects
                    let trivial = match g.family {
                        ordlie::lie::Family::SoOdd => AlgebraType::so_odd(1),
                        _ => AlgebraType::so_even(0),
                    };
                    (AlgebraType::parse(h_lit)?, trivial)
                }
            };
            let pair = EndoscopicPair::new(g, h1, h2)?;
            let fld = LocalField::base(q);
            let report = fl_r0_check(&pair, &fld, k)?;
            for row in &report.rows {
                println!(
                    "y = {}: lhs = {}, rhs = {}, |T| = {} ... {}",
                    expr::pretty_fq_poly(&row.y.reduction()),
                    row.lhs,
                    row.rhs,
                    row.torus_order.map(|t| t.to_string()).unwrap_or_else(|| "?".into()),
                    if row.pass { "pass" } else { "FAIL" }
                );
            }
            println!(
                "negative control (dropped normalization): {}",
                if report.negative_control_failed {
                    "fails as expected"
                } else {
                    "DID NOT FAIL"
                }
            );
            let ok = report.all_pass && report.negative_control_failed;
            output.emit(serde_json::to_value(&report).expect("serializable"))?;
            Ok(ok)
        }
        Cmd::FourierCheck {
            algebra,
            q,
            trials,
            seed,
        } => {
            let alg = AlgebraType::parse(&algebra)?;
            if alg != AlgebraType::sp(2) {
                return Err(Error::Unsupported(
                    "fourier-check runs on the rank-1 quotient (sl:2)".into(),
                ));
            }
            let (inv_ok, coset_ok) = fourier_check(q, trials, seed)?;
            println!(
                "double-transform identity: {}",
                if inv_ok { "pass" } else { "FAIL" }
            );
            println!(
                "coset-indicator transform: {}",
                if coset_ok { "pass" } else { "FAIL" }
            );
            output.emit(json!({
                "command": "fourier-check",
                "q": q,
                "trials": trials,
                "seed": seed,
                "double_transform": inv_ok,
                "coset_indicator": coset_ok,
            }))?;
            Ok(inv_ok && coset_ok)
        }
        Cmd::GaussCheck { q, k } => {
            let (orbit_ok, vanish_ok, sample) = gauss_check(q, k)?;
            println!(
                "orbit-sum formula: {}",
                if orbit_ok { "pass" } else { "FAIL" }
            );
            println!(
                "vanishing off the lattice: {}",
                if vanish_ok { "pass" } else { "FAIL" }
            );
            output.emit(json!({
                "command": "gauss-check",
                "q": q,
                "K": k,
                "orbit_formula": orbit_ok,
                "vanishing": vanish_ok,
                "sample_integral": {
                    "phase_sum": sample.sum,
                    "group_size": sample.group_size,
                    "rational": sample.rational.as_ref().map(|r| format!("{r}")),
                },
            }))?;
            Ok(orbit_ok && vanish_ok)
        }
    }
}

/// Double-transform identity on random functions plus the exhaustive
/// coset-indicator identity at the (0, 0+) pair.
fn fourier_check(q: u64, trials: u32, seed: u64) -> Result<(bool, bool), Error> {
    use rand::{Rng, SeedableRng};
    let space = QuotientSpace::Hyperspecial {
        alg: AlgebraType::sp(2),
        m: 0,
        q,
    };
    let size = space.size();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut inv_ok = true;
    for _ in 0..trials {
        let mut phi = FiniteFunction::zero(space.clone());
        for v in phi.values.iter_mut() {
            *v = CycInt::from_int(q, rng.gen_range(-5..6));
        }
        let ff = finite_ft(&finite_ft(&phi));
        for idx in 0..size {
            let x = space.point(idx);
            let flip = space.index(&space.neg(&x)) as usize;
            if ff.values[idx as usize] != phi.values[flip].scale(size as i64) {
                inv_ok = false;
            }
        }
    }
    // coset indicators: the transform of 1_{Z + t g(O)} is the phase times
    // vol(t g(O)) on g(O), and zero outside. The inner sum is over
    // Y = Z + t Ybar; by additivity of the character it splits into
    // lambda<X, Z> * lambda<X, t Ybar>, so both phase tables are
    // precomputed once.
    let fld = LocalField::base(q);
    let alg = AlgebraType::sp(2);
    let mut coset_ok = true;
    let dim = alg.dim() as u32;
    let basis = ordlie::lie::algebra_basis(alg);
    // all X over t^{-1} g(O) / t g(O), remembering whether X is integral
    let mut xmats = Vec::new();
    for xcode in 0..q.pow(2 * dim) {
        let mut digits = Vec::new();
        let mut rem = xcode;
        for _ in 0..dim {
            let lowest = (rem % q) as i64;
            rem /= q;
            let next = (rem % q) as i64;
            rem /= q;
            digits.push((lowest, next));
        }
        let mut xmat = Matrix::zero_like(2, 2, &fld.zero());
        for (b, &(c_m1, c_0)) in basis.iter().zip(digits.iter()) {
            let coeff = fld.from_t_coeffs(-1, &[c_m1, c_0], None);
            let bl = b.map(|&v| fld.from_int(v));
            xmat = xmat.add(&bl.scale(&coeff));
        }
        let inside = digits.iter().all(|&(c_m1, _)| c_m1 == 0);
        xmats.push((xmat, inside));
    }
    let res_mats: Vec<Matrix<ordlie::laurent::LaurentNumber>> = (0..size)
        .map(|i| space.residue_matrix(&space.point(i)).map(|c| fld.from_prime(*c)))
        .collect();
    // phase tables lambda<X, Z> and lambda<X, t Ybar>
    let mut phase_z = vec![vec![CycInt::zero(q); size as usize]; xmats.len()];
    let mut phase_ty = vec![vec![CycInt::zero(q); size as usize]; xmats.len()];
    for (xi, (xmat, _)) in xmats.iter().enumerate() {
        for zi in 0..size as usize {
            let tr = xmat.mul(&res_mats[zi]).trace();
            phase_z[xi][zi] = lambda_char(&tr)?;
            let tr_t = xmat.mul(&res_mats[zi].scale(&fld.t_pow(1))).trace();
            phase_ty[xi][zi] = lambda_char(&tr_t)?;
        }
    }
    for zi in 0..size as usize {
        for (xi, (_, inside)) in xmats.iter().enumerate() {
            let mut acc = CycInt::zero(q);
            for yi in 0..size as usize {
                acc = acc.add(&phase_ty[xi][yi]);
            }
            let acc = acc.mul(&phase_z[xi][zi]);
            // expected: inside g(O): phase(X, Z) * |t g(O) cosets| = q^dim;
            // outside: 0
            if *inside {
                if acc != phase_z[xi][zi].scale((q as i64).pow(dim)) {
                    coset_ok = false;
                }
            } else if !acc.is_zero() {
                coset_ok = false;
            }
        }
    }
    Ok((inv_ok, coset_ok))
}

/// Orbit formula at depth 0 for all residue Y, and vanishing for Y in
/// t^{-1} g(O) \ g(O) with integral characteristic polynomial. Also
/// returns one exact integral for the report.
fn gauss_check(q: u64, k: u32) -> Result<(bool, bool, ordlie::quotfourier::GaussValue), Error> {
    let fld = LocalField::base(q);
    let alg = AlgebraType::sp(2);
    let x = LieElement::new(
        alg,
        Matrix::from_rows(vec![
            vec![fld.zero(), fld.one()],
            vec![fld.one(), fld.zero()],
        ]),
    )?;
    let space = QuotientSpace::Hyperspecial { alg, m: 0, q };
    let xbar = vec![FqElem::zero(q), FqElem::one(q), FqElem::one(q)];
    let mut orbit_ok = true;
    let mut sample = None;
    for yi in 0..space.size() {
        let ybar = space.point(yi);
        let ymat = space.residue_matrix(&ybar).map(|c| fld.from_prime(*c));
        let y = LieElement::new(alg, ymat)?;
        let gauss = gauss_integral(&x, &y, k)?;
        let (num, den) = orbit_sum(&space, &xbar, &ybar)?;
        if !gauss.equals_scaled(&num, den) {
            orbit_ok = false;
        }
        if yi == 1 {
            sample = Some(gauss);
        }
    }
    // vanishing set: Y = [[a, t^{-1} b], [t c, -a]] with b a unit
    let mut vanish_ok = true;
    for a in 0..q {
        for b in 1..q {
            for c in 0..q {
                let y = LieElement::new(
                    alg,
                    Matrix::from_rows(vec![
                        vec![
                            fld.from_int(a as i64),
                            fld.from_int(b as i64).t_shift(-1),
                        ],
                        vec![
                            fld.from_int(c as i64).t_shift(1),
                            fld.from_int(-(a as i64)),
                        ],
                    ]),
                )?;
                let gauss = gauss_integral(&x, &y, k)?;
                if !gauss.is_zero() {
                    vanish_ok = false;
                }
            }
        }
    }
    Ok((orbit_ok, vanish_ok, sample.expect("space has at least two points")))
}
