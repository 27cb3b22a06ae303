use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use mixsmooth::approx::{angle_surrogate_on, direct_residual, jackson_kernel};
use mixsmooth::grid::auto_grid;
use mixsmooth::index::MultiRange;
use mixsmooth::seqnorms::seq_norm_from_blocks;
use mixsmooth::smoothness::{initial_nu_max, mixed_modulus_on, seminorm_on, ModulusGrid};
use mixsmooth::spectral::BlockGrid;
use mixsmooth::verify::{default_h_grid, reference_degree, Corpus, Family, GoldenWindows, Harness, VerifyConfig, CHECKS};
use mixsmooth::{Error, LorentzParams64, PolyNorm64, SmoothParams64, TrigPoly64};
use serde_json::json;

use crate::fnspec;
use crate::{
    AngleArgs, BlocksArgs, Command, FnInput, LorentzArgs, ModulusArgs, NormArgs, NormKind, ReportFormat, SweepArgs, SweepKind,
    VerifyArgs,
};

/// Why a command stopped; each variant owns an exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numeric(String),
    Verdict(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Verdict(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numeric(m) | Failure::Verdict(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TailNotConverged { .. } | Error::Inconclusive { .. } => Failure::Numeric(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Config(format!("{}: {e}", path.display()))
}

pub fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Norm(a) => norm(a),
        Command::Blocks(a) => blocks(a),
        Command::Modulus(a) => modulus(a),
        Command::Angle(a) => angle(a),
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify(a),
    }
}

fn load_fn(spec: Option<&str>, file: Option<&Path>) -> Outcome<TrigPoly64> {
    let f = match (spec, file) {
        (Some(s), _) => fnspec::parse(s)?,
        (None, Some(path)) => TrigPoly64::from_json(&fs::read_to_string(path).map_err(|e| io_err(path, e))?)?,
        (None, None) => return Err(Failure::Config("no function given; use --fn or --fn-file".into())),
    };
    if !f.is_real(1e-12) {
        return Err(Failure::Config("function is not real-valued (coefficients are not Hermitian)".into()));
    }
    f.check_degree_cap(mixsmooth::poly::DEFAULT_DEGREE_CAP)?;
    Ok(f)
}

fn input(i: &FnInput) -> Outcome<TrigPoly64> {
    load_fn(i.spec.as_deref(), i.fn_file.as_deref())
}

fn per_axis<T: Copy>(values: &[T], dim: usize, name: &str) -> Outcome<Vec<T>> {
    match values.len() {
        1 => Ok(vec![values[0]; dim]),
        n if n == dim => Ok(values.to_vec()),
        n => Err(Failure::Config(format!("--{name} has {n} values for a {dim}-dimensional function"))),
    }
}

fn shape_for(f: &TrigPoly64, grid: &[usize]) -> Outcome<Vec<usize>> {
    if grid.is_empty() {
        Ok(auto_grid(f.degree()))
    } else {
        per_axis(grid, f.dim(), "grid")
    }
}

fn lorentz(a: &LorentzArgs) -> Outcome<LorentzParams64> {
    Ok(LorentzParams64::new(a.p, a.tau)?)
}

fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn axis_cols(prefix: &str, dim: usize) -> String {
    (1..=dim).map(|j| format!("{prefix}{j}")).collect::<Vec<_>>().join(",")
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn norm(a: NormArgs) -> Outcome {
    let f = input(&a.input)?;
    let lp = lorentz(&a.lorentz)?;
    let m = f.dim();
    let shape = shape_for(&f, &a.lorentz.grid)?;
    let doubled: Vec<usize> = shape.iter().map(|n| 2 * n).collect();
    let value_on = |shape: &[usize]| -> Outcome<f64> {
        let pn = PolyNorm64::new(shape, lp)?;
        match a.kind {
            NormKind::Lorentz => Ok(pn.norm(&f)?),
            NormKind::SeqB | NormKind::BoldB => {
                let sp = SmoothParams64::new(a.theta, per_axis(&a.b, m, "b")?, vec![a.k; m])?;
                f.require_ring_member()?;
                if a.kind == NormKind::SeqB {
                    let bg = BlockGrid::new(&f, shape)?;
                    Ok(seq_norm_from_blocks(&bg.block_norms(&lp), &sp, None))
                } else {
                    let s = seminorm_on(&f, &sp, &pn, a.nu_max, a.h_grid)?;
                    Ok(pn.norm(&f)? + s.value)
                }
            }
        }
    };
    let value = value_on(&shape)?;
    let fine = value_on(&doubled)?;
    let delta = if fine == 0.0 { (fine - value).abs() } else { ((fine - value) / fine).abs() };
    if !value.is_finite() {
        return Err(Failure::Numeric(format!("norm evaluated to {value}")));
    }
    println!("{value:.12} ± {delta:.3e}");
    if let Some(path) = &a.json {
        let kind = match a.kind {
            NormKind::Lorentz => "lorentz",
            NormKind::SeqB => "seqB",
            NormKind::BoldB => "boldB",
        };
        let doc = json!({
            "kind": kind,
            "function": f.to_json_value(),
            "p": a.lorentz.p,
            "tau": a.lorentz.tau,
            "theta": a.theta,
            "b": per_axis(&a.b, m, "b")?,
            "k": a.k,
            "grid": shape,
            "value": value,
            "grid_delta": delta,
        });
        let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
        fs::write(path, text).map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

fn blocks(a: BlocksArgs) -> Outcome {
    let f = input(&a.input)?;
    let lp = lorentz(&a.lorentz)?;
    let bg = BlockGrid::new(&f, &shape_for(&f, &a.lorentz.grid)?)?;
    let mut out = format!("{},norm\n", axis_cols("s", f.dim()));
    for (s, v) in bg.block_norms(&lp) {
        writeln!(out, "{},{v:e}", join(&s.0)).unwrap();
    }
    emit(a.output.as_deref(), &out)
}

fn modulus(a: ModulusArgs) -> Outcome {
    let f = input(&a.input)?;
    let lp = lorentz(&a.lorentz)?;
    let m = f.dim();
    let pn = PolyNorm64::new(&shape_for(&f, &a.lorentz.grid)?, lp)?;
    let nu_max = a.nu_max.unwrap_or_else(|| initial_nu_max(&f.effective_degree()));
    let grid = ModulusGrid::build(&f, &vec![a.k; m], pn, nu_max, a.h_grid)?;
    let mut out = format!("{},{},omega,tolerance\n", axis_cols("nu", m), axis_cols("t", m));
    for (nu, t, w) in grid.rows() {
        writeln!(out, "{},{},{w:e},{:e}", join(&nu), join(&t), grid.tolerance(&nu)).unwrap();
    }
    emit(a.output.as_deref(), &out)
}

fn angle_row(f: &TrigPoly64, l: &[usize], k: u32, pn: &PolyNorm64) -> Outcome<(f64, f64)> {
    let y = angle_surrogate_on(f, l, pn)?;
    let kernel = pn.norm(&direct_residual(f, l, &vec![k; f.dim()], None)?)?;
    Ok((y, kernel))
}

fn angle(a: AngleArgs) -> Outcome {
    let f = input(&a.input)?;
    let lp = lorentz(&a.lorentz)?;
    let m = f.dim();
    let pn = PolyNorm64::new(&shape_for(&f, &a.lorentz.grid)?, lp)?;
    let hi: Vec<i64> = match a.l_max {
        Some(l) => vec![l as i64; m],
        None => f.degree().iter().map(|&n| n as i64).collect(),
    };
    let mut out = format!("{},y,kernel\n", axis_cols("l", m));
    for l in MultiRange::new(vec![0; m], hi).iter() {
        let l: Vec<usize> = l.into_iter().map(|x| x as usize).collect();
        let (y, kernel) = angle_row(&f, &l, a.k, &pn)?;
        writeln!(out, "{},{y:e},{kernel:e}", join(&l)).unwrap();
    }
    emit(a.output.as_deref(), &out)
}

fn sweep(a: SweepArgs) -> Outcome {
    let ls: Vec<usize> = if a.step == 0 {
        return Err(Failure::Config("--step must be at least 1".into()));
    } else {
        (a.from..=a.to).step_by(a.step).collect()
    };
    let out = match a.kind {
        SweepKind::KernelMoment => {
            if !(a.mu >= 0.0) {
                return Err(Failure::Config("--mu must be non-negative".into()));
            }
            let mut out = String::from("l,mass,moment\n");
            for l in ls {
                let kernel = jackson_kernel::<f64>(l, a.k)?;
                let mass = kernel.mass_by_quadrature(4 * kernel.degree() + 16);
                writeln!(out, "{l},{mass:e},{:e}", kernel.moment(a.mu)).unwrap();
            }
            out
        }
        SweepKind::Modulus => {
            let f = load_fn(a.spec.as_deref(), a.fn_file.as_deref())?;
            let pn = PolyNorm64::new(&auto_grid(f.degree()), LorentzParams64::new(a.p, a.tau)?)?;
            let k = vec![a.k; f.dim()];
            let mut out = String::from("t,omega,tolerance\n");
            for i in 1..=a.points {
                let t = a.t_max * i as f64 / a.points as f64;
                let w = mixed_modulus_on(&f, &vec![t; f.dim()], &k, &pn, a.h_grid)?;
                writeln!(out, "{t:e},{:e},{:e}", w.value, w.tolerance).unwrap();
            }
            out
        }
        SweepKind::Angle => {
            let f = load_fn(a.spec.as_deref(), a.fn_file.as_deref())?;
            let pn = PolyNorm64::new(&auto_grid(f.degree()), LorentzParams64::new(a.p, a.tau)?)?;
            let mut out = String::from("l,y,kernel\n");
            for l in ls {
                let (y, kernel) = angle_row(&f, &vec![l; f.dim()], a.k, &pn)?;
                writeln!(out, "{l},{y:e},{kernel:e}").unwrap();
            }
            out
        }
    };
    emit(a.output.as_deref(), &out)
}

fn verify(a: VerifyArgs) -> Outcome {
    if a.list {
        for c in CHECKS {
            println!("{c}");
        }
        return Ok(());
    }
    let checks: Vec<&str> = if a.check == "all" {
        CHECKS.to_vec()
    } else {
        match CHECKS.iter().find(|&&c| c == a.check) {
            Some(&c) => vec![c],
            None => return Err(Error::UnknownCheck(a.check.clone()).into()),
        }
    };
    let families = a.families.iter().map(|s| Family::parse(s.trim())).collect::<Result<Vec<_>, _>>()?;
    let mut config = VerifyConfig::reference(a.m, a.seed);
    config.max_degree = a.max_degree.unwrap_or_else(|| reference_degree(a.m));
    config.families = families;
    config.k = a.k;
    config.h_grid = a.h_grid.unwrap_or_else(|| default_h_grid(a.m));
    config.probe = !a.no_probe;
    config.validate()?;

    let mut harness = match &a.corpus {
        Some(path) => {
            if a.freeze_golden.is_some() {
                return Err(Failure::Config("--freeze-golden needs the generated corpus".into()));
            }
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let corpus: Corpus = serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            Harness::with_corpus(config, corpus)?
        }
        None => Harness::new(config)?,
    };
    if let Some(path) = &a.golden {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        harness.set_golden(GoldenWindows::from_json(&text)?);
    }

    fs::create_dir_all(&a.out).map_err(|e| io_err(&a.out, e))?;
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    let mut failed = Vec::new();
    for check in checks {
        match harness.run(check) {
            Ok(report) => {
                println!("{}", report.summary());
                for r in &report.verdict.reasons {
                    println!("  {r}");
                }
                if matches!(a.format, ReportFormat::Json | ReportFormat::Both) {
                    write_file(&a.out.join(format!("{check}.json")), &report.to_json())?;
                }
                if matches!(a.format, ReportFormat::Csv | ReportFormat::Both) {
                    write_file(&a.out.join(format!("{check}.csv")), &report.to_csv())?;
                }
                if !report.verdict.pass {
                    failed.push(check);
                }
                reports.push(report);
            }
            Err(e) => {
                println!("{check} ERROR: {e}");
                errors.push(Failure::from(e));
            }
        }
    }
    if let Some(path) = &a.freeze_golden {
        let mut golden = match fs::read_to_string(path) {
            Ok(text) => GoldenWindows::from_json(&text)?,
            Err(_) => GoldenWindows::default(),
        };
        golden.freeze(&harness.config().fingerprint(), &reports);
        write_file(path, &golden.to_json())?;
    }
    if let Some(worst) = errors.into_iter().min_by_key(Failure::code) {
        return Err(worst);
    }
    if !failed.is_empty() {
        return Err(Failure::Verdict(format!("failed verdicts: {}", failed.join(", "))));
    }
    Ok(())
}

fn write_file(path: &PathBuf, text: &str) -> Outcome {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}
