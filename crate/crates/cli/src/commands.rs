use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use minuncert_core::gaussian::{
    fock_moments, gaussian_mixture_example, gaussian_moments_exact, quadrature::quadrature_moments,
    FockTruncation, GaussianParams, MomentTable,
};
use minuncert_core::spin::{angular_momentum_ops, SpinSpace};
use minuncert_core::{
    scan_lambda, search_saturating_state, uncertainty_report, FinderOptions, SaturatingFamily,
    SearchConfig, SearchResult, UncertaintyReport,
};
use serde::{Deserialize, Serialize};

use crate::bundle::{render_table, verify_paper, VerifyOptions};
use crate::cli::{FindArgs, GaussianArgs, GaussianFlags, OutputArgs, SearchArgs, SpinArgs, VerifyArgs};
use crate::error::{CliError, Verdict};
use crate::io::{read_observable, to_json, write_json, write_matrix};

/// Largest disagreement tolerated between the three Gaussian moment routes.
pub const ORACLE_TOL: f64 = 1e-8;

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
}

/// Writes `value` to `--out` if given; prints JSON or `table` otherwise.
fn deliver<T: Serialize>(
    out: &mut dyn Write,
    output: &OutputArgs,
    value: &T,
    table: impl FnOnce() -> String,
) -> Result<(), CliError> {
    if let Some(path) = &output.out {
        write_json(path, value)?;
    }
    if output.json {
        emit(out, &(to_json(value)? + "\n"))
    } else {
        emit(out, &table())
    }
}

fn gaussian_params(flags: &GaussianFlags) -> Result<GaussianParams, CliError> {
    Ok(GaussianParams::new(flags.a, flags.kappa, flags.hbar)?)
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<Verdict, CliError> {
    let opts = VerifyOptions {
        saturation_tol: args.saturation_tol,
        gaussian: gaussian_params(&args.gaussian)?,
        fock_dim: args.gaussian.fock_dim,
    };
    let bundle = verify_paper(&opts)?;
    deliver(out, &args.output, &bundle, || render_table(&bundle))?;
    Ok(Verdict::from_pass(bundle.pass))
}

pub fn find(args: &FindArgs, out: &mut dyn Write) -> Result<Verdict, CliError> {
    let a = read_observable(&args.pair.a)?;
    let b = read_observable(&args.pair.b)?;
    if a.dim() != b.dim() {
        return Err(CliError::Usage(format!(
            "A is {0}x{0} but B is {1}x{1}",
            a.dim(),
            b.dim()
        )));
    }
    let opts = FinderOptions {
        saturation_tol: args.saturation_tol,
        ..FinderOptions::default()
    };
    let families: Vec<SaturatingFamily> = scan_lambda(&a, &b, &args.lambda, &opts)?;
    match &args.out {
        Some(path) => {
            write_json(path, &families)?;
            let nontrivial = families.iter().filter(|f| f.is_nontrivial()).count();
            emit(
                out,
                &format!(
                    "{} families ({nontrivial} nontrivial) written to {}\n",
                    families.len(),
                    path.display()
                ),
            )?;
        }
        None => emit(out, &(to_json(&families)? + "\n"))?,
    }
    // an empty list is a finding, not a failure
    Ok(Verdict::Pass)
}

fn ci_mode() -> bool {
    std::env::var("CI").is_ok_and(|v| !v.is_empty() && v != "0" && v != "false")
}

pub fn search(args: &SearchArgs, out: &mut dyn Write) -> Result<Verdict, CliError> {
    let seed = match args.seed {
        Some(seed) => seed,
        None if ci_mode() => {
            return Err(CliError::Usage("--seed is required when CI is set".into()))
        }
        None => SearchConfig::default().seed,
    };
    let defaults = SearchConfig::default();
    let cfg = SearchConfig {
        rank: args.rank,
        purity_max: args.purity_max,
        gap_tol: args.gap_tol,
        max_iters: args.max_iters.unwrap_or(defaults.max_iters),
        seed,
        ..defaults
    };
    let a = read_observable(&args.pair.a)?;
    let b = read_observable(&args.pair.b)?;
    if a.dim() != b.dim() {
        return Err(CliError::Usage(format!(
            "A is {0}x{0} but B is {1}x{1}",
            a.dim(),
            b.dim()
        )));
    }
    if cfg.rank == 1 {
        return Err(CliError::Usage(
            "--rank 1 gives pure states only (purity 1), which no purity cap below 1 admits".into(),
        ));
    }
    cfg.validate(a.dim()).map_err(|e| CliError::Usage(e.to_string()))?;
    let result: SearchResult = search_saturating_state(&a, &b, &cfg)?;
    let text = to_json(&result)? + "\n";
    match &args.out {
        Some(path) => {
            write_json(path, &result)?;
            emit(
                out,
                &format!(
                    "converged: {} after {} steps, gap {:e}, purity {:.6}; written to {}\n",
                    result.converged,
                    result.iterations,
                    result.report.gap,
                    result.report.purity,
                    path.display()
                ),
            )?;
        }
        None => emit(out, &text)?,
    }
    Ok(Verdict::from_pass(result.converged))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianDump {
    pub params: GaussianParams,
    pub truncation: FockTruncation,
    pub exact: MomentTable,
    pub quadrature: MomentTable,
    pub fock: MomentTable,
    pub quadrature_deviation: f64,
    pub fock_deviation: f64,
    /// Report of the Fock-space mixture.
    pub report: UncertaintyReport,
    pub expected_purity: f64,
    pub agree: bool,
}

pub fn gaussian_dump(flags: &GaussianFlags, nodes: usize) -> Result<GaussianDump, CliError> {
    let params = gaussian_params(flags)?;
    let truncation = FockTruncation::new(flags.fock_dim, 8.min(flags.fock_dim.saturating_sub(1)))?;
    let exact = gaussian_moments_exact(&params);
    let quadrature = quadrature_moments(&params, nodes)?;
    let fock = fock_moments(&params, &truncation)?;
    let (a, b, rho) = gaussian_mixture_example(&params, &truncation)?;
    let report = uncertainty_report(&a, &b, &rho, minuncert_core::tolerance::SATURATION_TOL)?;
    let quadrature_deviation = exact.max_abs_diff(&quadrature);
    let fock_deviation = exact.max_abs_diff(&fock);
    Ok(GaussianDump {
        params,
        truncation,
        exact,
        quadrature,
        fock,
        quadrature_deviation,
        fock_deviation,
        report,
        expected_purity: params.mixture_purity(),
        agree: quadrature_deviation <= ORACLE_TOL
            && fock_deviation <= ORACLE_TOL
            && fock.max_abs_diff(&quadrature) <= ORACLE_TOL,
    })
}

fn gaussian_table(d: &GaussianDump) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "a = {}, kappa = {}, hbar = {}, {} Fock states",
        d.params.a, d.params.kappa, d.params.hbar, d.truncation.n_max
    );
    let _ = writeln!(
        s,
        "{:<11} {:>16} {:>16} {:>16} {:>16} {:>16}",
        "route", "(δA)²", "(δB)²", "δA·δB", "½|<i[A,B]>|", "gap"
    );
    for (name, t) in [("closed", &d.exact), ("quadrature", &d.quadrature), ("fock", &d.fock)] {
        let m = &t.mixture;
        let _ = writeln!(
            s,
            "{:<11} {:>16.12} {:>16.12} {:>16.12} {:>16.12} {:>16.3e}",
            name,
            m.variance_a(),
            m.variance_b(),
            m.product(),
            m.bound(),
            m.gap()
        );
    }
    let _ = writeln!(
        s,
        "purity {:.12} (closed form {:.12}); deviation quadrature {:.1e}, fock {:.1e}: {}",
        d.report.purity,
        d.expected_purity,
        d.quadrature_deviation,
        d.fock_deviation,
        if d.agree { "agree" } else { "DISAGREE" }
    );
    s
}

pub fn gaussian(args: &GaussianArgs, out: &mut dyn Write) -> Result<Verdict, CliError> {
    let dump = gaussian_dump(&args.gaussian, args.nodes)?;
    deliver(out, &args.output, &dump, || gaussian_table(&dump))?;
    Ok(Verdict::from_pass(dump.agree))
}

/// Row `row` of every exported spin matrix is the ket `|j, m>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowLabel {
    pub row: usize,
    pub j: f64,
    pub m: f64,
}

pub fn spin_labels(space: &SpinSpace) -> Vec<RowLabel> {
    space
        .labels()
        .iter()
        .enumerate()
        .map(|(row, l)| RowLabel {
            row,
            j: l.j(),
            m: l.m(),
        })
        .collect()
}

pub fn export_spin(space: &SpinSpace, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let (jx, jy, jz) = angular_momentum_ops(space);
    for (name, op) in [("jx", &jx), ("jy", &jy), ("jz", &jz)] {
        write_matrix(&dir.join(format!("{name}.json")), op.matrix())?;
    }
    write_json(&dir.join("labels.json"), &spin_labels(space))
}

pub fn spin(args: &SpinArgs, out: &mut dyn Write) -> Result<Verdict, CliError> {
    let space = SpinSpace::new(&args.j).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(dir) = &args.out {
        export_spin(&space, dir)?;
    }
    let labels = spin_labels(&space);
    if args.json {
        emit(out, &(to_json(&labels)? + "\n"))?;
    } else {
        let mut s = format!("dimension {}\nrow      j      m\n", space.dim());
        for l in &labels {
            let _ = writeln!(s, "{:>3} {:>6} {:>6}", l.row, l.j, l.m);
        }
        if let Some(dir) = &args.out {
            let _ = writeln!(s, "wrote jx.json, jy.json, jz.json, labels.json to {}", dir.display());
        }
        emit(out, &s)?;
    }
    Ok(Verdict::Pass)
}
