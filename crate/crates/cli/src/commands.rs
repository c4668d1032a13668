//! Command-line surface: argument parsing and dispatch. Everything printed
//! goes to the supplied writer.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand};
use cyclovortex::{classical_orbit, make_params};

use crate::render::{render_density, write_arrows, write_pgm};
use crate::runner::{run_scenario, RunOptions};
use crate::{parse_config, read_snapshot, si_convert, CliError, MomentumSource};

#[derive(Parser)]
#[command(name = "cyclovortex", version, about = "Electron vortex dynamics in a uniform magnetic field")]
pub struct Cli {
    /// Skip the grid-resolution checks on initial states.
    #[arg(long, global = true)]
    pub force_grid: bool,
    /// Suppress the run summary.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Output directory, overriding the scenario's `output.dir`.
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evolve the scenario described by a config file.
    Simulate { config: PathBuf },
    /// Convert a grating-launched vortex to orbit parameters and scenario units.
    #[command(group(ArgGroup::new("momentum").required(true).args(["grating", "pc"])))]
    SiConvert {
        /// Field strength in tesla.
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        /// Grating period in metres.
        #[arg(long, allow_hyphen_values = true)]
        grating: Option<f64>,
        /// Transverse momentum in kg·m/s.
        #[arg(long, allow_hyphen_values = true)]
        pc: Option<f64>,
    },
    /// Render a WVF1 snapshot as a 16-bit PGM density image.
    Render {
        snapshot: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write `x y jx jy` current samples every N grid points.
        #[arg(long, value_name = "N")]
        arrows: Option<usize>,
    },
    /// Print the classical orbit at time t (natural units).
    Oracle {
        #[arg(long, allow_hyphen_values = true)]
        pc: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
}

fn read_text(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

/// Runs one parsed command.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut text = String::new();
    match cli.command {
        Command::Simulate { config } => {
            let scenario = parse_config(&read_text(&config)?)?;
            let opts = RunOptions {
                force_grid: cli.force_grid,
                out_dir: cli.out_dir,
            };
            let summary = run_scenario(&scenario, &opts)?;
            if !cli.quiet {
                let last = summary.report.records.last().expect("at least two records");
                text += &format!("ledger = {}\n", summary.ledger_path.display());
                text += &format!("records = {}\n", summary.report.records.len());
                text += &format!("chebyshev_order = {}\n", summary.report.plan.m_order);
                text += &format!("norm_drift_max = {:e}\n", summary.report.norm_drift_max);
                text += &format!("boundary_leak_max = {:e}\n", summary.report.boundary_leak_max);
                text += &format!("max_centroid_deviation = {:e}\n", summary.max_centroid_deviation);
                text += &format!("final_centroid = ({:e}, {:e})\n", last.centroid.0, last.centroid.1);
            }
        }
        Command::SiConvert { b, grating, pc } => {
            let source = match (grating, pc) {
                (Some(d), _) => MomentumSource::Grating(d),
                (None, Some(p)) => MomentumSource::Momentum(p),
                (None, None) => unreachable!("clap requires one of --grating/--pc"),
            };
            text += &si_convert(b, source)?.to_text();
        }
        Command::Render { snapshot, out: pgm, arrows } => {
            let file = File::open(&snapshot).map_err(|e| CliError::io(snapshot.display().to_string(), e))?;
            let snap = read_snapshot(std::io::BufReader::new(file))?;
            let pgm = pgm.unwrap_or_else(|| snapshot.with_extension("pgm"));
            let create = |p: &PathBuf| {
                File::create(p)
                    .map(BufWriter::new)
                    .map_err(|e| CliError::io(p.display().to_string(), e))
            };
            write_pgm(create(&pgm)?, &render_density(&snap.psi))
                .map_err(|e| CliError::io(pgm.display().to_string(), e))?;
            if let Some(stride) = arrows {
                let path = pgm.with_extension("arrows.txt");
                write_arrows(create(&path)?, &snap.psi, &make_params(snap.b_field)?, stride)?;
            }
            if !cli.quiet {
                text += &format!("wrote {}\n", pgm.display());
            }
        }
        Command::Oracle { pc, b, t } => {
            let params = make_params(b)?;
            let orbit = classical_orbit(pc, &params)?;
            let (x, y) = orbit.position(t);
            let (vx, vy) = orbit.velocity(t);
            text += &format!("omega_c = {:.16e}\n", orbit.omega_c);
            text += &format!("period = {:.16e}\n", params.cyclotron_period());
            text += &format!("sigma = {:.16e}\n", orbit.sigma);
            text += &format!("y0 = {:.16e}\n", orbit.y0);
            text += &format!("x = {x:.16e}\n");
            text += &format!("y = {y:.16e}\n");
            text += &format!("vx = {vx:.16e}\n");
            text += &format!("vy = {vy:.16e}\n");
            text += &format!("rho0 = {:.16e}\n", orbit.rho0_analytic(t));
            text += &format!("l_cyclo_lab = {:.16e}\n", orbit.l_cyclo_lab(t));
            text += &format!("l_cyclo_centred = {:.16e}\n", orbit.l_cyclo_centred);
        }
    }
    out.write_all(text.as_bytes()).map_err(|e| CliError::io("stdout", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exit;
    use crate::runner::{column, read_ledger, LEDGER_COLUMNS};

    const SMALL: &str = "grid.n = 80\ngrid.length = 20\nfield.b = 1\n";

    fn invoke(args: &[&str]) -> Result<String, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("cyclovortex").chain(args.iter().copied()))
            .expect("arguments parse");
        let mut out = Vec::new();
        execute(cli, &mut out)?;
        Ok(String::from_utf8(out).unwrap())
    }

    fn code(args: &[&str]) -> i32 {
        invoke(args).map_or_else(|e| e.exit_code(), |_| exit::OK)
    }

    fn value(text: &str, key: &str) -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap_or_else(|| panic!("{key} missing from {text}"))
            .parse()
            .unwrap()
    }

    #[test]
    fn si_convert_command() {
        let text = invoke(&["si-convert", "--b", "1", "--grating", "1e-7"]).unwrap();
        assert!((value(&text, "sigma_m") - 4.1356676969e-8).abs() < 1e-17);
        let by_pc = invoke(&["si-convert", "--b", "1", "--pc", "6.62607015e-27"]).unwrap();
        assert_eq!(value(&by_pc, "l_cyclo_hbar"), value(&text, "l_cyclo_hbar"));
        assert_eq!(code(&["si-convert", "--b", "-1", "--pc", "1e-27"]), exit::VALIDATION);
        // exactly one momentum source
        assert!(Cli::try_parse_from(["cyclovortex", "si-convert", "--b", "1"]).is_err());
        assert!(Cli::try_parse_from(["cyclovortex", "si-convert", "--b", "1", "--pc", "1", "--grating", "1"]).is_err());
    }

    #[test]
    fn oracle_command() {
        let text = invoke(&["oracle", "--pc", "1", "--b", "1", "--t", "3.141592653589793"]).unwrap();
        assert!(value(&text, "x").abs() < 1e-15);
        assert!((value(&text, "y") - 2.0).abs() < 1e-15);
        assert_eq!(value(&text, "l_cyclo_centred"), 1.0);
        let reversed = invoke(&["oracle", "--pc", "1", "--b", "-1", "--t", "0.5"]).unwrap();
        assert!(value(&reversed, "y") < 0.0);
        assert_eq!(code(&["oracle", "--pc", "1", "--b", "0", "--t", "1"]), exit::VALIDATION);
    }

    #[test]
    fn exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
        assert_eq!(code(&["simulate", &path("nope.cfg")]), exit::IO);

        fs::write(path("bad.cfg"), "component.ell = 1\n").unwrap();
        let err = invoke(&["simulate", &path("bad.cfg")]).unwrap_err();
        assert_eq!(err.exit_code(), exit::VALIDATION);
        assert!(err.to_string().contains("field.b"));

        fs::write(path("coarse.cfg"), "grid.n = 32\ngrid.length = 20\nfield.b = 1\ncomponent.n = 0\ntime.steps = 1\n").unwrap();
        let out_dir = path("coarse");
        let args = ["simulate", &path("coarse.cfg"), "--quiet", "--out-dir", &out_dir];
        assert_eq!(code(&args), exit::VALIDATION);
        let mut forced = args.to_vec();
        forced.push("--force-grid");
        assert_eq!(invoke(&forced).unwrap(), "");

        // a fast packet on a small box reaches the edge
        fs::write(
            path("leak.cfg"),
            format!("{SMALL}component.pc = 3\ntime.observe_every = 1\noutput.dir = {}\n", path("leak")),
        )
        .unwrap();
        let err = invoke(&["simulate", &path("leak.cfg")]).unwrap_err();
        assert_eq!(err.exit_code(), exit::NUMERICAL);
        assert!(err.to_string().contains("boundary"));
        // rows up to and including the failing observation were kept
        assert!(read_ledger(&dir.path().join("leak/ledger.csv")).unwrap().len() > 1);

        assert_eq!(code(&["render", &path("bad.cfg")]), exit::IO);
    }

    #[test]
    fn simulate_and_render() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("vortex.cfg");
        fs::write(
            &cfg,
            format!(
                "{SMALL}component.ell = 1\ncomponent.pc = 0\ntime.steps = 6\ntime.observe_every = 4\n\
                 time.snapshot_every = 3\noutput.write_snapshots = true\noutput.write_images = true\n"
            ),
        )
        .unwrap();
        let out_dir = dir.path().join("run");
        let text = invoke(&["simulate", cfg.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]).unwrap();
        assert_eq!(value(&text, "records"), 3.0);

        let csv = fs::read_to_string(out_dir.join("ledger.csv")).unwrap();
        assert_eq!(csv.lines().next().unwrap(), LEDGER_COLUMNS.join(","));
        let rows = read_ledger(&out_dir.join("ledger.csv")).unwrap();
        assert_eq!(rows.len(), 3); // steps 0, 4, 6
        assert!(rows.iter().all(|r| r.len() == 20));
        // stationary state: constant centroid and kinetic angular momentum
        for r in &rows {
            assert!(r[column("x")].abs() < 1e-10 && r[column("y")].abs() < 1e-10);
            assert!((r[column("l_kin")] - rows[0][column("l_kin")]).abs() < 1e-10);
            assert!(r[column("res_ledger")] < 1e-9);
        }
        for step in [0, 3, 6] {
            assert!(out_dir.join(format!("psi_{step:06}.wvf")).exists());
            assert!(out_dir.join(format!("density_{step:06}.pgm")).exists());
        }

        let snap = out_dir.join("psi_000006.wvf");
        let pgm = dir.path().join("final.pgm");
        let args = ["render", snap.to_str().unwrap(), "--out", pgm.to_str().unwrap(), "--arrows", "8", "--quiet"];
        assert_eq!(invoke(&args).unwrap(), "");
        let bytes = fs::read(&pgm).unwrap();
        let header = b"P5\n80 80\n65535\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(bytes.len(), header.len() + 2 * 80 * 80);
        // vortex core at grid point (40, 40), which is image row 79 − 40
        let at = header.len() + 2 * ((79 - 40) * 80 + 40);
        assert_eq!(&bytes[at..at + 2], &[0, 0]);
        let arrows = fs::read_to_string(dir.path().join("final.arrows.txt")).unwrap();
        assert_eq!(arrows.lines().count(), 1 + 10 * 10);

        let snapshot = read_snapshot(File::open(&snap).unwrap()).unwrap();
        assert!((snapshot.t - 6.0 * std::f64::consts::PI / 100.0).abs() < 1e-14);
        // default output name sits next to the snapshot
        invoke(&["render", snap.to_str().unwrap()]).unwrap();
        assert!(out_dir.join("psi_000006.pgm").exists());
    }
}
