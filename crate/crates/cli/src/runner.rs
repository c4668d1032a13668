//! Runs a scenario: builds the state, evolves it and streams the ledger,
//! snapshots and images to the output directory.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use cyclovortex::{
    classical_orbit, evolve_with, make_grid, make_params, superpose, BuildOptions, EvolutionReport,
    Hamiltonian, ObservableRecord, PhysicsParams, WaveField,
};

use crate::config::Scenario;
use crate::render::{render_density, write_pgm};
use crate::snapshot::write_snapshot;
use crate::CliError;

pub const LEDGER_COLUMNS: [&str; 20] = [
    "t",
    "norm",
    "x",
    "y",
    "rho0",
    "l_can",
    "l_kin",
    "i_total",
    "i_prime",
    "l_dia",
    "l_cyclo",
    "mu_dia",
    "orbit_cx",
    "orbit_cy",
    "x_analytic",
    "y_analytic",
    "rho0_analytic",
    "res_parallel_axis",
    "res_ledger",
    "boundary_leak",
];

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub force_grid: bool,
    /// Overrides `output.dir`.
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub ledger_path: PathBuf,
    pub report: EvolutionReport,
    pub initial_state: WaveField,
    /// Largest |centroid − analytic centroid| over the records.
    pub max_centroid_deviation: f64,
    pub snapshots: Vec<PathBuf>,
}

/// Centre-of-mass oracle for the whole state: the |w|²-weighted mean of the
/// component orbits.
pub struct AnalyticTrack {
    orbits: Vec<(f64, cyclovortex::ClassicalOrbit)>,
}

impl AnalyticTrack {
    pub fn new(scenario: &Scenario, params: &PhysicsParams) -> Result<Self, CliError> {
        let total: f64 = scenario.components.iter().map(|c| c.weight.norm_sqr()).sum();
        let orbits = scenario
            .components
            .iter()
            .map(|c| Ok((c.weight.norm_sqr() / total, classical_orbit(c.p_c, params)?)))
            .collect::<Result<_, CliError>>()?;
        Ok(Self { orbits })
    }

    pub fn position(&self, t: f64) -> (f64, f64) {
        self.orbits.iter().fold((0.0, 0.0), |(x, y), (w, o)| {
            let (ox, oy) = o.position(t);
            (x + w * ox, y + w * oy)
        })
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn csv_header() -> String {
    LEDGER_COLUMNS.join(",")
}

pub fn csv_row(r: &ObservableRecord, analytic: (f64, f64)) -> String {
    let rho0_analytic = analytic.0.hypot(analytic.1);
    [
        r.t,
        r.norm,
        r.centroid.0,
        r.centroid.1,
        r.rho0,
        r.l_can,
        r.l_kin,
        r.i_total,
        r.i_prime,
        r.l_dia,
        r.l_cyclo,
        r.mu_dia,
        r.orbit_centre.0,
        r.orbit_centre.1,
        analytic.0,
        analytic.1,
        rho0_analytic,
        r.res_parallel_axis,
        r.res_ledger,
        r.boundary_leak,
    ]
    .iter()
    .map(|v| format!("{v:.16e}"))
    .collect::<Vec<_>>()
    .join(",")
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path.display().to_string(), e))
}

pub fn prepare(scenario: &Scenario, opts: &RunOptions) -> Result<(PhysicsParams, Hamiltonian, WaveField), CliError> {
    let params = make_params(scenario.b_field)?;
    let n = scenario.grid.n;
    let grid = make_grid(n, n, scenario.grid.length, scenario.grid.length)?;
    let psi = superpose(
        &scenario.components,
        &grid,
        &params,
        BuildOptions { force: opts.force_grid },
    )?;
    let ham = Hamiltonian::for_params(&grid, &params)?;
    Ok((params, ham, psi))
}

pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let (params, ham, psi0) = prepare(scenario, opts)?;
    let track = AnalyticTrack::new(scenario, &params)?;
    let out_dir = opts.out_dir.clone().unwrap_or_else(|| scenario.output.dir.clone());
    fs::create_dir_all(&out_dir).map_err(|e| CliError::io(out_dir.display().to_string(), e))?;
    let ledger_path = out_dir.join("ledger.csv");
    let mut ledger = create(&ledger_path)?;
    writeln!(ledger, "{}", csv_header()).map_err(|e| CliError::io("ledger.csv", e))?;

    let time = &scenario.time;
    let out = &scenario.output;
    let mut snapshots = Vec::new();
    let mut max_dev: f64 = 0.0;

    let imaging = out.write_snapshots || out.write_images;
    // The evolution stops at every ledger row and every snapshot.
    let cadence = if imaging { gcd(time.observe_every, time.snapshot_every) } else { time.observe_every };
    let mut rows = Vec::new();
    let mut io_error: Option<CliError> = None;
    let mut write = |step: usize, r: &ObservableRecord, psi: &WaveField| -> Result<(), CliError> {
        let last = step == time.steps;
        if step.is_multiple_of(time.observe_every) || last {
            let analytic = track.position(r.t);
            max_dev = max_dev.max((r.centroid.0 - analytic.0).hypot(r.centroid.1 - analytic.1));
            writeln!(ledger, "{}", csv_row(r, analytic)).map_err(|e| CliError::io("ledger.csv", e))?;
            rows.push(*r);
        }
        if !step.is_multiple_of(time.snapshot_every) && !last {
            return Ok(());
        }
        if out.write_snapshots {
            let path = out_dir.join(format!("psi_{step:06}.wvf"));
            write_snapshot(create(&path)?, psi, r.t, params.b_field)
                .map_err(|e| CliError::io(path.display().to_string(), e))?;
            snapshots.push(path);
        }
        if out.write_images {
            let path = out_dir.join(format!("density_{step:06}.pgm"));
            write_pgm(create(&path)?, &render_density(psi))
                .map_err(|e| CliError::io(path.display().to_string(), e))?;
        }
        Ok(())
    };
    let mut observer = |step: usize, r: &ObservableRecord, psi: &WaveField| {
        write(step, r, psi).map_err(|e| {
            io_error = Some(e);
            cyclovortex::Error::InvalidArgument("output failed".into())
        })
    };

    let result = evolve_with(&psi0, &ham, &params, time.dt, time.steps, cadence, &mut observer);
    ledger.flush().map_err(|e| CliError::io("ledger.csv", e))?;
    if let Some(e) = io_error {
        return Err(e);
    }
    let mut report = result?;
    report.records = rows;

    Ok(RunSummary {
        out_dir,
        ledger_path,
        report,
        initial_state: psi0,
        max_centroid_deviation: max_dev,
        snapshots,
    })
}

/// Reads a ledger written by [`run_scenario`] back as rows of numbers.
pub fn read_ledger(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    let mut lines = text.lines();
    if lines.next() != Some(csv_header().as_str()) {
        return Err(CliError::io(path.display().to_string(), std::io::Error::other("unexpected header")));
    }
    lines
        .map(|l| {
            l.split(',')
                .map(|v| v.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::io(path.display().to_string(), std::io::Error::other(e)))
        })
        .collect()
}

pub fn column(name: &str) -> usize {
    LEDGER_COLUMNS
        .iter()
        .position(|c| *c == name)
        .unwrap_or_else(|| panic!("no ledger column {name}"))
}
