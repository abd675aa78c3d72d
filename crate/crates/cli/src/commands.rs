//! Subcommand implementations.

use std::f64::consts::TAU;
use std::path::PathBuf;

use polariscope::angular::HalfInt;
use polariscope::atomdata::{load_experiment, parse_quantity, Dimension, ExperimentConfig, RESONANCE_TOLERANCE};
use polariscope::measurement::{
    closed_form_variance, coherent_prior_variance, filter_estimate, measurement_strength, snr_squared_from_od,
    snr_squeezing, PhotocurrentSimulation, SNR_TOLERANCE, VALIDITY_FRACTION,
};
use polariscope::polarizability::{
    alpha_coefficients, equivalence_residual, irreducible_tensor_operator, Rank, Transition, EQUIVALENCE_TOLERANCE,
};
use polariscope::semiclassical::{
    detuning_scan, fit_log_log_slope, signed_peak, simulate_trajectory, zero_crossing_frequency, PathSpec,
};
use serde_json::Value;

use crate::output::{emit, RunReport, Table};
use crate::Failure;

const FILTER_CHECK_TOLERANCE: f64 = 1e-12;

pub struct Context {
    cfg: ExperimentConfig,
    config_label: String,
    out_dir: PathBuf,
}

impl Context {
    pub fn load(config: Option<PathBuf>, out_dir: PathBuf) -> Result<Self, Failure> {
        let (cfg, config_label) = match config {
            Some(path) => (load_experiment(&path)?, path.display().to_string()),
            None => (ExperimentConfig::reference(), "builtin:reference".to_owned()),
        };
        Ok(Context { cfg, config_label, out_dir })
    }

    fn report(&self) -> RunReport {
        RunReport::new(self.cfg.simulation.seed)
    }

    fn finish(&self, command: &str, table: &Table, report: &RunReport) -> Result<(), Failure> {
        let manifest = emit(&self.out_dir, command, &self.config_label, table, report)?;
        println!("{}", manifest.display());
        Ok(())
    }
}

/// JSON number, or `null` for values that have none.
fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub fn decompose(ctx: &Context, spin: Option<&str>) -> Result<(), Failure> {
    let (transition, f, source) = match spin {
        Some(text) => {
            let f: HalfInt = text.parse()?;
            if f.twice() < 1 {
                return Err(usage(format!("--spin must be at least 1/2, got {f}")));
            }
            (Transition::d2(f - HalfInt::HALF), f, "synthetic D2 line".to_owned())
        }
        None => (ctx.cfg.species.transition(), ctx.cfg.species.ground_f, ctx.cfg.species.name.clone()),
    };
    let mut table = Table::new(&["f_prime", "alpha0", "alpha1", "alpha2", "tensor_norm", "residual"]);
    let mut worst = 0.0f64;
    let mut sums = [0.0; 3];
    for fp in transition.excited_levels() {
        let a = alpha_coefficients(&transition, f, fp)?.as_array();
        let tensor_norm = Rank::Tensor
            .components()
            .map(|m| irreducible_tensor_operator(&transition, f, fp, Rank::Tensor, m).map(|t| t.matrix.norm()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let residual = equivalence_residual(&transition, f, fp)?;
        worst = worst.max(residual);
        for k in 0..3 {
            sums[k] += a[k];
        }
        table.row_labelled(&fp.to_string(), &[a[0], a[1], a[2], tensor_norm, residual]);
    }
    let mut report = ctx.report();
    report.set("source", source);
    report.set("nuclear_spin", transition.nuclear_spin.to_string());
    report.set("ground_f", f.to_string());
    report.set("alpha_sums", vec![number(sums[0]), number(sums[1]), number(sums[2])]);
    report.set("max_residual", number(worst));
    report.set("residual_tolerance", number(EQUIVALENCE_TOLERANCE));
    ctx.finish("decompose", &table, &report)?;
    if worst > EQUIVALENCE_TOLERANCE {
        return Err(Failure::Internal(format!(
            "closed-form coefficients disagree with the dyad projection by {worst:e} (tolerance {EQUIVALENCE_TOLERANCE:e}); \
             they hold only for j' = j + 1 transitions"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Measured {
    Sy,
    Sz,
}

pub fn trajectory(ctx: &Context, xy: bool, measure: Option<Measured>, samples: Option<usize>) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    let n = samples.unwrap_or(cfg.simulation.samples);
    let path = if xy { PathSpec::xy_plane(n)? } else { PathSpec::xz_plane(n)? };
    let result = simulate_trajectory(&cfg.species, &cfg.cloud, &cfg.probe, &path)?;
    let mut table = Table::new(&["path_parameter", "sy_norm", "sz_norm"]);
    for p in &result.points {
        table.row(&[p.parameter, p.sy_norm, p.sz_norm]);
    }
    let measured = measure.unwrap_or(if xy { Measured::Sz } else { Measured::Sy });
    let (name, signal, other) = match measured {
        Measured::Sy => ("sy", result.sy(), result.sz()),
        Measured::Sz => ("sz", result.sz(), result.sy()),
    };
    let mut report = ctx.report();
    report.set("path", if xy { "xy" } else { "xz" });
    report.set("measured", name);
    report.set("signed_peak", number(signed_peak(&signal)));
    report.set(
        "zero_crossing_frequency",
        zero_crossing_frequency(&result.parameters(), &signal).map_or(Value::Null, number),
    );
    report.set("other_channel_max", number(other.iter().fold(0.0f64, |m, v| m.max(v.abs()))));
    report.set("detuning_rad_s", number(cfg.probe.detuning()));
    ctx.finish("trajectory", &table, &report)
}

fn parse_detuning(text: &str) -> Result<f64, Failure> {
    parse_quantity(text, Dimension::Frequency).map_err(usage)
}

pub fn scan(
    ctx: &Context,
    from: &str,
    to: &str,
    points: usize,
    log: bool,
    samples: Option<usize>,
) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    let (a, b) = (parse_detuning(from)?, parse_detuning(to)?);
    if points == 0 {
        return Err(usage("--points must be at least 1"));
    }
    if log && (a == 0.0 || b == 0.0 || a.signum() != b.signum()) {
        return Err(usage("--log needs both ends nonzero and of the same sign"));
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let offending: Vec<String> = cfg
        .species
        .excited_levels
        .iter()
        .filter(|l| l.offset >= lo - RESONANCE_TOLERANCE && l.offset <= hi + RESONANCE_TOLERANCE)
        .map(|l| format!("f'={} at {} MHz", l.f, l.offset / TAU / 1e6))
        .collect();
    if !offending.is_empty() {
        return Err(usage(format!("scan range contains resonances: {}", offending.join(", "))));
    }
    let detunings: Vec<f64> = (0..points)
        .map(|k| {
            if points == 1 {
                return a;
            }
            let t = k as f64 / (points - 1) as f64;
            if log {
                a.signum() * (a.abs().ln() + t * (b.abs().ln() - a.abs().ln())).exp()
            } else {
                a + t * (b - a)
            }
        })
        .collect();
    let n = samples.unwrap_or(cfg.simulation.samples);
    let scan = detuning_scan(&cfg.species, &cfg.cloud, &cfg.probe, &detunings, n)?;
    let mut table = Table::new(&["detuning_rad_s", "vector_peak", "tensor_peak"]);
    for p in &scan {
        table.row(&[p.detuning, p.vector_peak, p.tensor_peak]);
    }
    let mut report = ctx.report();
    report.set("spacing", if log { "log" } else { "linear" });
    if points >= 2 {
        let v: Vec<f64> = scan.iter().map(|p| p.vector_peak).collect();
        let t: Vec<f64> = scan.iter().map(|p| p.tensor_peak).collect();
        report.set("vector_slope", fit_log_log_slope(&detunings, &v).map_or(Value::Null, number));
        report.set("tensor_slope", fit_log_log_slope(&detunings, &t).map_or(Value::Null, number));
    }
    ctx.finish("scan", &table, &report)
}

pub fn photocurrent(ctx: &Context, fz: Option<f64>, seed: Option<u64>) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    let sim_cfg = &cfg.simulation;
    let meas = measurement_strength(&cfg.species, &cfg.cloud, &cfg.probe)?;
    let eta = cfg.probe.efficiency();
    let fz = fz.unwrap_or_else(|| cfg.fz_true());
    let seed = seed.unwrap_or(sim_cfg.seed);
    let prior = cfg.prior_variance();
    let sim = PhotocurrentSimulation {
        gain: cfg.probe.gain(),
        ..PhotocurrentSimulation::new(meas.meas_strength, fz, eta, sim_cfg.dt, sim_cfg.duration, seed)
    };
    let record = sim.run()?;
    let states = filter_estimate(&record, prior, meas.meas_strength, eta)?;
    let mut table = Table::new(&["t", "y", "estimate", "variance", "closed_form_variance"]);
    let mut worst = 0.0f64;
    for (y, state) in record.samples.iter().zip(&states[1..]) {
        let closed = closed_form_variance(prior, eta, meas.meas_strength, state.elapsed);
        worst = worst.max((state.variance - closed).abs() / closed);
        table.row(&[state.elapsed, *y, state.estimate, state.variance, closed]);
    }
    let last = states.last().copied().unwrap_or(states[0]);
    let mut report = RunReport::new(seed);
    report.set("measurement_strength", number(meas.meas_strength));
    report.set("fz_true", number(fz));
    report.set("prior_variance", number(prior));
    report.set("efficiency", number(eta));
    report.set("final_estimate", number(last.estimate));
    report.set("final_variance", number(last.variance));
    report.set("variance_check_max_rel_diff", number(worst));
    ctx.finish("photocurrent", &table, &report)?;
    if worst > FILTER_CHECK_TOLERANCE {
        return Err(Failure::Internal(format!(
            "filter variance departs from the closed form by {worst:e} (tolerance {FILTER_CHECK_TOLERANCE:e})"
        )));
    }
    Ok(())
}

fn parse_time(text: &str) -> Result<f64, Failure> {
    parse_quantity(text, Dimension::Time).map_err(usage)
}

fn parse_tau_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let (a, b) = (parse_time(start)?, parse_time(stop)?);
            let n: usize =
                count.trim().parse().map_err(|_| usage(format!("bad point count {count:?} in --tau-grid")))?;
            if n == 0 {
                return Err(usage("--tau-grid needs at least one point"));
            }
            Ok((0..n).map(|k| if n == 1 { a } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect())
        }
        [_] => text.split(',').map(parse_time).collect(),
        _ => Err(usage(format!("--tau-grid must be START:STOP:N or a comma-separated list, got {text:?}"))),
    }
}

pub fn squeeze(ctx: &Context, tau_grid: Option<&str>) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    let taus = match tau_grid {
        Some(text) => parse_tau_grid(text)?,
        None => (0..11).map(|k| cfg.simulation.duration * k as f64 / 10.0).collect(),
    };
    let meas = measurement_strength(&cfg.species, &cfg.cloud, &cfg.probe)?;
    let f = cfg.species.ground_f.value();
    let eta = cfg.probe.efficiency();
    let mut table = Table::new(&["tau_s", "snr2", "w", "tau_over_tau_s"]);
    let mut report = ctx.report();
    let mut worst = 0.0f64;
    for &tau in &taus {
        let s = snr_squeezing(&cfg.species, &cfg.cloud, &cfg.probe, cfg.orientation, tau)?;
        let via_od = snr_squared_from_od(eta, cfg.cloud.od(), f, s.tau_over_tau_s);
        let scale = s.snr2.abs().max(via_od.abs());
        if scale > 0.0 {
            worst = worst.max((s.snr2 - via_od).abs() / scale);
        }
        if s.beyond_validity {
            report.warnings.push(format!(
                "tau = {tau} s is {:.3} scattering times, beyond the {VALIDITY_FRACTION} validity limit",
                s.tau_over_tau_s
            ));
        }
        table.row(&[tau, s.snr2, s.w, s.tau_over_tau_s]);
    }
    report.set("optical_depth", number(cfg.cloud.od()));
    report.set("scattering_time_s", number(1.0 / meas.scat_rate));
    report.set("measurement_strength", number(meas.meas_strength));
    report.set("prior_variance", number(coherent_prior_variance(cfg.cloud.n_atoms(), f)));
    report.set("snr_route_max_rel_diff", number(worst));
    report.set("snr_route_tolerance", number(SNR_TOLERANCE));
    ctx.finish("squeeze", &table, &report)
}
