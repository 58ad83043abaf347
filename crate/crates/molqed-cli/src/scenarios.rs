//! Scenario runners: each reproduces one figure or number set as a CSV
//! artifact.

use std::path::Path;

use molqed::dressed::build_dressed;
use molqed::electrostatics::{
    coupling_from_field, field_point_charge, molecule_coordinates, solve_potential,
    MoleculePosition,
};
use molqed::evolution::{evolve_closed, evolve_numeric, EffectiveGenerator, GroundState};
use molqed::protocols::{
    bell_coherent, bell_single_photon, chsh_coherent, chsh_single_photon, monte_carlo_protocol,
    ProtocolKind,
};
use molqed::rates::{raman_probability_normalized, RateSet};
use molqed::HybridParams;

use crate::config::{Config, ConfigError};
use crate::csvout::{Cell, CsvWriter};

/// Errors split by exit code: configuration problems (2) and numerical
/// failures (3).
pub enum RunError {
    Config(String),
    Numerical(String),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.to_string())
    }
}

impl From<molqed::SimError> for RunError {
    fn from(e: molqed::SimError) -> Self {
        RunError::Numerical(e.to_string())
    }
}

type RunResult = Result<(), RunError>;

fn table_err(msg: String) -> RunError {
    RunError::Numerical(msg)
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![lo];
    }
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn rates_for(cfg: &Config, p: &HybridParams) -> Result<RateSet, RunError> {
    Ok(RateSet::from_params(p, cfg.dephasing_model()?)?)
}

pub fn run(scenario: &str, cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    match scenario {
        "fig2b" => fig2b(cfg, out, timestamp),
        "fig3b" => fig3b(cfg, out, timestamp),
        "fig3c" => fig3c(cfg, out, timestamp),
        "figs1b" => figs1b(cfg, out, timestamp),
        "figs4" => figs4(cfg, out, timestamp),
        "rates" => rates_dump(cfg, out, timestamp),
        "evolve" => evolve(cfg, out, timestamp),
        "montecarlo" => montecarlo(cfg, out, timestamp),
        "estark" => estark(cfg, out, timestamp),
        "chsh" => chsh(cfg, out, timestamp),
        "bell" => bell(cfg, out, timestamp),
        other => Err(RunError::Config(format!("unknown scenario `{other}`"))),
    }
}

/// Normalized Raman probability vs (g_c1 − g_c2)/γ, one curve per V/ω_q.
fn fig2b(cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    let p = cfg.hybrid_params()?;
    let gamma_c_frac = p.gamma_c / p.gamma();
    let y_max = cfg.f64_or("scenario.y_max", 8.0)?;
    let points = cfg.usize_or("scenario.points", 161)?;
    let x_values = [0.05, 0.1, 0.2, 0.3, 0.4];

    let mut csv = CsvWriter::new(&[
        "g_c_diff_over_gamma",
        "pr_norm_x0.05",
        "pr_norm_x0.10",
        "pr_norm_x0.20",
        "pr_norm_x0.30",
        "pr_norm_x0.40",
    ]);
    for y in linspace(0.0, y_max, points) {
        let mut row: Vec<Cell> = vec![y.into()];
        for &x in &x_values {
            row.push(raman_probability_normalized(x, y, gamma_c_frac)?.into());
        }
        csv.row(row).map_err(table_err)?;
    }
    csv.write(out, "fig2b", cfg, timestamp).map_err(|e| RunError::Numerical(e.to_string()))
}

/// Bell-pair fidelity and success probability vs mean photon number.
fn fig3b(cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    let p = cfg.hybrid_params()?;
    let rates = rates_for(cfg, &p)?;
    let nbar_max = cfg.f64_or("scenario.nbar_max", 3.0)?;
    let points = cfg.usize_or("scenario.points", 61)?;
    let with_t2 = cfg.bool_or("scenario.with_t2", false)?;

    let mut csv = CsvWriter::new(&["nbar", "fidelity", "fidelity_linear", "success_prob"]);
    for n_bar in linspace(0.0, nbar_max, points) {
        let r = bell_coherent(&p, &rates, n_bar, with_t2);
        csv.row(vec![
            n_bar.into(),
            r.fidelity.unwrap_or(1.0).into(),
            r.fidelity_linear.unwrap_or(1.0).into(),
            r.success_prob.into(),
        ])
        .map_err(table_err)?;
    }
    csv.write(out, "fig3b", cfg, timestamp).map_err(|e| RunError::Numerical(e.to_string()))
}

/// CHSH parameter and success probability vs mean photon number.
fn fig3c(cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    let p = cfg.hybrid_params()?;
    let rates = rates_for(cfg, &p)?;
    let nbar_max = cfg.f64_or("scenario.nbar_max", 4.0)?;
    let points = cfg.usize_or("scenario.points", 81)?;

    let mut csv = CsvWriter::new(&["nbar", "s_parameter", "success_prob"]);
    for n_bar in linspace(0.0, nbar_max, points) {
        let r = chsh_coherent(&p, &rates, n_bar);
        csv.row(vec![
            n_bar.into(),
            r.s_parameter.unwrap_or(f64::NAN).into(),
            r.success_prob.into(),
        ])
        .map_err(table_err)?;
    }
    csv.write(out, "fig3c", cfg, timestamp).map_err(|e| RunError::Numerical(e.to_string()))
}

/// Finite-difference field vs island distance, for each waveguide height
/// and molecule position.
fn figs1b(cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    let d_min = cfg.f64_or("scenario.d_min_nm", 125.0)?;
    let d_max = cfg.f64_or("scenario.d_max_nm", 500.0)?;
    let points = cfg.usize_or("scenario.points", 3)?;
    let grid = cfg.f64_or("geometry.grid_nm", 15.0)?;
    let tol = cfg.f64_or("scenario.tol", 1e-7)?;
    let heights: Vec<f64> = cfg
        .str_or("scenario.heights_nm", "200,400")
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| ConfigError(format!("bad height `{s}`"))))
        .collect::<Result<_, _>>()?;

    let mut columns: Vec<String> = vec!["d_nm".into()];
    for h in &heights {
        for pos in MoleculePosition::ALL {
            columns.push(format!("field_kvm_h{}_{}", h, pos.label()));
        }
    }
    let column_refs: Vec<&str> = columns.iter().map(|s| s.as_str()).collect();
    let mut csv = CsvWriter::new(&column_refs);

    for d in linspace(d_min, d_max, points) {
        let mut row: Vec<Cell> = vec![d.into()];
        for &h in &heights {
            let mut g = cfg.geometry()?;
            g.distance_nm = d;
            g.waveguide_height_nm = h;
            let sol = solve_potential(&g, grid, tol)?;
            for pos in MoleculePosition::ALL {
                row.push(sol.field_at(molecule_coordinates(&g, pos)).into());
            }
        }
        csv.row(row).map_err(table_err)?;
    }
    csv.write(out, "figs1b", cfg, timestamp).map_err(|e| RunError::Numerical(e.to_string()))
}

/// Bell success probability vs V/ω_q for several mean photon numbers.
fn figs4(cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    let base = cfg.hybrid_params()?;
    let x_min = cfg.f64_or("scenario.x_min", 0.02)?;
    let x_max = cfg.f64_or("scenario.x_max", 0.495)?;
    let points = cfg.usize_or("scenario.points", 96)?;
    let nbars = [0.5, 1.0, 1.5, 2.0];

    let mut csv = CsvWriter::new(&[
        "v_over_omega_q",
        "psuc_nbar0.5",
        "psuc_nbar1.0",
        "psuc_nbar1.5",
        "psuc_nbar2.0",
    ]);
    for x in linspace(x_min, x_max, points) {
        let p = HybridParams {
            v_dd: x * base.omega_q,
            ..base
        }
        .validate()?;
        let rates = rates_for(cfg, &p)?;
        let mut row: Vec<Cell> = vec![x.into()];
        for &n_bar in &nbars {
            row.push(bell_coherent(&p, &rates, n_bar, false).success_prob.into());
        }
        csv.row(row).map_err(table_err)?;
    }
    csv.write(out, "figs4", cfg, timestamp).map_err(|e| RunError::Numerical(e.to_string()))
}

/// Every derived probability and rate at the configured operating point.
fn rates_dump(cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    let p = cfg.hybrid_params()?;
    let r = rates_for(cfg, &p)?;
    let d = build_dressed(&p)?;
    let gen = EffectiveGenerator::from_params(&p, &d)?;
    let zeta = molqed::rates::single_molecule_zeta(&HybridParams {
        delta: 0.5 * p.g_c1,
        ..p
    });

    let mut csv = CsvWriter::new(&["quantity", "value"]);
    let rows: Vec<(&str, f64)> = vec![
        ("p_r", r.p_r),
        ("p_ro", r.p_ro),
        ("p_ir", r.p_ir),
        ("p_d", r.p_d),
        ("p_rs", r.p_rs),
        ("p_c", r.p_c),
        ("omega_14", r.omega_14),
        ("g_eff", d.g_eff),
        ("gamma_s", d.gamma_s),
        ("gamma_a", d.gamma_a),
        ("gamma_as", d.gamma_as),
        ("splitting", d.splitting),
        ("generator_raman", gen.raman),
        ("generator_raman_guided", gen.raman_guided),
        ("generator_inverse_raman", gen.inverse_raman),
        ("generator_dephasing", gen.dephasing),
        ("zeta_down_sq_resonant", zeta.zeta_down.norm_sqr()),
        ("photon_budget", molqed::rates::photon_budget(&p)),
    ];
    for (name, value) in rows {
        csv.row(vec![name.into(), value.into()]).map_err(table_err)?;
    }
    csv.write(out, "rates", cfg, timestamp).map_err(|e| RunError::Numerical(e.to_string()))
}

/// Closed-form vs numerically integrated ground-manifold evolution.
fn evolve(cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    let p = cfg.hybrid_params()?;
    let d = build_dressed(&p)?;
    let gen = EffectiveGenerator::from_params(&p, &d)?;
    let rates = gen.to_rate_set();
    let alpha2 = cfg.f64_or("scenario.alpha2", 0.5)?;
    let tol = cfg.f64_or("scenario.tol", 1e-9)?;
    let t_max = cfg.f64_or("scenario.t_max", 10.0 / (rates.p_c * alpha2))?;
    let points = cfg.usize_or("scenario.points", 51)?;
    let rho0 = GroundState::superposition(0.0);

    let mut csv = CsvWriter::new(&[
        "t",
        "rho11_closed",
        "rho44_closed",
        "coh_closed",
        "rho11_numeric",
        "rho44_numeric",
        "coh_numeric",
    ]);
    for t in linspace(0.0, t_max, points) {
        let c = evolve_closed(&rho0, &rates, alpha2, t, p.t2);
        let n = evolve_numeric(&rho0, &p, &d, alpha2, t, tol)?;
        csv.row(vec![
            t.into(),
            c.rho11.into(),
            c.rho44.into(),
            c.rho14.norm().into(),
            n.rho11.into(),
            n.rho44.into(),
            n.rho14.norm().into(),
        ])
        .map_err(table_err)?;
    }
    csv.write(out, "evolve", cfg, timestamp).map_err(|e| RunError::Numerical(e.to_string()))
}

/// Monte-Carlo protocol estimate with standard errors.
fn montecarlo(cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    let p = cfg.hybrid_params()?;
    let rates = rates_for(cfg, &p)?;
    let which = match cfg.str_or("scenario.protocol", "bell") {
        "bell" => ProtocolKind::Bell,
        "chsh" => ProtocolKind::Chsh,
        s => return Err(RunError::Config(format!("scenario.protocol: bell|chsh, got `{s}`"))),
    };
    let n_bar = cfg.f64_or("scenario.nbar", 1.5)?;
    let trials = cfg.u64_or("scenario.trials", 1_000_000)?;
    let seed = cfg.u64_or("scenario.seed", 1)?;
    if trials == 0 {
        return Err(RunError::Config("scenario.trials must be >= 1".into()));
    }

    let r = monte_carlo_protocol(&p, &rates, which, n_bar, trials, seed);
    let (label, value, stderr) = match which {
        ProtocolKind::Bell => (
            "fidelity",
            r.fidelity.unwrap_or(0.0),
            r.fidelity_stderr.unwrap_or(0.0),
        ),
        ProtocolKind::Chsh => (
            "s_parameter",
            r.s_parameter.unwrap_or(0.0),
            r.s_stderr.unwrap_or(0.0),
        ),
    };
    let mut csv = CsvWriter::new(&[
        "protocol",
        "nbar",
        "trials",
        "success_prob",
        "success_stderr",
        "estimator",
        "value",
        "stderr",
        "t2_fidelity_reduction",
        "t2_reduction_stderr",
    ]);
    csv.row(vec![
        cfg.str_or("scenario.protocol", "bell").into(),
        n_bar.into(),
        (trials as f64).into(),
        r.success_prob.into(),
        r.success_stderr.unwrap_or(0.0).into(),
        label.into(),
        value.into(),
        stderr.into(),
        r.t2_fidelity_reduction.unwrap_or(0.0).into(),
        r.t2_fidelity_reduction_stderr.unwrap_or(0.0).into(),
    ])
    .map_err(table_err)?;
    csv.write(out, "montecarlo", cfg, timestamp).map_err(|e| RunError::Numerical(e.to_string()))
}

/// Analytic point-charge field and Stark coupling vs distance.
fn estark(cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    let eps = cfg.f64_or("geometry.eps_waveguide", 2.3)?;
    let dipole = cfg.f64_or("geometry.dipole_debye", 1.0)?;
    let d_min = cfg.f64_or("scenario.d_min_nm", 100.0)?;
    let d_max = cfg.f64_or("scenario.d_max_nm", 600.0)?;
    let points = cfg.usize_or("scenario.points", 51)?;

    let mut csv = CsvWriter::new(&[
        "d_nm",
        "field_kvm",
        "gc_stark_mhz",
        "gc_first_principles_mhz",
    ]);
    for d in linspace(d_min, d_max, points) {
        let field = field_point_charge(d, eps);
        let c = coupling_from_field(field, dipole);
        csv.row(vec![
            d.into(),
            field.into(),
            c.stark_mhz.into(),
            c.first_principles_mhz.into(),
        ])
        .map_err(table_err)?;
    }
    csv.write(out, "estark", cfg, timestamp).map_err(|e| RunError::Numerical(e.to_string()))
}

/// Closed-form CHSH results: single photon and coherent input.
fn chsh(cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    let p = cfg.hybrid_params()?;
    let rates = rates_for(cfg, &p)?;
    let n_bar = cfg.f64_or("scenario.nbar", 2.0)?;

    let single = chsh_single_photon(&p)?;
    let coherent = chsh_coherent(&p, &rates, n_bar);
    let mut csv = CsvWriter::new(&["variant", "nbar", "s_parameter", "success_prob"]);
    csv.row(vec![
        "single_photon".into(),
        1.0.into(),
        single.s_parameter.unwrap_or(0.0).into(),
        single.success_prob.into(),
    ])
    .map_err(table_err)?;
    csv.row(vec![
        "coherent".into(),
        n_bar.into(),
        coherent.s_parameter.unwrap_or(0.0).into(),
        coherent.success_prob.into(),
    ])
    .map_err(table_err)?;
    csv.write(out, "chsh", cfg, timestamp).map_err(|e| RunError::Numerical(e.to_string()))
}

/// Closed-form Bell-pair results: single photon and coherent input.
fn bell(cfg: &Config, out: &Path, timestamp: bool) -> RunResult {
    let p = cfg.hybrid_params()?;
    let rates = rates_for(cfg, &p)?;
    let n_bar = cfg.f64_or("scenario.nbar", 1.5)?;
    let with_t2 = cfg.bool_or("scenario.with_t2", false)?;

    let single = bell_single_photon(&p)?;
    let coherent = bell_coherent(&p, &rates, n_bar, with_t2);
    let mut csv = CsvWriter::new(&[
        "variant",
        "nbar",
        "fidelity",
        "fidelity_linear",
        "success_prob",
    ]);
    csv.row(vec![
        "single_photon".into(),
        1.0.into(),
        single.fidelity.unwrap_or(1.0).into(),
        single.fidelity_linear.unwrap_or(1.0).into(),
        single.success_prob.into(),
    ])
    .map_err(table_err)?;
    csv.row(vec![
        "coherent".into(),
        n_bar.into(),
        coherent.fidelity.unwrap_or(1.0).into(),
        coherent.fidelity_linear.unwrap_or(1.0).into(),
        coherent.success_prob.into(),
    ])
    .map_err(table_err)?;
    csv.write(out, "bell", cfg, timestamp).map_err(|e| RunError::Numerical(e.to_string()))
}
