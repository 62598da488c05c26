//! The five commands. Each returns the exit code, or an error for
//! validation failures (exit 1).
//!
//! Column orders:
//!
//! - `simulate`: `index, t, x, y, in_dx, in_dy, out_dx, out_dy, s, phi,
//!   energy_residual, abs_l, joachimsthal`;
//! - `kconvex`: `classifier, verdict, kappa_min, kappa_argmin, threshold,
//!   witness_apse, witness_latus, witness_crossings, witness_recheck, grazes`;
//! - `conjugacy`: `index, deviation, conformal_error, free_deviation`;
//! - `portrait`: `seed, k, s, phi`;
//! - `fit-integral`: `samples, residual, q_xx, q_yy, q_xy`.
//!
//! Empty CSV fields (JSON `null`) mark values that do not apply.

use anyhow::{anyhow, Context, Result};
use kepler_billiards::birkhoff::{simulate_birkhoff_from, BirkhoffOrbit};
use kepler_billiards::diagnostics::{
    brute_force_k_convex, check_k_convex, conjugacy_check, conservation_report, count_parabola_crossings,
    integral_fit_residual, kepler_phase_portrait, phase_portrait, KConvexVerdict, OrbitRef, Verdict,
};
use kepler_billiards::error::Termination;
use kepler_billiards::geometry::{load_table, BilliardTable, BoundaryFrame};
use kepler_billiards::kepler::reflect;
use kepler_billiards::levi_civita::{lift_launch, lift_table};
use kepler_billiards::planar::unit;
use kepler_billiards::{BranchSign, ChordState, KeplerBilliard, LiftedTable, Table};

use crate::output::{Cell, Sink};
use crate::{exit, Mode, RunConfig};

pub const SIMULATE_COLUMNS: &[&str] = &[
    "index",
    "t",
    "x",
    "y",
    "in_dx",
    "in_dy",
    "out_dx",
    "out_dy",
    "s",
    "phi",
    "energy_residual",
    "abs_l",
    "joachimsthal",
];
pub const KCONVEX_COLUMNS: &[&str] = &[
    "classifier",
    "verdict",
    "kappa_min",
    "kappa_argmin",
    "threshold",
    "witness_apse",
    "witness_latus",
    "witness_crossings",
    "witness_recheck",
    "grazes",
];
pub const CONJUGACY_COLUMNS: &[&str] = &["index", "deviation", "conformal_error", "free_deviation"];
pub const PORTRAIT_COLUMNS: &[&str] = &["seed", "k", "s", "phi"];
pub const FIT_COLUMNS: &[&str] = &["samples", "residual", "q_xx", "q_yy", "q_xy"];

fn table(config: &RunConfig) -> Result<Table> {
    load_table(&config.table).with_context(|| format!("loading {}", config.table.display()))
}

fn sink(config: &RunConfig, columns: &'static [&'static str]) -> Result<Sink> {
    Sink::open(config.out.as_deref(), config.format, columns).context("opening output")
}

/// Wall of a chord orbit: the table itself or its lift.
enum ChordWall {
    Plain(Table),
    Lifted(LiftedTable),
}

impl ChordWall {
    fn frame(&self, t: f64) -> Result<BoundaryFrame> {
        Ok(match self {
            ChordWall::Plain(w) => w.frame(t)?,
            ChordWall::Lifted(w) => w.frame(t)?,
        })
    }
}

/// Birkhoff orbit for `--mode birkhoff` (on the table) or `lifted` (on its
/// lift, launched from the lift of the Kepler launch).
fn chord_orbit(config: &RunConfig, table: Table) -> Result<(BirkhoffOrbit, ChordWall)> {
    let (t0, angle) = config.initial;
    let tol = &config.tolerances;
    match config.mode {
        Mode::Birkhoff => {
            let frame = table.frame(t0)?;
            let start =
                ChordState { t: frame.t.rem_euclid(1.0), point: frame.point, direction: frame.tangent * unit(angle) };
            let orbit = simulate_birkhoff_from(&table, start, config.bounces, tol);
            Ok((orbit, ChordWall::Plain(table)))
        }
        Mode::Lifted | Mode::Kepler => {
            let lifted = lift_table(&table)?;
            let first = KeplerBilliard::with_tolerances(table, *tol).launch(t0, angle)?;
            let start = lift_launch(&lifted, first.t, first.outgoing, BranchSign::Plus);
            let orbit = simulate_birkhoff_from(&lifted, start, config.bounces, tol);
            Ok((orbit, ChordWall::Lifted(lifted)))
        }
    }
}

pub fn cmd_simulate(config: &RunConfig) -> Result<u8> {
    let table = table(config)?;
    let mut out;
    let termination = match config.mode {
        Mode::Kepler => {
            let billiard = KeplerBilliard::with_tolerances(table, config.tolerances);
            let orbit = billiard.simulate(config.initial.0, config.initial.1, config.bounces)?;
            let report = conservation_report(OrbitRef::Kepler(&orbit));
            out = sink(config, SIMULATE_COLUMNS)?;
            let table = billiard.table();
            for (b, row) in orbit.bounces.iter().zip(&report.rows) {
                let frame = table.frame(b.t)?;
                out.row(&[
                    row.index.into(),
                    b.t.into(),
                    b.point.re.into(),
                    b.point.im.into(),
                    b.incoming.re.into(),
                    b.incoming.im.into(),
                    b.outgoing.re.into(),
                    b.outgoing.im.into(),
                    table.arc_length_fraction(b.t).into(),
                    frame.departure_angle(b.outgoing).into(),
                    row.energy_residual.into(),
                    row.abs_angular_momentum.into(),
                    row.joachimsthal.into(),
                ])?;
            }
            orbit.termination
        }
        Mode::Birkhoff | Mode::Lifted => {
            let (orbit, wall) = chord_orbit(config, table)?;
            let report = conservation_report(OrbitRef::Birkhoff(&orbit));
            out = sink(config, SIMULATE_COLUMNS)?;
            // the launch row mirrors the outgoing chord in the wall
            let first_in = |c: &ChordState| -> Result<_> { Ok(reflect(c.direction, &wall.frame(c.t)?)) };
            for (k, ((c, ph), row)) in orbit.states.iter().zip(&orbit.phases).zip(&report.rows).enumerate() {
                let incoming = if k == 0 { first_in(c)? } else { orbit.states[k - 1].direction };
                out.row(&[
                    k.into(),
                    c.t.into(),
                    c.point.re.into(),
                    c.point.im.into(),
                    incoming.re.into(),
                    incoming.im.into(),
                    c.direction.re.into(),
                    c.direction.im.into(),
                    ph.s.into(),
                    ph.phi.into(),
                    row.energy_residual.into(),
                    row.abs_angular_momentum.into(),
                    row.joachimsthal.into(),
                ])?;
            }
            orbit.termination
        }
    };
    finish_orbit(out, termination.as_ref())
}

fn finish_orbit(mut out: Sink, termination: Option<&Termination>) -> Result<u8> {
    let code = match termination {
        Some(t) => {
            out.termination(None, t)?;
            eprintln!("terminated after bounce {}: {}", t.after_bounce, t.reason);
            exit::TERMINATED
        }
        None => exit::SUCCESS,
    };
    out.finish()?;
    Ok(code)
}

fn verdict_row(out: &mut Sink, classifier: &str, v: &KConvexVerdict, recheck: Option<usize>) -> Result<()> {
    let w = v.witness.as_ref();
    out.row(&[
        classifier.into(),
        v.verdict.to_string().as_str().into(),
        v.kappa_min.into(),
        v.kappa_argmin.into(),
        v.threshold.into(),
        w.map(|w| w.apse).into(),
        w.map(|w| w.latus).into(),
        w.map_or(Cell::Missing, |w| w.crossings.len().into()),
        recheck.map_or(Cell::Missing, Cell::Int),
        v.grazes.into(),
    ])?;
    Ok(())
}

pub fn cmd_kconvex(config: &RunConfig) -> Result<u8> {
    let table = table(config)?;
    let curvature = check_k_convex(&table)?;
    let brute = brute_force_k_convex(&table, config.oracle_grid);
    let recheck = brute
        .witness
        .as_ref()
        .map(|w| count_parabola_crossings(&table, w.apse, w.latus, 10 * config.oracle_grid.2).crossings.len());
    let mut out = sink(config, KCONVEX_COLUMNS)?;
    verdict_row(&mut out, "curvature", &curvature, None)?;
    verdict_row(&mut out, "brute_force", &brute, recheck)?;
    out.finish()?;

    let agree = curvature.verdict == brute.verdict && curvature.verdict != Verdict::Marginal;
    let status = if agree {
        "agree"
    } else if curvature.verdict == Verdict::Marginal {
        "marginal"
    } else {
        "disagree"
    };
    eprintln!("{} / {}, {status}", curvature.verdict, brute.verdict);
    if let Some(w) = &brute.witness {
        eprintln!(
            "witness: apse {} latus {} with {} crossings ({} at 10x resolution)",
            w.apse,
            w.latus,
            w.crossings.len(),
            recheck.unwrap_or(0)
        );
    }
    Ok(if agree { exit::SUCCESS } else { exit::DISAGREEMENT })
}

pub fn cmd_conjugacy(config: &RunConfig) -> Result<u8> {
    let billiard = KeplerBilliard::with_tolerances(table(config)?, config.tolerances);
    let report = conjugacy_check(&billiard, config.initial.0, config.initial.1, config.bounces)?;
    let mut out = sink(config, CONJUGACY_COLUMNS)?;
    for (k, (d, a)) in report.deviations.iter().zip(&report.conformal_errors).enumerate() {
        out.row(&[k.into(), (*d).into(), (*a).into(), report.free_deviations.get(k).copied().into()])?;
    }
    if let Some(t) = &report.direct_termination {
        out.termination(None, t)?;
    }
    out.finish()?;

    eprintln!("bounces compared: {}", report.bounces);
    eprintln!("max deviation: {:e}", report.max_deviation);
    eprintln!("max free-running deviation: {:e}", report.max_free_deviation);
    eprintln!("max conformal error: {:e}", report.max_conformal_error);
    eprintln!(
        "max reflection error: kepler {:e}, lifted {:e}",
        report.max_reflection_error_kepler, report.max_reflection_error_lifted
    );
    eprintln!("branch negation exact: {}", report.negation_exact);
    eprintln!("max antipodal deviation: {:e}", report.max_antipodal_deviation);
    if let Some(e) = &report.lift_error {
        eprintln!("lift of the direct orbit failed: {e}");
    }
    if let Some(t) = &report.step_failure {
        eprintln!("lifted chord from bounce {} failed: {}", t.after_bounce, t.reason);
    }
    let agree = report.consistent() && report.max_deviation < config.tolerances.conjugacy;
    if !agree {
        eprintln!("routes disagree (tolerance {:e})", config.tolerances.conjugacy);
        return Ok(exit::DISAGREEMENT);
    }
    Ok(match report.direct_termination {
        Some(_) => exit::TERMINATED,
        None => exit::SUCCESS,
    })
}

pub fn cmd_portrait(config: &RunConfig) -> Result<u8> {
    let table = table(config)?;
    let portrait = match config.mode {
        Mode::Birkhoff => phase_portrait(&table, config.grid, config.bounces, &config.tolerances),
        Mode::Kepler | Mode::Lifted => kepler_phase_portrait(&table, config.grid, config.bounces, &config.tolerances)?,
    };
    let mut out = sink(config, PORTRAIT_COLUMNS)?;
    for r in &portrait.rows {
        out.row(&[r.seed.into(), r.k.into(), r.s.into(), r.phi.into()])?;
    }
    for t in &portrait.truncated {
        out.termination(Some(t.seed), &t.termination)?;
    }
    out.finish()?;
    if portrait.truncated.is_empty() {
        Ok(exit::SUCCESS)
    } else {
        eprintln!("{} of {} seeds truncated", portrait.truncated.len(), portrait.seeds.len());
        Ok(exit::TERMINATED)
    }
}

pub fn cmd_fit_integral(config: &RunConfig) -> Result<u8> {
    let table = table(config)?;
    if config.mode == Mode::Kepler {
        eprintln!("fitting on the lifted table");
    }
    let (orbit, _) = chord_orbit(config, table)?;
    let fit = match integral_fit_residual(&orbit) {
        Ok(fit) => fit,
        Err(e) => match &orbit.termination {
            Some(t) => {
                eprintln!("no fit ({e}); terminated after bounce {}: {}", t.after_bounce, t.reason);
                let mut out = sink(config, FIT_COLUMNS)?;
                out.termination(None, t)?;
                out.finish()?;
                return Ok(exit::TERMINATED);
            }
            None => return Err(anyhow!(e)),
        },
    };
    let mut out = sink(config, FIT_COLUMNS)?;
    out.row(&[fit.samples.into(), fit.residual.into(), fit.form.xx.into(), fit.form.yy.into(), fit.form.xy.into()])?;
    eprintln!("residual {:e}", fit.residual);
    finish_orbit(out, orbit.termination.as_ref())
}
