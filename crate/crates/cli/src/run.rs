use fracsis::{cf_equilibria, solve_caputo, solve_cf, EquilibriumReportF64, TrajectoryF64};
use rayon::prelude::*;

use crate::error::CliError;
use crate::scenario::{Member, Scenario};

/// Trajectories of one scenario member; `cf` carries its equilibrium report.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub member: Member,
    pub caputo: Option<TrajectoryF64>,
    pub cf: Option<TrajectoryF64>,
    pub equilibria: Option<EquilibriumReportF64>,
}

pub fn run_member(member: &Member) -> Result<RunOutput, CliError> {
    let wrap = |e| CliError::from_solver(&member.label, e);
    let caputo = member
        .caputo
        .map(|orders| solve_caputo(&member.params, &orders, &member.grid).map_err(wrap))
        .transpose()?;
    let (cf, equilibria) = match member.cf {
        Some(order) => (
            Some(solve_cf(&member.params, &order, &member.grid).map_err(wrap)?),
            Some(cf_equilibria(&member.params, &order).map_err(wrap)?),
        ),
        None => (None, None),
    };
    Ok(RunOutput {
        member: member.clone(),
        caputo,
        cf,
        equilibria,
    })
}

/// Runs every sweep member in parallel; results keep the sweep order.
pub fn run_scenario(scenario: &Scenario) -> Result<Vec<RunOutput>, CliError> {
    let members = scenario.members()?;
    members
        .par_iter()
        .map(|m| {
            run_member(m).map_err(|e| match e {
                CliError::Solver { label, source } if label != scenario.label => CliError::Solver {
                    label: format!("{} / {label}", scenario.label),
                    source,
                },
                other => other,
            })
        })
        .collect()
}
