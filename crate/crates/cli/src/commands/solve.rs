//! `solve` — decide whether a target factors into two independent coins,
//! reporting either the pair or the violated consistency residual.

use clap::Args;
use coincirc::{solve_two_coins, two_coin_residual, Distribution4};
use serde::Serialize;

use crate::common::{parse_target, to_pretty_json, CliError, CliResult};
use crate::commands::DEFAULT_TARGET;

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Target distribution as four comma-separated probabilities
    #[arg(long, default_value = DEFAULT_TARGET)]
    target: String,
    /// Acceptance tolerance for the consistency and reconstruction checks
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Serialize)]
struct SolveReport {
    target: Distribution4,
    tolerance: f64,
    solvable: bool,
    /// Coin heads probabilities when a solution exists.
    p: Option<f64>,
    q: Option<f64>,
    /// |t0·t3 − t1·t2|, the product-form consistency residual.
    consistency_residual: f64,
    message: String,
}

pub fn run(args: &SolveArgs) -> CliResult<()> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", args.tol)));
    }
    let target = parse_target(&args.target)?;
    let residual = two_coin_residual(&target);
    let report = match solve_two_coins(&target, args.tol) {
        Some(pair) => SolveReport {
            target,
            tolerance: args.tol,
            solvable: true,
            p: Some(pair.p()),
            q: Some(pair.q()),
            consistency_residual: residual,
            message: "two independent coins reproduce this target".to_string(),
        },
        None => SolveReport {
            target,
            tolerance: args.tol,
            solvable: false,
            p: None,
            q: None,
            consistency_residual: residual,
            message: format!(
                "no independent two-coin solution: consistency condition |t0*t3 - t1*t2| <= tol violated (residual {residual} > {})",
                args.tol
            ),
        },
    };
    print!("{}", to_pretty_json(&report));
    Ok(())
}
