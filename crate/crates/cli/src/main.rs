#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cache;
mod commands;
mod config;
mod error;
mod output;
mod validate;

use std::process::ExitCode;

use clap::Parser;

use crate::config::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Curve(a) => commands::curve(a),
        Command::Heatmap(a) => commands::heatmap(a),
        Command::Area(a) => commands::area(a),
        Command::Predict(a) => commands::predict(a),
        Command::Validate(a) => validate::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xyq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
