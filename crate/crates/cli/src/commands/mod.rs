pub mod background;
pub mod bell;
pub mod deviate;
pub mod geometry;
pub mod report;
pub mod twoslit;

use crate::config::Key;
use crate::{CliError, Run, Subcommand};

pub fn keys(command: Subcommand) -> &'static [Key] {
    match command {
        Subcommand::Background => background::KEYS,
        Subcommand::Deviate => deviate::KEYS,
        Subcommand::Twoslit => twoslit::KEYS,
        Subcommand::Bell => bell::KEYS,
        Subcommand::Geometry => geometry::KEYS,
        Subcommand::Report => report::KEYS,
    }
}

pub fn dispatch(run: &mut Run<'_>) -> Result<(), CliError> {
    match run.command {
        Subcommand::Background => background::run(run),
        Subcommand::Deviate => deviate::run(run),
        Subcommand::Twoslit => twoslit::run(run),
        Subcommand::Bell => bell::run(run),
        Subcommand::Geometry => geometry::run(run),
        Subcommand::Report => report::run(run),
    }
}
