use std::fs;
use std::io::Write;
use std::path::Path;

use wgp_core::format::{read_instance, read_schedule, InstanceDoc};
use wgp_core::Schedule;

use crate::error::CliError;

pub fn load_instance(path: &Path) -> Result<InstanceDoc, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    read_instance(&text).map_err(|e| CliError::malformed(path, e))
}

pub fn load_schedule(path: &Path) -> Result<Schedule, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    read_schedule(&text).map_err(|e| CliError::malformed(path, e))
}

pub fn save(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes to `path`, or to standard output when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => save(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

/// Human-readable notes go to stdout, unless stdout already carries the data.
pub fn note(data_on_stdout: bool, line: &str) {
    if data_on_stdout {
        eprintln!("{line}");
    } else {
        println!("{line}");
    }
}
