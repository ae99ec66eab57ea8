//! Merging a `--config` JSON document under explicitly given flags.

use std::path::Path;

use clap::parser::ValueSource;
use clap::ArgMatches;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::{CliError, CliResult};

/// Overlays `config` onto `args`, keeping every value that was typed on the command line.
///
/// Keys are the snake_case flag names. Unknown keys are rejected.
pub fn merge<T>(args: &T, config: &Value, matches: &ArgMatches) -> CliResult<T>
where
    T: Serialize + DeserializeOwned,
{
    let mut current =
        serde_json::to_value(args).map_err(|e| CliError::validation(format!("--config: {e}")))?;
    let fields = current
        .as_object_mut()
        .expect("argument structs serialize to objects");
    let overrides = config
        .as_object()
        .ok_or_else(|| CliError::validation("--config: expected a JSON object"))?;

    for (key, value) in overrides {
        if !fields.contains_key(key) {
            return Err(CliError::validation(format!(
                "--config: unknown field `{key}`"
            )));
        }
        let from_command_line = matches.try_get_raw(key).is_ok()
            && matches.value_source(key) == Some(ValueSource::CommandLine);
        if !from_command_line {
            fields.insert(key.clone(), value.clone());
        }
    }

    serde_json::from_value(current).map_err(|e| CliError::validation(format!("--config: {e}")))
}

pub fn load(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("--config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("--config {}: {e}", path.display())))
}
