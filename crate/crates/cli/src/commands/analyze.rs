use rauzy_core::digitseq::parse_digits;
use rauzy_core::predictor::{classify, noise_profile, NoiseProfile, ProfileOptions};
use serde::Serialize;
use serde_json::json;

use super::{emit, read_input};
use crate::args::AnalyzeArgs;
use crate::error::{CliError, CliResult};
use crate::manifest::{with_suffix, write_bytes, write_json, FileDigest, RunManifest};

#[derive(Serialize)]
struct ProfileDocument<'a> {
    #[serde(flatten)]
    profile: &'a NoiseProfile,
    tol: f64,
    classification: String,
}

pub fn run(args: &AnalyzeArgs) -> CliResult<()> {
    if args.tol.is_nan() || args.tol < 0.0 {
        return Err(CliError::usage("--tol must be nonnegative"));
    }
    let threads = match args.threads {
        Some(0) => return Err(CliError::usage("--threads must be at least 1")),
        Some(t) => t,
        None => std::thread::available_parallelism().map_or(1, usize::from),
    };
    let bytes = read_input(&args.input)?;
    let x = parse_digits(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
    if let Some(b) = args.base {
        if b != x.base() {
            return Err(CliError::Input(format!(
                "{} has base {}, expected {b}",
                args.input.display(),
                x.base()
            )));
        }
    }

    let opts = ProfileOptions {
        ell_max: args.ell_max,
        grid: args.grid.clone(),
        orientation: args.orientation,
        tail_fraction: args.tail_fraction,
        threads,
    };
    let mut profile = noise_profile(&x, &opts)?;
    let input = FileDigest::of_bytes(&args.input, &bytes);
    profile.source = Some(json!({
        "path": input.path,
        "sha256": input.sha256,
        "length": x.len(),
    }));
    let class = classify(&profile, args.tol);

    let prefix = args
        .output
        .clone()
        .unwrap_or_else(|| with_suffix(&args.input, ".profile"));
    let csv = write_bytes(&with_suffix(&prefix, ".csv"), profile.to_csv().as_bytes())?;
    let doc = ProfileDocument {
        profile: &profile,
        tol: args.tol,
        classification: class.to_string(),
    };
    let json = write_json(&with_suffix(&prefix, ".json"), &doc)?;

    let mut manifest = RunManifest::new("analyze", args)?;
    manifest.inputs.push(input);
    manifest.outputs = vec![csv, json];
    write_json(&with_suffix(&prefix, ".manifest.json"), &manifest)?;

    emit(&class.to_string())?;
    Ok(())
}
