use rauzy_core::codec::{verify_block_errors, CodecParams};
use rauzy_core::digitseq::parse_digits;
use serde_json::json;

use super::{emit, read_input};
use crate::args::VerifyCodecArgs;
use crate::error::{CliError, CliResult};

/// Largest number of mispredictions allowed in one block.
const MAX_BLOCK_ERRORS: u32 = 2;

pub fn run(args: &VerifyCodecArgs) -> CliResult<()> {
    let v = parse_digits(&read_input(&args.input)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
    let params = match args.ell {
        Some(ell) => CodecParams::new(v.base(), args.k, ell)?,
        None => CodecParams::with_default_ell(v.base(), args.k)?,
    };
    let blocks = args.blocks.unwrap_or(v.len() / params.block_len());
    let errors = verify_block_errors(&v, &params, blocks)?;
    let max = errors.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0u64; max as usize + 1];
    for &e in &errors {
        histogram[e as usize] += 1;
    }
    emit(
        &serde_json::to_string_pretty(&json!({
            "schema_version": rauzy_core::SCHEMA_VERSION,
            "params": params,
            "blocks": blocks,
            "max_errors": max,
            "error_histogram": histogram,
        }))
        .expect("JSON values serialize"),
    )?;
    if max > MAX_BLOCK_ERRORS {
        let worst = errors.iter().position(|&e| e == max).unwrap_or(0);
        return Err(CliError::CheckFailed(format!("block {worst} has {max} errors")));
    }
    Ok(())
}
