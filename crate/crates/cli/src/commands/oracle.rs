use rauzy_core::digitseq::uniform_random;
use rauzy_core::predictor::{beta_ell, beta_ell_bruteforce, block_function_count, usable_len};
use rauzy_core::rng::derive_seed;
use rauzy_core::Error;

use super::emit;
use crate::args::OracleArgs;
use crate::error::{CliError, CliResult};

pub fn run(args: &OracleArgs) -> CliResult<()> {
    let count = block_function_count(args.base, args.ell);
    if count > args.cap.into() {
        return Err(Error::EnumerationCap {
            count: count.to_string(),
            cap: args.cap,
        }
        .into());
    }
    let n = usable_len(args.length, args.ell);
    if n == 0 {
        return Err(CliError::usage(format!("--length must exceed --ell = {}", args.ell)));
    }
    for trial in 0..args.trials {
        let x = uniform_random(args.base, args.length, derive_seed(args.seed, trial as u64))?;
        let (fast, _) = beta_ell(&x, args.ell, n, args.orientation)?;
        let brute = beta_ell_bruteforce(&x, args.ell, n, args.orientation, args.cap)?;
        if fast != brute {
            let digits: String = x
                .digits()
                .iter()
                .map(|&d| std::char::from_digit(d.into(), 36).unwrap_or('?'))
                .collect();
            return Err(CliError::CheckFailed(format!(
                "trial {trial}: beta_ell = {}/{} but enumeration gives {}/{}; sequence {digits}",
                fast.mismatches, fast.scored, brute.mismatches, brute.scored
            )));
        }
    }
    emit(&format!(
        "pass: {} trials, base {}, ell {}, length {}, {} block functions each",
        args.trials, args.base, args.ell, args.length, count
    ))
}
