use std::path::Path;

use num_rational::BigRational;
use rauzy_core::codec::{CodecParams, CodecReport};
use rauzy_core::digitseq::{champernowne, expand_rational, format_digits, read_digits, uniform_random};
use rauzy_core::generators::{
    bernoulli_seq, block_concat, interleave, markov_seq, IndicatorFamily, MembershipSet, ProbVector,
};
use rauzy_core::measures::{bernoulli_opt, markov_search, MarkovSpec, MarkovSpecJson, Scalar};
use rauzy_core::rng::derive_seed;
use rauzy_core::DigitSeq;
use serde_json::json;

use super::{rational, read_input, require};
use crate::args::{GenKind, GenerateArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::{with_suffix, write_bytes, write_json, FileDigest, RunManifest};

struct Generated {
    seq: DigitSeq,
    seeds: Vec<u64>,
    inputs: Vec<FileDigest>,
    details: serde_json::Value,
    extra_outputs: Vec<FileDigest>,
}

impl Generated {
    fn plain(seq: DigitSeq) -> Self {
        Self {
            seq,
            seeds: Vec::new(),
            inputs: Vec::new(),
            details: serde_json::Value::Null,
            extra_outputs: Vec::new(),
        }
    }
}

pub fn run(args: &GenerateArgs) -> CliResult<()> {
    let g = match args.kind {
        GenKind::Bernoulli => bernoulli(args)?,
        GenKind::Markov => markov(args)?,
        GenKind::Champernowne => Generated::plain(champernowne(args.base, length(args)?)?),
        GenKind::Rational => rational_expansion(args)?,
        GenKind::Interleave => interleaved(args)?,
        GenKind::BlockConcat => blocks(args)?,
        GenKind::RauzyCodec => codec(args)?,
    };
    let digits = write_bytes(&args.output, &format_digits(&g.seq))?;
    let mut manifest = RunManifest::new("generate", args)?;
    manifest.seeds = g.seeds;
    manifest.inputs = g.inputs;
    manifest.outputs.push(digits);
    manifest.outputs.extend(g.extra_outputs);
    let mut doc = serde_json::to_value(&manifest).map_err(|e| CliError::Internal(e.to_string()))?;
    if !g.details.is_null() {
        doc["details"] = g.details;
    }
    write_json(&with_suffix(&args.output, ".json"), &doc)?;
    Ok(())
}

fn length(args: &GenerateArgs) -> CliResult<usize> {
    require(&args.length, "length", "this kind").copied()
}

fn seed(args: &GenerateArgs) -> CliResult<u64> {
    args.seed
        .ok_or_else(|| CliError::usage(format!("{:?} output is random and needs an explicit --seed", args.kind)))
}

fn bernoulli(args: &GenerateArgs) -> CliResult<Generated> {
    let (n, seed) = (length(args)?, seed(args)?);
    let pv: ProbVector<BigRational> = match (&args.probs, &args.noise) {
        (Some(probs), None) => {
            let p = probs
                .iter()
                .map(|t| rational("probs", t))
                .collect::<CliResult<Vec<_>>>()?;
            if p.len() != args.base as usize {
                return Err(CliError::usage(format!(
                    "--probs has {} entries for base {}",
                    p.len(),
                    args.base
                )));
            }
            ProbVector::new(p)?
        }
        (None, Some(s)) => bernoulli_opt(args.base, &rational("noise", s)?)?.0,
        _ => return Err(CliError::usage("bernoulli needs exactly one of --probs and --noise")),
    };
    let mut g = Generated::plain(bernoulli_seq(&pv, n, seed)?);
    g.seeds.push(seed);
    g.details = json!({ "probs": pv.probs().iter().map(|p| p.to_string()).collect::<Vec<_>>() });
    Ok(g)
}

fn markov(args: &GenerateArgs) -> CliResult<Generated> {
    let (n, seed) = (length(args)?, seed(args)?);
    let mut inputs = Vec::new();
    let spec = match (&args.spec, &args.noise) {
        (Some(path), None) => {
            let bytes = read_input(path)?;
            inputs.push(FileDigest::of_bytes(path, &bytes));
            let doc: MarkovSpecJson = serde_json::from_slice(&bytes)?;
            MarkovSpec::try_from(doc)?
        }
        (None, Some(s)) => markov_search(args.base, args.order, rational("noise", s)?.to_f(), args.budget)?.0,
        _ => return Err(CliError::usage("markov needs exactly one of --spec and --noise")),
    };
    if spec.base() != args.base {
        return Err(CliError::usage(format!(
            "measure has base {}, --base is {}",
            spec.base(),
            args.base
        )));
    }
    let mut g = Generated::plain(markov_seq(&spec, n, seed)?);
    g.seeds.push(seed);
    g.inputs = inputs;
    g.details = json!({ "measure": spec.to_json(), "entropy": spec.entropy(), "noise": spec.noise() });
    Ok(g)
}

fn rational_expansion(args: &GenerateArgs) -> CliResult<Generated> {
    let value = require(&args.value, "value", "rational")?;
    let (p, q) = value
        .split_once('/')
        .and_then(|(p, q)| Some((p.trim().parse::<u64>().ok()?, q.trim().parse::<u64>().ok()?)))
        .ok_or_else(|| CliError::usage(format!("--value must look like p/q, got {value:?}")))?;
    if q == 0 || p >= q {
        return Err(CliError::usage(format!("--value needs 0 <= p < q, got {p}/{q}")));
    }
    Ok(Generated::plain(expand_rational(p, q, args.base, length(args)?)?))
}

fn parse_set(text: &str) -> CliResult<MembershipSet> {
    let bad = || CliError::usage(format!("cannot parse --set {text:?}"));
    let set = match text {
        "evens" => MembershipSet::evens(),
        "all" => MembershipSet::All,
        "empty" => MembershipSet::Empty,
        _ => {
            if let Some(mask) = text.strip_prefix("periodic:") {
                let mask = mask
                    .chars()
                    .map(|c| match c {
                        '1' => Ok(true),
                        '0' => Ok(false),
                        _ => Err(bad()),
                    })
                    .collect::<CliResult<Vec<bool>>>()?;
                MembershipSet::Periodic { mask }
            } else if let Some(rest) = text.strip_prefix("progressions:") {
                let mut parts = rest.split(':');
                let i_max = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
                let selected = match parts.next() {
                    Some("") | None => Vec::new(),
                    Some(list) => list
                        .split(',')
                        .map(|t| t.parse().map_err(|_| bad()))
                        .collect::<CliResult<Vec<u32>>>()?,
                };
                let residual = match parts.next() {
                    None => false,
                    Some("residual") => true,
                    Some(_) => return Err(bad()),
                };
                MembershipSet::Progressions {
                    i_max,
                    selected,
                    residual,
                }
            } else {
                return Err(bad());
            }
        }
    };
    set.validate()?;
    Ok(set)
}

/// Reads one interleave source; random sources use `derive_seed(seed, stream)`.
fn source(text: &str, args: &GenerateArgs, stream: u64, g: &mut Generated) -> CliResult<DigitSeq> {
    let (n, base) = (length(args)?, args.base);
    let seq = match text {
        "uniform" => {
            let s = derive_seed(seed(args)?, stream);
            uniform_random(base, n, s)?
        }
        "zeros" => DigitSeq::new(base, vec![0; n])?,
        "champernowne" => champernowne(base, n)?,
        _ => {
            if let Some(v) = text.strip_prefix("rational:") {
                let (p, q) = v
                    .split_once('/')
                    .and_then(|(p, q)| Some((p.parse().ok()?, q.parse().ok()?)))
                    .ok_or_else(|| CliError::usage(format!("cannot parse source {text:?}")))?;
                if q == 0 || p >= q {
                    return Err(CliError::usage(format!("source {text:?} needs 0 <= p < q")));
                }
                expand_rational(p, q, base, n)?
            } else if let Some(path) = text.strip_prefix("file:") {
                g.inputs.push(FileDigest::of(Path::new(path))?);
                read_digits(path, Some(base))?
            } else {
                return Err(CliError::usage(format!("unknown source {text:?}")));
            }
        }
    };
    Ok(seq)
}

fn interleaved(args: &GenerateArgs) -> CliResult<Generated> {
    let set = parse_set(&args.set)?;
    let mut g = Generated::plain(DigitSeq::empty(args.base)?);
    let x = source(&args.x, args, 0, &mut g)?;
    let y = source(&args.y, args, 1, &mut g)?;
    g.seq = interleave(&set, &x, &y, length(args)?)?;
    g.seeds.extend(args.seed);
    g.details = json!({ "set": set, "density": set.density() });
    Ok(g)
}

fn blocks(args: &GenerateArgs) -> CliResult<Generated> {
    let seed = seed(args)?;
    let s = rational("noise", require(&args.noise, "noise", "block-concat")?)?.to_f();
    let mut inputs = Vec::new();
    let x = match args.indicator.as_str() {
        "zeros" => IndicatorFamily::zeros(),
        "first-row" => IndicatorFamily::from_fn(1, args.j_max, |_, _| true),
        other => {
            let path = other
                .strip_prefix("file:")
                .ok_or_else(|| CliError::usage(format!("unknown indicator {other:?}")))?;
            let bytes = read_input(Path::new(path))?;
            inputs.push(FileDigest::of_bytes(Path::new(path), &bytes));
            IndicatorFamily::from_rows(serde_json::from_slice(&bytes)?)
        }
    };
    let out = block_concat(&x, s, args.base, args.j_max, seed)?;
    let seq = match args.length {
        Some(n) if n < out.seq.len() => out.seq.prefix(n),
        _ => out.seq,
    };
    let mut g = Generated::plain(seq);
    g.seeds.push(seed);
    g.inputs = inputs;
    g.details = json!({ "schedule": out.schedule, "blocks": out.blocks });
    Ok(g)
}

fn codec(args: &GenerateArgs) -> CliResult<Generated> {
    let seed = seed(args)?;
    let params = match args.ell {
        Some(ell) => CodecParams::new(args.base, args.k, ell)?,
        None => CodecParams::with_default_ell(args.base, args.k)?,
    };
    let u = uniform_random(args.base, args.blocks * params.block_len(), seed)?;
    let (v, report) = CodecReport::run(&u, &params, args.blocks)?;
    let report_file = write_json(&with_suffix(&args.output, ".report.json"), &report)?;
    let mut g = Generated::plain(v);
    g.seeds.push(seed);
    g.details = json!({ "params": params, "max_errors": report.max_errors });
    g.extra_outputs.push(report_file);
    Ok(g)
}
