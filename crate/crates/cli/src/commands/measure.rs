use rauzy_core::measures::{bernoulli_opt, markov_search, MarkovSpec, MarkovSpecJson, Scalar};
use serde_json::json;

use super::{emit, log_scale, rational, read_input};
use crate::args::{MeasureArgs, SearchArgs};
use crate::error::CliResult;
use crate::manifest::write_json;

fn print(value: &serde_json::Value) -> CliResult<()> {
    emit(&serde_json::to_string_pretty(value).expect("JSON values serialize"))
}

pub fn run_measure(args: &MeasureArgs) -> CliResult<()> {
    let doc: MarkovSpecJson = serde_json::from_slice(&read_input(&args.spec)?)?;
    let spec = MarkovSpec::try_from(doc)?;
    let scale = log_scale(&args.log_base, spec.base())?;
    print(&json!({
        "schema_version": rauzy_core::SCHEMA_VERSION,
        "base": spec.base(),
        "order": spec.order(),
        "log_base": args.log_base,
        "entropy": spec.entropy() / scale,
        "noise": spec.noise(),
    }))
}

pub fn run_search(args: &SearchArgs) -> CliResult<()> {
    let scale = log_scale(&args.log_base, args.base)?;
    let s = rational("noise", &args.noise)?;
    let (pv, h) = bernoulli_opt(args.base, &s)?;
    let bernoulli = MarkovSpec::bernoulli(&pv)?;
    let mut report = json!({
        "schema_version": rauzy_core::SCHEMA_VERSION,
        "base": args.base,
        "noise_cap": s.to_string(),
        "log_base": args.log_base,
        "bernoulli": {
            "probs": pv.probs().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "entropy": h / scale,
            "noise": bernoulli.noise().to_string(),
        },
    });
    let mut best = bernoulli.to_json();
    if let Some(order) = args.order {
        let (spec, h) = markov_search(args.base, order, s.to_f(), args.budget)?;
        report["markov"] = json!({
            "order": order,
            "budget": args.budget,
            "entropy": h / scale,
            "noise": spec.noise(),
            "measure": spec.to_json(),
        });
        best = spec.to_json();
    }
    if let Some(path) = &args.output {
        write_json(path, &best)?;
    }
    print(&report)
}
