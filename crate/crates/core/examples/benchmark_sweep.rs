//! Multiplier sweep through the experiment runner, emitted as CSV.

use curnys::adversarial::AdversarialSpec;
use curnys::bench::emit::{self, OutputFormat};
use curnys::bench::experiment::{self, ExperimentConfig, Method, Source, Sweep, Task, Variant};

fn main() -> curnys::Result<()> {
    let mut config = ExperimentConfig {
        source: Source::Synthetic { m: 120, n: 90, rate: 0.9, seed: 0 },
        task: Task::Cur,
        method: Method::Adaptive,
        variant: Variant::Standard,
        k: 5,
        sweep: Sweep::Multipliers(vec![2.0, 3.0, 4.0]),
        ensemble_t: 3,
        repeats: 5,
        seed: 0,
        timing: false,
        max_dim: 2000,
    };
    config.validate()?;
    let a = config.source.load(config.max_dim)?;
    let mut records = experiment::run_experiment(&config, &a)?;

    config.method = Method::Subspace;
    records.extend(experiment::run_experiment(&config, &a)?);

    config.source = Source::Adversarial(AdversarialSpec::single(80, 0.7)?);
    config.task = Task::LowerBound;
    config.method = Method::Uniform;
    let b = config.source.load(config.max_dim)?;
    records.extend(experiment::run_experiment(&config, &b)?);

    emit::emit(&records, OutputFormat::Csv, None)
}
