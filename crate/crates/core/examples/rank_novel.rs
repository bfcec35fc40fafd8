//! Top unobserved pairs by held-out ELS-WkNNIR score.
//!
//!     cargo run --release --example rank_novel

mod common;

use wknnir::eval::write_novel_csv;
use wknnir::{
    rank_novel, EnsembleConfig, KnnParams, LearnerSpec, Method, SamplingStrategy, Setting,
};

fn main() -> wknnir::Result<()> {
    let (_, ds) = common::dataset()?;
    let spec = LearnerSpec::fixed(Method::Wknnir, KnnParams::new(5, 0.9)?)
        .with_ensemble(EnsembleConfig::new(SamplingStrategy::local(0.1, 5)));
    let top = rank_novel(&ds, &spec, Setting::S2, 10, 0)?;
    write_novel_csv(&top, std::io::stdout())
}
