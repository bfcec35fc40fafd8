//! Repeated CV of WkNN and WkNNIR in all three settings with fixed
//! parameters, printed as CSV.
//!
//!     cargo run --release --example cross_validation [-- gpcr]

mod common;

use wknnir::{run_cv, CvPlan, KnnParams, LearnerSpec, Method, Setting};

fn main() -> wknnir::Result<()> {
    let (name, ds) = common::dataset()?;
    eprintln!("dataset: {name}");
    let params = KnnParams::new(7, 0.8)?;
    for setting in Setting::ALL {
        for method in [Method::Wknn, Method::Wknnir] {
            let r = run_cv(
                &ds,
                &LearnerSpec::fixed(method, params),
                &CvPlan::new(setting).with_seed(1),
            )?;
            eprintln!(
                "{setting} {:<7} mean AUPR {:.4}",
                r.learner,
                r.mean_aupr.unwrap_or(f64::NAN)
            );
            r.write_csv(std::io::stdout())?;
        }
    }
    Ok(())
}
