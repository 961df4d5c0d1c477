//! Load a catalog (JSON, or CSV plus a usage CSV) and list rule violations.
//!
//! cargo run --example validate_catalog -- [catalog] [usage.csv]

use std::path::{Path, PathBuf};

use valuerank::catalog::{load_catalog, validate_catalog};
use valuerank::Error;

fn main() {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut args = std::env::args().skip(1).map(PathBuf::from);
    let catalog_path = args.next().unwrap_or_else(|| fixtures.join("catalog.csv"));
    let usage_path = args.next().or_else(|| {
        let is_csv = catalog_path.extension().is_some_and(|e| e == "csv");
        is_csv.then(|| fixtures.join("usage.csv"))
    });

    match load_catalog(&catalog_path, usage_path.as_deref(), None) {
        Ok(catalog) => {
            println!(
                "{}: {} datasets as of {}, utility sources {:?}",
                catalog_path.display(),
                catalog.len(),
                catalog.as_of_date,
                catalog.utility_sources()
            );
            let violations = validate_catalog(&catalog);
            if violations.is_empty() {
                println!("no violations");
            }
            for v in violations {
                println!("{v}");
            }
        }
        Err(Error::Validation(violations)) => {
            println!("{} rejected:", catalog_path.display());
            for v in violations {
                println!("{v}");
            }
            std::process::exit(1);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
