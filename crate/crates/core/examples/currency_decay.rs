//! How a dataset's currency falls with age for a few decline rates.
//!
//! cargo run --example currency_decay

use chrono::NaiveDate;
use valuerank::valuation::{currency, currency_for_age};

fn main() {
    let rates = [0.1, 0.2, 0.5];
    print!("{:>6}", "years");
    for r in rates {
        print!("  rate {r:<4}");
    }
    println!();
    for years in [0.0, 1.0, 2.0, 5.0, 10.0, 20.0] {
        print!("{years:>6}");
        for r in rates {
            print!("  {:>9.4}", currency_for_age(years, r));
        }
        println!();
    }

    // Calendar dates: ages are measured in days and divided by 365.25.
    let as_of = NaiveDate::from_ymd_opt(2023, 1, 31).unwrap();
    for created in ["2023-01-31", "2018-01-31", "2003-01-31", "2030-01-01"] {
        let d: NaiveDate = created.parse().unwrap();
        println!("created {created}: currency {:.4}", currency(d, as_of, 0.2));
    }
}
