//! Success probability of comparing two pure states when the error
//! probability may not exceed a margin `m`, for the optimal measurement and
//! for discriminating each system separately. Prints CSV.
//!
//! Run with `cargo run --example margin_curve -- 0.8 200`.

use qcompare::margin::{fig1_curve, uniform_grid};

fn main() -> qcompare::Result<()> {
    let mut args = std::env::args().skip(1);
    let s: f64 = args.next().map_or(Ok(0.8), |a| a.parse()).expect("overlap must be a number");
    let points: usize = args.next().map_or(Ok(200), |a| a.parse()).expect("points must be an integer");
    let curve = fig1_curve(s, &uniform_grid(0.5, points))?;
    print!("{}", curve.to_csv());
    Ok(())
}
