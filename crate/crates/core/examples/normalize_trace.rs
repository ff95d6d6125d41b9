//! Normalize a term modulo the STT rules and print every step.

use pimodulo::kernel::Theory;
use pimodulo::reduction::{normalize_with, Fuel, Mode};
use pimodulo::syntax::parse_term;

fn main() {
    let th = Theory::stt();
    let src = "eps (all[o] (\\p : o. imp p ((\\q : o. q) p)))";
    let t = th.resolve(&parse_term(src).unwrap());
    println!("{t}");
    let nf = normalize_with(&t, &th, Mode::BetaR, &mut Fuel::new(100), |s| println!("  {}\t{}\t{}", s.position, s.kind, s.result)).unwrap();
    println!("normal form: {nf}");

    let omega = parse_term("(\\x : A. x x) (\\x : A. x x)").unwrap();
    let e = normalize_with(&omega, &th, Mode::Beta, &mut Fuel::new(10), |_| {}).unwrap_err();
    println!("omega after 10 steps: {}", e.last);
}
