//! Type-check a few judgements in the shipped STT theory.

use pimodulo::kernel::{Context, Term, Theory};
use pimodulo::reduction::{Fuel, DEFAULT_FUEL};
use pimodulo::syntax::parse_term;
use pimodulo::typing::{check_theory, infer};

fn main() {
    let th = Theory::stt();
    let report = check_theory(&th, &mut Fuel::new(DEFAULT_FUEL));
    println!("theory: {} declarations, ok = {}", report.items.len(), report.is_ok());

    let ctx = Context::new().with("a", Term::constant("o")).with("b", Term::constant("o"));
    for src in ["imp a b", "\\h : eps a. \\k : eps b. h", "\\h : eps (imp a b). \\x : eps a. h x", "eps eps"] {
        let t = th.resolve(&parse_term(src).unwrap());
        match infer(&th, &ctx, &t, &mut Fuel::new(DEFAULT_FUEL)) {
            Ok(ty) => println!("{t} : {ty}"),
            Err(e) => println!("{t} is ill-typed: {e}"),
        }
    }
}
