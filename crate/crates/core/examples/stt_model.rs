//! Interpret STT terms in a two-element algebra and check that a rewrite
//! step preserves the interpretation under every valuation.

use pimodulo::algebra::FiniteAlgebra;
use pimodulo::kernel::{Context, Term, Theory};
use pimodulo::model::stt::{domain_stt, SttModel};
use pimodulo::reduction::r_root;
use pimodulo::syntax::parse_term;

fn main() {
    // Π̃(w, S) = 1 iff w = 0 or S = {1}: implication in the two-element Boolean algebra.
    let alg = FiniteAlgebra::parse_alg("2 1\n1 1 1 1\n0 0 1 0\n").unwrap();
    let th = Theory::stt();
    let model = SttModel::new(&th, &alg);
    let ctx = Context::new().with("a", Term::constant("o")).with("b", Term::constant("o"));
    let t = th.resolve(&parse_term("eps (imp a b)").unwrap());
    let (u, rule) = r_root(&t, &th).unwrap();
    println!("{t} --{rule}--> {u}; domain {}", domain_stt(&t));
    for phi in model.valuations(&ctx).unwrap() {
        let (vt, vu) = (model.interp(&t, &phi).unwrap(), model.interp(&u, &phi).unwrap());
        println!("a={} b={}: {vt} = {vu}", phi["a"], phi["b"]);
        assert_eq!(vt, vu);
    }
}
