//! Strong normalization by reduction-tree search, and the candidate lemmas
//! on a few terms.

use pimodulo::candidates::{
    check_application_lemma, check_variables_lemma, default_probes, enumerate_candidates, in_candidate, sn_check, CandidateExpr, CandidateOracle,
};
use pimodulo::reduction::Fuel;
use pimodulo::syntax::parse_term;

fn main() {
    for src in ["x", "(\\x : A. x) y", "(\\f : A. f (f y)) (\\z : A. z)", "(\\x : A. x x) (\\x : A. x x)"] {
        let t = parse_term(src).unwrap();
        println!("{src}: {:?}", sn_check(&t, &mut Fuel::new(1000)));
    }
    let top = CandidateExpr::TTop;
    let arrow = CandidateExpr::pi(top.clone(), vec![top.clone()]);
    let probes = default_probes();
    println!("\\x. x in {arrow}: {:?}", in_candidate(&parse_term("\\x : A. x").unwrap(), &arrow, 1000, &probes));

    let oracle = CandidateOracle::new(1000, probes);
    let cands = enumerate_candidates(3);
    let holds = cands.iter().filter(|c| check_variables_lemma(c, &oracle) == pimodulo::candidates::LemmaOutcome::Holds).count();
    println!("variables lemma holds for {holds} of {} candidates", cands.len());
    let id = parse_term("\\x : A. x").unwrap();
    println!("application lemma: {:?}", check_application_lemma(&id, &parse_term("y").unwrap(), &top, std::slice::from_ref(&top), &oracle));
}
