//! The three layers of the CC model, and a conversion check over every
//! algebra with at most two elements.

use pimodulo::algebra::sweep_algebras;
use pimodulo::kernel::{Context, Term, Theory};
use pimodulo::model::cc::{domain_n, CcModel, Env};
use pimodulo::reduction::r_root;
use pimodulo::syntax::parse_term;

fn main() {
    let th = Theory::cc();
    let parse = |s: &str| th.resolve(&parse_term(s).unwrap());
    for s in ["U_Kind", "eps_Kind dType", "dPi_TTT", "\\X : U_Kind. X"] {
        println!("N({s}) = {}", domain_n(&parse(s)));
    }
    let algs = sweep_algebras();
    let m = CcModel::new(&algs[0]);
    println!("M(eps_Kind dType) = {}", m.domain_m(&parse("eps_Kind dType"), &Env::new()).unwrap());

    let ctx = Context::new().with("T", Term::constant("U_Type"));
    let t = parse("eps_Type (dPi_TTT T (\\x : eps_Type T. T))");
    let (u, rule) = r_root(&t, &th).unwrap();
    let mut checks = 0;
    for alg in &algs {
        let m = CcModel::new(alg);
        for env in m.valuations(&ctx).unwrap() {
            assert!(m.check_conversion(&t, &u, &env).unwrap().all());
            checks += 1;
        }
    }
    println!("{rule}: {t} = {u} in all {checks} (algebra, valuation) pairs");
}
