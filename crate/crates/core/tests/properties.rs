use std::sync::OnceLock;

use proptest::prelude::*;

use pimodulo::algebra::sweep_algebras;
use pimodulo::algebra::FiniteAlgebra;
use pimodulo::gen::{cc_context, stt_context, EnumConfig, Enumerator, TypedTerm};
use pimodulo::kernel::{alpha_eq, free_vars, substitute, Context, Term, Theory};
use pimodulo::model::cc::CcModel;
use pimodulo::model::stt::SttModel;
use pimodulo::reduction::{is_normal, normalize, one_step_reducts, Fuel, Mode, DEFAULT_FUEL};
use pimodulo::syntax::{parse_term, print_term};
use pimodulo::typing::infer;

const NAMES: [&str; 5] = ["x", "y", "z", "f", "A"];

/// Raw, usually ill-typed terms over a few names; binders capture by name.
fn raw_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Type),
        Just(Term::Kind),
        (0..NAMES.len()).prop_map(|i| Term::free(NAMES[i])),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(a, b)),
            (0..NAMES.len(), inner.clone(), inner.clone()).prop_map(|(i, a, b)| Term::lam(NAMES[i], a, b)),
            (0..NAMES.len(), inner.clone(), inner).prop_map(|(i, a, b)| Term::pi(NAMES[i], a, b)),
        ]
    })
}

struct Pools {
    stt: Theory,
    cc: Theory,
    stt_terms: Vec<TypedTerm>,
    cc_terms: Vec<TypedTerm>,
    algebras: Vec<FiniteAlgebra>,
}

fn pools() -> &'static Pools {
    static P: OnceLock<Pools> = OnceLock::new();
    P.get_or_init(|| {
        let stt = Theory::stt();
        let cc = Theory::cc();
        let stt_terms = Enumerator::new(&stt, &stt_context(), EnumConfig::default()).up_to(7);
        let cc_terms = Enumerator::new(&cc, &cc_context(), EnumConfig::default()).up_to(7);
        Pools { stt, cc, stt_terms, cc_terms, algebras: sweep_algebras() }
    })
}

fn nf(th: &Theory, t: &Term) -> Term {
    normalize(t, th, Mode::BetaR, &mut Fuel::new(DEFAULT_FUEL)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn printing_then_parsing_is_the_identity(t in raw_term()) {
        let printed = print_term(&t);
        prop_assert_eq!(parse_term(&printed).unwrap(), t, "{}", printed);
    }

    #[test]
    fn renaming_a_bound_variable_is_invisible(t in raw_term(), a in raw_term()) {
        prop_assume!(!free_vars(&t).iter().any(|n| &**n == "w"));
        let l = Term::lam("x", a.clone(), t.clone());
        let r = Term::lam("w", a, substitute(&t, "x", &Term::free("w")));
        prop_assert!(alpha_eq(&l, &r));
        prop_assert_eq!(l, r);
    }

    #[test]
    fn substitution_composes(t in raw_term(), u in raw_term(), v in raw_term()) {
        prop_assume!(!free_vars(&v).iter().any(|n| &**n == "x"));
        let left = substitute(&substitute(&t, "x", &u), "y", &v);
        let right = substitute(&substitute(&t, "y", &v), "x", &substitute(&u, "y", &v));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn substituting_an_absent_variable_changes_nothing(t in raw_term(), u in raw_term()) {
        prop_assert_eq!(substitute(&t, "x", &Term::free("x")), t.clone());
        let t2 = substitute(&t, "x", &Term::Type);
        prop_assert_eq!(substitute(&t2, "x", &u), t2);
    }

    #[test]
    fn reducts_keep_their_type(i in any::<prop::sample::Index>(), cc in any::<bool>()) {
        let p = pools();
        let (th, ctx, pool) = if cc { (&p.cc, cc_context(), &p.cc_terms) } else { (&p.stt, stt_context(), &p.stt_terms) };
        let t = i.get(pool);
        for u in one_step_reducts(&t.term, th, Mode::BetaR) {
            let ty = infer(th, &ctx, &u, &mut Fuel::new(DEFAULT_FUEL)).unwrap();
            prop_assert_eq!(nf(th, &ty), t.ty.clone(), "{} -> {}", t.term, u);
        }
    }

    #[test]
    fn printed_typed_terms_parse_back(i in any::<prop::sample::Index>(), cc in any::<bool>()) {
        let p = pools();
        let (th, pool) = if cc { (&p.cc, &p.cc_terms) } else { (&p.stt, &p.stt_terms) };
        let t = &i.get(pool).term;
        prop_assert_eq!(&th.resolve(&parse_term(&print_term(t)).unwrap()), t);
    }

    #[test]
    fn normal_forms_are_normal_and_typed_alike(i in any::<prop::sample::Index>()) {
        let p = pools();
        let t = i.get(&p.stt_terms);
        let n = nf(&p.stt, &t.term);
        prop_assert!(is_normal(&n, &p.stt, Mode::BetaR));
        let ty = infer(&p.stt, &stt_context(), &n, &mut Fuel::new(DEFAULT_FUEL)).unwrap();
        prop_assert_eq!(nf(&p.stt, &ty), t.ty.clone());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn stt_interpretation_is_invariant_under_reduction(i in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let p = pools();
        let t = i.get(&p.stt_terms);
        let alg = k.get(&p.algebras);
        let m = SttModel::new(&p.stt, alg);
        let ctx: Context = stt_context();
        for phi in m.valuations(&ctx).unwrap() {
            for u in one_step_reducts(&t.term, &p.stt, Mode::BetaR) {
                prop_assert!(m.check_conversion(&t.term, &u, &phi).unwrap(), "{} -> {}", t.term, u);
            }
        }
    }

    #[test]
    fn cc_interpretation_is_invariant_under_reduction(i in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let p = pools();
        let t = i.get(&p.cc_terms);
        let alg = k.get(&p.algebras);
        let m = CcModel::new(alg);
        for env in m.default_valuations(&cc_context()).unwrap() {
            for u in one_step_reducts(&t.term, &p.cc, Mode::BetaR) {
                // terms the model cannot evaluate are out of scope here
                if let Ok(ag) = m.check_conversion(&t.term, &u, &env) {
                    prop_assert!(ag.all(), "{} -> {}: {:?}", t.term, u, ag);
                }
            }
        }
    }

    #[test]
    fn stt_values_inhabit_their_domains(i in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let p = pools();
        let t = i.get(&p.stt_terms);
        let alg = k.get(&p.algebras);
        let m = SttModel::new(&p.stt, alg);
        let dom = pimodulo::model::stt::domain_stt(&t.ty);
        for phi in m.valuations(&stt_context()).unwrap() {
            let v = m.interp(&t.term, &phi).unwrap();
            prop_assert!(pimodulo::model::member(&v, &dom, alg), "{} : {} gave {}", t.term, t.ty, v);
        }
    }
}
