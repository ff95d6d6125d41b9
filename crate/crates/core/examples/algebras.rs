//! Enumerate the full Π-algebras on two elements and count the ones that
//! are ordered and complete for each partial order.

use pimodulo::algebra::{check_complete, check_ordered, enumerate_full_algebras, OrderRelation};

fn main() {
    let algs: Vec<_> = enumerate_full_algebras(2).unwrap().collect();
    println!("{} full algebras on 2 elements", algs.len());
    for rows in OrderRelation::reflexive_candidates(2) {
        let Ok(order) = OrderRelation::new(2, rows.clone()) else { continue };
        let ordered = algs.iter().filter(|a| check_ordered(a, &order)).count();
        let complete = algs.iter().filter(|a| check_ordered(a, &order) && check_complete(a, &order)).count();
        println!("order {rows:?}: {ordered} ordered, {complete} ordered and complete");
    }
    println!("first algebra:\n{}", algs[0].to_alg_string());
}
