//! Enumerate well-typed terms by size and sample from the pool.

use pimodulo::gen::{cc_context, sample, stt_context, EnumConfig, Enumerator};
use pimodulo::kernel::Theory;

fn main() {
    for (name, th, ctx) in [("stt", Theory::stt(), stt_context()), ("cc", Theory::cc(), cc_context())] {
        let mut all = Enumerator::new(&th, &ctx, EnumConfig::default());
        let mut normal = Enumerator::new(&th, &ctx, EnumConfig { normal_only: true, ..Default::default() });
        let counts: Vec<(usize, usize)> = (1..=9).step_by(2).map(|s| (all.of_size(s).len(), normal.of_size(s).len())).collect();
        println!("{name}: (all, normal) by size 1, 3, .., 9: {counts:?}");
        for t in sample(&all.of_size(7), 3, 42) {
            println!("  {} : {}", t.term, t.ty);
        }
    }
}
