//! Search all normal terms up to eight nodes for a proof of `eps x`.

use pimodulo::kernel::Theory;
use pimodulo::reduction::DEFAULT_FUEL;
use pimodulo::scan::{consistency_control, consistency_scan, consistency_setup, ModelKind};

fn main() {
    for (kind, th) in [(ModelKind::Stt, Theory::stt()), (ModelKind::Cc, Theory::cc())] {
        let (ctx, target) = consistency_setup(kind);
        let rep = consistency_scan(&th, &ctx, &th.resolve(&target), 8, DEFAULT_FUEL);
        println!("{}: {} normal terms by size {:?}, inhabitants of {}: {:?}", kind.name(), rep.examined, rep.by_size, rep.target, rep.inhabitants);
        let (ctx, control) = consistency_control(kind);
        let ctl = consistency_scan(&th, &ctx, &th.resolve(&control), 8, DEFAULT_FUEL);
        let found: Vec<String> = ctl.inhabitants.iter().map(|t| t.to_string()).collect();
        println!("  control {}: {}", ctl.target, found.join(", "));
    }
}
