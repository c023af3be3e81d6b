//! Print the K₀ table of the crossed-product corpus as JSON.
//!
//! `cargo run -p iskk-core --example k0_table > crates/core/tests/golden/k0.json`

use iskk_core::corpus::crossed_corpus;
use iskk_core::crossed::semisimple_quotient;
use iskk_core::ktheory::k0;
use serde_json::{json, Map, Value};

fn main() {
    let mut table = Map::new();
    for (name, alg) in crossed_corpus() {
        let dec = semisimple_quotient(&alg);
        let group = k0(&alg, 0).expect("corpus algebras have K₀");
        table.insert(
            name,
            json!({
                "dim": alg.dim(),
                "radical_dim": dec.radical_dim,
                "rank": group.rank,
                "block_dims": group.block_dims,
                "method": group.method.name(),
            }),
        );
    }
    println!("{}", serde_json::to_string_pretty(&Value::Object(table)).expect("serializes"));
}
