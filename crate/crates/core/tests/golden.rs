//! K₀ of every corpus crossed product against the table in `golden/k0.json`.

use iskk_core::corpus::crossed_corpus;
use iskk_core::crossed::semisimple_quotient;
use iskk_core::ktheory::k0;
use serde_json::{json, Value};

#[test]
fn k0_table_matches_golden() {
    let golden: Value = serde_json::from_str(include_str!("golden/k0.json")).unwrap();
    let corpus = crossed_corpus();
    assert_eq!(golden.as_object().unwrap().len(), corpus.len());
    for (name, alg) in corpus {
        let group = k0(&alg, 0).unwrap();
        let got = json!({
            "dim": alg.dim(),
            "radical_dim": semisimple_quotient(&alg).radical_dim,
            "rank": group.rank,
            "block_dims": group.block_dims,
            "method": group.method.name(),
        });
        assert_eq!(golden[&name], got, "{name}");
    }
}

#[test]
fn known_rows() {
    let golden: Value = serde_json::from_str(include_str!("golden/k0.json")).unwrap();
    // ℂ[S₃] = ℂ ⊕ ℂ ⊕ M₂
    let mut dims: Vec<u64> = golden["symmetric_group:3 C universal"]["block_dims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    dims.sort_unstable();
    assert_eq!(dims, vec![1, 1, 2]);
    assert_eq!(golden["chain:3 C universal"]["rank"], 3);
    assert_eq!(golden["chain:3 C sieben"]["rank"], 1);
}
