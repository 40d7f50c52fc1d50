use ribbon_moduli::enumerate::canonical_key;
use ribbon_moduli::permgraph::StableRibbonGraph;
use ribbon_moduli::random;
use ribbon_moduli::stable::{contract_edge, contract_set, ContractionPlan};

fn contractible(g: &StableRibbonGraph) -> Vec<usize> {
    (0..g.edge_count()).filter(|&e| ContractionPlan::new(g, [e]).is_ok()).collect()
}

/// Index of edge `f` after removing edge `e`.
fn shift(f: usize, e: usize) -> usize {
    if f > e { f - 1 } else { f }
}

#[test]
fn random_graphs_obey_contraction_laws() {
    let mut rng = random::rng(7);
    for _ in 0..400 {
        let g = random::stable_graph(&mut rng, 6);
        for e in contractible(&g) {
            let c = contract_edge(&g, e).unwrap();
            assert_eq!(c.validate(), Ok(()), "{}\ncontract {e}", g.to_json());
            assert_eq!(c.genus(), g.genus(), "{}\ncontract {e}", g.to_json());
            assert_eq!(c.face_count(), g.face_count());
            for f in contractible(&g) {
                if f == e {
                    continue;
                }
                let Ok(ab) = contract_edge(&c, shift(f, e)) else { continue };
                let ba = contract_edge(&contract_edge(&g, f).unwrap(), shift(e, f)).unwrap();
                assert_eq!(canonical_key(&ab), canonical_key(&ba), "{}\n{e} then {f}", g.to_json());
                let set = contract_set(&g, [e, f]).unwrap();
                assert_eq!(canonical_key(&set), canonical_key(&ab), "{}\nset {e},{f}", g.to_json());
            }
        }
    }
}
