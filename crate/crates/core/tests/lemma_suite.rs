use zlab::algebra::implication_zroupoids;
use zlab::lemmas::{involution_equivalents, lemma_suite, Outcome};
use zlab::search::{enumerate_models, SearchSpec};
use zlab::satisfies;

#[test]
fn every_clause_holds_on_implication_models_up_to_four() {
    let eq = involution_equivalents();
    let mut models = 0;
    let mut checked = 0;
    for n in 1..=4 {
        for m in enumerate_models(&SearchSpec::new(n).satisfy(implication_zroupoids())).unwrap() {
            let v: Vec<bool> = eq.iter().map(|id| satisfies(&m, id).holds).collect();
            assert!(v.iter().all(|b| *b == v[0]), "equivalent forms disagree on {m:?}: {v:?}");
            let report = lemma_suite(&m);
            for e in &report.entries {
                assert!(e.outcome.is_ok(), "{} fails on {m:?}: {:?}", e.clause, e.outcome);
            }
            checked += report.count(|o| *o == Outcome::Pass);
            models += 1;
        }
    }
    assert_eq!(models, 1 + 3 + 17 + 249);
    assert!(checked > 0);
}
