use usdl_trust_core::shapes::{shape_table, validate_graph, FindingCode};
use usdl_trust_core::stad::{parse_document, Literal, Term, Triple, TrustGraph};
use usdl_trust_core::vocab::{terms, Vocabulary, RDF_TYPE};

const ACME: &str = include_str!("../fixtures/acme.stad");

fn instances(graph: &TrustGraph, class_iri: &str) -> Vec<Term> {
    graph
        .iter()
        .filter(|t| t.predicate_iri() == RDF_TYPE && t.object().as_iri() == Some(class_iri))
        .map(|t| t.subject().clone())
        .collect()
}

fn without(graph: &TrustGraph, node: &Term, property_iri: &str) -> (TrustGraph, Vec<Triple>) {
    let mut g = graph.clone();
    let removed: Vec<Triple> = graph
        .iter()
        .filter(|t| t.subject() == node && t.predicate_iri() == property_iri)
        .cloned()
        .collect();
    for t in &removed {
        g.remove(t);
    }
    (g, removed)
}

fn label(term: &Term) -> String {
    match term {
        Term::Iri(i) => i.to_string(),
        Term::Blank(b) => format!("_:{b}"),
        Term::Literal(l) => l.lexical().to_string(),
    }
}

#[test]
fn deleting_each_required_property_yields_e101() {
    let vocab = Vocabulary::standard();
    let graph = parse_document(ACME).unwrap();
    assert!(validate_graph(&graph).valid);
    let mut covered = 0;
    let mut required_total = 0;
    for shape in shape_table() {
        let nodes = instances(&graph, &vocab.iri(shape.target_class));
        for req in &shape.required {
            required_total += 1;
            assert!(!nodes.is_empty(), "fixture lacks a {} instance", shape.target_class);
            for node in &nodes {
                let (mutated, removed) = without(&graph, node, &vocab.iri(req.property));
                assert!(!removed.is_empty(), "{} has no {}", label(node), req.property);
                let report = validate_graph(&mutated);
                assert!(!report.valid);
                assert_eq!(report.errors.len(), 1, "{:#?}", report.errors);
                let e = &report.errors[0];
                assert_eq!(e.code, FindingCode::E101);
                assert_eq!(e.node, label(node));
                assert_eq!(e.property.as_deref(), Some(req.property.curie().as_str()));

                let mut restored = mutated.clone();
                for t in removed {
                    restored.insert(t);
                }
                assert!(validate_graph(&restored).valid);
                assert!(restored.same_triples(&graph));
            }
            covered += 1;
        }
    }
    assert_eq!(covered, required_total);
    assert!(required_total >= 11);
}

#[test]
fn deleting_all_legal_identifiers_yields_e101() {
    let vocab = Vocabulary::standard();
    let graph = parse_document(ACME).unwrap();
    let legal = &instances(&graph, &vocab.iri(terms::LEGAL_DATA))[0];
    let mut g = graph.clone();
    for p in [terms::VAT, terms::CRN, terms::LEI, terms::DUNS] {
        g = without(&g, legal, &vocab.iri(p)).0;
    }
    let report = validate_graph(&g);
    assert_eq!(report.errors.len(), 1);
    assert_eq!(report.errors[0].code, FindingCode::E101);
    assert_eq!(report.errors[0].property, None);
    let g = without(&graph, legal, &vocab.iri(terms::VAT)).0;
    assert!(validate_graph(&g).valid);
}

#[test]
fn wrong_type_cardinality_and_dangling() {
    let vocab = Vocabulary::standard();
    let graph = parse_document(ACME).unwrap();
    let date = vocab.iri(terms::TRANSACTION_DATE);
    let tx = Term::iri("https://acme.example.com/id/tx-2017").unwrap();

    let (mut g, _) = without(&graph, &tx, &date);
    g.insert(Triple::new(tx.clone(), Term::iri(&date).unwrap(), Term::Literal(Literal::plain("last spring"))).unwrap());
    let report = validate_graph(&g);
    assert_eq!(report.errors.iter().map(|e| e.code).collect::<Vec<_>>(), vec![FindingCode::E102]);

    let mut g = graph.clone();
    g.insert(
        Triple::new(
            tx.clone(),
            Term::iri(&date).unwrap(),
            Term::Literal(Literal::typed("2018-01-01", usdl_trust_core::vocab::Iri::new(usdl_trust_core::vocab::XSD_DATE).unwrap())),
        )
        .unwrap(),
    );
    let report = validate_graph(&g);
    assert_eq!(report.errors.iter().map(|e| e.code).collect::<Vec<_>>(), vec![FindingCode::E103]);

    let mut g = graph.clone();
    g.insert(
        Triple::new(
            Term::iri("https://acme.example.com/id/linz").unwrap(),
            Term::iri(vocab.iri(terms::HAS_KPI)).unwrap(),
            Term::iri("https://acme.example.com/id/nowhere").unwrap(),
        )
        .unwrap(),
    );
    let report = validate_graph(&g);
    assert_eq!(report.errors.iter().map(|e| e.code).collect::<Vec<_>>(), vec![FindingCode::E104]);
}

#[test]
fn warnings_decrease_as_content_is_added() {
    let graph = parse_document(ACME).unwrap();
    let vocab = Vocabulary::standard();
    let mut g = TrustGraph::new(graph.prefixes().clone());
    let provider = Term::iri("https://acme.example.com/id/provider").unwrap();
    g.insert(Triple::new(provider, Term::iri(RDF_TYPE).unwrap(), Term::iri(vocab.iri(terms::PROVIDER)).unwrap()).unwrap());
    let mut last = validate_graph(&g).warnings.len();
    assert_eq!(last, 7);
    for t in graph.iter() {
        g.insert(t.clone());
        let now = validate_graph(&g).warnings.len();
        assert!(now <= last);
        last = now;
    }
    assert_eq!(last, 0);
}
