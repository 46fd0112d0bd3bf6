use wellbalanced::corpus::{generate, parse_corpus, write_corpus};
use wellbalanced::io::Document;
use wellbalanced::suite::{default_fixtures_dir, CORPUS_FILE, OA_NOT_CA_FILE};
use wellbalanced::{decide_ca, decide_oa, check_cut_certificate, CertificateCheck, Limits};

#[test]
fn corpus_fixture_is_intact() {
    let text = std::fs::read_to_string(default_fixtures_dir().join(CORPUS_FILE)).unwrap();
    let graphs = parse_corpus(&text).unwrap();
    assert_eq!(graphs.len(), 505);
    assert!(graphs.iter().all(|g| g.is_connected() && g.edge_count() <= 8 && g.vertex_count() <= 5));
    assert_eq!(write_corpus(&graphs), text);
}

#[test]
fn corpus_regenerates_identically() {
    let text = std::fs::read_to_string(default_fixtures_dir().join(CORPUS_FILE)).unwrap();
    assert_eq!(write_corpus(&generate(5, 8)), text);
}

#[test]
fn documents_round_trip_on_corpus() {
    let text = std::fs::read_to_string(default_fixtures_dir().join(CORPUS_FILE)).unwrap();
    for g in parse_corpus(&text).unwrap() {
        let doc = Document::from_graph("graph", &g).to_text();
        let parsed = Document::parse(&doc).unwrap();
        assert_eq!(parsed.graph().unwrap(), g);
        assert_eq!(parsed.to_text(), doc);
    }
}

#[test]
fn pinned_pairing_is_orientation_but_not_cut_admissible() {
    let doc = Document::read(&default_fixtures_dir().join(OA_NOT_CA_FILE)).unwrap();
    let g = doc.graph().unwrap();
    let f = doc.pairing_for(&g).unwrap();
    let l = Limits::default();
    assert!(decide_oa(&g, &f, &l).unwrap().is_admissible());
    assert!(!decide_ca(&g, &f, &l).unwrap().is_admissible());
    let x = doc.set_in(&g).unwrap();
    assert!(matches!(check_cut_certificate(&g, &f, &x).unwrap(), CertificateCheck::Violation(_)));
}
