use cgg_core::document::{parse_document, serialize_game};
use cgg_core::scenarios::{self, ScenarioError};

#[test]
fn every_fact_is_rederived_by_the_solvers() {
    for s in scenarios::all() {
        for check in s.verify() {
            assert!(check.ok, "{}: {} ({})", s.name, check.note, check.detail);
        }
    }
}

#[test]
fn names_resolve_and_unknown_names_fail() {
    for name in scenarios::NAMES {
        assert_eq!(scenarios::by_name(name).unwrap().name, *name);
    }
    assert!(matches!(scenarios::by_name("nope"), Err(ScenarioError::Unknown(_))));
}

#[test]
fn scenario_documents_round_trip() {
    for s in scenarios::all() {
        let text = serialize_game(&s.game, s.roles.as_deref());
        let doc = parse_document(&text).unwrap();
        assert_eq!(doc.game, s.game, "{}", s.name);
        assert_eq!(doc.roles, s.roles, "{}", s.name);
    }
}
