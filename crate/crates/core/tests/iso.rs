use dehnfill_core::format::parse_group_file;
use dehnfill_core::iso::{compare, disprove_step, search_isomorphism, verify_record, Verdict, VerdictRecord};
use dehnfill_core::{Budgets, MarkedGroup};

fn f2(second: &str) -> MarkedGroup {
    parse_group_file(&format!(
        "group F2\n gens: a, b\n rels:\n peripheral A\n  gens: x\n  rels:\n  embed: x -> a\n end\n peripheral B\n  gens: x\n  rels:\n  embed: x -> {second}\n end\nend\n"
    ))
    .unwrap()
}

fn group(text: &str) -> MarkedGroup {
    parse_group_file(text).unwrap()
}

#[test]
fn identical_groups_are_isomorphic_by_identity() {
    let g = f2("b");
    let w = search_isomorphism(&g, &g, &Budgets::default()).unwrap();
    let names: Vec<String> = w.forward.iter().map(|x| g.ambient().show(x)).collect();
    assert_eq!(names, ["a", "b"]);
    w.verify(&g, &g).unwrap();
}

#[test]
fn renaming() {
    let l = group("group L\n gens: a\n rels:\nend\n");
    let r = group("group R\n gens: b\n rels:\nend\n");
    let w = search_isomorphism(&l, &r, &Budgets::default()).unwrap();
    assert_eq!(r.ambient().show(&w.forward[0]), "b");
    assert_eq!(l.ambient().show(&w.backward[0]), "a");
}

#[test]
fn killing_a_generator() {
    let l = group("group L\n gens: a, b\n rels: b\nend\n");
    let r = group("group R\n gens: c\n rels:\nend\n");
    let w = search_isomorphism(&l, &r, &Budgets::default()).unwrap();
    let fwd: Vec<String> = w.forward.iter().map(|x| r.ambient().show(x)).collect();
    assert_eq!(fwd, ["c", "1"]);
    assert_eq!(l.ambient().show(&w.backward[0]), "a");
    w.verify(&l, &r).unwrap();
    assert!(w.checks.iter().all(|c| c.derivation.len() <= 1));
}

#[test]
fn disproof_at_level_two() {
    let (l, r) = (f2("b"), f2("b^2"));
    // level 1 already separates: trivial group vs Z/2
    let c1 = disprove_step(&l, &r, 1, &Budgets::default()).unwrap();
    assert_eq!(
        (
            c1.difference.field.as_str(),
            c1.difference.left.as_str(),
            c1.difference.right.as_str()
        ),
        ("torsion_factors", "()", "(2)")
    );
    let c = disprove_step(&l, &r, 2, &Budgets::default()).unwrap();
    assert_eq!(c.difference.field, "torsion_factors");
    assert_eq!(
        (c.difference.left.as_str(), c.difference.right.as_str()),
        ("(2,2)", "(2,4)")
    );
    let v = compare(&l, &r, &Budgets::default());
    let Verdict::NotIsomorphic(c) = &v else { panic!("{v:?}") };
    assert_eq!(c.level, 1);
    let rec = VerdictRecord::new(&l, &r, &Budgets::default(), &v);
    verify_record(&VerdictRecord::from_json(&rec.to_json()).unwrap()).unwrap();
}

#[test]
fn peripheral_count_mismatch() {
    let l = f2("b");
    let r = group("group F2\n gens: a, b\n rels:\n peripheral A\n  gens: x\n  rels:\n  embed: x -> a\n end\nend\n");
    let c = disprove_step(&l, &r, 1, &Budgets::default()).unwrap();
    assert_eq!(c.difference.field, "peripheral_count");
}

#[test]
fn self_compare_record_round_trip() {
    let g = f2("b");
    let v = compare(&g, &g, &Budgets::default());
    assert_eq!(v.name(), "ISOMORPHIC");
    let rec = VerdictRecord::new(&g, &g, &Budgets::default(), &v);
    let json = rec.to_json();
    verify_record(&VerdictRecord::from_json(&json).unwrap()).unwrap();
    let tampered = json.replacen("\"relator\": 0", "\"relator\": 1", 1);
    if tampered != json {
        assert!(verify_record(&VerdictRecord::from_json(&tampered).unwrap()).is_err());
    }
}

#[test]
fn zero_budgets_are_unknown() {
    let g = f2("b");
    assert_eq!(compare(&g, &g, &Budgets::zero()).name(), "UNKNOWN");
}
