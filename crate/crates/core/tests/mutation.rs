//! Broken inputs are rejected, and broken data fail the checks with a witness.

use plectic_lab::cm::CmType;
use plectic_lab::extension::{perturb, verify_cocycle, CocycleMap, GammaModule, M0Choice};
use plectic_lab::instance::{catalog_text, load_catalog, InstanceError, InstanceFile};
use plectic_lab::plectic::PlecticGroup;

#[test]
fn conjugation_inside_h_is_rejected() {
    let text = catalog_text("zeta8")
        .unwrap()
        .replace("c.perm = (1 4)(2 3)", "c.perm = (1 3)(2 4)");
    let err = InstanceFile::parse(&text).unwrap_err();
    assert!(err.to_string().contains("H"), "{err}");
}

#[test]
fn empty_and_malformed_files() {
    assert!(matches!(
        InstanceFile::parse(""),
        Err(InstanceError::Parse { line: 1, .. })
    ));
    let text = "[group]\ndegree = 4\ngenerators = (1 5)\n";
    assert!(matches!(
        InstanceFile::parse(text),
        Err(InstanceError::Parse { line: 3, .. })
    ));
    let text = "[group]\ndegree = 4\ngenerators = (1 2)\n[bogus]\n";
    assert!(matches!(
        InstanceFile::parse(text),
        Err(InstanceError::Parse { line: 4, .. })
    ));
}

#[test]
fn nested_subgroup_outside_h_is_rejected() {
    let text = format!(
        "{}[nested]\nH.generators = (1 2)(3 4)\n",
        catalog_text("zeta8").unwrap()
    );
    assert!(InstanceFile::parse(&text).is_err());
}

#[test]
fn invalid_cm_type_is_rejected() {
    let inst = load_catalog("zeta15").unwrap();
    let k = inst.cm.as_ref().unwrap();
    let phi = k.enumerate_cm_types().swap_remove(0);
    let both = CmType {
        members: vec![phi.members[0], k.conj_pos(phi.members[0])],
    };
    assert!(k.check_cm_type(&both).is_err());
    assert!(k.cm_type_from_ids(&[1]).is_err());
}

#[test]
fn perturbed_cocycle_fails_with_witness() {
    let inst = load_catalog("zeta15").unwrap();
    let (d, _) = inst.weil_datum().unwrap().unwrap();
    let module = GammaModule::new(&d, M0Choice::Trivial).unwrap();
    let b = CocycleMap::taniyama(&module, &d.canonical_section()).unwrap();
    assert!(verify_cocycle(&module, &b).passed());
    let bad = perturb(&module, &b).unwrap();
    let r = verify_cocycle(&module, &bad);
    assert!(!r.passed());
    assert!(r.witness.is_some());
}

#[test]
fn altered_taniyama_value_breaks_the_cocycle_identity() {
    let inst = load_catalog("zeta15").unwrap();
    let (d, _) = inst.weil_datum().unwrap().unwrap();
    let pg = PlecticGroup::enumerate(&d.w_f).unwrap();
    let sec = d.canonical_section();
    let mut f: Vec<_> = pg
        .elements()
        .iter()
        .map(|a| d.taniyama_value(a, &sec).unwrap())
        .collect();
    let nontrivial = d.a.members()[1];
    f[3].values[0] = d.w.mul(f[3].values[0], nontrivial);
    let mut broken = 0;
    for a in 0..pg.order() {
        for b in 0..pg.order() {
            let m = d.descend(pg.element(pg.inv(b))).unwrap();
            let moved = d.star_action(&m, &f[a]).unwrap();
            if d.mul_values(&moved, &f[b]) != f[pg.mul(a, b)] {
                broken += 1;
            }
        }
    }
    assert!(broken > 0);
}
