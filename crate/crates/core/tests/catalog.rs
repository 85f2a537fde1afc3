use plectic_lab::group::{commutator_subgroup, Subgroup};
use plectic_lab::instance::{
    catalog_names, catalog_spec, catalog_text, cyclotomic_instance, load_catalog, InstanceFile,
};
use plectic_lab::suite::{run_suite, Options, SuiteName};

#[test]
fn shipped_files_match_the_generator() {
    for name in catalog_names() {
        if let Some(spec) = catalog_spec(name) {
            let text = cyclotomic_instance(&spec).unwrap();
            assert_eq!(text, catalog_text(name).unwrap(), "{name}");
        }
    }
}

#[test]
fn serialize_and_parse_again() {
    for name in catalog_names() {
        let inst = load_catalog(name).unwrap();
        let again = InstanceFile::parse(&inst.to_text()).unwrap();
        assert_eq!(again.group.order(), inst.group.order(), "{name}");
        assert_eq!(again.cm_type, inst.cm_type, "{name}");
        assert_eq!(
            again.nested.as_ref().map(|h| h.members().to_vec()),
            inst.nested.as_ref().map(|h| h.members().to_vec()),
            "{name}"
        );
        assert_eq!(again.weil, inst.weil, "{name}");
        assert_eq!(
            again.cm.as_ref().map(|k| k.h.members().to_vec()),
            inst.cm.as_ref().map(|k| k.h.members().to_vec()),
            "{name}"
        );
    }
}

#[test]
fn dihedral_instance_is_non_abelian() {
    let inst = load_catalog("dihedral8").unwrap();
    let k = inst.cm.as_ref().unwrap();
    assert!(!k.group.is_abelian());
    assert!(!k.h.is_normal_in(&Subgroup::whole(&k.group)));
    assert_eq!(commutator_subgroup(&Subgroup::whole(&k.group)).order(), 2);
    // c is the half turn, which is central
    assert!((0..8).all(|x| k.group.mul(x, k.c) == k.group.mul(k.c, x)));
}

#[test]
fn reports_are_reproducible() {
    let inst = load_catalog("zeta15").unwrap();
    let opts = Options::default();
    let a = run_suite(&inst, "zeta15", SuiteName::All, &opts);
    let b = run_suite(&inst, "zeta15", SuiteName::All, &opts);
    assert_eq!(a.to_text(true), b.to_text(true));
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.passed());

    let sampled = Options {
        sample: Some(5),
        seed: 9,
        ..Options::default()
    };
    let c = run_suite(&inst, "zeta15", SuiteName::Plectic, &sampled);
    let d = run_suite(&inst, "zeta15", SuiteName::Plectic, &sampled);
    assert_eq!(c.to_json(), d.to_json());
}

#[test]
fn check_names_are_unique() {
    let inst = load_catalog("zeta15").unwrap();
    let r = run_suite(&inst, "zeta15", SuiteName::All, &Options::default());
    let mut names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    let n = names.len();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), n);
    assert!(r.checks.iter().all(|c| !c.property.is_empty()));
}
