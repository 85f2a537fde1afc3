use proptest::prelude::*;

use plectic_lab::extension::{verify_lift_change, CocycleMap, GammaModule, M0Choice};
use plectic_lab::group::{CosetSection, LeftCosets, Transfer};
use plectic_lab::instance::{
    cyclotomic_instance, load_catalog, units_mod, CyclotomicSpec, InstanceFile,
};
use plectic_lab::lattice::CharacterVector;
use plectic_lab::perm::Perm;
use plectic_lab::plectic::{PlecticElement, WreathDatum};

fn perm(max_degree: usize) -> impl Strategy<Value = Perm> {
    (1..=max_degree)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn perms_of_degree(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

proptest! {
    #[test]
    fn cycle_text_round_trips(p in perm(9)) {
        let q = Perm::from_cycles(p.degree(), &p.to_string()).unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn composition_laws(
        (a, b, c) in (1usize..8).prop_flat_map(|n| (perms_of_degree(n), perms_of_degree(n), perms_of_degree(n)))
    ) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        for i in 0..a.degree() {
            prop_assert_eq!(a.compose(&b).apply(i), a.apply(b.apply(i)));
        }
        let mut x = Perm::identity(a.degree());
        for _ in 0..a.order() {
            x = x.compose(&a);
        }
        prop_assert!(x.is_identity());
    }

    #[test]
    fn group_table_agrees_with_composition(
        name in prop::sample::select(vec!["zeta5", "zeta8", "zeta15", "zeta5-in-zeta15", "dihedral8"]),
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
    ) {
        let g = load_catalog(name).unwrap().group;
        let (a, b) = (a.index(g.order()), b.index(g.order()));
        let p = g.element(a).compose(g.element(b));
        prop_assert_eq!(g.index_of(&p), Some(g.mul(a, b)));
        prop_assert_eq!(g.mul(g.inv(a), a), 0);
    }

    #[test]
    fn wreath_data_round_trip(
        swap in any::<bool>(),
        h in prop::collection::vec(any::<prop::sample::Index>(), 2),
        s in any::<prop::sample::Index>(),
    ) {
        // Γ_F of order 12 inside (Z/45)^×, two cosets
        let inst = load_catalog("zeta5-in-zeta15").unwrap();
        let f = inst.cm.as_ref().unwrap().f.clone();
        let cosets = LeftCosets::of(&f);
        let sections = CosetSection::all(&cosets);
        let s = &sections[s.index(sections.len())];
        let w = WreathDatum {
            pi: if swap { vec![1, 0] } else { vec![0, 1] },
            h: h.iter().map(|i| f.members()[i.index(f.order())]).collect(),
        };
        let alpha = PlecticElement::from_wreath(&f, &cosets, s, &w).unwrap();
        prop_assert_eq!(alpha.to_wreath(&cosets, s).unwrap(), w.clone());
        let text = w.format(&cosets);
        prop_assert_eq!(WreathDatum::parse(&text, &cosets).unwrap(), w);
    }

    #[test]
    fn transfer_is_a_homomorphism(a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let inst = load_catalog("dihedral8").unwrap();
        let k = inst.cm.as_ref().unwrap();
        let t = Transfer::new(&k.f, &k.h).unwrap();
        let g = &k.group;
        let (x, y) = (k.f.members()[a.index(k.f.order())], k.f.members()[b.index(k.f.order())]);
        let q = t.target();
        let lhs = t.apply_canonical(g.mul(x, y)).unwrap();
        let rhs = q.mul(t.apply_canonical(x).unwrap(), t.apply_canonical(y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn serre_coordinates_round_trip(coords in prop::collection::vec(-5i64..=5, 10)) {
        let inst = load_catalog("zeta15").unwrap();
        let k = inst.cm.as_ref().unwrap();
        let l = plectic_lab::lattice::SerreLattice::new(&k.group, &k.f, k.c).unwrap();
        let chi = l.from_coordinates(&coords);
        prop_assert!(l.is_serre(&chi));
        prop_assert_eq!(l.coordinates(&chi), Some(coords));
        prop_assert_eq!(l.parse(&l.format(&chi)).unwrap(), chi);
    }

    #[test]
    fn arithmetic_action_is_linear(
        a in prop::collection::vec(-3i64..=3, 16),
        b in prop::collection::vec(-3i64..=3, 16),
        tau in 0usize..8,
    ) {
        let inst = load_catalog("zeta15").unwrap();
        let k = inst.cm.as_ref().unwrap();
        let l = plectic_lab::lattice::SerreLattice::new(&k.group, &k.f, k.c).unwrap();
        let (a, b) = (CharacterVector { coeffs: a }, CharacterVector { coeffs: b });
        prop_assert_eq!(
            l.arithmetic_action(tau, &a.add(&b)),
            l.arithmetic_action(tau, &a).add(&l.arithmetic_action(tau, &b))
        );
    }

    #[test]
    fn lift_changes_give_isomorphic_extensions(seed in any::<u64>()) {
        let inst = load_catalog("zeta8").unwrap();
        let (d, _) = inst.weil_datum().unwrap().unwrap();
        let module = GammaModule::new(&d, M0Choice::Constants).unwrap();
        let b = CocycleMap::taniyama(&module, &d.canonical_section()).unwrap();
        let z = CocycleMap::random_m0_function(&module, seed);
        prop_assert!(verify_lift_change(&module, &b, &z).unwrap().passed());
    }

    #[test]
    fn generated_instances_parse_or_fail_cleanly(
        n in prop::sample::select(vec![5u64, 7, 8, 9, 12, 13, 15, 16, 20, 21]),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 0..3),
    ) {
        let units = units_mod(n);
        let spec = CyclotomicSpec {
            modulus: n,
            h_residues: picks.iter().map(|i| units[i.index(units.len())]).collect(),
            c_residue: n - 1,
            galois_weil: true,
            ..CyclotomicSpec::default()
        };
        if let Ok(text) = cyclotomic_instance(&spec) {
            let inst = InstanceFile::parse(&text).unwrap();
            let again = InstanceFile::parse(&inst.to_text()).unwrap();
            prop_assert_eq!(again.group.order(), inst.group.order());
            prop_assert_eq!(again.cm_type, inst.cm_type);
        }
    }
}
