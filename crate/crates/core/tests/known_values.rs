//! Small fixed values, each checked against a brute-force computation done here.

use std::collections::BTreeSet;

use plectic_lab::cm::validate_totally_real;
use plectic_lab::group::{
    abelianization, commutator_subgroup, CosetSection, FiniteGroup, LeftCosets, Subgroup, Transfer,
};
use plectic_lab::half_transfer::HalfTransfer;
use plectic_lab::instance::{load_catalog, mult_perm, units_mod};
use plectic_lab::lattice::{CharacterVector, SerreLattice};
use plectic_lab::perm::Perm;
use plectic_lab::plectic::{PlecticElement, PlecticGroup};

fn residue_closure(n: u64, gens: &[u64]) -> BTreeSet<u64> {
    let mut seen = BTreeSet::from([1u64]);
    let mut frontier = vec![1u64];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = x * g % n;
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen
}

fn mult_group(n: u64, gens: &[u64]) -> FiniteGroup {
    let perms = gens.iter().map(|&a| mult_perm(n, a).unwrap()).collect();
    FiniteGroup::from_generators(units_mod(n).len(), perms).unwrap()
}

fn elem(g: &FiniteGroup, n: u64, a: u64) -> usize {
    g.index_of(&mult_perm(n, a).unwrap()).unwrap()
}

/// All commutators of a permutation list, closed under composition.
fn commutator_closure(perms: &[Perm]) -> BTreeSet<Vec<usize>> {
    let mut gens = Vec::new();
    for a in perms {
        for b in perms {
            gens.push(a.inverse().compose(&b.inverse()).compose(a).compose(b));
        }
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let id = Perm::identity(perms[0].degree());
    seen.insert(id.images().to_vec());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = x.compose(g);
            if seen.insert(y.images().to_vec()) {
                frontier.push(y);
            }
        }
    }
    seen
}

#[test]
fn unit_groups_match_residue_closure() {
    let g8 = mult_group(8, &[3, 5]);
    assert_eq!(g8.order(), residue_closure(8, &[3, 5]).len());
    assert_eq!(g8.order(), 4);
    assert!((0..4).all(|x| g8.element_order(x) <= 2));
    let g15 = mult_group(15, &[2, 14]);
    assert_eq!(g15.order(), residue_closure(15, &[2, 14]).len());
    assert_eq!(g15.order(), 8);
}

#[test]
fn zeta8_cosets_of_h() {
    let g = mult_group(8, &[3, 5]);
    let h = Subgroup::generated(&g, &[elem(&g, 8, 5)]);
    let cosets = LeftCosets::of(&h);
    let as_residues: BTreeSet<BTreeSet<u64>> = (0..cosets.len())
        .map(|p| {
            cosets
                .members(p)
                .iter()
                .map(|&x| {
                    // the image of the point 1 is the residue itself
                    let units = units_mod(8);
                    units[g.element(x).apply(0)]
                })
                .collect()
        })
        .collect();
    assert_eq!(
        as_residues,
        BTreeSet::from([BTreeSet::from([1, 5]), BTreeSet::from([3, 7])])
    );
}

#[test]
fn commutator_subgroups_of_s3_and_d4() {
    let s3 = FiniteGroup::from_cycle_text(3, "(1 2); (1 2 3)").unwrap();
    let all: Vec<Perm> = (0..s3.order()).map(|x| s3.element(x).clone()).collect();
    let d = commutator_subgroup(&Subgroup::whole(&s3));
    assert_eq!(d.order(), commutator_closure(&all).len());
    assert_eq!(d.order(), 3);
    assert_eq!(abelianization(&Subgroup::whole(&s3)).order(), 2);

    let d4 = FiniteGroup::from_cycle_text(4, "(1 2 3 4); (1 3)").unwrap();
    let all: Vec<Perm> = (0..d4.order()).map(|x| d4.element(x).clone()).collect();
    let d = commutator_subgroup(&Subgroup::whole(&d4));
    assert_eq!(d.order(), commutator_closure(&all).len());
    assert_eq!(d.order(), 2);
    // it is the centre
    let centre: Vec<usize> = (0..8)
        .filter(|&z| (0..8).all(|x| d4.mul(x, z) == d4.mul(z, x)))
        .collect();
    assert_eq!(d.members(), centre.as_slice());
}

#[test]
fn transfer_of_cyclic_group_to_index_two() {
    let c4 = FiniteGroup::from_cycle_text(4, "(1 2 3 4)").unwrap();
    let a = c4
        .index_of(&Perm::from_cycles(4, "(1 2 3 4)").unwrap())
        .unwrap();
    let whole = Subgroup::whole(&c4);
    let half = Subgroup::generated(&c4, &[c4.mul(a, a)]);
    let t = Transfer::new(&whole, &half).unwrap();
    for s in CosetSection::all(t.cosets()) {
        let v = t.apply(a, &s).unwrap();
        assert_eq!(t.target().lift(v), c4.mul(a, a));
    }
}

#[test]
fn transfer_on_abelian_group_is_nth_power() {
    // (Z/45)^×: H = ⟨11⟩ of order 6 and H' = ⟨16⟩ of index 2
    let inst = load_catalog("zeta5-in-zeta15").unwrap();
    let k = inst.cm.as_ref().unwrap();
    let h2 = inst.nested.clone().unwrap();
    let g = &k.group;
    let t = Transfer::new(&k.h, &h2).unwrap();
    let n = (k.h.order() / h2.order()) as i64;
    for &x in h2.members() {
        for s in CosetSection::all(t.cosets()) {
            assert_eq!(t.target().lift(t.apply(x, &s).unwrap()), g.pow(x, n));
        }
    }
}

#[test]
fn zeta5_wreath_product() {
    let inst = load_catalog("zeta5").unwrap();
    let k = inst.cm.as_ref().unwrap();
    let pg = PlecticGroup::enumerate(&k.f).unwrap();
    assert_eq!(pg.order(), 8);
    let s2 = elem(&k.group, 5, 2);
    let l = PlecticElement::left_translate(&k.f, s2);
    for s in CosetSection::all(pg.cosets()) {
        let w = l.to_wreath(pg.cosets(), &s).unwrap();
        assert_eq!(w.pi, vec![1, 0]);
    }
    // G#G = G through left translation
    let whole = PlecticGroup::enumerate(&Subgroup::whole(&k.group)).unwrap();
    assert_eq!(whole.order(), k.group.order());
}

#[test]
fn zeta8_left_translation_by_three() {
    let inst = load_catalog("zeta8").unwrap();
    let k = inst.cm.as_ref().unwrap();
    let g = &k.group;
    let s3 = elem(g, 8, 3);
    let l = PlecticElement::left_translate(&k.f, s3);
    for x in 0..4 {
        assert_eq!(l.apply(x), g.mul(s3, x));
    }
}

#[test]
fn totally_real_rejects_cm_subgroup() {
    let g = mult_group(15, &[2, 7]);
    let h = Subgroup::generated(&g, &[elem(&g, 15, 11)]);
    assert!(validate_totally_real(&g, &h, elem(&g, 15, 14)).is_err());
    let f = Subgroup::generated(&g, &[elem(&g, 15, 11), elem(&g, 15, 14)]);
    assert!(validate_totally_real(&g, &f, elem(&g, 15, 14)).is_ok());
}

#[test]
fn cm_counts() {
    for (name, types, sections) in [("zeta8", 2, 2), ("zeta15", 4, 4)] {
        let inst = load_catalog(name).unwrap();
        let k = inst.cm.as_ref().unwrap();
        assert_eq!(k.enumerate_cm_types().len(), types, "{name}");
        assert_eq!(k.enumerate_sections().len(), sections, "{name}");
    }
}

#[test]
fn induced_types_on_zeta15_double() {
    let inst = load_catalog("zeta15").unwrap();
    let k = inst.cm.as_ref().unwrap();
    let fine = k.finer(inst.nested.as_ref().unwrap()).unwrap();
    for phi in k.enumerate_cm_types() {
        let induced = k.induced_cm_type(&phi, &fine).unwrap();
        assert_eq!(induced.members.len(), 4);
        fine.check_cm_type(&induced).unwrap();
    }
}

#[test]
fn zeta8_half_transfer_of_conjugation_is_trivial() {
    let inst = load_catalog("zeta8").unwrap();
    let k = inst.cm.as_ref().unwrap();
    let ht = HalfTransfer::new(k);
    let phi = inst.cm_type.clone().unwrap();
    for w in k.enumerate_sections() {
        assert_eq!(ht.hab.lift(ht.tate(&phi, k.c, &w).unwrap()), 0);
    }
}

#[test]
fn quadratic_and_cyclotomic_ranks() {
    let c2 = FiniteGroup::from_cycle_text(2, "(1 2)").unwrap();
    let l = SerreLattice::new(&c2, &Subgroup::whole(&c2), 1).unwrap();
    assert_eq!(l.rank(), 2);
    let inst = load_catalog("zeta5").unwrap();
    let k = inst.cm.as_ref().unwrap();
    assert_eq!(
        SerreLattice::new(&k.group, &Subgroup::whole(&k.group), k.c)
            .unwrap()
            .rank(),
        3
    );
    let inst = load_catalog("zeta15").unwrap();
    let k = inst.cm.as_ref().unwrap();
    assert_eq!(SerreLattice::new(&k.group, &k.f, k.c).unwrap().rank(), 10);
}

#[test]
fn galois_realized_zeta15_datum() {
    let inst = load_catalog("zeta15").unwrap();
    let (d, _) = inst.weil_datum().unwrap().unwrap();
    assert_eq!((d.w.order(), d.a.order(), d.gamma.order()), (8, 2, 4));
    assert!(d.w.is_abelian());
}

#[test]
fn weight_character_pairs_to_product() {
    let inst = load_catalog("zeta15").unwrap();
    let (d, _) = inst.weil_datum().unwrap().unwrap();
    let l = &d.lattice;
    let pg = PlecticGroup::enumerate(&d.w_f).unwrap();
    let sec = d.canonical_section();
    for j0 in 0..l.sigma_f().len() {
        let mut a = vec![0; l.len()];
        for s in 0..d.gamma.order() {
            a[l.index(j0, s)] = 1;
        }
        let chi = l.from_projection(&a);
        let mut weights = vec![0; l.sigma_f().len()];
        weights[j0] = 2;
        assert_eq!(l.weights(&chi), Some(weights));
        for alpha in pg.elements() {
            let h = d.h_vector(alpha, &sec).unwrap();
            let product = h
                .entries
                .iter()
                .zip(&chi.coeffs)
                .filter(|(_, &b)| b == 1)
                .fold(0, |acc, (&e, _)| d.w.mul(acc, e));
            assert_eq!(d.pair(&h, &chi), product);
        }
    }
}

#[test]
fn reflex_character_at_identity_recovers_the_type() {
    let inst = load_catalog("zeta15").unwrap();
    let k = inst.cm.as_ref().unwrap();
    let (d, to_w) = inst.weil_datum().unwrap().unwrap();
    let to_w = to_w.unwrap();
    let l = &d.lattice;
    for phi in k.enumerate_cm_types() {
        let data = d.reflex_data(k, &phi, &to_w);
        for j in 0..l.sigma_f().len() {
            let hits: Vec<usize> = (0..k.sigma_k.len())
                .filter(|&i| l.projection(&l.reflex_norm_character(&data, i))[l.index(j, 0)] == 1)
                .collect();
            assert_eq!(hits, vec![data.phi[j]]);
        }
    }
}

#[test]
fn zero_character_is_not_a_pullback() {
    let inst = load_catalog("zeta8").unwrap();
    let (d, _) = inst.weil_datum().unwrap().unwrap();
    assert!(d
        .lattice
        .classify_cm_pullback(&CharacterVector::zero(d.lattice.len()))
        .is_none());
}
