//! Serre lattices at the levels of Q(ζ15), and the plectic action on
//! CM-type characters.
//!
//! cargo run --example serre_lattice

use plectic_lab::group::Subgroup;
use plectic_lab::instance::load_catalog;
use plectic_lab::lattice::SerreLattice;
use plectic_lab::plectic::PlecticGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = load_catalog("zeta15")?;
    let tr = inst
        .totally_real
        .clone()
        .or_else(|| inst.cm.as_ref()?.totally_real().ok())
        .expect("totally real");
    let g = &tr.group;
    for (label, f) in [("F = Q(√5)", tr.f.clone()), ("F = Q", Subgroup::whole(g))] {
        let l = SerreLattice::new(g, &f, tr.c)?;
        println!("{label}: ambient rank {}, Serre rank {}", l.len(), l.rank());
        println!("first basis vector:\n{}", l.format(&l.basis()[0]));
    }

    let l = SerreLattice::new(g, &tr.f, tr.c)?;
    let pg = PlecticGroup::enumerate(&tr.f)?;
    // Φ picks the first member of each pair {σ, cσ}.
    let mut phi = vec![false; g.order()];
    for &s in l.pair_reps() {
        phi[s] = true;
    }
    let chi = l.cm_pullback(0, &phi)?;
    let mut moved_to = std::collections::BTreeMap::new();
    for a in pg.elements() {
        let image = l.algebraic_action(a, &chi)?;
        let (j, _) = l
            .classify_cm_pullback(&image)
            .expect("image is again a CM character");
        *moved_to.entry(j).or_insert(0) += 1;
    }
    println!("CM character at j = 0 lands at j with multiplicities {moved_to:?}");
    Ok(())
}
