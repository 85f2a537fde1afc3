//! Enumerate the plectic group of Q(ζ15) over F = Q(√5) and print a few
//! elements in wreath coordinates.
//!
//! cargo run --example plectic_group

use plectic_lab::group::CosetSection;
use plectic_lab::instance::load_catalog;
use plectic_lab::plectic::{plectic_order, PlecticGroup};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = load_catalog("zeta15")?;
    let k = inst.cm.as_ref().expect("zeta15 has a CM block");
    let pg = PlecticGroup::enumerate(&k.f)?;
    let g = &k.group;
    println!(
        "|G| = {}, |Γ_F| = {}, |G#Γ_F| = {}",
        g.order(),
        k.f.order(),
        pg.order()
    );
    assert_eq!(plectic_order(&k.f), Some(pg.order()));

    let cosets = pg.cosets();
    let sections = CosetSection::all(cosets);
    println!("{} sections of G/Γ_F", sections.len());

    // The same element in two coordinate systems.
    for (i, s) in sections.iter().take(2).enumerate() {
        println!(
            "section {i}: reps {:?}",
            s.reps.iter().map(|&r| g.format(r)).collect::<Vec<_>>()
        );
        for a in pg.elements().iter().take(6) {
            let w = a.to_wreath(cosets, s)?;
            let kind = match a.as_left_translation() {
                Some(x) => format!("L_{}", g.format(x)),
                None => "not a translation".into(),
            };
            println!("  {:<40} {kind}", w.format(cosets));
        }
    }

    let gens = pg.generators();
    println!("generated by {} elements", gens.len());
    Ok(())
}
