//! Tate's half-transfer on Q(ζ8) ⊃ Q(i), and its plectic extension on Q(ζ15).
//!
//! cargo run --example half_transfer

use plectic_lab::half_transfer::HalfTransfer;
use plectic_lab::instance::load_catalog;
use plectic_lab::plectic::PlecticGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = load_catalog("zeta8")?;
    let k = inst.cm.as_ref().expect("CM block");
    let phi = inst.cm_type.clone().expect("CM type");
    let ht = HalfTransfer::new(k);
    println!("Q(ζ8), Φ = {:?}", k.cm_type_ids(&phi));
    for g in 0..k.group.order() {
        let values: Vec<String> = k
            .enumerate_sections()
            .iter()
            .map(|w| ht.tate(&phi, g, w).map(|v| ht.format(v)))
            .collect::<Result<_, _>>()?;
        println!("  F_Φ({}) = {}", k.group.format(g), values.join(" = "));
    }

    let inst = load_catalog("zeta15")?;
    let k = inst.cm.as_ref().expect("CM block");
    let ht = HalfTransfer::new(k);
    let pg = PlecticGroup::enumerate(&k.f)?;
    let w = k.canonical_section();
    println!("Q(ζ15) over Q(√5): values of F_Φ on G#Γ_F per CM type");
    for phi in k.enumerate_cm_types() {
        let mut counts = std::collections::BTreeMap::new();
        for a in pg.elements() {
            *counts
                .entry(ht.format(ht.plectic(&phi, a, &w)?))
                .or_insert(0) += 1;
        }
        println!("  Φ = {:?}: {:?}", k.cm_type_ids(&phi), counts);
    }

    // The factors h_φ before abelianizing, for one non-translation.
    let alpha = pg
        .elements()
        .iter()
        .find(|a| a.as_left_translation().is_none())
        .expect("exists");
    let phi = inst.cm_type.clone().expect("CM type");
    for f in ht.factors(&phi, alpha, &w)? {
        println!(
            "  h[{}] = {}",
            k.sigma_k.id(f.phi) + 1,
            k.group.format(f.element)
        );
    }
    Ok(())
}
