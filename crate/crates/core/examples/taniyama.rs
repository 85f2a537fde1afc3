//! Taniyama values on the Galois-realized datum of Q(ζ15), and the
//! cocycle identity they satisfy.
//!
//! cargo run --example taniyama

use plectic_lab::instance::load_catalog;
use plectic_lab::plectic::PlecticGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = load_catalog("zeta15")?;
    let (d, _) = inst.weil_datum()?.expect("zeta15 has a [weil] block");
    println!(
        "|W| = {}, |A| = {}, |Γ| = {}, Serre rank {}, {} sections",
        d.w.order(),
        d.a.order(),
        d.gamma.order(),
        d.lattice.rank(),
        d.section_count()
    );
    let pg = PlecticGroup::enumerate(&d.w_f)?;
    let values: Vec<_> = d
        .enumerate_sections()
        .iter()
        .map(|s| {
            pg.elements()
                .iter()
                .map(|a| d.taniyama_value(a, s))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let same = values.iter().all(|v| v == &values[0]);
    println!("values independent of the section: {same}");

    let f = &values[0];
    let trivial = d.identity_value();
    let nontrivial: Vec<usize> = (0..pg.order()).filter(|&a| f[a] != trivial).collect();
    println!(
        "{} of {} elements have a nontrivial value",
        nontrivial.len(),
        pg.order()
    );
    for &a in nontrivial.iter().take(4) {
        let shown: Vec<String> = f[a].values.iter().map(|&x| d.w.format(x)).collect();
        println!("  f(#{a}) = [{}]", shown.join(", "));
    }

    let mut failures = 0;
    for a in 0..pg.order() {
        for b in 0..pg.order() {
            let moved = d.star_action(&d.descend(pg.element(pg.inv(b)))?, &f[a])?;
            if d.mul_values(&moved, &f[b]) != f[pg.mul(a, b)] {
                failures += 1;
            }
        }
    }
    println!(
        "cocycle identity fails on {failures} of {} pairs",
        pg.order() * pg.order()
    );
    Ok(())
}
