//! The extension of Γ by the Serre-torus points built from the Taniyama
//! cocycle, on Q(ζ8), written out as a multiplication table.
//!
//! cargo run --example extension -- [table-path]

use plectic_lab::extension::{
    two_cocycle_from_lift, CocycleMap, GammaModule, M0Choice, TwistedExtension,
};
use plectic_lab::instance::load_catalog;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = load_catalog("zeta8")?;
    let (d, _) = inst.weil_datum()?.expect("[weil] block");
    for m0 in [M0Choice::Trivial, M0Choice::Constants] {
        let module = GammaModule::new(&d, m0)?;
        let b = CocycleMap::taniyama(&module, &d.canonical_section())?;
        let z = CocycleMap::random_m0_function(&module, 1);
        let lift = b.twisted_by(&module, &z);
        let ext = TwistedExtension::build(&module, two_cocycle_from_lift(&module, &lift)?);
        println!(
            "M0 = {m0:?}: |M| = {}, |M0| = {}, |Γ| = {}, extension of order {}",
            module.order(),
            module.m0().len(),
            module.gamma_order(),
            ext.order()
        );
        for (name, r) in [
            ("group axioms", ext.verify_group_axioms()),
            ("projection", ext.verify_projection()),
            ("splitting", ext.verify_splitting(&lift)),
            ("kernel action", ext.verify_kernel_conjugation(&lift)),
        ] {
            println!(
                "  {name}: {} cases, {}",
                r.cases,
                if r.passed() { "ok" } else { "FAILED" }
            );
        }
        if let Some(path) = std::env::args().nth(1) {
            let mut out = std::io::BufWriter::new(std::fs::File::create(&path)?);
            ext.write_table(&mut out)?;
            println!("  table written to {path}");
        }
    }
    Ok(())
}
