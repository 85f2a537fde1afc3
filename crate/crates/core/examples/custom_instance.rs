//! Build an instance from residues: Q(√-3) ⊂ Q(√5, √-3) inside Q(ζ15),
//! then check the transfer square between the two CM fields.
//!
//! cargo run --example custom_instance

use plectic_lab::instance::{cyclotomic_instance, CyclotomicSpec, InstanceFile};
use plectic_lab::suite::{run_suite, Options, SuiteName};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // ⟨4, 7⟩ = {1, 4, 7, 13} fixes Q(√-3); ⟨4⟩ fixes Q(√5, √-3).
    let spec = CyclotomicSpec {
        modulus: 15,
        h_residues: vec![4, 7],
        c_residue: 14,
        nested_h_residues: Some(vec![4]),
        title: Some("Q(sqrt -3) inside Q(zeta_15), nested Q(sqrt 5, sqrt -3)".into()),
        ..CyclotomicSpec::default()
    };
    let text = cyclotomic_instance(&spec)?;
    print!("{text}");
    let inst = InstanceFile::parse(&text)?;
    let report = run_suite(
        &inst,
        "q-sqrt-3",
        SuiteName::HalfTransfer,
        &Options::default(),
    );
    print!("{}", report.to_text(false));
    Ok(())
}
