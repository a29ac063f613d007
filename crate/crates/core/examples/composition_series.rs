// The chain V ⊃ U(V)(z-ξ)w ⊃ ... ⊃ 0 in M_ψ / U(V)(z-ξ)^a w.

use vira::analysis::composition_series;
use vira::scalar::rat;
use vira::whittaker::WhittakerHom;

fn main() {
    let psi = WhittakerHom::new(rat(1), rat(1)).expect("ψ₁ψ₂ ≠ 0");
    let s = composition_series(&psi, &rat(1), 3).expect("a ≥ 1");
    for (i, g) in s.generators.iter().enumerate() {
        println!("w_{i} = {g}");
    }
    println!("Whittaker dimensions of the layers: {:?}", s.quotient_whittaker_dims);
    assert!(s.report.pass);
}
