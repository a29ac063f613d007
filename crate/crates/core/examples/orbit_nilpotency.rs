// Finite-dimensional U(n⁺)-orbits and local nilpotency of the shifted action.

use vira::analysis::dot_orbit_dimension;
use vira::partitions::enumerate_up_to;
use vira::scalar::rat;
use vira::whittaker::{nilpotency_index, ModuleContext, ModuleElement, WhittakerHom};

fn main() {
    let psi = WhittakerHom::new(rat(1), rat(1)).expect("ψ₁ψ₂ ≠ 0");
    let ctx = ModuleContext::universal(psi.clone());
    for lambda in enumerate_up_to(3, 1).into_iter().skip(1) {
        let o = dot_orbit_dimension(&ModuleElement::basis(&ctx, 0, &lambda)).expect("nonzero");
        let nil: Vec<String> = (1..=3)
            .map(|n| {
                let x = nilpotency_index(&psi, n, &lambda).expect("nilpotent");
                format!("d{n}: {}≤{}", x.index, x.bound)
            })
            .collect();
        println!("λ = {:<8} orbit dim {:<3} {}", lambda.to_string(), o.dimension, nil.join("  "));
    }
}
