// The Witt algebra as V/ℂz acting on L_{ψ,0}.

use vira::expr::{parse_uea, parse_vector};
use vira::scalar::rat;
use vira::whittaker::WhittakerHom;
use vira::witt::{project, witt_act, witt_module};

fn main() {
    let psi = WhittakerHom::new(rat(3), rat(-1)).expect("ψ₁ψ₂ ≠ 0");
    let ctx = witt_module(psi);
    let u = parse_uea("d2*d-2").expect("valid expression");
    println!("ρ(d2*d-2) = {}", project(&u));
    let v = parse_vector("d-2*w", &ctx).expect("valid vector");
    let image = witt_act(&project(&parse_uea("d2").expect("valid expression")), &v).expect("ξ = 0");
    println!("d2 · d-2 w = {image}");
    assert_eq!(image.to_string(), "-d-2*w - 4*d0*w");
}
