// The action of U(V) on the universal Whittaker module and its quotients.

use vira::expr::parse_uea;
use vira::partitions::Pseudopartition;
use vira::scalar::{ratio, Poly};
use vira::whittaker::{act, dot_act, map_from_universal, ModuleContext, ModuleElement, WhittakerHom};

fn main() {
    let psi = WhittakerHom::new(ratio(2, 1), ratio(-3, 2)).expect("ψ₁ψ₂ ≠ 0");
    let universal = ModuleContext::universal(psi.clone());
    let central = ModuleContext::central(psi.clone(), &ratio(5, 7));
    let quotient = ModuleContext::quotient(psi, Poly::from_ints(&[2, -3, 1])).expect("monic");

    let u = parse_uea("d1*d2*d-1*d-2").expect("valid expression");
    for ctx in [&universal, &central, &quotient] {
        println!("{:<16} u·w = {}", ctx.descriptor(), map_from_universal(&u, ctx));
    }

    let w = ModuleElement::cyclic(&universal);
    let v = act(&parse_uea("d-1*d-1").expect("valid expression"), &w);
    println!("d1 ·(d-1^2 w)  = {}", dot_act(1, &v));
    println!("d2 ·(d-1^2 w)  = {}", dot_act(2, &v));

    let zz = map_from_universal(&parse_uea("z^2").expect("valid expression"), &central);
    assert_eq!(zz, ModuleElement::cyclic(&central).scale(&ratio(25, 49)));
    let basis = ModuleElement::basis(&universal, 1, &Pseudopartition::from_parts(&[0, 2]));
    println!("basis vector   = {basis}");
}
