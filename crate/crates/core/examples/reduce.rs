// Extracting a Whittaker vector from an arbitrary nonzero vector of L_{ψ,ξ}.

use vira::expr::parse_vector;
use vira::scalar::ratio;
use vira::whittaker::{whittaker_reduce, ModuleContext, WhittakerHom};

fn main() {
    let psi = WhittakerHom::new(ratio(1, 1), ratio(2, 3)).expect("ψ₁ψ₂ ≠ 0");
    let ctx = ModuleContext::central(psi, &ratio(-1, 2));
    let v = parse_vector("d-2*d-1*w - 3*d-1*d0^2*w + (1/5)*w", &ctx).expect("valid vector");
    let red = whittaker_reduce(&v).expect("reduction terminates");
    println!("start   {v}");
    for (op, (deg, d0)) in red.trace.iter().zip(&red.measures) {
        println!("  measure ({deg}, {d0})  apply d{op} - ψ{op}");
    }
    println!("result  {}", red.result);
    assert_eq!(red.result.len(), 1);
}
