// Normal forms modulo Ann(w) = U(V)p(z) + Σ U(V)(d_i - ψ_i).

use vira::analysis::annihilator_normal_form;
use vira::expr::{parse_poly, parse_uea};
use vira::scalar::rat;
use vira::whittaker::WhittakerHom;

fn main() {
    let psi = WhittakerHom::new(rat(1), rat(1)).expect("ψ₁ψ₂ ≠ 0");
    let p = parse_poly("(z-1)*(z-2)").expect("valid polynomial");
    for text in ["d1 - 1", "d-1*d2 - d-1", "z^2*d3 + d-2*d1", "z^3"] {
        let u = parse_uea(text).expect("valid expression");
        let f = annihilator_normal_form(&u, &psi, &p).expect("monic modulus");
        let tail: Vec<String> = f.tail.iter().map(|(i, ui)| format!("({ui})·(d{i} - ψ{i})")).collect();
        println!("{text:<16} u0 = {:<10} tail = [{}]  residual = {}", f.u0.to_string(), tail.join(", "), f.residual);
        assert_eq!(f.expand(&psi, &p), u);
    }
}
