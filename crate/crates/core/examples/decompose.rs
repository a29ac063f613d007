// Splitting M_ψ / U(V)p(z)w along the roots of p.

use vira::analysis::decompose;
use vira::expr::parse_poly;
use vira::scalar::rat;
use vira::whittaker::WhittakerHom;

fn main() {
    let psi = WhittakerHom::new(rat(1), rat(1)).expect("ψ₁ψ₂ ≠ 0");
    let p = parse_poly("(z-1)^2*(z+3)").expect("valid polynomial");
    let d = decompose(&psi, &p).expect("p splits over ℚ");
    for c in &d.components {
        println!(
            "ξ = {:<3} a = {}  p_j = {:<16} q_j = {:<20} w_j = {}",
            c.root.to_string(),
            c.multiplicity,
            c.cofactor.to_string(),
            c.bezout.to_string(),
            c.generator
        );
    }
    print!("{}", d.report.to_text(false));
    assert!(d.report.pass);
}
