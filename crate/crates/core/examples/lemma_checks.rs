// Leading-term and degree checks as machine-readable reports.

use vira::analysis::{verify_degree_bounds, verify_dot_span, verify_lemma_3_1};
use vira::scalar::rat;
use vira::whittaker::WhittakerHom;

fn main() {
    let psi = WhittakerHom::new(rat(1), rat(1)).expect("ψ₁ψ₂ ≠ 0");
    let reports = [
        verify_lemma_3_1(2, 3, &psi),
        verify_degree_bounds(3, &"1 2".parse().expect("pseudopartition"), &psi).expect("λ nonempty"),
        verify_dot_span(2, 0, &"2".parse().expect("pseudopartition"), &psi),
    ];
    for r in &reports {
        println!("{}", r.to_text(false));
        assert!(r.pass);
    }
    println!("{}", reports[0].to_json());
}
