// Whittaker vectors found by exact linear solving on finite windows.

use vira::analysis::{whittaker_solve, TruncationSpec};
use vira::scalar::{rat, Poly};
use vira::whittaker::{ModuleContext, WhittakerHom};

fn main() {
    let psi = WhittakerHom::new(rat(1), rat(1)).expect("ψ₁ψ₂ ≠ 0");
    let cases = [
        (ModuleContext::universal(psi.clone()), TruncationSpec::new(4, 2, 2), 3),
        (ModuleContext::central(psi.clone(), &rat(0)), TruncationSpec::new(5, 3, 0), 1),
        (
            ModuleContext::quotient(psi, Poly::from_roots(&[(rat(1), 2), (rat(-3), 1)])).expect("monic"),
            TruncationSpec::new(4, 2, 0),
            3,
        ),
    ];
    for (ctx, trunc, expected) in cases {
        let basis = whittaker_solve(&ctx, &trunc);
        let shown: Vec<String> = basis.iter().map(ToString::to_string).collect();
        println!("{:<26} dim {}  [{}]", ctx.descriptor(), basis.len(), shown.join(", "));
        assert_eq!(basis.len(), expected);
    }
}
