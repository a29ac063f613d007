// Driving the command-line front end in-process.

fn main() {
    let runs: &[&[&str]] = &[
        &["vira", "straighten", "d2*d-2"],
        &["vira", "solve", "--module", "L:xi=0", "--maxdeg", "5", "--zerocap", "3"],
        &["vira", "verify", "nilpotency", "--n", "1", "--lambda", "1"],
        &["vira", "reduce", "d-1*w", "--module", "L:xi=2"],
        &["vira", "witt", "d2*d-2*w", "--module", "W", "--psi2", "-3/2"],
    ];
    for argv in runs {
        println!("$ {}", argv.join(" "));
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = vira::cli::run_with(argv.iter().copied(), &mut out, &mut err);
        print!("{}", String::from_utf8_lossy(&out));
        println!("(exit {code})\n");
        assert_eq!(code, 0);
    }
}
