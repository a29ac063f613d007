mod straighten {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/straighten.rs"));

    #[test]
    fn runs() {
        main();
    }
}

mod module_action {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/module_action.rs"));

    #[test]
    fn runs() {
        main();
    }
}

mod whittaker_vectors {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/whittaker_vectors.rs"));

    #[test]
    fn runs() {
        main();
    }
}

mod reduce {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/reduce.rs"));

    #[test]
    fn runs() {
        main();
    }
}

mod decompose {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/decompose.rs"));

    #[test]
    fn runs() {
        main();
    }
}

mod composition_series {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/composition_series.rs"));

    #[test]
    fn runs() {
        main();
    }
}

mod annihilator {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/annihilator.rs"));

    #[test]
    fn runs() {
        main();
    }
}

mod witt {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/witt.rs"));

    #[test]
    fn runs() {
        main();
    }
}

mod lemma_checks {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/lemma_checks.rs"));

    #[test]
    fn runs() {
        main();
    }
}

mod orbit_nilpotency {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/orbit_nilpotency.rs"));

    #[test]
    fn runs() {
        main();
    }
}

mod cli_tour {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cli_tour.rs"));

    #[test]
    fn runs() {
        main();
    }
}
