//! Every example runs to completion.

macro_rules! example {
    ($name:ident, $path:literal) => {
        mod $name {
            include!($path);
            #[test]
            fn runs() {
                run_example().unwrap();
            }
        }
    };
}

example!(axioms, "../examples/axioms.rs");
example!(irrep, "../examples/irrep.rs");
example!(lambda_action, "../examples/lambda_action.rs");
example!(singular_vectors, "../examples/singular_vectors.rs");
example!(reducibility_scan, "../examples/reducibility_scan.rs");
example!(contact_complex, "../examples/contact_complex.rs");
example!(catalog, "../examples/catalog.rs");
