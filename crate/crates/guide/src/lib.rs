//! The chapters of `book/` as modules, so `cargo test` runs their code.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[cfg(doctest)]
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(models, "models.md");
chapter!(cohomology, "cohomology.md");
chapter!(massey, "massey.md");
chapter!(formality, "formality.md");
chapter!(constructions, "constructions.md");
chapter!(cli, "cli.md");
