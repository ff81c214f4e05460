//! The NilHecke algebras as dotted strand-diagram algebras.

pub mod element;
pub mod expr;
pub mod hpoly;
pub mod modules;
pub mod rewrite;

pub use element::{
    flip_iso, full_block_crossing, module_decompose, nil_product, parabolic_split, AlgebraElement, Decomposition, Dots, DottedDiagram,
    FlipIso,
};
pub use expr::{evaluate, parse_expression, ExpressionAst};
pub use hpoly::HPoly;
pub use modules::{crossing_indices, generators, nilcoxeter_dim, nilcoxeter_module, truncated_polynomial_module, FiniteModule, Induction};
pub use rewrite::{normal_form, normal_form_with, GeneratorWord, Strategy, Token};
