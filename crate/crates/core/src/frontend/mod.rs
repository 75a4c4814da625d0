//! The `.vac` definition language, query parsing and output formats.
//!
//! A definition file looks like
//!
//! ```text
//! algebra virasoro {
//!   param c;
//!   generator L : even, weight 2;
//!   central C = c;
//!   bracket [L, L] = d(L) + 2*lambda*L + (lambda^3/12)*C;
//! }
//! ```
//!
//! `d(x)` is the derivative (`T` is accepted as an alias), `lambda` the
//! bracket variable, and `:a b c:` a right-nested normal product in
//! vertex-level expressions. A `:` opens a normal word at the start, after
//! whitespace, an opening bracket, a comma, an operator or another opening
//! `:`; otherwise it closes one.

mod lexer;
mod parser;
mod query;

pub use parser::{parse_definition, parse_expr, render_definition, Expr, ExprKind, RESERVED};
pub use query::{
    builtin, parse_mode, parse_query, run_query, split_query, CheckKind, Format, Operand, Options,
    Outcome, Query, BUILTINS, SCHEMA_VERSION,
};
