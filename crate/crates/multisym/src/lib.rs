//! Expression language, seeded verification suites and JSON reports on top
//! of [`multisym_core`].

pub mod expr;
pub mod generate;
pub mod report;
pub mod suite;

pub use expr::{parse_expr, print_expr, ParseError};
pub use report::{Case, Report, Summary};
pub use suite::{run_suite, SuiteConfig, SuiteError, IDENTITIES};
