//! Input documents, command dispatch and report emission for the `frob` binary.

mod doc;
mod emit;
mod run;

use thiserror::Error;

pub use doc::{
    parse, Command, ExpectOp, Expectation, InputDocument, NamedBimodule, NamedModule,
    NamedSubspace, Task,
};
pub use emit::{emit, to_json, to_text, Format};
pub use run::{lookup, run, ExpectationResult, Report, RunOptions, Section};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CliError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("in {block}: {reason}")]
    Semantic { block: String, reason: String },
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("unresolved reference `{name}` in {block}")]
    Unresolved { block: String, name: String },
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// Every input problem maps to exit status 2.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
