use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared generator `{name}`")]
    UndeclaredGenerator { name: String },
    #[error("duplicate generator `{name}`")]
    DuplicateGenerator { name: String },
    #[error("duplicate peripheral `{name}`")]
    DuplicatePeripheral { name: String },
    #[error("peripheral `{peripheral}` has {words} ambient words but {generators} generators")]
    ArityMismatch {
        peripheral: String,
        words: usize,
        generators: usize,
    },
    #[error("unknown peripheral `{name}`")]
    UnknownPeripheral { name: String },
    #[error("invalid Tietze move: {0}")]
    InvalidMove(String),
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("filling has no peripheral orders (not a characteristic filling)")]
    MissingPeripheralOrders,
    #[error("invalid group table `{name}`: {reason}")]
    InvalidTable { name: String, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("certificate does not verify: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
