//! CLI-level error split: usage problems exit 1, data problems exit 2.

use std::fmt;

#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Data(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Data(_) => 2,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(msg) | AppError::Data(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<cumdev_core::Error> for AppError {
    fn from(err: cumdev_core::Error) -> Self {
        AppError::Data(err.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> Self {
        AppError::Data(err.to_string())
    }
}

impl From<csv::Error> for AppError {
    fn from(err: csv::Error) -> Self {
        AppError::Data(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, AppError>;
