//! Error-to-exit-code mapping. 2 means the request itself was bad (usage or
//! domain), 3 means the computation failed numerically.

use gravcat_core::Error as CoreError;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> CliError {
        CliError {
            code: 3,
            message: message.into(),
        }
    }

    pub fn io(err: std::io::Error) -> CliError {
        CliError {
            code: 3,
            message: format!("io error: {err}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> CliError {
        match err {
            CoreError::InvalidParameter { .. }
            | CoreError::InvalidTemperature { .. }
            | CoreError::DivisionByZero { .. }
            | CoreError::DegenerateModel { .. }
            | CoreError::StepOutOfDomain { .. }
            | CoreError::InvalidCycle { .. } => CliError::usage(err.to_string()),
            CoreError::SingularState { .. }
            | CoreError::UnidentifiablePair { .. }
            | CoreError::UninformativeParameter { .. }
            | CoreError::QuadratureAccuracy { .. } => CliError::numerical(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> CliError {
        CliError::io(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_errors_map_to_exit_2() {
        let e: CliError = CoreError::InvalidTemperature { value: -1.0 }.into();
        assert_eq!(e.code, 2);
        assert!(e.message.contains("temp"));
    }

    #[test]
    fn numerical_errors_map_to_exit_3() {
        let e: CliError = CoreError::SingularState {
            cond: 1e20,
            m: 3,
            n: 3,
        }
        .into();
        assert_eq!(e.code, 3);
        let e: CliError = CoreError::UnidentifiablePair {
            det: 0.0,
            threshold: 1e-14,
        }
        .into();
        assert_eq!(e.code, 3);
    }
}
