//! Built-in specs. Each is parsed once per process; the completed rewriting
//! systems are cached inside.

use std::sync::OnceLock;

use crate::manifold::ManifoldSpec;

pub const S4_THETA_SRC: &str = include_str!("../../../specs/s4-theta.spec");
pub const S7_THETA_SRC: &str = include_str!("../../../specs/s7-theta.spec");

pub fn s4_theta() -> &'static ManifoldSpec {
    static CELL: OnceLock<ManifoldSpec> = OnceLock::new();
    CELL.get_or_init(|| ManifoldSpec::parse(S4_THETA_SRC).expect("built-in s4-theta spec is valid"))
}

pub fn s7_theta() -> &'static ManifoldSpec {
    static CELL: OnceLock<ManifoldSpec> = OnceLock::new();
    CELL.get_or_init(|| ManifoldSpec::parse(S7_THETA_SRC).expect("built-in s7-theta spec is valid"))
}

/// Looks up a built-in spec by name.
pub fn builtin(name: &str) -> Option<&'static ManifoldSpec> {
    match name {
        "s4-theta" => Some(s4_theta()),
        "s7-theta" => Some(s7_theta()),
        _ => None,
    }
}

pub fn builtin_source(name: &str) -> Option<&'static str> {
    match name {
        "s4-theta" => Some(S4_THETA_SRC),
        "s7-theta" => Some(S7_THETA_SRC),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_render() {
        assert_eq!(s4_theta().render(), S4_THETA_SRC);
        assert_eq!(s7_theta().render(), S7_THETA_SRC);
    }
}
