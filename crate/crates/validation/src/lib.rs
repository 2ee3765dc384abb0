//! Home of the `acceptance` test target.
//!
//! The checks live in `tests/acceptance.rs` and run with
//! `cargo test -p sgcrack-validation --test acceptance`. They are kept in their
//! own package so that a failing criterion does not stop the rest of the
//! workspace test suite from running.
