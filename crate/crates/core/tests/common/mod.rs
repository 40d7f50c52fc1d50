//! Shared oracles for integration tests.
#![allow(dead_code)]

pub mod wk;
