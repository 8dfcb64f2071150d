//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

pub mod exterior;
pub mod oracle;
pub mod properties;
pub mod numeric;
pub mod strategies;
