pub mod commands;
pub mod fock;
pub mod formats;
pub mod harness;
