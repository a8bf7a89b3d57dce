pub mod seq;
pub mod zphi;
pub mod dsl;
pub mod verify;
pub mod oracle;
pub mod cli;
