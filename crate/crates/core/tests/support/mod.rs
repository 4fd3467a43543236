pub mod invariants;
pub mod oracle;
