pub mod curve;
pub mod laurent;
pub mod magnus;
pub mod melnikov;
pub mod report;
mod serde_str;
pub mod word;
