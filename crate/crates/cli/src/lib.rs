//! Report document and schema validation for the eiscong CLI; the binary
//! lives in main.rs.

pub mod report;
pub mod schema;
