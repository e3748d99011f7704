//! Holds the `acceptance` test target only:
//!
//! ```text
//! cargo test -p symzeta-validation --test acceptance
//! ```
