//! Exact constant-term extraction for Dyson and q-Dyson products and
//! verification of the closed-form identities built on them.

pub mod dyson;
pub mod error;
pub mod laurent;
pub mod qpoly;
pub mod report;
pub mod firstlayer;
pub mod kadell;
pub mod maintheorem;
pub mod sweep;
