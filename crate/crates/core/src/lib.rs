#![allow(clippy::needless_range_loop)]

pub mod bipartization;
pub mod canon;
pub mod class;
pub mod cuts;
pub mod dp;
pub mod error;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod hck;
pub mod oracle;
pub mod par;
pub mod reduce;
pub mod stats;
pub mod tdecomp;
pub mod torso;
