#![allow(dead_code)]

pub mod criteria;
pub mod fixtures;
pub mod generators;
pub mod oracles;
