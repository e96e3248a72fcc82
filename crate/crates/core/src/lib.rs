#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod canon;
pub mod collection;
pub mod constructions;
pub mod detect;
pub mod embed;
pub mod family;
pub mod graph;
pub mod lemmas;
pub mod pattern;
pub mod search;
