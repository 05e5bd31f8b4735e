//! Brute-force oracles that share no code with the library.
#![allow(dead_code)]

pub mod gf;
pub mod jordan;
pub mod misc;
pub mod steinberg;
pub mod witt;
