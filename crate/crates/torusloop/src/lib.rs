#![doc = "Exact algebra of lattices, discriminant forms, character series and \
centrally extended (bi)coloured torus loop groups."]
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod foundation;
pub mod glue;
pub mod lattice;
pub mod loops;
pub mod reps;
pub mod series;
pub mod span;
