pub mod arith;
pub mod characters;
pub mod cyclotomic;
pub mod error;
pub mod global;
pub mod quad;
pub mod special;
pub mod euler;
pub mod padic;
pub mod arch;
pub mod field_ext;
pub mod mellin;
pub mod verify;
