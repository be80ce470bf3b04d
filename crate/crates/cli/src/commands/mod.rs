pub mod slope;
pub mod solve;
pub mod sweep;
pub mod verify;
