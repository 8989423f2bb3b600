pub mod laurent;
pub mod matrix;
pub mod quiver;
pub mod seed;
pub mod io;
pub mod fixtures;
pub mod adjoin;
pub mod unfold;
pub mod quotient;
pub mod random;
pub mod verify;
