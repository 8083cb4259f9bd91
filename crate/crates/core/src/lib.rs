pub mod algebra;
pub mod heegaard;
pub mod kirby;
pub mod legendrian;
pub mod openbook;
pub mod surface;
