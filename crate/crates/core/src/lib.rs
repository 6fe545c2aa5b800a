pub mod error;
pub mod io;
pub mod lsq;
pub mod norm;
pub mod rational;
pub mod roots;
pub mod sphere;
pub mod tol;
pub mod verify;
pub mod vec2;
pub mod witness;

pub use norm::Norm2;
pub use rational::Rational;
pub use vec2::Vec2;
pub use witness::WitnessSet;
