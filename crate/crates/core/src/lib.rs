pub mod atlas;
pub mod bundle;
pub mod error;
pub mod exchange;
pub mod operator;
pub mod random;
pub mod restricted;
pub mod schatten;
pub mod subspace;
