pub mod algebra;
pub mod cat;
pub mod complex;
pub mod cover;
pub mod dynamics;
pub(crate) mod report;
pub mod twisted;
