pub mod corr;
pub mod dctc;
pub mod extend;
pub mod gibbs;
pub mod politzer;
