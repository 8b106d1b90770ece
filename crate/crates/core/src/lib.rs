pub mod blowup;
pub mod cli;
pub mod dualgraph;
pub mod germdyn;
pub mod kato;
pub mod numerics;
pub mod valuation;
