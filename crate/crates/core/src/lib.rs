pub mod chow;
pub mod exactmath;
pub mod families;
pub mod lines;
pub mod mms;
