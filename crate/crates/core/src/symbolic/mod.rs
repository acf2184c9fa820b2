//! Shifts of finite type, words, points, one-block factor codes and their
//! higher-block recodings.

mod code;
mod recode;
mod sft;
mod word;

pub use code::FactorCode;
pub use recode::Recoding;
pub use sft::{Alphabet, Sft, Sym, DEFAULT_ENUMERATION_CAP};
pub use word::{EventuallyPeriodicPoint, Word};
