use std::fmt;

use serde::{Deserialize, Serialize};

/// The two colors of the Swiss-cheese operad and of half-plane trees:
/// `Open` (boundary / real axis) and `Closed` (interior).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "o")]
    Open,
    #[serde(rename = "c")]
    Closed,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Open => "o",
            Color::Closed => "c",
        })
    }
}
