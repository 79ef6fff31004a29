//! Experiment harnesses: the substitution-channel detection study, the parity
//! baseline, the Huffman comparison and the delta sweep.

pub mod channel;
pub mod detection;
pub mod huffman;
pub mod rng;
pub mod sweep;

pub use channel::{corrupt, ChannelSpec};
pub use detection::{
    exact_detection, exact_detection_with_budget, parity_baseline_detection,
    parity_baseline_detection_with_budget, simulate_detection, DetectionReport, ExactRow,
    DEFAULT_ENUMERATION_BUDGET,
};
pub use huffman::{huffman_compare, huffman_lengths, CompareMode, HuffmanComparison, HuffmanRow, PrefixCode};
pub use sweep::{sweep_delta, SweepRow};
