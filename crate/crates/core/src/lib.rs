//! Turn tweet corpora into explorable networks.
//!
//! The pipeline is: parse a JSON-lines corpus ([`corpus`]), build a retweet or
//! hashtag co-occurrence network ([`network`]) on top of the [`graph`]
//! container, optionally reduce it, detect communities with Louvain
//! ([`community`]), compute a Barnes-Hut accelerated force layout
//! ([`layout`]) and write an explorer document or an interchange format
//! ([`export`]).
//!
//! The numeric modules are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the CLI uses.

pub mod community;
pub mod corpus;
pub mod export;
pub mod graph;
pub mod layout;
pub mod network;
pub mod scalar;
pub mod synth;

pub use corpus::{Tweet, UserRef};
pub use graph::{DegreeMode, Graph, NodeId};
pub use scalar::Scalar;

pub type Partition = community::Partition<f64>;
pub type LouvainParams = community::LouvainParams<f64>;
pub type LayoutParams = layout::LayoutParams<f64>;
pub type LayoutResult = layout::LayoutResult<f64>;
pub type Point = layout::Point<f64>;
