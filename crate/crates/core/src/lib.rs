//! Core engine for a federated mammography image node ("grid-box").
//!
//! A grid-box is a hospital's gateway onto the federation. It ingests DICOM
//! files into an immutable object vault, extracts de-identified metadata into
//! a replicated catalogue, resolves logical file names to physical locations
//! with a transfer cache, and answers attribute and similarity queries both
//! locally and across virtual-organisation peers.

pub mod audit;
pub mod catalog;
pub mod clock;
pub mod dicom;
pub mod model;
pub mod names;
pub mod node;
pub mod query;
pub mod sr;
pub mod store;
pub mod token;

pub use names::{Lfn, NodeId, Pfn, VoId};
