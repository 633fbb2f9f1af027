//! Library half of the `mgraph` command: JSON document schema with the
//! conversions to and from core graphs, and the DOT exporter.

pub mod doc;
pub mod dot;
