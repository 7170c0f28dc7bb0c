//! Recognition, decomposition and clique-width certificates for
//! (4K1, C4, P6)-free graphs that contain an induced C6.

pub mod bitset;
pub mod cw;
pub mod decompose;
pub mod generators;
pub mod graph;
pub mod oracles;
pub mod partition;
pub mod pattern;

pub use bitset::VertexSet;
pub use graph::{parse_graph, Graph, GraphBuilder, GraphError, InducedSubgraph};
pub use partition::{PartitionError, VertexPartition};
pub use pattern::{find_c6, induced_contains, is_in_class, ClassVerdict, PatternId};
