//! Finite combinatorics of d-dimensional k-templates.
//!
//! A template is stored as one set partition per coordinate (which points
//! share that coordinate). Isomorphism relabels points but never permutes
//! coordinates, so templates that differ only by coordinate order are kept
//! as distinct classes.

mod coloring;
mod grid;
mod partition;
mod template;

pub use coloring::chromatic_number_finite;
pub use grid::{
    collapse_grid, is_homomorphic_image, template_edges, template_hypergraph, template_hypergraph_generated, EnumerationBudget,
    FiniteHypergraph, Grid, GridPoint,
};
pub use partition::{all_partitions, Partition};
pub use template::{all_surjections, enumerate_templates, surjections_up_to_relabeling, Surjection, Template};

pub(crate) use partition::permutations;
