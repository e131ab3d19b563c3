//! Perceptual wavelet packet analysis and synthesis.

mod filters;
mod transform;
mod tree;

pub use filters::{db10_filters, FilterQuad};
pub use transform::{analysis_step, pwpt_forward, pwpt_inverse, synthesis_step, PwpTransform, SubbandFrame};
pub use tree::{
    build_perceptual_tree, default_tree, hz_to_mel, Band, LeafSpec, PerceptualTree, TreeNode,
    MAX_TREE_DEPTH,
};
