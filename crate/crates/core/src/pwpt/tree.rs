//! Pruned wavelet-packet trees whose leaves approximate the mel scale.
//!
//! A node is addressed by its depth and the filter path taken from the root,
//! packed MSB-first into an integer (`0` = low-pass branch, `1` = high-pass).
//! Because high-pass filtering followed by decimation mirrors the spectrum,
//! the physical band of a node follows the Gray-code ordering of its path,
//! which is tracked through the `flipped` flag.

use std::fmt::Write as _;

use crate::error::{invalid, Result};

/// Deepest decomposition supported.
pub const MAX_TREE_DEPTH: u32 = 6;

/// Mel scale, `2595 log10(1 + f / 700)`.
pub fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn mel_width(&self) -> f64 {
        hz_to_mel(self.hi) - hz_to_mel(self.lo)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub depth: u32,
    pub path: u64,
    pub band: Band,
    /// True when the node's coefficient sequence carries a mirrored spectrum.
    pub flipped: bool,
    /// Low-pass and high-pass child node indices for internal nodes.
    pub children: Option<[usize; 2]>,
    /// Position among the frequency-ordered leaves.
    pub leaf: Option<usize>,
}

impl TreeNode {
    fn child_geometry(&self, high: bool) -> (Band, bool) {
        let mid = self.band.center();
        let lower = Band { lo: self.band.lo, hi: mid };
        let upper = Band { lo: mid, hi: self.band.hi };
        // low-pass keeps the orientation, high-pass mirrors it
        let takes_upper = high != self.flipped;
        let band = if takes_upper { upper } else { lower };
        (band, self.flipped != high)
    }
}

/// One leaf line of a tree specification file.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafSpec {
    pub depth: u32,
    pub path: u64,
    pub band: Band,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerceptualTree {
    sample_rate: u32,
    nodes: Vec<TreeNode>,
    leaves: Vec<usize>,
}

impl PerceptualTree {
    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Leaves in ascending frequency order.
    pub fn leaves(&self) -> impl ExactSizeIterator<Item = &TreeNode> + '_ {
        self.leaves.iter().map(move |&i| &self.nodes[i])
    }

    pub fn leaf(&self, k: usize) -> &TreeNode {
        &self.nodes[self.leaves[k]]
    }

    pub fn leaf_bands(&self) -> Vec<Band> {
        self.leaves().map(|n| n.band).collect()
    }

    pub fn max_depth(&self) -> u32 {
        self.leaves().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Coefficient count of leaf `k` for a frame of `frame_len` samples.
    pub fn leaf_len(&self, k: usize, frame_len: usize) -> usize {
        frame_len >> self.leaf(k).depth
    }

    /// Builds a tree from a set of leaves given as `(depth, path)` pairs.
    fn from_leaf_paths(sample_rate: u32, paths: &[(u32, u64)]) -> Result<Self> {
        if sample_rate == 0 {
            return invalid("sample rate must be positive");
        }
        let root = TreeNode {
            depth: 0,
            path: 0,
            band: Band { lo: 0.0, hi: sample_rate as f64 / 2.0 },
            flipped: false,
            children: None,
            leaf: None,
        };
        let mut nodes = vec![root];
        for &(depth, path) in paths {
            if depth > MAX_TREE_DEPTH {
                return invalid(format!("leaf depth {depth} exceeds {MAX_TREE_DEPTH}"));
            }
            if depth < 64 && path >> depth != 0 {
                return invalid(format!("path {path:b} does not fit depth {depth}"));
            }
            let mut idx = 0;
            for level in 0..depth {
                if nodes[idx].leaf.is_some() {
                    return invalid("leaf paths are not prefix-free");
                }
                let high = (path >> (depth - 1 - level)) & 1 == 1;
                let next = match nodes[idx].children {
                    Some(c) => c[high as usize],
                    None => {
                        let base = nodes.len();
                        for h in [false, true] {
                            let (band, flipped) = nodes[idx].child_geometry(h);
                            nodes.push(TreeNode {
                                depth: nodes[idx].depth + 1,
                                path: (nodes[idx].path << 1) | h as u64,
                                band,
                                flipped,
                                children: None,
                                leaf: None,
                            });
                        }
                        nodes[idx].children = Some([base, base + 1]);
                        base + high as usize
                    }
                };
                idx = next;
            }
            if nodes[idx].children.is_some() || nodes[idx].leaf.is_some() {
                return invalid("leaf paths are not prefix-free");
            }
            nodes[idx].leaf = Some(usize::MAX);
        }
        if let Some(n) = nodes.iter().find(|n| n.children.is_none() && n.leaf.is_none()) {
            return invalid(format!(
                "leaves do not tile the spectrum: band [{}, {}] Hz is uncovered",
                n.band.lo, n.band.hi
            ));
        }
        let mut leaves: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].leaf.is_some()).collect();
        leaves.sort_by(|&a, &b| nodes[a].band.lo.total_cmp(&nodes[b].band.lo));
        for (k, &i) in leaves.iter().enumerate() {
            nodes[i].leaf = Some(k);
        }
        let tree = Self { sample_rate, nodes, leaves };
        tree.check_tiling()?;
        Ok(tree)
    }

    fn check_tiling(&self) -> Result<()> {
        let nyquist = self.sample_rate as f64 / 2.0;
        let mut edge = 0.0;
        for node in self.leaves() {
            if (node.band.lo - edge).abs() > 1e-9 * nyquist {
                return invalid(format!("leaf bands overlap or leave a gap at {edge} Hz"));
            }
            edge = node.band.hi;
        }
        if (edge - nyquist).abs() > 1e-9 * nyquist {
            return invalid("leaf bands do not reach the Nyquist frequency");
        }
        Ok(())
    }

    /// Leaf lines for serialization, in frequency order.
    pub fn leaf_specs(&self) -> Vec<LeafSpec> {
        self.leaves()
            .map(|n| LeafSpec { depth: n.depth, path: n.path, band: n.band })
            .collect()
    }

    /// Plain-text form: one leaf per line, `depth path-bits f_lo f_hi`.
    ///
    /// The root-only tree writes its empty path as `-`.
    pub fn to_spec_string(&self) -> String {
        let mut out = String::from("# depth path-bits f_lo f_hi\n");
        for leaf in self.leaf_specs() {
            let bits = path_bits(leaf.depth, leaf.path);
            let _ = writeln!(out, "{} {} {} {}", leaf.depth, bits, leaf.band.lo, leaf.band.hi);
        }
        out
    }

    /// Parses the text produced by [`PerceptualTree::to_spec_string`].
    ///
    /// Blank lines and `#` comments are skipped. Bands listed in the file must
    /// match the bands implied by the paths.
    pub fn from_spec_str(text: &str, sample_rate: u32) -> Result<Self> {
        let mut specs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |what: &str| invalid(format!("tree spec line {}: {what}", lineno + 1));
            if fields.len() != 4 {
                return bad("expected `depth path-bits f_lo f_hi`");
            }
            let Ok(depth) = fields[0].parse::<u32>() else {
                return bad("depth is not an integer");
            };
            let bits = if fields[1] == "-" { "" } else { fields[1] };
            if bits.len() != depth as usize || !bits.bytes().all(|b| b == b'0' || b == b'1') {
                return bad("path bits must be `depth` characters of 0/1");
            }
            let path = if bits.is_empty() { 0 } else { u64::from_str_radix(bits, 2).unwrap_or(0) };
            let (Ok(lo), Ok(hi)) = (fields[2].parse::<f64>(), fields[3].parse::<f64>()) else {
                return bad("band edges are not numbers");
            };
            specs.push(LeafSpec { depth, path, band: Band { lo, hi } });
        }
        if specs.is_empty() {
            return invalid("tree spec lists no leaves");
        }
        let paths: Vec<(u32, u64)> = specs.iter().map(|s| (s.depth, s.path)).collect();
        let tree = Self::from_leaf_paths(sample_rate, &paths)?;
        let tol = 1e-6 * sample_rate as f64;
        for spec in &specs {
            let node = tree
                .leaves()
                .find(|n| n.depth == spec.depth && n.path == spec.path)
                .expect("every spec leaf is in the tree");
            if (node.band.lo - spec.band.lo).abs() > tol || (node.band.hi - spec.band.hi).abs() > tol {
                return invalid(format!(
                    "leaf {} at depth {} covers [{}, {}] Hz, file says [{}, {}]",
                    path_bits(spec.depth, spec.path),
                    spec.depth,
                    node.band.lo,
                    node.band.hi,
                    spec.band.lo,
                    spec.band.hi
                ));
            }
        }
        Ok(tree)
    }
}

fn path_bits(depth: u32, path: u64) -> String {
    if depth == 0 {
        "-".to_string()
    } else {
        format!("{:0width$b}", path, width = depth as usize)
    }
}

/// Greedy mel-split tree construction.
///
/// Starting from `[0, fs/2]`, the leaf with the largest mel width is halved
/// (lowest frequency wins ties) until `target_bands` leaves exist or every
/// remaining leaf sits at `max_depth`.
pub fn build_perceptual_tree(
    sample_rate: u32,
    max_depth: u32,
    target_bands: usize,
) -> Result<PerceptualTree> {
    if max_depth > MAX_TREE_DEPTH {
        return invalid(format!("max depth {max_depth} exceeds {MAX_TREE_DEPTH}"));
    }
    if target_bands == 0 || target_bands > 1usize << max_depth {
        return invalid(format!(
            "cannot build {target_bands} bands with depth {max_depth} (at most {})",
            1usize << max_depth
        ));
    }
    if sample_rate == 0 {
        return invalid("sample rate must be positive");
    }
    let mut leaves = vec![TreeNode {
        depth: 0,
        path: 0,
        band: Band { lo: 0.0, hi: sample_rate as f64 / 2.0 },
        flipped: false,
        children: None,
        leaf: None,
    }];
    while leaves.len() < target_bands {
        let pick = leaves
            .iter()
            .enumerate()
            .filter(|(_, n)| n.depth < max_depth)
            .max_by(|(_, a), (_, b)| {
                a.band
                    .mel_width()
                    .total_cmp(&b.band.mel_width())
                    .then(b.band.lo.total_cmp(&a.band.lo))
            })
            .map(|(i, _)| i);
        let Some(i) = pick else { break };
        let parent = leaves.remove(i);
        let mut kids: Vec<TreeNode> = [false, true]
            .into_iter()
            .map(|high| {
                let (band, flipped) = parent.child_geometry(high);
                TreeNode {
                    depth: parent.depth + 1,
                    path: (parent.path << 1) | high as u64,
                    band,
                    flipped,
                    children: None,
                    leaf: None,
                }
            })
            .collect();
        kids.sort_by(|a, b| a.band.lo.total_cmp(&b.band.lo));
        leaves.splice(i..i, kids);
    }
    let paths: Vec<(u32, u64)> = leaves.iter().map(|n| (n.depth, n.path)).collect();
    PerceptualTree::from_leaf_paths(sample_rate, &paths)
}

/// The 6-level, 24-band tree used by default.
pub fn default_tree(sample_rate: u32) -> Result<PerceptualTree> {
    build_perceptual_tree(sample_rate, 6, 24)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tree_shape() {
        let t = build_perceptual_tree(8000, 6, 24).unwrap();
        assert_eq!(t.leaf_count(), 24);
        let bands = t.leaf_bands();
        assert_eq!(bands[0].width(), 62.5);
        assert!(bands[23].width() > bands[0].width());
        let total: f64 = bands.iter().map(Band::width).sum();
        assert_eq!(total, 4000.0);
        for pair in bands.windows(2) {
            assert!(pair[1].width() >= pair[0].width());
            assert!(pair[1].center() > pair[0].center());
            assert_eq!(pair[0].hi, pair[1].lo);
        }
        assert!(t.leaves().all(|n| n.depth <= 6));
        let m: usize = (0..24).map(|k| t.leaf_len(k, 512)).sum();
        assert_eq!(m, 512);
    }

    #[test]
    fn single_split() {
        let t = build_perceptual_tree(8000, 1, 2).unwrap();
        let b = t.leaf_bands();
        assert_eq!((b[0].lo, b[0].hi), (0.0, 2000.0));
        assert_eq!((b[1].lo, b[1].hi), (2000.0, 4000.0));
    }

    #[test]
    fn too_many_bands() {
        assert!(build_perceptual_tree(8000, 3, 9).is_err());
        assert!(build_perceptual_tree(8000, 7, 24).is_err());
        assert!(build_perceptual_tree(8000, 6, 0).is_err());
    }

    #[test]
    fn full_tree_at_depth_limit() {
        let t = build_perceptual_tree(16000, 3, 8).unwrap();
        assert_eq!(t.leaf_count(), 8);
        assert!(t.leaves().all(|n| n.depth == 3));
    }

    #[test]
    fn gray_code_ordering() {
        // Paths in frequency order for a full depth-2 tree: 00, 01, 11, 10.
        let t = build_perceptual_tree(8000, 2, 4).unwrap();
        let paths: Vec<u64> = t.leaves().map(|n| n.path).collect();
        assert_eq!(paths, vec![0b00, 0b01, 0b11, 0b10]);
    }

    #[test]
    fn spec_file_round_trip() {
        let t = build_perceptual_tree(8000, 6, 24).unwrap();
        let text = t.to_spec_string();
        assert_eq!(PerceptualTree::from_spec_str(&text, 8000).unwrap(), t);
        let root = build_perceptual_tree(8000, 0, 1).unwrap();
        assert!(root.to_spec_string().contains("0 - 0 4000"));
        assert_eq!(PerceptualTree::from_spec_str(&root.to_spec_string(), 8000).unwrap(), root);
    }

    #[test]
    fn spec_file_rejects_bad_tilings() {
        // gap: only the low half
        assert!(PerceptualTree::from_spec_str("1 0 0 2000\n", 8000).is_err());
        // overlap: a node and its child
        assert!(PerceptualTree::from_spec_str("1 0 0 2000\n2 00 0 1000\n1 1 2000 4000\n", 8000).is_err());
        // wrong band for the path (high-pass child of the high branch is 2000-3000)
        let wrong = "1 0 0 2000\n2 10 2000 3000\n2 11 3000 4000\n";
        assert!(PerceptualTree::from_spec_str(wrong, 8000).is_err());
        let right = "1 0 0 2000\n2 11 2000 3000\n2 10 3000 4000\n";
        assert_eq!(PerceptualTree::from_spec_str(right, 8000).unwrap().leaf_count(), 3);
        assert!(PerceptualTree::from_spec_str("1 01 0 2000\n", 8000).is_err());
        assert!(PerceptualTree::from_spec_str("# nothing\n", 8000).is_err());
    }
}
