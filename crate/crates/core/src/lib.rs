//! Rectilinear planarity testing, witness construction, and grid drawing
//! for degree-4 partial 2-trees.
//!
//! The pipeline: parse a graph, decompose it into blocks, build SPQ*-trees,
//! run the spirality-set dynamic program over all roots (or the linear-time
//! interval calculus for independent-parallel blocks), and when the answer
//! is YES, realize a zero-bend orthogonal representation and compact it to
//! integer grid coordinates. A brute-force oracle cross-validates all of it
//! at desk scale.

pub mod blocks;
pub mod compact;
pub mod fastpath;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod realize;
pub mod rep;
pub mod spirality;
pub mod spq;
pub mod tester;

use graph::{Graph, GraphClass};
use rep::OrthoRep;
use tester::TestOptions;

/// Whether the linear-time independent-parallel tester may be used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FastPath {
    Auto,
    On,
    Off,
}

#[derive(Debug)]
pub enum PipelineError {
    Unsupported(&'static str),
    Ip(fastpath::IpError),
}

impl std::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PipelineError::Unsupported(m) => write!(f, "{m}"),
            PipelineError::Ip(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PipelineError {}

fn fastpath_applies(g: &Graph, fp: FastPath, class: GraphClass) -> Result<bool, PipelineError> {
    match fp {
        FastPath::Off => Ok(false),
        FastPath::Auto | FastPath::On => {
            if class != GraphClass::SpBlock {
                return match fp {
                    FastPath::On => Err(PipelineError::Unsupported(
                        "fast path applies only to biconnected independent-parallel SP-graphs",
                    )),
                    _ => Ok(false),
                };
            }
            let tree = spq::build_spq_star(g)
                .map_err(|_| PipelineError::Unsupported("not a series-parallel block"))?;
            let ip = spq::is_independent_parallel(&tree);
            if !ip && fp == FastPath::On {
                return Err(PipelineError::Ip(fastpath::IpError::NotIndependentParallel));
            }
            Ok(ip)
        }
    }
}

/// Decide rectilinear planarity. Inputs outside the partial-2-tree family
/// are rejected rather than answered.
pub fn decide(g: &Graph, opts: TestOptions, fp: FastPath) -> Result<bool, PipelineError> {
    let class = graph::validate_partial2tree(g);
    if class == GraphClass::NotPartial2Tree {
        return Err(PipelineError::Unsupported(
            "graph is not a partial 2-tree; some block has a triconnected component",
        ));
    }
    if fastpath_applies(g, fp, class)? {
        return Ok(fastpath::test_ip(g).map_err(PipelineError::Ip)?.is_some());
    }
    Ok(matches!(
        blocks::test_partial2tree(g, opts),
        blocks::P2tOutcome::Yes { .. }
    ))
}

/// Decide and, when positive, produce a validated zero-bend representation.
pub fn realize(
    g: &Graph,
    opts: TestOptions,
    fp: FastPath,
) -> Result<Option<OrthoRep>, PipelineError> {
    let class = graph::validate_partial2tree(g);
    if class == GraphClass::NotPartial2Tree {
        return Err(PipelineError::Unsupported(
            "graph is not a partial 2-tree; some block has a triconnected component",
        ));
    }
    if fastpath_applies(g, fp, class)? {
        let witness = match fastpath::test_ip(g).map_err(PipelineError::Ip)? {
            Some(w) => w,
            None => return Ok(None),
        };
        let asg = fastpath::construct_ip(g, &witness).map_err(PipelineError::Ip)?;
        let tree = spq::build_spq_star(g).expect("block is SP");
        let rep = realize::synthesize(g, &tree, &asg).expect("fast-path assignment realizes");
        debug_assert!(rep.validate().ok());
        return Ok(Some(rep));
    }
    Ok(blocks::realize_partial2tree(g, opts))
}
