//! The long exact sequence of the mapping cone of `J: D → K`, with `D` replaced by the bar
//! complex of `G` through `I′`:
//!
//! `0 → H^{-1}(M) → H^0(G) → H^0(G1)⊕H^0(G2) → H^0(M) → H^1(G) → … → H^k(G1)⊕H^k(G2) → H^k(M)`.

use serde::Serialize;
use thiserror::Error;

use crate::gamma::transforms::{chain_map, cone_to_big, pair_to_cone, restriction, transform_iprime, ChainMapError};
use crate::gamma::{ChainMap, CochainComplex, ComplexBuilder, ComplexError, ComplexKind, Factor};
use crate::homology::{
    check_exact_sequence, cohomology, induced_by_matrix, AbelianGroupInfo, Coefficients, CohomologyGroup, HomologyError,
    InducedMap, NodeExactness,
};
use crate::matched_pair::MatchedPair;
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("chain map {name}: {source}")]
    ChainMap { name: &'static str, source: ChainMapError },
    #[error("the sequence needs at least degree 1")]
    BadDegree,
}

/// Which complex a node comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    /// the cone `M`
    Cone,
    /// the bar complex of `G`
    Group,
    /// `bar_G1 ⊕ bar_G2`
    Pair,
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceNode {
    pub label: String,
    pub kind: NodeKind,
    pub degree: i32,
    pub info: AbelianGroupInfo,
}

/// Nodes, maps between consecutive nodes, and the exactness verdict at each interior node.
#[derive(Debug, Clone)]
pub struct KacSequence {
    pub coeff: Coefficients,
    pub nodes: Vec<SequenceNode>,
    pub groups: Vec<CohomologyGroup>,
    pub maps: Vec<InducedMap>,
    pub exactness: Vec<NodeExactness>,
    pub bar: CochainComplex,
    pub pair: CochainComplex,
    pub cone: CochainComplex,
}

impl KacSequence {
    pub fn is_exact(&self) -> bool {
        self.exactness.iter().all(|n| n.exact)
    }

    /// The complex a node was computed from.
    pub fn complex(&self, kind: NodeKind) -> &CochainComplex {
        match kind {
            NodeKind::Cone => &self.cone,
            NodeKind::Group => &self.bar,
            NodeKind::Pair => &self.pair,
        }
    }
}

fn checked(name: &'static str, f: ChainMap, a: &CochainComplex, b: &CochainComplex) -> Result<ChainMap, SequenceError> {
    f.check(a, b).map_err(|source| SequenceError::ChainMap { name, source })?;
    Ok(f)
}

/// Builds and checks the sequence through `H^through(G1) ⊕ H^through(G2) → H^through(M)`.
pub fn kac_sequence(mp: &MatchedPair, coeff: Coefficients, through: usize, budget: u64) -> Result<KacSequence, SequenceError> {
    if through < 1 {
        return Err(SequenceError::BadDegree);
    }
    let mut builder = ComplexBuilder::with_budget(mp, budget);
    let bar = builder.build(ComplexKind::BarG, through)?;
    let pair = builder.build(ComplexKind::PairK, through)?;
    let cone = builder.build(ComplexKind::MappingConeM, through)?;
    let big = builder.build(ComplexKind::BigTotalD, through + 1)?;
    let top = through as i32 + 1;

    let to_big = checked("cone_to_big", chain_map(1, -1..top, |n| cone_to_big(mp, n)), &cone, &big)?;
    let iprime = checked("I'", chain_map(0, 0..=top, |n| transform_iprime(mp, n as usize)), &big, &bar)?;
    let connecting = checked("connecting", to_big.then(&iprime), &cone, &bar)?;
    let res = chain_map(0, 0..=top, |n| {
        let r1 = restriction(mp, Factor::G1, n as usize);
        let r2 = restriction(mp, Factor::G2, n as usize);
        SparseMatrix::assemble(r1.rows() + r2.rows(), r1.cols(), &[(0, 0, &r1), (r1.rows(), 0, &r2)])
    });
    let res = checked("restriction", res, &bar, &pair)?;
    let incl = checked("pair_to_cone", chain_map(0, 0..=top, |n| pair_to_cone(mp, n as usize)), &pair, &cone)?;

    let mut nodes = Vec::new();
    let mut groups = Vec::new();
    let mut push = |kind: NodeKind, degree: i32, label: String| -> Result<(), SequenceError> {
        let c = match kind {
            NodeKind::Cone => &cone,
            NodeKind::Group => &bar,
            NodeKind::Pair => &pair,
        };
        let h = cohomology(c, degree, coeff)?;
        nodes.push(SequenceNode { label, kind, degree, info: h.info.clone() });
        groups.push(h);
        Ok(())
    };
    push(NodeKind::Cone, -1, "H^-1(M)".into())?;
    for n in 0..=through as i32 {
        push(NodeKind::Group, n, format!("H^{n}(G)"))?;
        push(NodeKind::Pair, n, format!("H^{n}(G1)+H^{n}(G2)"))?;
        push(NodeKind::Cone, n, format!("H^{n}(M)"))?;
    }

    let mut maps = Vec::new();
    for k in 0..nodes.len() - 1 {
        let (a, b) = (&nodes[k], &nodes[k + 1]);
        let f = match a.kind {
            NodeKind::Cone => &connecting,
            NodeKind::Group => &res,
            NodeKind::Pair => &incl,
        };
        let m = f.get(a.degree).ok_or(HomologyError::MissingDegree(a.degree))?;
        debug_assert_eq!(a.degree + f.shift, b.degree);
        maps.push(induced_by_matrix(m, &groups[k], &groups[k + 1])?);
    }

    // a leading zero node makes the first group interior
    let zero = zero_group(coeff);
    let first = zero_map(coeff, &groups[0]);
    let mut all: Vec<&CohomologyGroup> = vec![&zero];
    all.extend(groups.iter());
    let mut all_maps = vec![first];
    all_maps.extend(maps.iter().cloned());
    let exactness = check_exact_sequence(&all, &all_maps);
    let mut full_nodes =
        vec![SequenceNode { label: "0".into(), kind: NodeKind::Cone, degree: -2, info: AbelianGroupInfo::trivial() }];
    full_nodes.extend(nodes);
    let mut all_groups = vec![zero];
    all_groups.extend(groups);
    Ok(KacSequence { coeff, nodes: full_nodes, groups: all_groups, maps: all_maps, exactness, bar, pair, cone })
}

fn zero_group(coeff: Coefficients) -> CohomologyGroup {
    let empty = SparseMatrix::zero(0, 0);
    crate::homology::cohomology_from(&empty, &empty, -2, coeff).expect("zero complex")
}

fn zero_map(coeff: Coefficients, target: &CohomologyGroup) -> InducedMap {
    InducedMap {
        coeff,
        matrix: vec![Vec::new(); target.num_coords()],
        source_orders: Vec::new(),
        target_orders: (0..target.num_coords()).map(|i| target.coord_order(i).cloned()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn z6_sequence_is_exact() {
        let s = kac_sequence(&fixtures::z6(), Coefficients::Torus, 3, 50_000).unwrap();
        assert_eq!(s.nodes.len(), 14);
        assert_eq!(s.exactness.len(), 12);
        assert!(s.is_exact(), "{:?}", s.exactness);
        let labels: Vec<&str> = s.nodes.iter().map(|n| n.label.as_str()).collect();
        assert_eq!(labels[..4], ["0", "H^-1(M)", "H^0(G)", "H^0(G1)+H^0(G2)"]);
    }

    #[test]
    fn integer_sequence_is_exact() {
        let s = kac_sequence(&fixtures::s3(), Coefficients::Integers, 2, 50_000).unwrap();
        assert!(s.is_exact(), "{:?}", s.exactness);
    }

    #[test]
    fn restriction_of_characters() {
        // characters of ℤ6 restricted to ⟨2⟩ and ⟨3⟩: the G1 part has image of order 3
        let s = kac_sequence(&fixtures::z6(), Coefficients::Torus, 1, 50_000).unwrap();
        let k = s.nodes.iter().position(|n| n.label == "H^1(G)").unwrap();
        assert_eq!(s.nodes[k].info.torsion, vec![6]);
        assert_eq!(s.nodes[k + 1].info.torsion, vec![6]);
        let m = &s.maps[k];
        assert!(!m.is_zero());
    }

    #[test]
    fn broken_map_is_caught() {
        let s = kac_sequence(&fixtures::z6(), Coefficients::Torus, 2, 50_000).unwrap();
        let k = s.nodes.iter().position(|n| n.label == "H^1(G)").unwrap();
        let mut maps = s.maps.clone();
        maps[k].matrix.iter_mut().flatten().for_each(|x| *x = num_bigint::BigInt::from(0));
        let groups: Vec<&CohomologyGroup> = s.groups.iter().collect();
        let report = check_exact_sequence(&groups, &maps);
        assert!(report.iter().any(|n| !n.exact));
        assert!(report.iter().filter(|n| !n.exact).all(|n| n.witness.is_some()));
    }
}
