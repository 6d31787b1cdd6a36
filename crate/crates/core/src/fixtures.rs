//! Small matched pairs used throughout the tests and examples.

use crate::group::FiniteGroup;
use crate::matched_pair::MatchedPair;

/// `ℤ6 = {0,2,4}·{0,3}`.
pub fn z6() -> MatchedPair {
    MatchedPair::new(FiniteGroup::cyclic(6), &[0, 2, 4], &[0, 3]).expect("valid pair")
}

/// `ℤ2×ℤ2` as `{0,1,2,3}` under XOR, factored into its two coordinate axes.
pub fn z2xz2() -> MatchedPair {
    let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    let g = FiniteGroup::from_table(&table).expect("valid table");
    MatchedPair::new(g, &[0, 1], &[0, 2]).expect("valid pair")
}

/// Generated subgroups `⟨a⟩` and `⟨b⟩` of the permutation group on `gens = [a, b]`.
fn from_two_permutations(degree: usize, a: Vec<usize>, b: Vec<usize>) -> MatchedPair {
    let g = FiniteGroup::from_permutations(degree, &[a, b]).expect("valid permutations");
    // breadth-first numbering puts the generators at 1 and 2
    let g1 = g.subgroup_closure(&[1]).expect("in range");
    let g2 = g.subgroup_closure(&[2]).expect("in range");
    MatchedPair::from_subgroups(g, g1, g2).expect("valid pair")
}

/// `S3 = ⟨(0 1 2)⟩·⟨(0 1)⟩`.
pub fn s3() -> MatchedPair {
    from_two_permutations(3, vec![1, 2, 0], vec![1, 0, 2])
}

/// `D4 = ⟨r⟩·⟨reflection⟩` acting on the square's vertices.
pub fn d4() -> MatchedPair {
    from_two_permutations(4, vec![1, 2, 3, 0], vec![0, 3, 2, 1])
}

/// `ℤ12 = {0,3,6,9}·{0,4,8}`.
pub fn z12() -> MatchedPair {
    MatchedPair::new(FiniteGroup::cyclic(12), &[0, 3, 6, 9], &[0, 4, 8]).expect("valid pair")
}

/// All of the above, by name.
pub fn all() -> Vec<(&'static str, MatchedPair)> {
    vec![("z6", z6()), ("z2xz2", z2xz2()), ("s3", s3()), ("d4", d4()), ("z12", z12())]
}
