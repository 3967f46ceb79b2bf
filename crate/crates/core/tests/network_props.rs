// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

mod common;

use altrank::{build_p, build_profile, build_q, build_s, comparable_authors, NetworkKind};
use common::*;
use proptest::prelude::*;

fn counts_strategy() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (1usize..9, 1usize..14).prop_flat_map(|(nj, na)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0u64), 2 => 1u64..6], na), nj)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn builders_match_triple_loop(counts in counts_strategy()) {
        let records = records_from_counts(&counts);
        prop_assume!(!records.is_empty());
        let (_, _, dense) = tally(&records);
        let naive = naive_networks(&dense);
        let profile = build_profile(&records, None);
        let index = comparable_authors(&profile);
        for net in [build_s(&profile, &index), build_p(&profile, &index), build_q(&profile, &index)] {
            prop_assert!(max_abs_diff(&net.dense(), naive.get(net.kind())) <= 1e-12);
        }
    }

    #[test]
    fn q_pairs_sum_to_one_and_p_is_bounded(counts in counts_strategy()) {
        let records = records_from_counts(&counts);
        prop_assume!(!records.is_empty());
        let (_, _, dense) = tally(&records);
        let profile = build_profile(&records, None);
        let index = comparable_authors(&profile);
        let (p, q) = (build_p(&profile, &index), build_q(&profile, &index));
        for ((j, l), authors) in index.pairs() {
            prop_assert!((q.weight(j, l) + q.weight(l, j) - 1.0).abs() <= 1e-12);
            let sum = p.weight(j, l) + p.weight(l, j);
            let tied = authors.iter().any(|&a| dense[j][a] == dense[l][a]);
            prop_assert!(sum <= 1.0 + 1e-12);
            prop_assert_eq!((sum - 1.0).abs() <= 1e-12, !tied);
            prop_assert!(q.has_edge(j, l) && q.has_edge(l, j));
        }
    }

    #[test]
    fn weights_stay_in_range(counts in counts_strategy()) {
        let records = records_from_counts(&counts);
        prop_assume!(!records.is_empty());
        let profile = build_profile(&records, None);
        let index = comparable_authors(&profile);
        let s = build_s(&profile, &index);
        for j in 0..s.len() {
            prop_assert_eq!(s.weight(j, j), 0.0);
            for &(_, w) in s.row(j) {
                prop_assert!(w >= 1.0);
            }
        }
        for net in [build_p(&profile, &index), build_q(&profile, &index)] {
            for j in 0..net.len() {
                for &(_, w) in net.row(j) {
                    prop_assert!((0.0..=1.0).contains(&w));
                }
            }
        }
    }

    #[test]
    fn min_authors_drops_thin_pairs(counts in counts_strategy(), k in 1usize..4) {
        let records = records_from_counts(&counts);
        prop_assume!(!records.is_empty());
        let profile = build_profile(&records, None);
        let full = comparable_authors(&profile);
        let kept = comparable_authors(&profile).with_min_authors(k);
        for ((j, l), authors) in full.pairs() {
            prop_assert_eq!(kept.authors(j, l).is_some(), authors.len() >= k);
        }
        let q = build_q(&profile, &kept);
        for ((j, l), _) in full.pairs() {
            prop_assert_eq!(q.has_edge(j, l), kept.authors(j, l).is_some());
        }
    }

    #[test]
    fn repeated_mentions_scale_s_only(counts in counts_strategy(), k in 2usize..5) {
        let records = records_from_counts(&counts);
        prop_assume!(!records.is_empty());
        let build = |r: &[altrank::MentionRecord]| {
            let profile = build_profile(r, None);
            let index = comparable_authors(&profile);
            [build_s(&profile, &index), build_p(&profile, &index), build_q(&profile, &index)]
        };
        let [s1, p1, q1] = build(&records);
        let [sk, pk, qk] = build(&repeat_records(&records, k));
        prop_assert!(max_abs_diff(&s1.scaled(k as f64).dense(), &sk.dense()) <= 1e-9);
        prop_assert_eq!(p1.dense(), pk.dense());
        prop_assert_eq!(q1.dense(), qk.dense());
    }
}

#[test]
fn preferred_journal_wins_every_matrix() {
    // Both authors mention X at least as often as Y, one strictly more.
    let counts = vec![vec![2, 1], vec![1, 1]];
    let profile = build_profile(&records_from_counts(&counts), None);
    let index = comparable_authors(&profile);
    for kind in NetworkKind::ALL {
        let net = altrank::network::build_network(&profile, &index, kind);
        assert!(net.weight(0, 1) > net.weight(1, 0), "{kind}");
    }
}

#[test]
fn disjoint_audiences_are_not_compared() {
    let counts = vec![vec![3, 0], vec![0, 2]];
    let profile = build_profile(&records_from_counts(&counts), None);
    let index = comparable_authors(&profile);
    assert!(index.is_empty());
    for kind in NetworkKind::ALL {
        let net = altrank::network::build_network(&profile, &index, kind);
        assert_eq!(net.edge_count(), 0);
        assert_eq!(net.opponents(), [0, 0]);
    }
}
