mod support;

use std::time::Duration;

use equiwide::assign::{assign_unique, AssignmentStrategy};
use equiwide::baselines::{dsatur_heuristic, exact_coloring, hac_complete_link};
use equiwide::cover::{enumerate_min_covers, exact_min_cover, greedy_cover};
use equiwide::dissim::dtw;
use equiwide::graph::{build_threshold_graph, complement, fpf_order, greedy_independent_set};
use equiwide::homoset::{maximal_cliques, prune_dominated, radius_balls, HomogeneousSetCollection};
use equiwide::model::{diameter, radius, validate_partition, wcsd};
use equiwide::{DissimilarityMatrix, HomogeneousSet, Partition, WidthConstraint};
use proptest::prelude::*;

const LONG: Duration = Duration::from_secs(60);

fn matrix(max_n: usize) -> impl Strategy<Value = DissimilarityMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0u8..12, n * n)
            .prop_map(move |v| DissimilarityMatrix::from_fn(n, |i, j| v[i * n + j] as f64).unwrap())
    })
}

fn matrix_and_threshold(max_n: usize) -> impl Strategy<Value = (DissimilarityMatrix, f64)> {
    (matrix(max_n), 0u8..13).prop_map(|(d, t)| (d, t as f64))
}

fn dtw_naive(a: &[f64], b: &[f64]) -> f64 {
    fn rec(a: &[f64], b: &[f64], i: usize, j: usize) -> f64 {
        let cost = (a[i] - b[j]).abs();
        match (i, j) {
            (0, 0) => cost,
            (0, _) => cost + rec(a, b, 0, j - 1),
            (_, 0) => cost + rec(a, b, i - 1, 0),
            _ => {
                cost + rec(a, b, i - 1, j)
                    .min(rec(a, b, i, j - 1))
                    .min(rec(a, b, i - 1, j - 1))
            }
        }
    }
    rec(a, b, a.len() - 1, b.len() - 1)
}

fn series(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-20i32..20).prop_map(|v| v as f64 / 4.0), 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn radius_never_exceeds_diameter(d in matrix(8), mask in 1u32..256) {
        let members: Vec<usize> = (0..d.len()).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assume!(!members.is_empty());
        let (r, c) = radius(&members, &d).unwrap();
        prop_assert!(r <= diameter(&members, &d).unwrap());
        prop_assert!(members.contains(&c));
    }

    #[test]
    fn widths_ignore_member_order(d in matrix(8), seed in any::<u64>()) {
        let mut members: Vec<usize> = (0..d.len()).collect();
        let r0 = radius(&members, &d).unwrap();
        let d0 = diameter(&members, &d).unwrap();
        let k = members.len();
        members.rotate_left((seed as usize) % k);
        members.reverse();
        prop_assert_eq!(radius(&members, &d).unwrap(), r0);
        prop_assert_eq!(diameter(&members, &d).unwrap(), d0);
    }

    #[test]
    fn metric_radius_bounds(pts in prop::collection::vec(-50i32..50, 1..9)) {
        let line: Vec<f64> = pts.iter().map(|&p| p as f64).collect();
        let d = DissimilarityMatrix::from_line(&line).unwrap();
        let all: Vec<usize> = (0..d.len()).collect();
        let r = radius(&all, &d).unwrap().0;
        prop_assert!(diameter(&all, &d).unwrap() <= 2.0 * r);
    }

    #[test]
    fn validation_agrees_with_bruteforce(d in matrix(8), t in 0u8..13, labels in prop::collection::vec(0usize..4, 8)) {
        let labels = equiwide::assign::relabel_compact(&labels[..d.len()]);
        let p = Partition::new(labels.clone(), None).unwrap();
        for (c, radius_kind) in [(WidthConstraint::diameter(t as f64).unwrap(), false), (WidthConstraint::radius(t as f64).unwrap(), true)] {
            let ok = validate_partition(&p, &d, &c).is_ok();
            prop_assert_eq!(ok, support::labels_homogeneous(&labels, &d, radius_kind, t as f64));
        }
        let w = wcsd(&p, &d);
        prop_assert!(w >= 0.0);
        let all_zero = p.clusters().iter().all(|m| m.iter().all(|&a| m.iter().all(|&b| d.get(a, b) == 0.0)));
        prop_assert_eq!(w == 0.0, all_zero);
    }

    #[test]
    fn dtw_is_symmetric_and_monotone_in_window(a in series(6), b in series(6), w in 0usize..6) {
        let w0 = w.max(a.len().abs_diff(b.len()));
        let x = dtw(&a, &b, w0).unwrap();
        prop_assert_eq!(x, dtw(&b, &a, w0).unwrap());
        prop_assert!(dtw(&a, &b, w0 + 1).unwrap() <= x);
    }

    #[test]
    fn wide_band_dtw_matches_naive_recursion(a in series(6), b in series(6)) {
        let w = a.len().max(b.len());
        prop_assert!((dtw(&a, &b, w).unwrap() - dtw_naive(&a, &b)).abs() < 1e-9);
    }

    #[test]
    fn complement_edges_are_strictly_above_threshold((d, t) in matrix_and_threshold(9)) {
        let g = build_threshold_graph(&d, t);
        let h = complement(&g);
        for i in 0..d.len() {
            prop_assert!(!h.adjacent(i, i));
            for j in 0..d.len() {
                if i != j {
                    prop_assert_eq!(h.adjacent(i, j), d.get(i, j) > t);
                    prop_assert_eq!(g.adjacent(i, j), g.adjacent(j, i));
                }
            }
        }
    }

    #[test]
    fn fpf_is_a_permutation_independent_of_construction(d in matrix(9)) {
        let order = fpf_order(&d);
        let mut sorted = order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..d.len()).collect::<Vec<_>>());
        let rows: Vec<Vec<f64>> = (0..d.len()).map(|i| d.row(i).to_vec()).collect();
        prop_assert_eq!(fpf_order(&DissimilarityMatrix::from_rows(&rows).unwrap()), order);
    }

    #[test]
    fn independent_set_bounds_cluster_count((d, t) in matrix_and_threshold(9)) {
        let g = build_threshold_graph(&d, t);
        let is = greedy_independent_set(&g, &fpf_order(&d));
        for (x, &a) in is.iter().enumerate() {
            for &b in &is[x + 1..] {
                prop_assert!(d.get(a, b) > t);
            }
        }
        prop_assert!(is.len() <= support::min_diameter_partition(&d, t));
    }

    #[test]
    fn cliques_are_homogeneous_and_maximal((d, t) in matrix_and_threshold(9)) {
        let c = maximal_cliques(&build_threshold_graph(&d, t), 1_000_000);
        prop_assert!(!c.truncated);
        for (x, s) in c.sets.iter().enumerate() {
            prop_assert!(diameter(&s.members, &d).unwrap() <= t);
            for (y, o) in c.sets.iter().enumerate() {
                if x != y {
                    prop_assert!(!s.members.iter().all(|m| o.contains(*m)));
                }
            }
        }
    }

    #[test]
    fn balls_are_radius_homogeneous((d, t) in matrix_and_threshold(9)) {
        for s in radius_balls(&d, t).sets {
            let c = s.center.unwrap();
            prop_assert!(s.members.iter().all(|&m| d.get(c, m) <= t));
        }
    }

    #[test]
    fn pruning_keeps_the_optimum((d, t) in matrix_and_threshold(9)) {
        let balls = radius_balls(&d, t);
        let pruned = prune_dominated(&balls);
        let a = exact_min_cover(&balls, LONG).unwrap();
        let b = exact_min_cover(&pruned, LONG).unwrap();
        prop_assert_eq!(a.cover.len(), b.cover.len());
    }

    #[test]
    fn coloring_dominance((d, t) in matrix_and_threshold(9)) {
        let g = complement(&build_threshold_graph(&d, t));
        let exact = exact_coloring(&g, LONG);
        prop_assert!(exact.proven && exact.coloring.is_proper(&g));
        let h = dsatur_heuristic(&g);
        prop_assert!(h.is_proper(&g));
        prop_assert!(h.k() >= exact.coloring.k());
        prop_assert_eq!(exact.coloring.k(), support::chromatic_number(d.len(), |a, b| g.adjacent(a, b)));
        let hac = hac_complete_link(&d, t);
        prop_assert!(validate_partition(&hac, &d, &WidthConstraint::diameter(t).unwrap()).is_ok());
        prop_assert!(hac.k() >= exact.coloring.k());
    }
}

/// Random set systems (not necessarily from a matrix) against subset enumeration.
fn random_collection(n: usize, sets: &[u32]) -> HomogeneousSetCollection {
    HomogeneousSetCollection {
        sets: sets
            .iter()
            .map(|&m| HomogeneousSet::new((0..n).filter(|&i| m >> i & 1 == 1).collect(), None))
            .collect(),
        constraint: WidthConstraint::diameter(0.0).unwrap(),
        truncated: false,
        universe: n,
    }
}

fn set_system() -> impl Strategy<Value = (usize, Vec<u32>)> {
    (1usize..=10).prop_flat_map(|n| {
        let full = (1u32 << n) - 1;
        // singletons guarantee coverage; extra random sets make it interesting
        prop::collection::vec(1u32..=full, 0..=(15 - n.min(10)).max(1)).prop_map(move |mut extra| {
            extra.extend((0..n).map(|i| 1u32 << i));
            extra.truncate(15);
            let mut covered = extra.iter().fold(0, |a, &m| a | m);
            let mut i = 0;
            while covered != full {
                if covered >> i & 1 == 0 {
                    extra.push(1 << i);
                    covered |= 1 << i;
                }
                i += 1;
            }
            (n, extra)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn exact_cover_matches_subset_enumeration((n, sets) in set_system()) {
        prop_assume!(sets.len() <= 15);
        let c = random_collection(n, &sets);
        let exact = exact_min_cover(&c, LONG).unwrap();
        prop_assert!(exact.proven && exact.cover.is_cover() && exact.cover.is_irredundant());
        let opt = support::min_cover_bruteforce(n, &sets).unwrap();
        prop_assert_eq!(exact.cover.len(), opt);

        let greedy = greedy_cover(&c).unwrap();
        prop_assert!(greedy.is_cover());
        prop_assert!(greedy.len() as f64 <= (support::harmonic(n) * opt as f64).floor());

        let all = enumerate_min_covers(&c, 100_000, LONG).unwrap();
        prop_assert!(all.complete());
        prop_assert!(all.covers.iter().all(|cv| cv.len() == opt && cv.is_cover() && cv.is_irredundant()));
        prop_assert!(all.covers.windows(2).all(|w| w[0].set_indices < w[1].set_indices));
        prop_assert!(all.covers.iter().any(|cv| cv.set_indices == exact.cover.set_indices));
        let brute_count = (0u32..1 << sets.len())
            .filter(|sel| sel.count_ones() as usize == opt)
            .filter(|&sel| (0..sets.len()).filter(|&i| sel >> i & 1 == 1).fold(0, |a, i| a | sets[i]) == (1u32 << n) - 1)
            .count();
        prop_assert_eq!(all.covers.len(), brute_count);
    }

    #[test]
    fn assignment_preserves_homogeneity((d, t) in matrix_and_threshold(9)) {
        for c in [WidthConstraint::diameter(t).unwrap(), WidthConstraint::radius(t).unwrap()] {
            let sets = match c.kind {
                equiwide::WidthKind::Diameter => maximal_cliques(&build_threshold_graph(&d, t), 1_000_000),
                equiwide::WidthKind::Radius => prune_dominated(&radius_balls(&d, t)),
            };
            for cover in [greedy_cover(&sets).unwrap(), exact_min_cover(&sets, LONG).unwrap().cover] {
                for s in [AssignmentStrategy::ClosestCenter, AssignmentStrategy::LargestFirst] {
                    let p = assign_unique(&cover, &d, &c, s).unwrap();
                    prop_assert!(validate_partition(&p, &d, &c).is_ok());
                    prop_assert!(p.k() <= cover.len());
                    for (e, &l) in p.labels().iter().enumerate() {
                        // every element sits in a cluster drawn from a chosen set containing it
                        let cluster = &p.clusters()[l];
                        prop_assert!(cover.chosen.iter().any(|set| set.contains(e) && cluster.iter().all(|&m| set.contains(m))));
                    }
                    if let Some(centers) = p.centers() {
                        for (l, &ctr) in centers.iter().enumerate() {
                            prop_assert!(cover.chosen.iter().any(|s| s.center == Some(ctr)));
                            prop_assert!(p.clusters()[l].iter().all(|&m| d.get(ctr, m) <= t));
                        }
                    }
                    let exclusive_everywhere = cover.chosen.iter().all(|s| {
                        s.members.iter().any(|&m| cover.chosen.iter().filter(|o| o.contains(m)).count() == 1)
                    });
                    if exclusive_everywhere {
                        prop_assert_eq!(p.k(), cover.len());
                    }
                }
            }
        }
    }
}
