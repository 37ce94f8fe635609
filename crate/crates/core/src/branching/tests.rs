use std::collections::BTreeSet;
use std::sync::LazyLock;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use super::*;
use crate::expansion::{greedy_expansion, lazy_expansion, stream_truncation_bound, val_beta, val_seq};
use crate::numeric::{eval_expr, XSpec};

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

static G: LazyLock<Beta> = LazyLock::new(Beta::golden);
static NINETEEN: LazyLock<Beta> = LazyLock::new(|| Beta::parse("poly:10x-19").unwrap());
static THREE_HALVES: LazyLock<Beta> = LazyLock::new(|| Beta::parse("poly:2x-3").unwrap());

fn half_beta() -> FieldValue {
    eval_expr("beta/2", &G).unwrap()
}

/// Every 0-1 word of length `n` with `0 <= x - val(u) <= β^{-n}/(β-1)`.
fn brute_paths(x: &FieldValue, n: usize) -> Vec<Word> {
    let beta = x.beta();
    let bound = stream_truncation_bound(n, beta);
    Word::all_of_length(n)
        .filter(|u| {
            let d = x - &val_beta(u, beta);
            d.sign_checked().unwrap() != Ordering::Less && d.cmp_checked(&bound).unwrap() != Ordering::Greater
        })
        .collect()
}

fn blocks(words: &[&str], k: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::from([Word::new()]);
    for _ in 0..k {
        out = out
            .iter()
            .flat_map(|p| words.iter().map(move |b| p.concat(&w(b))))
            .collect();
    }
    out
}

#[test]
fn digit_options_golden() {
    let g = &*G;
    let inv = g.pow(-1);
    assert!(digit_options(&inv).unwrap().both());
    assert!(digit_options(&g.one()).unwrap().both());
    assert_eq!(digit_options(&g.zero()).unwrap().forced(), Some(0));
    assert_eq!(digit_options(&g.max_value()).unwrap().forced(), Some(1));
    let just_below = &inv - &g.pow(-20);
    assert_eq!(digit_options(&just_below).unwrap().forced(), Some(0));
    let just_above = &g.one() + &g.pow(-20);
    assert_eq!(digit_options(&just_above).unwrap().forced(), Some(1));
    assert!(matches!(digit_options(&g.from_int(2)), Err(Error::OutOfDomain(_))));
}

#[test]
fn counterexample_tree() {
    let x = half_beta();
    let tree = expand_tree(&x, 12).unwrap();
    let paths: BTreeSet<Word> = tree.paths().into_iter().collect();
    assert_eq!(paths, blocks(&["100", "011"], 4));
    assert!(paths.iter().all(|p| !p.contains_factor(&w("1010"))));
    for k in 1..=5 {
        assert_eq!(count_expansions(&x, 3 * k).unwrap(), BigUint::from(1u32 << k));
    }
    assert!(is_full_branching(&x, 4, DEFAULT_GAMMA_HORIZON).unwrap());
    // 1/(2β) is β^{-2} times β/2, so its expansions are 00 followed by the
    // same blocks.
    let y = eval_expr("1/(2*beta)", &G).unwrap();
    let shifted: BTreeSet<Word> = expand_tree(&y, 8).unwrap().paths().into_iter().collect();
    let want: BTreeSet<Word> = blocks(&["100", "011"], 2).iter().map(|b| w("00").concat(b)).collect();
    assert_eq!(shifted, want);
}

#[test]
fn inverse_golden_tree() {
    let x = G.pow(-1);
    let tree = expand_tree(&x, 12).unwrap();
    let paths = tree.paths();
    assert_eq!(paths, brute_paths(&x, 12));
    for p in ["100000000000", "011000000000", "010110000000", "010101100000"] {
        assert!(paths.contains(&w(p)), "{p}");
    }
    let counts: Vec<BigUint> = (1..=10).map(|n| count_expansions(&x, n).unwrap()).collect();
    assert!(counts.windows(2).all(|c| c[0] <= c[1]));
    assert_eq!(tree.path_count(), BigUint::from(paths.len()));
    assert!(!is_full_branching(&x, 3, DEFAULT_GAMMA_HORIZON).unwrap());
}

#[test]
fn merged_tree_counts_paths() {
    let x = G.pow(-1);
    let plain = expand_tree(&x, 10).unwrap();
    let merged = expand_tree_with(&x, 10, TreeOptions { merge: true, ..Default::default() }).unwrap();
    assert!(merged.nodes.len() < plain.nodes.len());
    assert_eq!(merged.path_count(), plain.path_count());
    assert_eq!(merged.paths(), plain.paths());
    let small = TreeOptions { merge: false, node_budget: 10 };
    assert!(matches!(expand_tree_with(&x, 10, small), Err(Error::NodeBudgetExceeded(10))));
}

#[test]
fn zero_tree() {
    let z = G.zero();
    assert_eq!(expand_tree(&z, 5).unwrap().paths(), vec![Word::zeros(5)]);
    let gamma = branching_compactum_prefix(&z, 3, 64).unwrap();
    assert_eq!(gamma.len(), 1);
    assert_eq!(gamma[0].gamma, Word::zeros(3));
    assert_eq!(gamma[0].tail, GammaTail::Unique);
}

#[test]
fn gamma_of_inverse_golden() {
    let x = G.pow(-1);
    let gamma = branching_compactum_prefix(&x, 3, 64).unwrap();
    let words: Vec<String> = gamma.iter().map(|g| g.gamma.to_string()).collect();
    // Upper branch at the root leaves remainder 0; the lower branch reaches
    // remainder 1, a branch point again.
    assert!(words.contains(&"000".to_string()));
    assert!(gamma.iter().all(|g| g.gamma.get(0) == Some(1) || g.gamma == w("000")));
}

#[test]
fn tree_export() {
    let tree = expand_tree(&G.pow(-1), 3).unwrap();
    let json = tree.to_json();
    assert_eq!(json["nodes"].as_array().unwrap().len(), tree.nodes.len());
    assert_eq!(json["nodes"][0]["branch"], true);
    let dot = tree.to_dot();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), tree.nodes.len() - 1);
}

#[test]
fn uniqueness_examples() {
    assert_eq!(
        is_unique_expansion(&G.pow(-1), 100).unwrap(),
        UniquenessVerdict::Branches { depth: 0, witness: Word::new() }
    );
    for seed in 0..5 {
        let x = THREE_HALVES.from_rational(&XSpec::random_point(seed));
        let v = is_unique_expansion(&x, 200).unwrap();
        assert!(matches!(v, UniquenessVerdict::Branches { .. }), "{v}");
    }
    let seq = EventuallyPeriodicSeq::periodic(tm_word(2).concat(&tm_word(2).complement())).unwrap();
    assert!(in_u_beta(&seq, &NINETEEN).unwrap());
    let x = val_seq(&seq, &NINETEEN).unwrap();
    match is_unique_expansion(&x, 100).unwrap() {
        UniquenessVerdict::UniqueCertified { expansion } => assert_eq!(expansion, seq),
        other => panic!("{other}"),
    }
    assert!(matches!(is_unique_expansion(&G.zero(), 10), Err(Error::OutOfDomain(_))));
    let d = Beta::decimal("1.9", 128).unwrap();
    let xd = val_seq(&seq, &d).unwrap();
    assert_eq!(is_unique_expansion(&xd, 50).unwrap(), UniquenessVerdict::Undetermined { horizon: 50 });
    assert!(in_u_beta(&seq, &d).unwrap());
}

#[test]
fn u_beta_membership() {
    let g = &*G;
    for s in ["(10)", "(0)", "(110)", "(01)", "(100)", "1(0)"] {
        let seq: EventuallyPeriodicSeq = s.parse().unwrap();
        assert!(!in_u_beta(&seq, g).unwrap(), "{s}");
    }
    let seq: EventuallyPeriodicSeq = "(10)".parse().unwrap();
    assert!(in_u_beta(&seq, &NINETEEN).unwrap());
}

#[test]
fn thue_morse_words() {
    assert_eq!(thue_morse(8), w("01101001"));
    assert_eq!(thue_morse(16), w("0110100110010110"));
    assert_eq!(thue_morse(1), w("0"));
    let want = ["1", "11", "1101", "11010011"];
    for (n, s) in want.iter().enumerate() {
        assert_eq!(tm_word(n as u32), w(s));
    }
    // Doubling with the last digit of the complement raised to 1.
    for n in 0..10 {
        let mut tail = tm_word(n).complement();
        tail.pop();
        tail.push(1);
        assert_eq!(tm_word(n + 1), tm_word(n).concat(&tail));
    }
}

#[test]
fn komornik_loreti_digits() {
    assert_eq!(komornik_loreti(10).unwrap(), "1.787231650");
    assert_eq!(komornik_loreti(1).unwrap(), "2");
    assert!(matches!(komornik_loreti(0), Err(Error::PrecisionCapExceeded(_))));
    let (lo, hi) = komornik_loreti_bracket(40).unwrap();
    assert!(hi > lo);
    let m = thue_morse(200);
    let f = |q: f64| {
        (2..200).map(|n| m.get(n - 1).unwrap() as f64 * q.powi(1 - n as i32)).sum::<f64>() - 1.0
    };
    assert!(f(1.5) > 0.0 && f(2.0) < 0.0);
    let mid: f64 = ((lo + hi) / BigRational::from_integer(2.into())).to_f64().unwrap();
    assert!(f(mid).abs() < 1e-9);
}

/// Direct check of the two-sided suffix constraint.
fn brute_dim_count(beta: &Beta, n: usize) -> usize {
    let a = crate::expansion::quasi_greedy_prefix(beta, n).unwrap();
    let abar = a.complement();
    Word::all_of_length(n)
        .filter(|u| {
            (0..n).all(|k| {
                let s = u.slice(k..n);
                abar.prefix(n - k) <= s && s <= a.prefix(n - k)
            })
        })
        .count()
}

#[test]
fn dimension_estimator() {
    let b = Beta::decimal("1.95", 128).unwrap();
    for n in [4, 8, 12] {
        assert_eq!(estimate_unique_dim(&b, n).unwrap().count, BigUint::from(brute_dim_count(&b, n)));
    }
    assert_eq!(
        estimate_unique_dim(&NINETEEN, 10).unwrap().count,
        BigUint::from(brute_dim_count(&NINETEEN, 10))
    );
    let e = estimate_unique_dim(&b, 20).unwrap();
    assert!(e.estimate > 0.0 && e.estimate < 1.0);
    let low = estimate_unique_dim(&Beta::decimal("1.7", 128).unwrap(), 24).unwrap();
    assert!(low.estimate < e.estimate);
    assert!(matches!(estimate_unique_dim(&b, 0), Err(Error::LengthCapExceeded { .. })));
}

#[test]
fn branch_node_counter() {
    let x = THREE_HALVES.from_rational(&XSpec::random_point(3));
    assert!(count_branch_nodes(&x, 30, 3).unwrap() >= 3);
    assert_eq!(count_branch_nodes(&G.zero(), 30, 3).unwrap(), 0);
}

fn golden_point() -> impl Strategy<Value = FieldValue> {
    proptest::collection::vec(0u8..=1, 1..=10).prop_map(|d| {
        let u = Word::from_digits(d).unwrap();
        val_beta(&u, &G)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tree_matches_brute_force(x in golden_point(), n in 1usize..=9) {
        prop_assume!(crate::expansion::check_expansion_domain(&x).is_ok());
        let tree = expand_tree(&x, n).unwrap();
        prop_assert_eq!(tree.paths(), brute_paths(&x, n));
    }

    #[test]
    fn paths_conserve_value(x in golden_point(), n in 1usize..=8) {
        prop_assume!(crate::expansion::check_expansion_domain(&x).is_ok());
        let tree = expand_tree(&x, n).unwrap();
        let beta = x.beta();
        let mut stack = vec![(0usize, Word::new())];
        while let Some((id, p)) = stack.pop() {
            let node = &tree.nodes[id];
            let back = &val_beta(&p, beta) + &node.remainder.scale_by_beta_pow(-(node.depth as i64));
            prop_assert_eq!(&back, &x);
            for &(d, c) in &node.children {
                let mut q = p.clone();
                q.push(d);
                stack.push((c, q));
            }
        }
    }

    #[test]
    fn greedy_and_lazy_are_extreme_paths(seed in any::<u64>(), n in 1usize..=10) {
        let x = THREE_HALVES.from_rational(&XSpec::random_point(seed));
        let paths = expand_tree(&x, n).unwrap().paths();
        prop_assert_eq!(paths.last().unwrap(), &greedy_expansion(&x, n).unwrap());
        prop_assert_eq!(paths.first().unwrap(), &lazy_expansion(&x, n).unwrap());
    }

    #[test]
    fn gamma_coding_is_injective(x in golden_point(), d in 1usize..=4) {
        prop_assume!(crate::expansion::check_expansion_domain(&x).is_ok());
        let gamma = branching_compactum_prefix(&x, d, 64).unwrap();
        let distinct: BTreeSet<&Word> = gamma.iter().map(|g| &g.gamma).collect();
        prop_assert_eq!(distinct.len(), gamma.len());
    }

    #[test]
    fn shift_lemma(x in golden_point()) {
        // Not full branching: some expansion has a unique tail.
        prop_assume!(crate::expansion::check_expansion_domain(&x).is_ok());
        prop_assume!(x.sign_checked().unwrap() == Ordering::Greater);
        if !is_full_branching(&x, 3, 64).unwrap() {
            let gamma = branching_compactum_prefix(&x, 3, 64).unwrap();
            let g = gamma.iter().find(|g| g.tail == GammaTail::Unique);
            prop_assert!(g.is_some());
        }
    }
}
