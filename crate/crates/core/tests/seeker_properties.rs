use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqdb_core::catalog::{Catalog, Entry};
use seqdb_core::exec::Mode;
use seqdb_core::generators::seed_catalog;
use seqdb_core::index::{build_index, find_matches, Query};
use seqdb_core::numcore::canonical_match_text;
use seqdb_core::seeker::{fuzzy_matches_with, identify, SeekerConfig, Verdict};
use seqdb_core::{ANumber, TermList};

/// Edit distance over whole strings where a comma may only be matched to a
/// comma: inserting, deleting or substituting a comma is forbidden.
fn comma_frozen_distance(a: &str, b: &str) -> Option<usize> {
    let (a, b) = (a.as_bytes(), b.as_bytes());
    const INF: usize = usize::MAX / 2;
    let mut d = vec![vec![INF; b.len() + 1]; a.len() + 1];
    d[0][0] = 0;
    for i in 0..=a.len() {
        for j in 0..=b.len() {
            let cur = d[i][j];
            if cur >= INF {
                continue;
            }
            if i < a.len() && a[i] != b',' {
                d[i + 1][j] = d[i + 1][j].min(cur + 1);
            }
            if j < b.len() && b[j] != b',' {
                d[i][j + 1] = d[i][j + 1].min(cur + 1);
            }
            if i < a.len() && j < b.len() {
                let (x, y) = (a[i], b[j]);
                let step = match (x == b',', y == b',') {
                    (true, true) => Some(0),
                    (false, false) => Some(usize::from(x != y)),
                    _ => None,
                };
                if let Some(s) = step {
                    d[i + 1][j + 1] = d[i + 1][j + 1].min(cur + s);
                }
            }
        }
    }
    let r = d[a.len()][b.len()];
    (r < INF).then_some(r)
}

fn plain_levenshtein(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, x) in a.chars().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for j in 0..b.len() {
            cur[j + 1] = (prev[j] + usize::from(x != b[j])).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

fn corrupt_digit(rng: &mut ChaCha8Rng, terms: &[BigInt]) -> Vec<BigInt> {
    loop {
        let mut text: Vec<Vec<u8>> = terms.iter().map(|t| t.to_string().into_bytes()).collect();
        let i = rng.random_range(0..text.len());
        let digits: Vec<usize> = (0..text[i].len()).filter(|&k| text[i][k].is_ascii_digit()).collect();
        let k = digits[rng.random_range(0..digits.len())];
        let new = b'0' + rng.random_range(0..10u8);
        if new == text[i][k] || (k == 0 && new == b'0' && text[i].len() > 1) {
            continue;
        }
        if text[i][0] == b'-' && k == 1 && new == b'0' {
            continue;
        }
        text[i][k] = new;
        return text.iter().map(|t| std::str::from_utf8(t).unwrap().parse().unwrap()).collect();
    }
}

#[test]
fn fuzzy_matches_are_within_claimed_distance() {
    let c = seed_catalog();
    let ix = build_index(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let entries: Vec<&Entry> = c.iter().filter(|e| e.terms.len() >= 6).collect();
    for _ in 0..60 {
        let e = entries[rng.random_range(0..entries.len())];
        let q = corrupt_digit(&mut rng, &e.terms.terms[..6]);
        let qtext = canonical_match_text(&q);
        for max in [1u8, 2] {
            let found = fuzzy_matches_with(&ix, &TermList::new(1, q.clone()), max, Mode::Sequential).unwrap();
            for m in &found {
                let stored = ix.terms_of(m.id).unwrap();
                let window = canonical_match_text(&stored[m.start_position..m.start_position + q.len()]);
                let d = comma_frozen_distance(&qtext, &window).unwrap();
                assert_eq!(d, m.edit_count as usize, "{qtext} vs {window}");
                assert!(d >= 1 && d <= max as usize);
                assert!(plain_levenshtein(&qtext, &window) <= d);
            }
            assert!(found.iter().any(|m| m.id == e.id), "{} lost for {qtext}", e.id);
        }
    }
}

#[test]
fn fuzzy_scan_is_exhaustive_for_one_edit() {
    let c = seed_catalog();
    let ix = build_index(&c);
    let q: Vec<BigInt> = [1, 1, 3, 11, 46].map(BigInt::from).to_vec();
    let qtext = canonical_match_text(&q);
    let found = fuzzy_matches_with(&ix, &TermList::new(1, q.clone()), 1, Mode::Parallel).unwrap();
    for (id, stored) in ix.entries() {
        let hit = stored.windows(q.len()).any(|w| {
            comma_frozen_distance(&qtext, &canonical_match_text(w)) == Some(1)
        });
        assert_eq!(hit, found.iter().any(|m| m.id == id), "{id}");
    }
    assert_eq!(found[0].id, "A001003".parse::<ANumber>().unwrap());
    let nines: Vec<BigInt> = vec![BigInt::from(9); 5];
    assert!(fuzzy_matches_with(&ix, &TermList::new(1, nines), 1, Mode::Parallel).unwrap().is_empty());
}

#[test]
fn reports_do_not_depend_on_mode() {
    let ix = build_index(&seed_catalog());
    let queries: [&[i64]; 4] = [
        &[1, 1, 3, 11, 46, 197],
        &[1, 2, 4, 8, 16, 32],
        &[1, 3, 6, 10, 15, 21, 28],
        &[5, 7, 11, 13, 17, 19, 23],
    ];
    for q in queries {
        let t = TermList::from_i64s(1, q);
        let seq = SeekerConfig { mode: Mode::Sequential, ..SeekerConfig::default() };
        let par = SeekerConfig { mode: Mode::Parallel, ..SeekerConfig::default() };
        assert_eq!(identify(&ix, &t, &seq).unwrap(), identify(&ix, &t, &par).unwrap());
    }
}

#[test]
fn white_noise_is_unexplained() {
    let ix = build_index(&seed_catalog());
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..5 {
        let v: Vec<i64> = (0..10).map(|_| rng.random_range(100_000..1_000_000)).collect();
        let r = identify(&ix, &TermList::from_i64s(1, &v), &SeekerConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Unexplained, "{v:?}");
    }
}

#[test]
fn seeker_examples_on_seed_catalog() {
    let c = seed_catalog();
    let ix = build_index(&c);
    let r = identify(&ix, &TermList::from_i64s(1, &[1, 1, 3, 11, 45]), &SeekerConfig::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Identified);
    assert_eq!(r.direct[0].id, "A001003".parse::<ANumber>().unwrap());

    let r = identify(&ix, &TermList::from_i64s(1, &[1, 2, 4, 8, 16, 32]), &SeekerConfig::default()).unwrap();
    assert!(r
        .via_transforms
        .iter()
        .any(|t| t.transform == "inverse_binomial" && t.matches[0].id == "A000012".parse::<ANumber>().unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enlarging_the_catalog_keeps_matches(
        base in prop::collection::vec(prop::collection::vec(0i64..30, 6..12), 1..6),
        extra in prop::collection::vec(prop::collection::vec(0i64..30, 6..12), 1..4),
        pick in 0usize..6,
        bump in 0usize..5,
    ) {
        let build = |rows: &[Vec<i64>]| {
            let mut c = Catalog::new();
            for (i, r) in rows.iter().enumerate() {
                let id = ANumber::new(i as u32 + 1).unwrap();
                c.insert(Entry::new(id, "x", TermList::from_i64s(0, r))).unwrap();
            }
            c
        };
        let small = build(&base);
        let mut all = base.clone();
        all.extend(extra);
        let large = build(&all);
        let src = &base[pick % base.len()];
        let mut q = src[..5].to_vec();
        let exact = TermList::from_i64s(1, &q);
        q[bump] += 1;
        let fuzzy_q = TermList::from_i64s(1, &q);
        let (ix_s, ix_l) = (build_index(&small), build_index(&large));
        let d_s = find_matches(&ix_s, &Query::new(exact.terms.clone())).unwrap();
        let d_l = find_matches(&ix_l, &Query::new(exact.terms.clone())).unwrap();
        for m in &d_s {
            prop_assert!(d_l.iter().any(|x| x.id == m.id));
        }
        let f_s = fuzzy_matches_with(&ix_s, &fuzzy_q, 2, Mode::Sequential).unwrap();
        let f_l = fuzzy_matches_with(&ix_l, &fuzzy_q, 2, Mode::Sequential).unwrap();
        for m in &f_s {
            prop_assert!(f_l.iter().any(|x| x.id == m.id));
        }
    }
}
