//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (run with `--nocapture` to see them). Every check is
//! exact; there are no tolerances to tune.

use std::time::Instant;

use klr_core::cartan::{build_cartan, small_types, CartanSpec, Family, RootVec};
use klr_core::convex::{verify_convexity, ConvexOrder, Weight};
use klr_core::cuspidal::{
    check_extremal_law, closed_form_check_up, designated_word_down, designated_word_up,
    imaginary_checks, verify_cuspidal, ClosedForm, CuspidalTable, Provenance,
};
use klr_core::laurent::{qfact, LaurentInt};
use klr_core::partitions::{kostant_count, root_partitions};
use klr_core::relations::{verify_relations, ActionMatrices};
use klr_core::shuffle::{
    align_exp_words, expand_exp_word, induced_multiplicity_exponent, shuffle, shuffle_words,
    shuffle_words_enumerate, CharExpr, ExpWord, Word,
};
use klr_core::weyl::{homogeneous_module, minuscule_component, weight_graph_components};

use rand::{Rng as _, SeedableRng as _};
use rand_chacha::ChaCha8Rng;

fn report(criterion: &str, start: Instant, pass: bool) {
    println!(
        "criterion {criterion}: {} ({:.2}s)",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    assert!(pass, "criterion {criterion} failed");
}

fn weights_of_height(spec: &CartanSpec, h: i64) -> Vec<RootVec> {
    let n = spec.num_vertices();
    let mut out = Vec::new();
    fn go(n: usize, idx: usize, left: i64, acc: &mut Vec<i64>, out: &mut Vec<RootVec>) {
        if idx == n {
            if left == 0 {
                out.push(RootVec(acc.clone()));
            }
            return;
        }
        for c in 0..=left {
            acc.push(c);
            go(n, idx + 1, left - c, acc, out);
            acc.pop();
        }
    }
    go(n, 0, h, &mut Vec::new(), &mut out);
    out
}

/// Example-pinned minuscule characters in affine type A. The middle
/// color follows the example's product formula, whose expansion is the
/// word sum over every insertion point of the top letter (the printed
/// truncation of that sum drops the last insertion and is not closed
/// under admissible transpositions, so it cannot be a homogeneous
/// character; see the repo notes).
#[test]
fn criterion_01_minuscule_characters() {
    let start = Instant::now();
    for l in [2usize, 3, 4] {
        let spec = build_cartan(Family::A, l).unwrap();
        let m1 = minuscule_component(&spec, 1).unwrap();
        let mut word1: Vec<u8> = vec![0];
        word1.extend((1..=l as u8).rev());
        assert_eq!(
            m1.char_minuscule,
            CharExpr::single(&spec, Word(word1)),
            "A{l}~ color 1"
        );
        let ml = minuscule_component(&spec, l as u8).unwrap();
        let wordl: Vec<u8> = (0..=l as u8).collect();
        assert_eq!(
            ml.char_minuscule,
            CharExpr::single(&spec, Word(wordl)),
            "A{l}~ color l"
        );
    }
    for l in [3usize, 4, 5] {
        let spec = build_cartan(Family::A, l).unwrap();
        let m = minuscule_component(&spec, (l - 1) as u8).unwrap();
        let mut expected_words: Vec<Word> = Vec::new();
        for r in 0..=(l - 2) as u8 {
            let mut w: Vec<u8> = vec![0];
            w.extend(1..=r);
            w.push(l as u8);
            w.extend(r + 1..=(l - 1) as u8);
            expected_words.push(Word(w));
        }
        assert_eq!(expected_words.len(), l - 1);
        let expected = CharExpr::from_terms(
            &spec,
            expected_words.into_iter().map(|w| (w, LaurentInt::one())),
        )
        .unwrap();
        assert_eq!(m.char_minuscule, expected, "A{l}~ color l-1");
    }
    report("01 minuscule-characters", start, true);
}

#[test]
fn criterion_02_cartan_identities() {
    let start = Instant::now();
    for spec in small_types() {
        assert_eq!(spec.mark(0), 1, "a_0 in {spec}");
        assert_eq!(
            spec.delta().sub(&spec.simple_root(0)),
            *spec.theta(),
            "delta - alpha_0 in {spec}"
        );
    }
    report("02 cartan-identities", start, true);
}

#[test]
fn criterion_03_convex_order_suite() {
    let start = Instant::now();
    for (type_str, h) in [("A1~", 20i64), ("A2~", 20), ("A3~", 12), ("D4~", 12)] {
        let spec: CartanSpec = type_str.parse().unwrap();
        let order = ConvexOrder::build_random(&spec, 42, 2 * h).unwrap();
        let rep = verify_convexity(&order, h).unwrap();
        assert!(
            rep.passed(),
            "{type_str} at height {h}: {:?}",
            rep.failures
        );
        assert!(rep.instances > 0);
    }
    report("03 convex-order-suite", start, true);
}

#[test]
fn criterion_04_kostant_counts() {
    let start = Instant::now();
    for (type_str, h_max) in [("A2~", 10i64), ("A3~", 8)] {
        let spec: CartanSpec = type_str.parse().unwrap();
        let order = ConvexOrder::build_random(&spec, 7, h_max).unwrap();
        for h in 1..=h_max {
            for alpha in weights_of_height(&spec, h) {
                let enumerated = root_partitions(&order, &alpha).unwrap().len() as u128;
                let oracle = kostant_count(&spec, &alpha);
                assert_eq!(enumerated, oracle, "{type_str} alpha {alpha}");
            }
        }
    }
    report("04 kostant-counts", start, true);
}

#[test]
fn criterion_05_shuffle_oracle() {
    let start = Instant::now();
    let spec = build_cartan(Family::A, 2).unwrap();
    let letters = [0u8, 1, 2];
    // all words of length <= 5 over a three-letter alphabet
    let mut words: Vec<Word> = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..5 {
        let mut next = Vec::new();
        for w in &layer {
            for &c in &letters {
                let mut v = w.0.clone();
                v.push(c);
                next.push(Word(v));
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    let check_pair = |u: &Word, v: &Word| {
        shuffle_words(&spec, u, v) == shuffle_words_enumerate(&spec, u, v)
    };
    #[cfg(feature = "parallel")]
    let exhaustive_ok = {
        use rayon::prelude::*;
        words
            .par_iter()
            .all(|u| words.iter().all(|v| check_pair(u, v)))
    };
    #[cfg(not(feature = "parallel"))]
    let exhaustive_ok = words.iter().all(|u| words.iter().all(|v| check_pair(u, v)));
    assert!(exhaustive_ok, "exhaustive length-5 sweep");

    // 200 random longer pairs
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let mk = |rng: &mut ChaCha8Rng| {
            let len = rng.gen_range(6..=8);
            Word((0..len).map(|_| rng.gen_range(0..3u8)).collect())
        };
        let u = mk(&mut rng);
        let v = mk(&mut rng);
        assert!(check_pair(&u, &v), "random pair {u} {v}");
    }

    // bar-twist identity on 100 random homogeneous pairs
    for _ in 0..100 {
        let mk = |rng: &mut ChaCha8Rng| {
            let len = rng.gen_range(1..=4);
            let word = Word((0..len).map(|_| rng.gen_range(0..3u8)).collect());
            let coeff = &LaurentInt::monomial(rng.gen_range(-3..=3), rng.gen_range(1..=4))
                + &LaurentInt::monomial(rng.gen_range(-3..=3), rng.gen_range(-2..=2));
            CharExpr::with_coeff(&spec, word, coeff)
        };
        let x = mk(&mut rng);
        let y = mk(&mut rng);
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let d = spec.pairing(x.weight().unwrap(), y.weight().unwrap());
        let lhs = shuffle(&spec, &x, &y).bar_words();
        let rhs = shuffle(&spec, &y.bar_words(), &x.bar_words()).shift(d);
        assert_eq!(lhs, rhs, "bar twist");
    }
    report("05 shuffle-oracle", start, true);
}

#[test]
fn criterion_06_rank_one_pipeline() {
    let start = Instant::now();
    let spec = build_cartan(Family::A, 1).unwrap();
    let order = ConvexOrder::build(&spec, &[Weight::new(1, 1).unwrap()], 24).unwrap();
    let mut table = CuspidalTable::new(order.clone());

    // ch L_{delta + alpha_1} = (q + q^{-1}) (0,1,1) via the commutator
    let rho_up = spec.delta().add(&spec.simple_root(1));
    let ch_up = table.cuspidal_char(&rho_up).unwrap();
    let expect = CharExpr::with_coeff(
        &spec,
        Word(vec![0, 1, 1]),
        &LaurentInt::q_power(1) + &LaurentInt::q_power(-1),
    );
    assert_eq!(ch_up, expect);
    assert_eq!(table.provenance(&rho_up), Some(Provenance::MinusculeCommutatorUp));
    assert_eq!(
        closed_form_check_up(&mut table, 1, 1).unwrap(),
        ClosedForm::Match
    );
    // the designated word 0^1 1^2 is extremal
    let s_ext: ExpWord = table.minuscule_char(1).unwrap().extremal_words()[0].clone();
    assert!(ch_up.extremal_words().contains(&designated_word_up(&s_ext, 1)));

    // ch L_{2delta - alpha_1} via the downward commutator
    let rho_down = spec.delta().scale(2).sub(&spec.simple_root(1));
    let ch_down = table.cuspidal_char(&rho_down).unwrap();
    assert_eq!(
        table.provenance(&rho_down),
        Some(Provenance::MinusculeCommutatorDown)
    );
    assert!(verify_cuspidal(&order, &rho_down, &ch_down).unwrap().is_empty());
    check_extremal_law(&spec, &ch_down).unwrap();
    assert!(ch_down.extremal_words().contains(&designated_word_down(&s_ext, 2)));
    report("06 rank-one-pipeline", start, true);
}

#[test]
fn criterion_07_cuspidal_sweep() {
    let start = Instant::now();
    let spec = build_cartan(Family::A, 2).unwrap();
    let order = ConvexOrder::build(
        &spec,
        &[Weight::new(5, 1).unwrap(), Weight::new(3, 1).unwrap()],
        24,
    )
    .unwrap();
    let mut table = CuspidalTable::new(order);
    let report_sweep = table.sweep(8, true).unwrap();
    assert!(report_sweep.passed(), "{:?}", report_sweep.failures);
    assert!(report_sweep.computed.len() >= 14);
    for (rho, ch, _) in table.entries() {
        assert!(ch.is_effective(), "{rho}");
        assert!(ch.is_bar_invariant(), "{rho}");
        assert_eq!(ch.weight(), Some(rho));
        // first-letter law for the delta - beta family
        let delta = table.spec().delta();
        if rho.height() < delta.height() && rho.0[0] == 1 {
            for (w, _) in ch.terms() {
                assert_eq!(w.0[0], 0, "first letter of {rho}");
            }
        }
    }
    report("07 cuspidal-sweep", start, true);
}

fn mutations_all_caught(spec: &CartanSpec, action: &ActionMatrices) -> bool {
    let d = action.word_length();
    let n = action.dim();
    for r in 0..d.saturating_sub(1) {
        for a in 0..n {
            for b in 0..n {
                let mut mutated = action.clone();
                let old = mutated.psi[r].get(a, b).clone();
                mutated.psi[r].set(a, b, old + 1);
                if verify_relations(spec, &mutated).passed() {
                    return false;
                }
            }
        }
    }
    if d > 0 && n > 0 {
        let mut mutated = action.clone();
        let old = mutated.y[0].get(0, 0).clone();
        mutated.y[0].set(0, 0, old + 1);
        if verify_relations(spec, &mutated).passed() {
            return false;
        }
    }
    true
}

#[test]
fn criterion_08_homogeneous_relations() {
    let start = Instant::now();
    for type_str in ["A2~", "A3~"] {
        let spec: CartanSpec = type_str.parse().unwrap();
        let mut modules = 0usize;
        for h in 1..=6i64 {
            let weights = weights_of_height(&spec, h);
            #[cfg(feature = "parallel")]
            let failures: Vec<String> = {
                use rayon::prelude::*;
                weights
                    .par_iter()
                    .flat_map_iter(|alpha| check_weight_relations(&spec, alpha, h <= 4))
                    .collect()
            };
            #[cfg(not(feature = "parallel"))]
            let failures: Vec<String> = weights
                .iter()
                .flat_map(|alpha| check_weight_relations(&spec, alpha, h <= 4))
                .collect();
            assert!(failures.is_empty(), "{type_str} h={h}: {failures:?}");
            modules += weights.len();
        }
        assert!(modules > 0);
    }
    report("08 homogeneous-relations", start, true);
}

fn check_weight_relations(spec: &CartanSpec, alpha: &RootVec, mutate: bool) -> Vec<String> {
    let mut failures = Vec::new();
    for comp in weight_graph_components(spec, alpha)
        .unwrap()
        .iter()
        .filter(|c| c.homogeneous)
    {
        let action = homogeneous_module(spec, comp).unwrap();
        let rep = verify_relations(spec, &action);
        if !rep.passed() {
            failures.push(format!(
                "component {} of {alpha}: {:?}",
                comp.representative(),
                rep.failures
            ));
        }
        if mutate && !mutations_all_caught(spec, &action) {
            failures.push(format!(
                "a mutation of component {} of {alpha} went unnoticed",
                comp.representative()
            ));
        }
    }
    failures
}

#[test]
fn criterion_09_imaginary_color_checks() {
    let start = Instant::now();
    for type_str in ["A2~", "A3~"] {
        let spec: CartanSpec = type_str.parse().unwrap();
        let order = ConvexOrder::build_random(&spec, 11, 20).unwrap();
        let mut table = CuspidalTable::new(order);
        for i in 1..=spec.rank() as u8 {
            let rep = imaginary_checks(&mut table, i, 2).unwrap();
            assert!(rep.passed(), "{type_str} color {i}: {:?}", rep.failures);
            assert!(rep.checked_splits > 0, "{type_str} color {i} checked nothing");
        }
    }
    report("09 imaginary-color-checks", start, true);
}

#[test]
fn criterion_10_product_multiplicity_law() {
    let start = Instant::now();
    let spec = build_cartan(Family::A, 2).unwrap();
    let order = ConvexOrder::build(
        &spec,
        &[Weight::new(5, 1).unwrap(), Weight::new(3, 1).unwrap()],
        24,
    )
    .unwrap();
    let mut table = CuspidalTable::new(order);

    // pool of computed irreducible characters with their extremal words
    let mut pool: Vec<(CharExpr, ExpWord)> = Vec::new();
    table.sweep(5, false).unwrap();
    let entries: Vec<CharExpr> = table.entries().map(|(_, c, _)| c.clone()).collect();
    for ch in entries {
        let ext = ch.extremal_words();
        pool.push((ch, ext[0].clone()));
    }
    for i in 1..=2u8 {
        let ch = table.minuscule_char(i).unwrap();
        let ext = ch.extremal_words();
        pool.push((ch, ext[0].clone()));
    }
    for i in 0..3u8 {
        for n in 2..=3i64 {
            let ch = klr_core::shuffle::nil_hecke_char(&spec, i, n);
            pool.push((ch, vec![(i, n)]));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut trial = 0;
    let mut attempts = 0;
    while trial < 50 {
        attempts += 1;
        assert!(attempts < 5000, "could not sample 50 admissible products");
        let k = if trial % 3 == 0 { 3 } else { 2 };
        let factors: Vec<&(CharExpr, ExpWord)> =
            (0..k).map(|_| &pool[rng.gen_range(0..pool.len())]).collect();
        let (backbone, exps) = align_exp_words(
            &factors.iter().map(|(_, e)| e.clone()).collect::<Vec<_>>(),
        );
        // the shared backbone must peel every factor consistently:
        // at each stage the factor's longest tail in the current letter
        // has to be exactly its assigned exponent
        if !jointly_extremal(&backbone, &exps, &factors) {
            continue;
        }
        trial += 1;
        let m = induced_multiplicity_exponent(&spec, &backbone, &exps);
        // expected coefficient: q^m times the quantum factorials of the
        // stacked exponents
        let mut expected = LaurentInt::q_power(m);
        let mut induced: ExpWord = Vec::new();
        for (pos, &letter) in backbone.iter().enumerate() {
            let a: i64 = exps.iter().map(|row| row[pos]).sum();
            if a > 0 {
                expected = &expected * &qfact(a, spec.sym(letter as usize));
                induced.push((letter, a));
            }
        }
        let mut product = factors[0].0.clone();
        for f in &factors[1..] {
            product = shuffle(&spec, &product, &f.0);
        }
        let flat = expand_exp_word(&induced);
        assert_eq!(
            product.coeff(&flat),
            expected,
            "trial {trial}: coefficient at {flat}"
        );
        assert!(
            product.extremal_words().contains(&induced),
            "trial {trial}: induced word not extremal"
        );
    }
    report("10 product-multiplicity-law", start, true);
}

fn jointly_extremal(
    backbone: &[u8],
    exps: &[Vec<i64>],
    factors: &[&(CharExpr, ExpWord)],
) -> bool {
    let mut states: Vec<CharExpr> = factors.iter().map(|(c, _)| c.clone()).collect();
    for pos in (0..backbone.len()).rev() {
        let letter = backbone[pos];
        for (r, st) in states.iter_mut().enumerate() {
            let eps = st.epsilon(letter) as i64;
            if eps != exps[r][pos] {
                return false;
            }
            *st = st.theta_star_power(letter, eps as usize);
            if st.is_zero() {
                return false;
            }
        }
    }
    true
}
