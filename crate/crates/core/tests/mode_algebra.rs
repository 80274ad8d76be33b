use proptest::prelude::*;
use walg_core::algebra::presets::{single_w, triplet_p2, SingleWConstants, TripletConstants};
use walg_core::algebra::{canonical_words, word_weight, AlgebraSpec, Engine, FieldExpr, Mode, Schedule, State, Word};
use walg_core::scalar::{binom_int, int, rat, Poly};

fn virasoro() -> Engine {
    Engine::new(AlgebraSpec::virasoro(Poly::var("c")))
}

fn c() -> Poly {
    Poly::var("c")
}

#[test]
fn virasoro_oracle() {
    let e = virasoro();
    let t = e.spec().lookup("T").unwrap();
    for m in -6..=6 {
        for n in -6..=6 {
            let br = e.bracket(Mode::new(t, m), Mode::new(t, n)).unwrap();
            let central = if m + n == 0 { c().scale(&rat(m * (m * m - 1), 12)) } else { Poly::zero() };
            assert_eq!(br.central, central, "m={m} n={n}");
            let want = int(m - n);
            match br.modes.get(&Mode::new(t, m + n)) {
                Some(coeff) => assert_eq!(coeff, &Poly::constant(want)),
                None => assert!(m == n),
            }
            assert!(br.modes.len() <= 1);
        }
    }
}

#[test]
fn confluence_on_virasoro_words() {
    let e = virasoro();
    let t = e.spec().lookup("T").unwrap();
    let mut words: Vec<Vec<Mode>> = Vec::new();
    let idx: Vec<i64> = (-6..=3).collect();
    for &a in &idx {
        words.push(vec![Mode::new(t, a)]);
        for &b in &idx {
            words.push(vec![Mode::new(t, a), Mode::new(t, b)]);
            for &d in &idx {
                words.push(vec![Mode::new(t, a), Mode::new(t, b), Mode::new(t, d)]);
            }
        }
    }
    for weight in 0..=8 {
        for w in canonical_words(e.spec(), weight) {
            let mut rev: Vec<Mode> = w.to_vec();
            rev.reverse();
            words.push(rev);
        }
    }
    let mut checked = 0;
    for w in words.iter().filter(|w| (0..=10).contains(&word_weight(w))) {
        let fold = e.normal_order_with(w, Schedule::Fold).unwrap();
        assert_eq!(fold, e.normal_order_with(w, Schedule::LeftmostInversion).unwrap(), "{w:?}");
        assert_eq!(fold, e.normal_order_with(w, Schedule::RightmostInversion).unwrap(), "{w:?}");
        checked += 1;
    }
    assert!(checked > 300);
}

/// Vertex-operator modes in the math convention for a homogeneous state.
fn math_mode(e: &Engine, state: &State, j: i64, target: &State) -> State {
    let Some(h) = state.weight().unwrap() else {
        return State::zero();
    };
    let field = e.field_of_state(state).unwrap();
    e.field_mode_apply(&field, j - h + 1, target).unwrap()
}

fn omega_mode(e: &Engine, j: i64, s: &State) -> State {
    let t = e.spec().lookup("T").unwrap();
    e.apply_mode(Mode::new(t, j - 1), s).unwrap()
}

fn virasoro_states(e: &Engine, max_weight: i64) -> Vec<State> {
    (0..=max_weight)
        .flat_map(|w| canonical_words(e.spec(), w))
        .map(|w| State::word(w, Poly::one()))
        .collect()
}

#[test]
fn state_field_map_recovers_states() {
    let e = virasoro();
    for s in virasoro_states(&e, 8) {
        let h = s.weight().unwrap().unwrap();
        let f = e.field_of_state(&s).unwrap();
        assert_eq!(e.field_mode_apply(&f, -h, &State::vacuum()).unwrap(), s);
    }
}

#[test]
fn commutator_identity_for_omega() {
    let e = virasoro();
    let omega = State::from_modes(&[e.mode("T", -2).unwrap()]);
    for w in virasoro_states(&e, 6) {
        for m in -3..=3i64 {
            for n in -3..=3i64 {
                let lhs = omega_mode(&e, m, &math_mode(&e, &omega, -n, &w));
                let mut rhs = math_mode(&e, &omega, -n, &omega_mode(&e, m, &w));
                for i in 0..=3u32 {
                    let vu = omega_mode(&e, i as i64, &omega);
                    let term = math_mode(&e, &vu, m - n - i as i64, &w);
                    rhs.add_scaled_rat(&term, &binom_int(m, i));
                }
                assert_eq!(lhs, rhs, "m={m} n={n}");
            }
        }
    }
}

#[test]
fn iterate_identity_for_omega() {
    let e = virasoro();
    let omega = State::from_modes(&[e.mode("T", -2).unwrap()]);
    for w in virasoro_states(&e, 6) {
        let wt = w.weight().unwrap().unwrap();
        for m in -3..=3i64 {
            let umv = omega_mode(&e, m, &omega);
            for n in -3..=3i64 {
                let lhs = math_mode(&e, &umv, n, &w);
                let mut rhs = State::zero();
                for i in 0..=(wt + 4 - n).max(0) {
                    let b = binom_int(m, i as u32);
                    let sign = if i % 2 == 0 { int(1) } else { int(-1) };
                    let inner = omega_mode(&e, n + i, &w);
                    rhs.add_scaled_rat(&omega_mode(&e, m - i, &inner), &(sign * &b));
                    let sign2 = if (i + m).rem_euclid(2) == 0 { int(1) } else { int(-1) };
                    let inner = omega_mode(&e, i, &w);
                    rhs.add_scaled_rat(&omega_mode(&e, m + n - i, &inner), &(-(sign2 * b)));
                }
                assert_eq!(lhs, rhs, "m={m} n={n} w={}", w.display(e.spec()));
            }
        }
    }
}

#[test]
fn triplet_bracket_antisymmetry() {
    let e = Engine::new(triplet_p2(&TripletConstants::symbolic()));
    let gens: Vec<_> = e.spec().generators().collect();
    for &a in &gens {
        for &b in &gens {
            for m in -6..=6 {
                for n in -6..=6 {
                    let x = e.bracket(Mode::new(a, m), Mode::new(b, n)).unwrap();
                    let y = e.bracket(Mode::new(b, n), Mode::new(a, m)).unwrap();
                    assert!((&x + &y).is_zero(), "{a:?} {b:?} {m} {n}");
                }
            }
        }
    }
}

#[test]
fn quasi_primary_rule_for_generators() {
    let e = Engine::new(triplet_p2(&TripletConstants::symbolic()));
    let t = e.spec().lookup("T").unwrap();
    for g in e.spec().generators() {
        let h = e.spec().weight(g);
        for m in -1..=1 {
            for n in -6..=6 {
                let br = e.bracket(Mode::new(t, m), Mode::new(g, n)).unwrap();
                let want = Poly::constant(int((h - 1) * m - n));
                assert_eq!(br.modes.get(&Mode::new(g, m + n)).cloned().unwrap_or_default(), want);
            }
        }
    }
    let w = e.spec().lookup("W1").unwrap();
    let br = e.bracket(Mode::new(t, 2), Mode::new(w, -3)).unwrap();
    assert_eq!(br.modes.get(&Mode::new(w, -1)), Some(&Poly::from_int(7)));
}

#[test]
fn w_modes_annihilate_vacuum() {
    let e = Engine::new(triplet_p2(&TripletConstants::symbolic()));
    let w = e.mode("W2", -2).unwrap();
    assert!(e.apply_mode(w, &State::vacuum()).unwrap().is_zero());
}

fn lambda_engine() -> (Engine, FieldExpr) {
    let mut spec = AlgebraSpec::virasoro(c());
    let t = spec.lookup("T").unwrap();
    let lam = spec.add_composite("Lambda", FieldExpr::qp_nop(t, t, 0)).unwrap();
    let e = Engine::new(spec);
    (e, FieldExpr::Field(lam))
}

#[test]
fn lambda_matches_closed_form() {
    let (e, lam) = lambda_engine();
    let t = e.spec().lookup("T").unwrap();
    let got = e.field_mode_apply(&lam, -4, &State::vacuum()).unwrap();
    let mut want = State::from_modes(&[Mode::new(t, -2), Mode::new(t, -2)]);
    want.add_term([Mode::new(t, -4)].into_iter().collect(), Poly::constant(rat(-3, 5)));
    assert_eq!(got, want);
    let plain = FieldExpr::nprod(2, FieldExpr::Field(t), FieldExpr::Field(t));
    let l1 = Mode::new(t, 1);
    let s = e.field_mode_apply(&plain, -4, &State::vacuum()).unwrap();
    assert!(!e.apply_mode(l1, &s).unwrap().is_zero());
    assert!(e.apply_mode(l1, &got).unwrap().is_zero());
}

#[test]
fn lambda_transforms_as_quasi_primary() {
    let (e, lam) = lambda_engine();
    let t = e.spec().lookup("T").unwrap();
    for w in virasoro_states(&e, 5) {
        for m in -1..=1i64 {
            for n in -6..=2i64 {
                let lm = Mode::new(t, m);
                let a = e.apply_mode(lm, &e.field_mode_apply(&lam, n, &w).unwrap()).unwrap();
                let b = e.field_mode_apply(&lam, n, &e.apply_mode(lm, &w).unwrap()).unwrap();
                let want = e.field_mode_apply(&lam, m + n, &w).unwrap().scale(&Poly::constant(int(3 * m - n)));
                assert_eq!(&a - &b, want, "m={m} n={n}");
            }
        }
    }
}

#[test]
fn qp_product_with_derivative_vanishes_in_virasoro() {
    let e = virasoro();
    let t = e.spec().lookup("T").unwrap();
    let f = FieldExpr::qp_nop(t, t, 1);
    assert!(e.field_mode_apply(&f, -5, &State::vacuum()).unwrap().is_zero());
}

#[test]
fn qp_products_with_primary_are_quasi_primary() {
    let e = Engine::new(single_w(3, &SingleWConstants::symbolic()));
    let t = e.spec().lookup("T").unwrap();
    let w = e.spec().lookup("W").unwrap();
    let l1 = Mode::new(t, 1);
    for (left, right, n) in [(t, w, 0), (w, t, 0), (w, w, 0), (w, w, 1), (t, w, 1), (w, w, 2)] {
        let f = FieldExpr::qp_nop(left, right, n);
        let h = f.weight(e.spec()).unwrap();
        let s = e.field_mode_apply(&f, -h, &State::vacuum()).unwrap();
        // Identical arguments with an odd derivative count give zero.
        assert_eq!(s.is_zero(), left == right && n % 2 == 1);
        assert!(e.apply_mode(l1, &s).unwrap().is_zero(), "N({left:?}, d^{n} {right:?})");
    }
    // W(-3) L(-2) - 10/7 W(-5) in both argument orders.
    let a = e.field_mode_apply(&FieldExpr::qp_nop(t, w, 0), -5, &State::vacuum()).unwrap();
    let b = e.field_mode_apply(&FieldExpr::qp_nop(w, t, 0), -5, &State::vacuum()).unwrap();
    assert_eq!(a, b);
    let mut want = State::from_modes(&[Mode::new(w, -3), Mode::new(t, -2)]);
    want.add_term([Mode::new(w, -5)].into_iter().collect(), Poly::constant(rat(-10, 7)));
    assert_eq!(a, want);
}

#[test]
fn iterated_product_normalization() {
    for delta in [3, 5] {
        let e = Engine::new(single_w(delta, &SingleWConstants::symbolic()));
        let t = e.spec().lookup("T").unwrap();
        let top = e.spec().lookup(&format!("N{}", delta - 1)).unwrap();
        let s = e
            .field_mode_apply(&FieldExpr::Field(top), -(2 * delta - 2), &State::vacuum())
            .unwrap()
            .project_min_length((delta - 1) as usize);
        let word: Word = std::iter::repeat(Mode::new(t, -2)).take((delta - 1) as usize).collect();
        assert_eq!(s, State::word(word, Poly::one()), "delta={delta}");
    }
}

#[test]
fn ww_product_beta_coefficient_at_three() {
    let e = Engine::new(single_w(3, &SingleWConstants::symbolic()));
    let t = e.spec().lookup("T").unwrap();
    let w = e.spec().lookup("W").unwrap();
    let s = e
        .field_mode_apply(&FieldExpr::qp_nop(w, w, 0), -6, &State::vacuum())
        .unwrap()
        .project_min_length(2);
    assert_eq!(s.coeff(&[Mode::new(t, -4), Mode::new(t, -2)]), Poly::var("C").scale(&rat(-5, 9)));
}

fn triplet_word() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..4, 0i64..4), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_mode_respects_grading(raw in triplet_word(), g in 0usize..4, n in -6i64..4) {
        let e = Engine::new(triplet_p2(&TripletConstants::symbolic()));
        let gens: Vec<_> = e.spec().generators().collect();
        let mut word: Vec<Mode> = raw
            .iter()
            .map(|(f, k)| Mode::new(gens[*f], -e.spec().weight(gens[*f]) - k))
            .collect();
        word.sort();
        let s = State::from_modes(&word);
        let out = e.apply_mode(Mode::new(gens[g], n), &s).unwrap();
        for (w, _) in out.terms() {
            prop_assert_eq!(word_weight(w), word_weight(&word) - n);
            prop_assert!(walg_core::algebra::is_canonical(w, e.spec()));
        }
    }
}

#[test]
fn qp_products_with_derivatives_sweep() {
    for (a, b, hk) in [(2, 3, 3), (3, 2, 3), (3, 3, 4), (4, 3, 3), (2, 4, 3), (5, 3, 4), (4, 4, 6)] {
        let mut spec = AlgebraSpec::virasoro(c());
        let t = spec.lookup("T").unwrap();
        let u = spec.add_generator("U", a).unwrap();
        let v = if a == b { u } else { spec.add_generator("V", b).unwrap() };
        let k = [u, v].into_iter().find(|g| spec.weight(*g) == hk);
        let k = k.unwrap_or_else(|| spec.add_generator("K", hk).unwrap());
        for g in [u, v, k] {
            let _ = spec.add_constant(t, g, g, Poly::from_int(spec.weight(g)));
        }
        if a == b {
            spec.set_d(u, u, Poly::zero());
        }
        spec.add_constant(v, u, k, Poly::var("x")).unwrap();
        if a != b {
            let sign = if (a + b - hk) % 2 == 0 { 1 } else { -1 };
            spec.add_constant(u, v, k, Poly::var("x").scale(&int(sign))).unwrap();
        }
        let e = Engine::new(spec);
        for n in 0..4 {
            let f = e.qp_nop(u, v, n).unwrap();
            let s = e.field_mode_apply(&f, -(a + b + n as i64), &State::vacuum()).unwrap();
            let l1 = e.apply_mode(Mode::new(t, 1), &s).unwrap();
            assert!(l1.is_zero(), "a={a} b={b} hk={hk} n={n}: {}", l1.display(e.spec()));
        }
    }
}
