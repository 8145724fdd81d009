mod common;

use common::{envelope_grid_oracle, random_index_set};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stablelike_core::fractal::{
    box_dimension, exceptional_sets, exceptional_value, g_spectrum, general_spectrum_value,
    image_dim_bounds, index_range, local_dim, lower_spectrum, spectrum_envelope,
    stream_subordinator_balls, typical_behavior_report, upsilon_profile, DimValue,
    ExceptionalBranch, ExceptionalCase, IndexSet, LocalDimWindow, Mode, SpectrumCase,
    Variant, Window,
};
use stablelike_core::occupation::OccupationMeasure;
use stablelike_core::ppp::{BlockSampler, PointProcess};
use stablelike_core::process::{
    build_stable_like, build_subordinator, BetaFunction, JumpPath,
};
use stablelike_core::rng::trial_seed;

const NEG: DimValue = DimValue::NegInfinity;

#[test]
fn g_identities() {
    for k in 1..100 {
        let a = k as f64 / 100.0;
        assert_eq!(g_spectrum(a, a, Variant::Closed), DimValue::Finite(a));
        assert_eq!(g_spectrum(a, 2.0 * a, Variant::Closed), DimValue::Finite(0.0));
        assert_eq!(g_spectrum(a, 2.0 * a, Variant::HalfOpen), NEG);
        let mut prev = f64::INFINITY;
        for i in 0..=200 {
            let h = a * (1.0 + i as f64 / 200.0);
            let g = g_spectrum(a, h, Variant::Closed).finite().unwrap();
            assert!(g < prev);
            prev = g;
            if i < 200 {
                assert_eq!(g_spectrum(a, h, Variant::HalfOpen), DimValue::Finite(g));
            }
        }
        assert_eq!(g_spectrum(a, a * 0.999, Variant::HalfOpen), NEG);
        assert_eq!(g_spectrum(a, a * 2.001, Variant::Closed), NEG);
    }
}

#[test]
fn envelope_matches_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1_000 {
        let set = random_index_set(&mut rng);
        let h = 0.25 + 1.25 * rng.random::<f64>();
        for mode in [Mode::Space, Mode::Time] {
            let v = spectrum_envelope(h, &set, mode);
            match (v.value, envelope_grid_oracle(h, &set, mode)) {
                (DimValue::Finite(x), Some(y)) => assert!((x - y).abs() < 1e-3, "{x} vs {y}"),
                (DimValue::NegInfinity, None) => {}
                (x, y) => panic!("h = {h}, {set:?}: {x:?} vs {y:?}"),
            }
        }
    }
}

#[test]
fn envelope_on_an_interval() {
    let set = IndexSet::closed(&[(0.3, 0.5)]).unwrap();
    let v = spectrum_envelope(0.6, &set, Mode::Space);
    assert_eq!(v.alpha_star, Some(0.5));
    assert!((v.value.finite().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(v.case, SpectrumCase::Regular);
    assert_eq!(spectrum_envelope(1.0, &set, Mode::Space).case, SpectrumCase::DoublingBoundary);
    assert_eq!(spectrum_envelope(1.2, &set, Mode::Time).value, NEG);
}

#[test]
fn lower_spectrum_membership() {
    let set = IndexSet::closed(&[(0.2, 0.3), (0.7, 0.8)]).unwrap();
    assert_eq!(lower_spectrum(0.25, &set), DimValue::Finite(0.0));
    assert_eq!(lower_spectrum(0.5, &set), NEG);
}

/// Dense small steps on `[0, 1/6)`, one jump across the β-gap `(0.3, 0.7)`,
/// then dense steps again.
fn gap_path() -> (JumpPath, BetaFunction) {
    let beta = BetaFunction::ramp(0.2, 0.8, 1.0).unwrap();
    let mut jumps = Vec::new();
    let mut t = 0.0;
    for _ in 0..1666 {
        t += 1e-4;
        jumps.push((t, 1e-4));
    }
    t += 1e-4;
    jumps.push((t, 2.0 / 3.0));
    for _ in 0..1000 {
        t += 1e-4;
        jumps.push((t, 1e-4));
    }
    (JumpPath::from_jumps(1.0, &jumps).unwrap(), beta)
}

#[test]
fn index_range_leaves_the_jump_gap_open() {
    let (path, beta) = gap_path();
    let pre = path.values_after()[1665];
    let post = path.values_after()[1666];
    for mode in [Mode::Space, Mode::Time] {
        let w = Window::new(-1.0, 2.0).unwrap();
        let set = index_range(&path, &beta, w, mode, 1e-3).unwrap();
        let s = set.segments();
        assert_eq!(s.len(), 2, "{mode:?}");
        assert_eq!(s[0].lo, 0.2);
        assert!((s[0].hi - beta.eval(pre)).abs() < 1e-12);
        assert!((s[1].lo - beta.eval(post)).abs() < 1e-12);
        assert!(!set.contains(0.5));
        assert_eq!(s[0].hi_closed, mode == Mode::Space);
    }
    assert!((beta.eval(pre) - 0.3).abs() < 1e-4 && (beta.eval(post) - 0.7).abs() < 1e-4);
}

#[test]
fn index_range_matches_dense_sampling() {
    let beta = BetaFunction::ramp(0.1, 0.9, 1.0).unwrap();
    let res = 1e-3;
    for i in 0..10 {
        let pp = PointProcess::sample(1.0, 1e-2, trial_seed(300, i)).unwrap();
        let path = build_stable_like(&pp, &beta);
        let (a, b) = (0.2, 0.8);
        let set = index_range(&path, &beta, Window::new(a, b).unwrap(), Mode::Time, res).unwrap();
        let mut sampled: Vec<f64> = (1..600_000)
            .map(|k| beta.eval(path.eval(a + (b - a) * k as f64 / 600_000.0).unwrap()))
            .collect();
        sampled.dedup();
        // pre-jump levels are reached on the truncated path only, and stay
        // as open segment ends
        let open_ends: Vec<f64> = set
            .segments()
            .iter()
            .filter(|s| !s.hi_closed)
            .map(|s| s.hi)
            .collect();
        let closure = set.closure();
        for &y in &sampled {
            assert!(closure.contains(y), "sampled {y} missing");
            assert!(set.contains(y) || open_ends.contains(&y));
        }
        sampled.sort_by(f64::total_cmp);
        for k in 0..=10_000 {
            let y = k as f64 / 10_000.0;
            if set.contains(y) {
                let j = sampled.partition_point(|&s| s < y);
                let near = [j.checked_sub(1), Some(j)]
                    .into_iter()
                    .flatten()
                    .filter_map(|j| sampled.get(j))
                    .map(|s| (s - y).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(near <= res, "{y} is {near} from every sample");
            }
        }
    }
}

#[test]
fn exceptional_sets_follow_the_index_range() {
    let (path, beta) = gap_path();
    let ex = exceptional_sets(&path, &beta);
    assert_eq!(ex.len(), 1);
    assert_eq!(ex[0].tau, path.jump_times()[1666]);
    assert!(!ex[0].equality);
    assert!((ex[0].e2() - 0.6).abs() < 1e-3);

    let narrow = BetaFunction::ramp(0.5, 0.9, 1.0).unwrap();
    let flat = BetaFunction::constant(0.4).unwrap();
    for i in 0..20 {
        let pp = PointProcess::sample(1.0, 1e-3, trial_seed(310, i)).unwrap();
        assert!(exceptional_sets(&build_stable_like(&pp, &narrow), &narrow).is_empty());
        assert!(exceptional_sets(&build_stable_like(&pp, &flat), &flat).is_empty());
    }
}

fn case(h: f64, b0: f64, b1: f64, inside: (bool, bool), dims: (Option<f64>, Option<f64>)) -> ExceptionalCase {
    ExceptionalCase {
        h,
        beta_before: b0,
        beta_after: b1,
        before_in_window: inside.0,
        after_in_window: inside.1,
        dim_before: dims.0,
        dim_after: dims.1,
    }
}

#[test]
fn exceptional_case_table() {
    use ExceptionalBranch::*;
    let zero = DimValue::Finite(0.0);
    let both = (true, true);
    #[rustfmt::skip]
    let table = [
        // h = β(ℳ_τ) > 2β(ℳ_{τ−})
        (case(0.7, 0.3, 0.7, both, (None, Some(0.7))), AfterStrict, zero),
        (case(0.7, 0.3, 0.7, both, (None, Some(0.9))), AfterStrict, NEG),
        (case(0.7, 0.3, 0.7, (true, false), (None, None)), AfterStrict, NEG),
        // h = 2β(ℳ_{τ−}) < β(ℳ_τ)
        (case(0.6, 0.3, 0.7, both, (Some(0.6), None)), BeforeStrict, zero),
        (case(0.6, 0.3, 0.7, both, (Some(0.4), None)), BeforeStrict, NEG),
        (case(0.6, 0.3, 0.7, (false, true), (None, None)), BeforeStrict, NEG),
        // h = β(ℳ_τ) = 2β(ℳ_{τ−})
        (case(0.6, 0.3, 0.6, both, (Some(0.6), Some(0.8))), Equality, zero),
        (case(0.6, 0.3, 0.6, both, (Some(0.5), Some(0.6))), Equality, zero),
        (case(0.6, 0.3, 0.6, both, (Some(0.5), Some(0.8))), Equality, NEG),
        (case(0.6, 0.3, 0.6, (true, false), (Some(0.6), None)), Equality, zero),
        (case(0.6, 0.3, 0.6, (true, false), (Some(0.5), None)), Equality, NEG),
        (case(0.6, 0.3, 0.6, (false, true), (None, Some(0.6))), Equality, zero),
        (case(0.6, 0.3, 0.6, (false, true), (None, Some(0.8))), Equality, NEG),
        (case(0.6, 0.3, 0.6, (false, false), (None, None)), Equality, NEG),
    ];
    for (c, branch, space) in table {
        let out = exceptional_value(&c, 1e-9).unwrap();
        assert_eq!(out.branch, branch, "{c:?}");
        assert_eq!(out.space.value, space, "{c:?}");
        assert_eq!(out.time.value, space.scale_down(c.beta_before));
    }
    // a measured dimension on the excluded side is inconsistent
    assert!(exceptional_value(&case(0.7, 0.3, 0.7, both, (None, Some(0.5))), 1e-9).is_err());
    assert!(exceptional_value(&case(0.6, 0.3, 0.7, both, (Some(0.65), None)), 1e-9).is_err());
    assert!(exceptional_value(&case(0.7, 0.3, 0.7, both, (None, None)), 1e-9).is_err());
}

#[test]
fn general_value_and_profile() {
    assert_eq!(general_spectrum_value(1.0).unwrap(), 1.0);
    assert_eq!(general_spectrum_value(4.0 / 3.0).unwrap(), 0.5);
    assert_eq!(general_spectrum_value(2.0).unwrap(), 0.0);
    let (path, beta) = gap_path();
    let prof = upsilon_profile(&path, &beta, 0.6, &[0.0, 0.5]).unwrap();
    assert!((prof[0] - 3.0).abs() < 1e-15);
    assert!((prof[1] - 0.6 / beta.eval(path.final_value())).abs() < 1e-15);
}

#[test]
fn local_dim_is_exact_on_a_power_law_measure() {
    // atoms at ±k^{-1/d} give μ(B(0, r)) ≈ r^d only asymptotically; a single
    // path of constant jumps gives an exactly linear measure instead
    let jumps: Vec<(f64, f64)> = (1..=4096).map(|k| (k as f64 / 4096.0, 1.0 / 4096.0)).collect();
    let path = JumpPath::from_jumps(1.0, &jumps[..4095]).unwrap();
    let om = OccupationMeasure::from_path(&path);
    let window = LocalDimWindow {
        r_min: 1e-3,
        r_max: 1e-1,
        per_decade: 4,
    };
    let est = local_dim(&om, 0.5, window).unwrap();
    for (r, ratio) in est.radii.iter().zip(&est.ratios) {
        let m = (2.0 * r * 4096.0).ceil() / 4096.0;
        let want = m.ln() / r.ln();
        assert!((ratio.unwrap() - want).abs() < 0.05, "r {r}");
    }
    assert!(est.lower_est.unwrap() <= est.upper_est.unwrap());
    assert!(local_dim(&om, 2.0, window).is_err());
}

#[test]
fn stable_like_measure_sits_between_constant_index_measures() {
    let beta = BetaFunction::ramp(0.3, 0.7, 1.0).unwrap();
    for i in 0..10 {
        let pp = PointProcess::sample(1.0, 1e-5, trial_seed(320, i)).unwrap();
        let m = build_stable_like(&pp, &beta);
        let lo = build_subordinator(&pp, 0.3).unwrap();
        let hi = build_subordinator(&pp, 0.7).unwrap();
        let (om_m, om_lo, om_hi) = (
            OccupationMeasure::from_path(&m),
            OccupationMeasure::from_path(&lo),
            OccupationMeasure::from_path(&hi),
        );
        for k in 1..20 {
            let t = k as f64 / 20.0;
            for j in 0..12 {
                let r = 1e-6 * 3f64.powi(j);
                let a = om_hi.mass_ball(hi.eval(t).unwrap(), r);
                let b = om_m.mass_ball(m.eval(t).unwrap(), r);
                let c = om_lo.mass_ball(lo.eval(t).unwrap(), r);
                assert!(a <= b && b <= c, "t {t} r {r}: {a} {b} {c}");
            }
        }
    }
}

#[test]
fn streaming_balls_match_the_stored_measure() {
    let z_min = 1e-5;
    let radii: Vec<f64> = (0..12).map(|k| 1e-7 * 4f64.powi(k)).collect();
    for (i, alpha) in [0.3, 0.5, 0.7].into_iter().enumerate() {
        let seed = trial_seed(330, i as u64);
        let pp = PointProcess::sample(1.0, z_min, seed).unwrap();
        let sampler = BlockSampler::new(1.0, z_min, seed).unwrap();
        assert!(sampler.n_blocks() > 1);
        let path = build_subordinator(&pp, alpha).unwrap();
        let om = OccupationMeasure::from_path(&path);
        for k in 0..25 {
            let u = (k as f64 + 0.5) / 25.0;
            let s = stream_subordinator_balls(&sampler, alpha, u, &radii).unwrap();
            let x = path.eval(u).unwrap();
            for (j, &r) in radii.iter().enumerate() {
                let m = om.mass_ball(x, r);
                assert!(
                    (s.masses[j] - m).abs() <= 1e-12,
                    "alpha {alpha} u {u} r {r}: {} vs {m}",
                    s.masses[j]
                );
            }
        }
    }
}

#[test]
fn typical_points_of_a_stable_subordinator() {
    let beta = BetaFunction::constant(0.5).unwrap();
    let pp = PointProcess::sample(1.0, 1e-7, 340).unwrap();
    let path = build_stable_like(&pp, &beta);
    let om = OccupationMeasure::from_path(&path);
    let rep = typical_behavior_report(&path, &om, &beta, 50, 7, LocalDimWindow::default(), 0.1).unwrap();
    assert_eq!(rep.samples.len(), 50);
    assert!(rep.median_abs_dev_lower.unwrap() < 0.2);
    assert!(rep.upper_bracket_fraction >= 0.8);
    assert!(rep.samples.iter().all(|s| s.beta == 0.5));
}

#[test]
fn box_dimension_of_a_cantor_set() {
    let mut points = vec![0.0];
    let mut scale = 1.0;
    for _ in 0..13 {
        scale /= 3.0;
        let shifted: Vec<f64> = points.iter().map(|p| p + 2.0 * scale).collect();
        points.extend(shifted);
    }
    let e = box_dimension(&points, 4, 18).unwrap();
    let want = 2f64.ln() / 3f64.ln();
    assert!((e.slope - want).abs() < 0.03, "{}", e.slope);
}

#[test]
fn image_bounds_narrow_toward_the_right_end() {
    let beta = BetaFunction::ramp(0.3, 0.7, 1.0).unwrap();
    let pp = PointProcess::sample(1.0, 1e-6, 350).unwrap();
    let path = build_stable_like(&pp, &beta);
    let mut prev = (0.0, 1.0);
    for a in [0.0, 0.5, 0.9, 0.99] {
        let r = image_dim_bounds(&path, &beta, a, 1.0, 4, 12, 0.1).unwrap();
        assert!(r.predicted.0 >= prev.0 && r.predicted.1 <= prev.1);
        assert_eq!(r.predicted.1, beta.eval(path.eval_left(1.0).unwrap()));
        prev = r.predicted;
    }
    assert!(prev.1 - prev.0 < 0.05);
    assert!(image_dim_bounds(&path, &beta, 0.5, 0.5, 4, 12, 0.1).is_err());
}
