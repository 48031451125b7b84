use approx::assert_abs_diff_eq;
use orthosplines::analysis::{expand, expand_spline, Expansion};
use orthosplines::bspline::{embed, GramSystem, Spline};
use orthosplines::charint::census_sweep;
use orthosplines::ortho::gram_schmidt_oracle;
use orthosplines::{partition_at, random_admissible, validate_admissible, KnotSequence, Law, OrthoSystem};
use proptest::prelude::*;

fn l2_distance(a: &Spline, b: &Spline, g: &GramSystem) -> f64 {
    let d: Vec<f64> = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x - y).collect();
    g.inner(&d, &d).max(0.0).sqrt()
}

#[test]
fn haar_step_in_closed_form() {
    let seq = validate_admissible(1, &[0.0, 1.0, 0.5]).unwrap();
    let system = OrthoSystem::build(&seq, 2).unwrap();
    assert_eq!(system.len(), 2);
    let f = &system.function(2).unwrap().phi;
    assert_abs_diff_eq!(f.eval(0.25).unwrap(), 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(f.eval(0.75).unwrap(), -1.0, epsilon = 1e-14);
}

#[test]
fn franklin_function_matches_the_oracle() {
    let seq = validate_admissible(2, &[0.0, 1.0, 0.5, 0.25, 0.75, 0.125]).unwrap();
    let system = OrthoSystem::build(&seq, 5).unwrap();
    for n in 2..=5 {
        let fast = &system.function(n).unwrap().phi;
        let slow = gram_schmidt_oracle(&seq, n).unwrap();
        let g = GramSystem::new(fast.partition()).unwrap();
        assert!(l2_distance(fast, &slow, &g) < 1e-12, "n = {n}");
    }
}

#[test]
fn knot_file_round_trip() {
    let seq = random_admissible(4, 3, 30, Law::DyadicShuffled);
    let text = serde_json::to_string(&seq).unwrap();
    let back: KnotSequence = serde_json::from_str(&text).unwrap();
    assert_eq!(seq, back);
    assert!(serde_json::from_str::<KnotSequence>(r#"{"k": 1, "points": [0, 1, 0.5, 0.5]}"#).is_err());
}

#[test]
fn export_is_deterministic() {
    let seq = random_admissible(8, 3, 40, Law::UniformIid);
    let a = serde_json::to_string(&OrthoSystem::build(&seq, 39).unwrap().export()).unwrap();
    let b = serde_json::to_string(&OrthoSystem::build(&seq, 39).unwrap().export()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn smooth_function_expansion_converges() {
    let f = |x: f64| (5.0 * x).sin() + x * x;
    let err_at = |n: usize| {
        let seq = random_admissible(0, 3, n + 1, Law::DyadicShuffled);
        let system = OrthoSystem::build(&seq, n).unwrap();
        let approx = expand(f, &system).reconstruct(&system).unwrap();
        (0..200)
            .map(|i| (i as f64 + 0.5) / 200.0)
            .map(|x| (approx.eval(x).unwrap() - f(x)).abs())
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (err_at(8), err_at(64));
    assert!(fine < coarse / 50.0, "{coarse} -> {fine}");
}

#[test]
fn census_counts_the_polynomial_block_on_dyadic_points() {
    let seq = random_admissible(1, 2, 65, Law::DyadicShuffled);
    let system = OrthoSystem::build(&seq, 64).unwrap();
    let r = census_sweep(&system, 0.0).unwrap();
    assert!(r.max_count >= 1 && r.max_count <= 2 * system.order());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn expansion_of_a_level_spline_is_exact(seed in 0u64..1000, k in 1usize..5, n in 2usize..40) {
        let seq = random_admissible(seed, k, n + 1, Law::UniformIid);
        let system = OrthoSystem::build(&seq, n).unwrap();
        let part = partition_at(&seq, n).unwrap();
        let c: Vec<f64> = (0..part.dim()).map(|i| ((i as u64 * 31 + seed) % 7) as f64 - 3.0).collect();
        let f = Spline::new(part, c).unwrap();
        let e = expand_spline(&f, &system).unwrap();
        let g = system.gram().unwrap();
        prop_assert!(l2_distance(&e.reconstruct(&system).unwrap(), &f, &g) < 1e-9);
        prop_assert!((e.energy() - g.inner(f.coeffs(), f.coeffs())).abs() < 1e-9 * (1.0 + e.energy()));
    }

    #[test]
    fn sign_flips_preserve_the_l2_norm(seed in 0u64..1000, k in 1usize..5) {
        let seq = random_admissible(seed, k, 25, Law::UniformIid);
        let system = OrthoSystem::build(&seq, 24).unwrap();
        let a: Vec<f64> = (0..system.len()).map(|i| (i as f64 + seed as f64).cos()).collect();
        let eps: Vec<f64> = (0..a.len()).map(|i| if (i as u64 + seed) % 3 == 0 { -1.0 } else { 1.0 }).collect();
        let e = Expansion::new(a);
        let flipped = e.flipped(&eps);
        let g = system.gram().unwrap();
        let s1 = e.reconstruct(&system).unwrap();
        let s2 = flipped.reconstruct(&system).unwrap();
        let n1 = g.inner(s1.coeffs(), s1.coeffs());
        let n2 = g.inner(s2.coeffs(), s2.coeffs());
        prop_assert!((n1 - n2).abs() < 1e-9 * n1);
    }

    #[test]
    fn new_functions_are_orthogonal_to_the_coarse_space(seed in 0u64..1000, k in 1usize..5, n in 2usize..30) {
        let seq = random_admissible(seed, k, n + 1, Law::UniformIid);
        let system = OrthoSystem::build(&seq, n).unwrap();
        let phi = &system.function(n).unwrap().phi;
        let fine = phi.partition().clone();
        let coarse = partition_at(&seq, n - 1).unwrap();
        let g = GramSystem::new(&fine).unwrap();
        for j in 0..coarse.dim() {
            let mut c = vec![0.0; coarse.dim()];
            c[j] = 1.0;
            let b = embed(&Spline::new(coarse.clone(), c).unwrap(), &fine).unwrap();
            prop_assert!(g.inner(b.coeffs(), phi.coeffs()).abs() < 1e-10);
        }
    }
}
