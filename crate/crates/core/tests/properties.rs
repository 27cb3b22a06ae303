use mixsmooth::grid::{auto_grid, min_grid, GridEvaluator};
use mixsmooth::lorentz::lorentz_norm;
use mixsmooth::smoothness::{mixed_modulus_on, ModulusGrid};
use mixsmooth::spectral::{angle_operator, delta_block, partial_sum, BlockDecomposition, BlockGrid, Cutoff};
use mixsmooth::verify::random_poly;
use mixsmooth::{BlockIndex, GridSample, LorentzParams64, PolyNorm, PolyNorm64, TrigPoly, TrigPoly64};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly(seed: u64, dim: usize, n: usize) -> TrigPoly64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_poly(dim, n, 0.5 + (seed % 3) as f64 * 0.5, &mut rng)
}

fn lp(p: f64, tau: f64) -> LorentzParams64 {
    LorentzParams64::new(p, tau).unwrap()
}

fn lorentz_pair() -> impl Strategy<Value = (f64, f64)> {
    prop::sample::select(vec![(2.0, 2.0), (3.0, 1.5), (3.0, 3.0), (1.5, 4.0), (4.0, 8.0)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grid_round_trip(seed in any::<u64>(), dim in 1usize..=2, n in 1usize..=8, extra in 0usize..5) {
        let f = poly(seed, dim, n);
        let shape: Vec<usize> = min_grid(f.degree()).iter().map(|g| g + extra).collect();
        let ev = GridEvaluator::<f64>::new(&shape).unwrap();
        let back = ev.analyze(&ev.evaluate(&f).unwrap(), f.degree()).unwrap();
        let scale = f.coeffs().iter().fold(0.0f64, |m, a| m.max(a.norm()));
        for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
            prop_assert!((a - b).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn spectral_operators_stay_in_the_ring(seed in any::<u64>(), dim in 1usize..=2, n in 1usize..=8, l in 0usize..8) {
        let f = poly(seed, dim, n);
        prop_assert!(f.is_ring_member());
        prop_assert!(partial_sum(&f, &vec![Cutoff::Finite(l); dim]).is_ring_member());
        prop_assert!(angle_operator(&f, &vec![l; dim]).is_ring_member());
        for block in BlockDecomposition::new(&f).blocks().values() {
            prop_assert!(block.is_ring_member());
        }
        prop_assert!(delta_block(&f, &BlockIndex(vec![1; dim])).is_ring_member());
    }

    #[test]
    fn homogeneity(seed in any::<u64>(), dim in 1usize..=2, (p, tau) in lorentz_pair(), shift in -3i32..4, c in 0.1f64..10.0) {
        let f = poly(seed, dim, 6);
        let norm = PolyNorm64::new(&auto_grid(f.degree()), lp(p, tau)).unwrap();
        let base = norm.norm(&f).unwrap();
        // powers of two scale every sample exactly
        let two = 2f64.powi(shift);
        prop_assert_eq!(norm.norm(&f.scaled(-two)).unwrap(), two * base);
        let scaled = norm.norm(&f.scaled(c)).unwrap();
        prop_assert!((scaled - c * base).abs() <= 1e-13 * c * base);
    }

    #[test]
    fn rearrangement_invariance(seed in any::<u64>(), (p, tau) in lorentz_pair()) {
        let f = poly(seed, 2, 5);
        let g = f.evaluate_on_grid(&[16, 16]).unwrap();
        let mut values = g.values().to_vec();
        values.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let before = lorentz_norm(&g, &lp(p, tau));
        let after = lorentz_norm(&GridSample::new(vec![16, 16], values), &lp(p, tau));
        if tau == p {
            // the τ = p shortcut sums in sample order
            prop_assert!((before - after).abs() <= 1e-14 * before);
        } else {
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn lorentz_norm_decreases_in_tau(seed in any::<u64>(), dim in 1usize..=2) {
        let f = poly(seed, dim, 6);
        let shape = auto_grid(f.degree());
        let at = |tau: f64| PolyNorm64::new(&shape, lp(3.0, tau)).unwrap().norm(&f).unwrap();
        let norms: Vec<f64> = [1.0, 1.5, 3.0, 6.0, 12.0].iter().map(|&t| at(t)).collect();
        // ‖f‖_{p,τ₁} ≤ C ‖f‖_{p,τ₂} for τ₂ ≤ τ₁ with C bounded
        for w in norms.windows(2) {
            prop_assert!(w[1] <= 1.5 * w[0], "{norms:?}");
        }
    }

    #[test]
    fn littlewood_paley_parseval(seed in any::<u64>(), dim in 1usize..=2, n in 2usize..=16) {
        let f = poly(seed, dim, n.min(if dim == 1 { 16 } else { 8 }));
        let bg = BlockGrid::new(&f, &auto_grid(f.degree())).unwrap();
        let l2 = lp(2.0, 2.0);
        let tail = bg.tail_norm(&BlockIndex(vec![1; dim]), &l2);
        let blocks: f64 = bg.block_norms(&l2).iter().map(|(_, v)| v * v).sum();
        prop_assert!((tail * tail - blocks).abs() <= 1e-8 * blocks);
    }

    #[test]
    fn partial_sums_are_bounded(seed in any::<u64>(), dim in 1usize..=2, l in 0usize..8, (p, tau) in lorentz_pair()) {
        let f = poly(seed, dim, 8);
        let norm = PolyNorm64::new(&auto_grid(f.degree()), lp(p, tau)).unwrap();
        let s = partial_sum(&f, &vec![Cutoff::Finite(l); dim]);
        let ratio = norm.norm(&s).unwrap() / norm.norm(&f).unwrap();
        let cap = if p == 2.0 && tau == 2.0 { 1.0 + 1e-12 } else { 4.0 };
        prop_assert!(ratio <= cap, "ratio {ratio}");
    }

    #[test]
    fn modulus_subadditive(seed in any::<u64>(), dim in 1usize..=2, nu in 1i32..4, (p, tau) in lorentz_pair()) {
        let f = poly(seed, dim, 4);
        let g = poly(seed.wrapping_add(1), dim, 4);
        let norm = PolyNorm64::new(&auto_grid(&[8; 2][..dim]), lp(p, tau)).unwrap();
        let t = vec![2f64.powi(1 - nu); dim];
        let k = vec![2; dim];
        let sum = mixed_modulus_on(&(&f + &g), &t, &k, &norm, 9).unwrap();
        let wf = mixed_modulus_on(&f, &t, &k, &norm, 9).unwrap();
        let wg = mixed_modulus_on(&g, &t, &k, &norm, 9).unwrap();
        prop_assert!(sum.value <= wf.value + wg.value + wf.tolerance + wg.tolerance);
    }

    #[test]
    fn modulus_grid_is_monotone(seed in any::<u64>(), dim in 1usize..=2, (p, tau) in lorentz_pair()) {
        let f = poly(seed, dim, 6);
        let norm = PolyNorm64::new(&auto_grid(f.degree()), lp(p, tau)).unwrap();
        let grid = ModulusGrid::build(&f, &vec![2; dim], norm, 5, 9).unwrap();
        for (nu, _, w) in grid.rows() {
            for j in 0..dim {
                if nu[j] < 5 {
                    let mut next = nu.clone();
                    next[j] += 1;
                    prop_assert!(grid.value(&next) <= w);
                }
            }
        }
    }

    #[test]
    fn derivative_bound_at_l2(seed in any::<u64>(), dim in 1usize..=2, nu in 1i32..6, alpha in 1u32..=3) {
        let f = poly(seed, dim, 6);
        let norm = PolyNorm64::new(&auto_grid(f.degree()), lp(2.0, 2.0)).unwrap();
        let t = vec![2f64.powi(1 - nu); dim];
        let k = vec![alpha; dim];
        let w = mixed_modulus_on(&f, &t, &k, &norm, 9).unwrap().value;
        let bound = t.iter().map(|tj| tj.powi(alpha as i32)).product::<f64>() * norm.norm(&f.derivative(&k)).unwrap();
        prop_assert!(w <= (1.0 + 1e-6) * bound, "{w} vs {bound}");
    }

    #[test]
    fn bernstein_at_l2(seed in any::<u64>(), dim in 1usize..=2, n in 1usize..=8, alpha in 1u32..=3) {
        let f = poly(seed, dim, n);
        let norm = PolyNorm64::new(&auto_grid(f.degree()), lp(2.0, 2.0)).unwrap();
        let lhs = norm.norm(&f.derivative(&vec![alpha; dim])).unwrap();
        let rhs = (n as f64).powi(alpha as i32 * dim as i32) * norm.norm(&f).unwrap();
        prop_assert!(lhs <= (1.0 + 1e-12) * rhs);
    }
}

#[test]
fn single_precision_agrees_with_double() {
    let f64_poly = TrigPoly64::cos_product(&[3, 2]);
    let f32_poly = TrigPoly::<f32>::cos_product(&[3, 2]);
    for (p, tau) in [(2.0, 2.0), (3.0, 1.5), (1.5, 4.0)] {
        let a = PolyNorm64::new(&[32, 32], lp(p, tau)).unwrap().norm(&f64_poly).unwrap();
        let b = PolyNorm::<f32>::new(&[32, 32], mixsmooth::LorentzParams32::new(p as f32, tau as f32).unwrap())
            .unwrap()
            .norm(&f32_poly)
            .unwrap();
        assert!((a - b as f64).abs() < 1e-5 * a, "{a} vs {b}");
    }
}
