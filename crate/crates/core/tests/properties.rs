use breather_core::dynamics::parity_defect;
use breather_core::lattice::{build_operator, norm_inf};
use breather_core::solver::solve_breather;
use breather_core::spectral::{certify_discrete, conjugated_eigen, conjugated_operator, weight};
use breather_core::{Grid, HarmonicSeries, ModelParams, Potential, SeriesNorm, SolverOptions};
use proptest::prelude::*;

const J: usize = 3;

fn series(order: usize) -> impl Strategy<Value = HarmonicSeries> {
    let grid = Grid::new(J).unwrap();
    prop::collection::vec(prop::collection::vec(-1.0..1.0f64, grid.size()), order + 1)
        .prop_map(move |c| HarmonicSeries::from_coeffs(grid, c).unwrap())
}

fn max_diff(x: &HarmonicSeries, y: &HarmonicSeries) -> f64 {
    x.axpy(-1.0, y)
        .unwrap()
        .coeffs()
        .iter()
        .map(|c| norm_inf(c))
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn product_is_commutative_and_bilinear(
        a in series(5), b in series(5), c in series(5), alpha in -2.0..2.0f64, zsq in 0.0..0.2f64,
    ) {
        let ab = a.product(&b, zsq).unwrap();
        prop_assert!(max_diff(&ab, &b.product(&a, zsq).unwrap()) < 1e-14);
        let lhs = a.scaled(alpha).axpy(1.0, &c).unwrap().product(&b, zsq).unwrap();
        let rhs = ab.scaled(alpha).axpy(1.0, &c.product(&b, zsq).unwrap()).unwrap();
        prop_assert!(max_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn evaluation_is_multiplicative(a in series(3), b in series(3), delta in 0.0..0.5f64, theta in 0.0..6.3f64) {
        let (a, b) = (a.with_order(6), b.with_order(6));
        let ab = a.product(&b, delta * delta).unwrap().evaluate(theta, delta);
        let (x, y) = (a.evaluate(theta, delta), b.evaluate(theta, delta));
        for i in 0..ab.len() {
            prop_assert!((ab[i] - x[i] * y[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn padding_does_not_change_low_harmonics(a in series(4), b in series(4), zsq in 0.0..0.2f64) {
        let direct = a.product(&b, zsq).unwrap();
        let padded = a.with_order(9).product(&b.with_order(9), zsq).unwrap().with_order(4);
        // The padded harmonics are zero, so they add nothing at low order.
        for n in 0..=4 {
            let diff: f64 = padded.coeff(n).iter().zip(direct.coeff(n)).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            prop_assert!(diff < 1e-14, "n = {n}: {diff}");
        }
    }

    #[test]
    fn product_norm_is_submultiplicative(
        a in series(6), b in series(6), r in 0.05..1.0f64, frac in 0.0..1.0f64, w in 0.0..0.5f64,
    ) {
        let norm = SeriesNorm::new(w, r).unwrap();
        let zsq = frac * r * r;
        let lhs = a.product(&b, zsq).unwrap().norm(norm);
        prop_assert!(lhs <= 4.0 * a.norm(norm) * b.norm(norm));
    }

    #[test]
    fn conjugation_is_a_similarity(u in prop::collection::vec(-1.0..1.0f64, 2 * 10 + 1), a in 0.0..0.5f64) {
        let op = build_operator(&Potential::repulsive(2.0), &Grid::new(10).unwrap()).unwrap();
        let lhs = conjugated_operator(&op, a).unwrap().apply(&weight(&u, a)).unwrap();
        let rhs = weight(&op.apply(&u).unwrap(), a);
        for (p, q) in lhs.iter().zip(&rhs) {
            prop_assert!((p - q).abs() < 1e-12 * (1.0 + q.abs()));
        }
    }
}

#[test]
fn conjugated_eigenvalue_is_unchanged() {
    let op = build_operator(&Potential::attractive(1.5), &Grid::new(40).unwrap()).unwrap();
    let pair = certify_discrete(&op).unwrap();
    for a in [0.1, 0.2, 0.3] {
        let c = conjugated_eigen(&op, a, pair.e).unwrap();
        assert!(
            (c.e_a - pair.e).abs() < 1e-12,
            "a = {a}: {}",
            c.e_a - pair.e
        );
    }
}

#[test]
fn even_potential_gives_even_harmonics() {
    let values = vec![0.3, -0.5, 1.2, 4.0, 1.2, -0.5, 0.3];
    let pot = Potential::Table { values };
    assert!(pot.is_even());
    let params = ModelParams::from_potential(&pot, Grid::new(40).unwrap(), 1.0, 3).unwrap();
    let sol = solve_breather(0.05, &params, &SolverOptions::default()).unwrap();
    assert!(parity_defect(&sol.phi) < 1e-14);
    for (n, c) in sol.series.coeffs().iter().enumerate() {
        assert!(
            parity_defect(c) <= 1e-13 * norm_inf(c).max(1e-300),
            "v_{n} not even"
        );
    }
}
