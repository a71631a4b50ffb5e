use bincounts::kernel::{IntDomain, Solver, Status, VarId};
use bincounts::stats::{chi2_cdf, chi2_critical, chi2_inverse_cdf, chi2_sf, pearson_statistic, qh_interval, score_roots};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn product(doms: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for d in doms {
        out = out.into_iter().flat_map(|p: Vec<i64>| d.iter().map(move |v| [p.clone(), vec![*v]].concat())).collect();
    }
    out
}

#[test]
fn chi2_filter_keeps_exactly_the_supported_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..500 {
        let m = rng.gen_range(1..=4);
        let doms: Vec<Vec<i64>> = (0..m)
            .map(|_| {
                let mut d: Vec<i64> = (0..7).filter(|_| rng.gen_bool(0.5)).collect();
                if d.is_empty() {
                    d.push(rng.gen_range(0..7));
                }
                d
            })
            .collect();
        let targets: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=4)).collect();
        let threshold = rng.gen_range(0.0..6.0);
        let ok: Vec<Vec<i64>> = product(&doms).into_iter().filter(|c| pearson_statistic(c, &targets).unwrap().within(threshold)).collect();

        let mut s = Solver::new();
        let cs: Vec<VarId> = doms.iter().map(|d| s.new_var(IntDomain::from_values(d.iter().copied())).unwrap()).collect();
        s.post_chi2_threshold(&cs, &targets, threshold).unwrap();
        if s.propagate() == Status::Failed {
            assert!(ok.is_empty(), "lost {ok:?}");
            continue;
        }
        // Soundness: every satisfying combination survives.
        for c in &ok {
            assert!(c.iter().zip(&cs).all(|(v, x)| s.dom(*x).contains(*v)));
        }
        // Fully fixed count vectors are accepted exactly when they pass the test.
        if cs.iter().all(|x| s.dom(*x).is_fixed()) {
            let fixed: Vec<i64> = cs.iter().map(|x| s.dom(*x).min()).collect();
            assert!(ok.contains(&fixed));
        }
        if m == 1 {
            // One count alone is filtered to exactly its supported values.
            let kept = s.dom(cs[0]).to_vec();
            assert_eq!(kept, ok.iter().map(|c| c[0]).collect::<Vec<_>>());
        }
    }
}

#[test]
fn quantiles_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..500 {
        let df = rng.gen_range(1..=40);
        let q = rng.gen_range(0.001..0.999);
        let x = chi2_inverse_cdf(df, q).unwrap();
        assert!((chi2_cdf(df, x) - q).abs() < 1e-9, "df {df} q {q}");
        assert!((chi2_sf(df, x) - (1.0 - q)).abs() < 1e-9);
    }
    assert!(chi2_inverse_cdf(3, 0.0).is_err());
    assert!(chi2_inverse_cdf(3, 1.0).is_err());
    assert!(chi2_critical(1, 0.05).is_err());
}

#[test]
fn quantiles_increase_with_probability() {
    for df in 1..=10 {
        let xs: Vec<f64> = (1..100).map(|k| chi2_inverse_cdf(df, k as f64 / 100.0).unwrap()).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]), "df {df}");
    }
}

#[test]
fn intervals_bracket_the_estimate_and_solve_the_score_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=200u64);
        let count = rng.gen_range(0..=n);
        let k = rng.gen_range(2..=8);
        let alpha = rng.gen_range(0.01..0.5);
        let iv = qh_interval(n, count, k, alpha).unwrap();
        let p_hat = count as f64 / n as f64;
        assert!(0.0 <= iv.lower && iv.lower <= p_hat && p_hat <= iv.upper && iv.upper <= 1.0, "{iv:?} for {count}/{n}");
        let a = chi2_inverse_cdf(k as u32 - 1, 1.0 - alpha).unwrap();
        for p in [iv.lower, iv.upper] {
            let residual = n as f64 * (p_hat - p).powi(2) - a * p * (1.0 - p);
            assert!(residual.abs() < 1e-7 * (n as f64 + a), "residual {residual} at {p}");
        }
        // Smaller alpha widens the interval.
        let wide = qh_interval(n, count, k, alpha / 2.0).unwrap();
        assert!(wide.lower <= iv.lower + 1e-12 && wide.upper >= iv.upper - 1e-12);
    }
}

#[test]
fn degenerate_cells() {
    let zero = score_roots(10, 0, 2.0).unwrap();
    assert_eq!(zero.lower, 0.0);
    assert!(zero.upper > 0.0);
    let full = score_roots(10, 10, 2.0).unwrap();
    assert_eq!(full.upper, 1.0);
    assert!(full.lower < 1.0);
    assert!(score_roots(10, 11, 2.0).is_err());
    assert!(qh_interval(10, 3, 3, 0.0).is_err());
    assert!(qh_interval(10, 3, 3, 1.0).is_err());
}
