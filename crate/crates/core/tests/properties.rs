use bincounts::bincounts::{count_bins, count_by_propagation, Mode, Propagation};
use bincounts::flow::BinSpec;
use bincounts::kernel::IntDomain;
use bincounts::stats::{pearson_statistic, target_scale};
use proptest::prelude::*;

fn bins_strategy() -> impl Strategy<Value = BinSpec> {
    (-5i64..5, prop::collection::vec(1i64..4, 1..5)).prop_map(|(start, widths)| {
        let mut b = vec![start];
        for w in widths {
            b.push(b.last().unwrap() + w);
        }
        BinSpec::new(b).unwrap()
    })
}

proptest! {
    #[test]
    fn counts_add_up(values in prop::collection::vec(-8i64..12, 0..20), bins in bins_strategy()) {
        let hidden = count_bins(&values, &bins, Mode::HiddenBin).unwrap();
        let inside = values.iter().filter(|v| bins.bin_of(**v).is_some()).count() as i64;
        prop_assert_eq!(hidden.iter().sum::<i64>(), inside);
        match count_bins(&values, &bins, Mode::Strict) {
            Some(c) => { prop_assert_eq!(inside, values.len() as i64); prop_assert_eq!(c, hidden); }
            None => prop_assert!(inside < values.len() as i64),
        }
    }

    #[test]
    fn counts_ignore_order(mut values in prop::collection::vec(-8i64..12, 0..20), bins in bins_strategy()) {
        let before = count_bins(&values, &bins, Mode::HiddenBin);
        values.reverse();
        prop_assert_eq!(before, count_bins(&values, &bins, Mode::HiddenBin));
    }

    #[test]
    fn propagation_agrees_with_counting(values in prop::collection::vec(-8i64..12, 0..12), bins in bins_strategy(), hidden in any::<bool>()) {
        let mode = if hidden { Mode::HiddenBin } else { Mode::Strict };
        let expected = count_bins(&values, &bins, mode);
        for p in Propagation::ALL {
            prop_assert_eq!(count_by_propagation(&values, &bins, mode, p).unwrap(), expected.clone());
        }
    }

    #[test]
    fn bin_of_matches_boundaries(v in -10i64..15, bins in bins_strategy()) {
        match bins.bin_of(v) {
            Some(j) => {
                let (lo, hi) = bins.interval(j);
                prop_assert!(lo <= v && v <= hi);
            }
            None => {
                let (lo, hi) = bins.span();
                prop_assert!(v < lo || v > hi);
            }
        }
    }

    #[test]
    fn statistic_is_zero_exactly_at_targets(targets in prop::collection::vec(1i64..6, 1..6), deltas in prop::collection::vec(-2i64..3, 1..6)) {
        let counts: Vec<i64> = targets.iter().zip(deltas.iter().chain(std::iter::repeat(&0))).map(|(t, d)| (t + d).max(0)).collect();
        let stat = pearson_statistic(&counts, &targets).unwrap();
        prop_assert_eq!(stat.is_zero(), counts == targets);
        // Scaled statistic is an integer multiple of 1 / lcm(targets).
        let l = target_scale(&targets).unwrap();
        let scaled = stat.to_f64() * l as f64;
        prop_assert!((scaled - scaled.round()).abs() < 1e-9);
    }

    #[test]
    fn domain_retain_and_bounds(values in prop::collection::btree_set(-20i64..20, 1..15), cut in -20i64..20) {
        let mut d = IntDomain::from_values(values.iter().copied());
        d.set_min(cut);
        let expected: Vec<i64> = values.iter().copied().filter(|v| *v >= cut).collect();
        prop_assert_eq!(d.to_vec(), expected.clone());
        if !expected.is_empty() {
            prop_assert_eq!(d.min(), expected[0]);
            prop_assert_eq!(d.size(), expected.len());
        }
    }
}
