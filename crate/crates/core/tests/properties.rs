use proptest::prelude::*;

use streaming_entropy::bench::verify::binom_recip_brute;
use streaming_entropy::stream::Word;
use streaming_entropy::*;

fn weights(max_k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 1e-6..1.0f64], 1..=max_k)
        .prop_filter("some mass", |w| w.iter().any(|&v| v > 0.0))
}

fn to_pmf(w: &[f64]) -> Pmf {
    let s: f64 = w.iter().sum();
    Pmf::new(w.iter().map(|v| v / s).collect()).unwrap()
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Uniform),
        Just(Family::Dirac),
        (0.1..3.0f64).prop_map(|s| Family::Zipf { s }),
        (0.01..0.99f64).prop_map(|r| Family::Geometric { r }),
        (0.05..0.95f64, 1usize..4).prop_map(|(head_mass, head_count)| Family::TwoLevel {
            head_mass,
            head_count
        }),
    ]
}

proptest! {
    #[test]
    fn entropy_lies_between_zero_and_ln_k(w in weights(40)) {
        let p = to_pmf(&w);
        let h = exact_entropy(&p);
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (p.k() as f64).ln() + 1e-12);
    }

    #[test]
    fn families_materialize_and_round_trip(f in family(), k in 5usize..200) {
        let p = FamilySpec::new(f.clone(), k).materialize().unwrap();
        prop_assert_eq!(p.k(), k);
        prop_assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let parsed: Family = f.to_string().parse().unwrap();
        prop_assert_eq!(parsed, f);
    }

    #[test]
    fn interval_masses_sum_to_one(
        w in weights(30),
        mut cuts in prop::collection::vec(1e-4..0.999f64, 0..4),
    ) {
        let p = to_pmf(&w);
        cuts.sort_by(|a, b| b.total_cmp(a));
        cuts.dedup();
        let masses = interval_masses(&p, &cuts).unwrap();
        prop_assert_eq!(masses.len(), cuts.len() + 1);
        prop_assert!((masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_recombines(w in weights(10), n in 1u64..6, ell in 0.05..1.0f64) {
        let p = to_pmf(&w);
        let model = exact_estint_probs(&p, n, ell).unwrap();
        let d = decompose_entropy(&p, &model).unwrap();
        prop_assert!((d.recombined - exact_entropy(&p)).abs() <= 1e-12);
    }

    #[test]
    fn binom_recip_matches_summation(m in 0u64..200, r in 1e-4..1.0f64) {
        let closed = binom_recip_expectation(m, r).unwrap();
        prop_assert!((closed - binom_recip_brute(m, r)).abs() <= 1e-12);
        prop_assert!(closed <= 1.0 / (r * (m + 1) as f64) * (1.0 + 1e-12));
    }

    #[test]
    fn simple_bias_is_positive_and_bounded(w in weights(8), n in 1u64..80) {
        let p = to_pmf(&w);
        let bias = exact_entropy(&p) - exact_mean_simple(&p, n).unwrap();
        prop_assert!(bias > 0.0);
        prop_assert!(bias <= bias_bound(p.k(), n) + 1e-12);
    }

    #[test]
    fn window_counts_never_exceed_window(
        symbols in prop::collection::vec(0usize..4, 1..60),
        x in 0usize..4,
    ) {
        let n = symbols.len() as u64;
        let expected = symbols.iter().filter(|&&s| s == x).count() as u64;
        let mut stream = SymbolStream::replay(symbols);
        let mut rf = RegisterFile::default();
        let c = count_in_window(&mut stream, x, n, &mut rf).unwrap();
        prop_assert_eq!(c, expected);
        prop_assert_eq!(stream.consumed(), n);
        prop_assert_eq!(rf.live(), 0);
    }

    #[test]
    fn register_high_water_tracks_peak(ops in prop::collection::vec(any::<bool>(), 1..100)) {
        let mut rf = RegisterFile::default();
        let mut held = Vec::new();
        let mut peak = 0;
        for alloc in ops {
            if alloc {
                match rf.alloc(Word::Int(0)) {
                    Ok(r) => held.push(r),
                    Err(Error::CapacityExceeded { capacity }) => prop_assert_eq!(capacity, 20),
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                }
            } else if let Some(r) = held.pop() {
                rf.free(r);
            }
            peak = peak.max(held.len());
            prop_assert_eq!(rf.live(), held.len());
        }
        prop_assert_eq!(rf.high_water(), peak);
        prop_assert!(rf.high_water() <= WORD_BUDGET);
    }

    #[test]
    fn partitions_decrease(k in 2usize..5_000_000, beta in 0.5..3.0f64) {
        match build_partition(k, beta) {
            Ok(part) => {
                prop_assert_eq!(part.h.len(), part.t + 1);
                prop_assert!(part.h.windows(2).all(|w| w[0] > w[1]));
            }
            Err(e) => prop_assert!(matches!(e, Error::VacuousPartition(_)), "{e}"),
        }
    }

    #[test]
    fn parameters_shrink_as_eps_grows(k in 8usize..5000, eps in 0.1..1.0f64) {
        let a = simple_params(k, eps).unwrap();
        let b = simple_params(k, eps * 2.0).unwrap();
        prop_assert!(a.samples() >= b.samples());
        let consts = TwoIntervalConstants::default();
        let c = two_interval_params(k, eps, &consts).unwrap();
        let d = two_interval_params(k, eps * 2.0, &consts).unwrap();
        prop_assert!(c.worst_case_samples() >= d.worst_case_samples());
    }
}
