use hssp::io::{self, AnyInstance, ModeChoice};
use hssp::*;
use proptest::prelude::*;

type Q = BigRational;

fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

#[test]
fn generated_instances_verify_against_their_truth() {
    for seed in 0..20 {
        let (inst, truth) =
            generate_instance::<Q>(6, 2 + (seed % 3) as u32, seed, Distribution::IntegerRange { lo: -9, hi: 9 }, false)
                .unwrap();
        assert!(verify_solution(&inst, &truth.elements, &NumericMode::exact()).0);
        let (inst, truth) = generate_instance::<f64>(6, 3, seed, Distribution::UnitFloat, true).unwrap();
        assert!(verify_solution(&inst, &truth.elements, &NumericMode::float()).0);
    }
}

#[test]
fn file_round_trip_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    let (inst, truth) =
        generate_instance::<Q>(9, 4, 77, Distribution::IntegerRange { lo: -100, hi: 100 }, false).unwrap();
    io::write_instance(&path, &inst).unwrap();
    let AnyInstance::Exact(back) = io::read_instance(&path, ModeChoice::Auto).unwrap() else {
        panic!("expected a rational instance")
    };
    assert_eq!(back, inst);
    let rep = solve_vieta(&back, &VietaOptions::new(NumericMode::exact()));
    let mut want = truth.elements.clone();
    want.sort();
    assert_eq!(rep.solutions, vec![want]);

    let report = dir.path().join("report.json");
    io::write_report(&report, &rep).unwrap();
    let file = io::read_report(&report).unwrap();
    assert_eq!(file.status, "unique");
    assert_eq!(file.moser.values.len(), 9);
}

#[test]
fn rational_hidden_elements() {
    let x: Vec<Q> = [(1, 3), (-2, 5), (7, 2), (0, 1), (5, 6), (-1, 4)].iter().map(|&(p, d)| Q::new(p.into(), d.into())).collect();
    for k in 2..=4 {
        let inst = Instance::new(6, k, NumericMode::exact(), subset_sums(&x, k as usize)).unwrap();
        let rep = solve_vieta(&inst, &VietaOptions::new(NumericMode::exact()));
        if check_moser(6, k).is_singular() {
            assert_eq!(rep.status, Status::Singular);
            continue;
        }
        let mut want = x.clone();
        want.sort();
        assert_eq!(rep.solutions, vec![want], "k={k}");
    }
}

#[test]
fn brute_force_handles_singular_pairs_vieta_refuses() {
    // (8, 2) is singular at u = 4
    let x: Vec<Q> = [0, 1, 3, 4, 9, 10, 12, 13].map(q).to_vec();
    let inst = Instance::new(8, 2, NumericMode::exact(), subset_sums(&x, 2)).unwrap();
    assert_eq!(solve_vieta(&inst, &VietaOptions::new(NumericMode::exact())).status, Status::Singular);
    let rep = solve_brute(&inst, &BruteOptions { find_all: true, ..Default::default() }, &NumericMode::exact()).unwrap();
    assert!(rep.solved());
    assert!(rep.solutions.contains(&x));
    for s in &rep.solutions {
        assert!(verify_solution(&inst, s, &NumericMode::exact()).0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn brute_recovers_random_multisets(x in prop::collection::vec(-15i64..15, 4..8), k_pick in 0u32..6) {
        let n = x.len() as u32;
        let k = 2 + k_pick % (n - 2);
        let xs: Vec<Q> = x.iter().map(|&v| q(v)).collect();
        let inst = Instance::new(n, k, NumericMode::exact(), subset_sums(&xs, k as usize)).unwrap();
        let rep = solve_brute(&inst, &BruteOptions { find_all: true, ..Default::default() }, &NumericMode::exact()).unwrap();
        let mut want = xs.clone();
        want.sort();
        prop_assert!(rep.solutions.contains(&want));
        let bound = iteration_bound(n, k.min(n - k));
        prop_assert!(BigInt::from(rep.iterations.unwrap()) <= bound);
    }

    #[test]
    fn vieta_and_brute_agree_on_floats(seed in 0u64..1000, n in 5u32..9) {
        let k = 2 + (seed % 2) as u32;
        prop_assume!(!check_moser(n, k).is_singular());
        let (inst, truth) = generate_instance::<f64>(n, k, seed, Distribution::UnitFloat, false).unwrap();
        let v = solve_vieta(&inst, &VietaOptions::new(NumericMode::float()));
        let b = solve_brute(&inst, &BruteOptions::default(), &NumericMode::float()).unwrap();
        prop_assert_eq!(v.status, Status::Unique);
        prop_assert_eq!(b.status, Status::Unique);
        let mut want = truth.elements.clone();
        want.sort_by(f64::total_cmp);
        for ((a, c), t) in v.solutions[0].iter().zip(&b.solutions[0]).zip(&want) {
            prop_assert!((a - t).abs() < 1e-9 && (c - t).abs() < 1e-9);
        }
    }
}
