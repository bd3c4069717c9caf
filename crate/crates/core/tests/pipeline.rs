use iqoap_core::adaptive::{self, IterationConfig, IterationEntry};
use iqoap_core::encoding::{build_hamiltonian, truncated_spectrum, Encoding};
use iqoap_core::lattice::{apply_transform, random_unimodular, shortest_vector_oracle, Basis};
use iqoap_core::qaoa::{optimize_gamma, qaoa_state, sample};
use iqoap_core::rng;

fn scrambled(seed: u64) -> Basis {
    let good = Basis::new(vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap();
    let w = random_unimodular(3, 3, &mut rng::stream(seed, &[])).unwrap();
    apply_transform(&w, &good).unwrap()
}

#[test]
fn short_run_on_a_scrambled_3d_lattice() {
    let basis = scrambled(5);
    let config = IterationConfig { max_iterations: 20, seed: 3, ..Default::default() };
    let record = adaptive::run(&basis, &config).unwrap();
    record.verify().unwrap();
    assert_eq!(record.entries.len(), 20);
    assert_eq!(record.final_basis.determinant().abs(), 4);
    let oracle = shortest_vector_oracle(&record.final_basis, 3).unwrap();
    assert_eq!(oracle.squared_length, 1);
    let first = record.trajectory()[0].iter().sum::<i64>();
    assert!(record.final_sorted_squared_lengths().iter().sum::<i64>() <= first);
}

#[test]
fn run_log_round_trips_through_json_lines() {
    let config = IterationConfig { max_iterations: 5, seed: 9, ..Default::default() };
    let record = adaptive::run(&scrambled(6), &config).unwrap();
    for e in &record.entries {
        let line = serde_json::to_string(e).unwrap();
        assert!(!line.contains('\n'));
        let back: IterationEntry = serde_json::from_str(&line).unwrap();
        assert_eq!(&back, e);
    }
}

#[test]
fn basis_json_shape() {
    let b: Basis = serde_json::from_str(r#"{"d":2,"rows":[[1,1],[0,2]]}"#).unwrap();
    assert_eq!(b.determinant(), 2);
    let v: serde_json::Value = serde_json::to_value(&b).unwrap();
    assert_eq!(v["d"], 2);
    assert!(serde_json::from_str::<Basis>(r#"{"d":3,"rows":[[1,1],[0,2]]}"#).is_err());
}

#[test]
fn sampled_states_concentrate_below_the_mean() {
    let g = scrambled(7).gram();
    let e = Encoding::new(3, 2).unwrap();
    let h = build_hamiltonian(&g, &e).unwrap();
    let opt = optimize_gamma(&h, 256, 1e-6).unwrap();
    let state = qaoa_state(&h, opt.gamma).unwrap();
    let shots = sample(&state, &e, &mut rng::stream(1, &[]), 4000).unwrap();
    let mean: f64 = shots
        .iter()
        .map(|n| h.energies()[e.encode(n).unwrap() as usize] as f64)
        .sum::<f64>()
        / shots.len() as f64;
    assert!(mean < h.mean_energy(), "{mean} vs {}", h.mean_energy());
    let spectrum = truncated_spectrum(&g, &e).unwrap();
    assert_eq!(spectrum[0], 0);
    assert!(spectrum.windows(2).all(|w| w[0] < w[1]));
}
