use ecoc::codebook::one_vs_all;
use ecoc::network::{
    cost_standard, cost_weighted, costs, gradient, sample_weight, train, CostVariant, Gradient,
    LearningRate, Mlp, Target, TrainConfig, UpdateMode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Instance {
    net: Mlp,
    inputs: Vec<Vec<f64>>,
    targets: Vec<Vec<Target>>,
}

fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let input_dim = rng.random_range(1..=10);
    let hidden_dim = rng.random_range(1..=10);
    let output_dim = rng.random_range(1..=8);
    let batch = rng.random_range(1..=6);
    let net = Mlp::init(input_dim, hidden_dim, output_dim, seed, Some(1.0)).unwrap();
    let inputs = (0..batch)
        .map(|_| (0..input_dim).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let targets = (0..batch)
        .map(|_| {
            (0..output_dim)
                .map(|_| match rng.random_range(0..5) {
                    0 => None,
                    k => Some((k % 2) as f64),
                })
                .collect()
        })
        .collect();
    Instance { net, inputs, targets }
}

/// Central differences of `cost` with respect to every parameter.
fn finite_difference(instance: &Instance, cost: impl Fn(&Mlp) -> f64) -> Vec<f64> {
    const EPS: f64 = 1e-5;
    (0..instance.net.parameter_count())
        .map(|p| {
            let mut plus = instance.net.clone();
            *plus.parameter_mut(p) += EPS;
            let mut minus = instance.net.clone();
            *minus.parameter_mut(p) -= EPS;
            (cost(&plus) - cost(&minus)) / (2.0 * EPS)
        })
        .collect()
}

fn relative_error(analytic: &Gradient, scale: f64, numeric: &[f64]) -> f64 {
    let a: Vec<f64> = analytic.iter().map(|g| g * scale).collect();
    let diff = a.iter().zip(numeric).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt() + numeric.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-300 {
        0.0
    } else {
        diff / norm
    }
}

#[test]
fn standard_gradient_matches_finite_differences() {
    for seed in 0..100 {
        let inst = random_instance(seed);
        let analytic = gradient(&inst.net, &inst.inputs, &inst.targets, CostVariant::Standard).unwrap();
        let numeric = finite_difference(&inst, |net| cost_standard(net, &inst.inputs, &inst.targets).unwrap());
        let err = relative_error(&analytic, 1.0, &numeric);
        assert!(err < 1e-6, "seed {seed}: relative error {err:e}");
    }
}

#[test]
fn weighted_gradient_is_half_the_true_gradient() {
    for seed in 100..200 {
        let inst = random_instance(seed);
        let analytic = gradient(&inst.net, &inst.inputs, &inst.targets, CostVariant::Weighted).unwrap();
        let numeric = finite_difference(&inst, |net| cost_weighted(net, &inst.inputs, &inst.targets).unwrap());
        let err = relative_error(&analytic, 2.0, &numeric);
        assert!(err < 1e-6, "seed {seed}: relative error {err:e}");
    }
}

#[test]
fn costs_match_naive_recomputation() {
    for seed in 200..220 {
        let inst = random_instance(seed);
        let mut standard = 0.0;
        let mut weighted = 0.0;
        for (u, d) in inst.inputs.iter().zip(&inst.targets) {
            let y = inst.net.forward(u).unwrap();
            let mut e = 0.0;
            for j in 0..y.len() {
                if let Some(t) = d[j] {
                    e += (y[j] - t) * (y[j] - t);
                }
            }
            assert!((sample_weight(&inst.net, u, d).unwrap() - e).abs() < 1e-14);
            standard += e;
            weighted += e * e;
        }
        let n = inst.inputs.len() as f64;
        let (e, e_bar) = costs(&inst.net, &inst.inputs, &inst.targets).unwrap();
        assert!((e - standard / n).abs() < 1e-14);
        assert!((e_bar - weighted / n).abs() < 1e-14);
    }
}

#[test]
fn masked_outputs_are_neutral() {
    let inst = random_instance(7);
    let mut targets = inst.targets.clone();
    for t in &mut targets {
        t[0] = None;
    }
    let b = inst.net.output_dim();
    let h = inst.net.hidden_dim();
    // Perturb only the weights feeding output 0, which changes nothing but y_0.
    let mut shifted = inst.net.clone();
    for k in 0..=h {
        *shifted.parameter_mut((inst.net.input_dim() + 1) * h + k * b) += 0.7;
    }
    for (u, d) in inst.inputs.iter().zip(&targets) {
        assert_eq!(sample_weight(&inst.net, u, d).unwrap(), sample_weight(&shifted, u, d).unwrap());
    }
    assert_eq!(
        costs(&inst.net, &inst.inputs, &targets).unwrap(),
        costs(&shifted, &inst.inputs, &targets).unwrap()
    );
    for variant in [CostVariant::Standard, CostVariant::Weighted] {
        let a = gradient(&inst.net, &inst.inputs, &targets, variant).unwrap();
        let c = gradient(&shifted, &inst.inputs, &targets, variant).unwrap();
        assert_eq!(a, c);
        assert!((0..=h).all(|k| a.output[k * b] == 0.0));
    }
}

#[test]
fn full_batch_weighted_descent_is_monotone() {
    let inst = random_instance(11);
    let mut net = inst.net.clone();
    let mut current = cost_weighted(&net, &inst.inputs, &inst.targets).unwrap();
    for step in 0..50 {
        let mut rate = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let config = TrainConfig {
                cost: CostVariant::Weighted,
                epochs: 1,
                learning_rate: LearningRate::Fixed(rate),
                update_mode: UpdateMode::FullBatch,
                ..TrainConfig::default()
            };
            let (next, trace) = train(&net, &inst.inputs, &inst.targets, &config).unwrap();
            let next_cost = trace.last().unwrap().weighted_cost;
            if next_cost < current {
                net = next;
                current = next_cost;
                accepted = true;
                break;
            }
            rate /= 2.0;
        }
        assert!(accepted || current == 0.0, "step {step}: no descent at any step size");
    }

    // A small fixed step descends at every epoch.
    let config = TrainConfig {
        cost: CostVariant::Weighted,
        epochs: 100,
        learning_rate: LearningRate::Fixed(1e-3),
        update_mode: UpdateMode::FullBatch,
        ..TrainConfig::default()
    };
    let (_, trace) = train(&inst.net, &inst.inputs, &inst.targets, &config).unwrap();
    assert!(trace.rows.windows(2).all(|w| w[1].weighted_cost < w[0].weighted_cost));
}

fn blobs(seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centres = [[2.0, 2.0], [-2.0, 2.0], [-2.0, -2.0], [2.0, -2.0]];
    let mut inputs = Vec::new();
    let mut labels = Vec::new();
    for (c, centre) in centres.iter().enumerate() {
        for _ in 0..25 {
            inputs.push(vec![
                centre[0] + rng.random_range(-0.8..0.8),
                centre[1] + rng.random_range(-0.8..0.8),
            ]);
            labels.push(c);
        }
    }
    (inputs, labels)
}

#[test]
fn separable_blobs_are_learned() {
    let (inputs, labels) = blobs(1);
    let matrix = one_vs_all(4).unwrap();
    let targets: Vec<_> = labels.iter().map(|&l| matrix.encode_targets(l).unwrap()).collect();
    for cost in [CostVariant::Standard, CostVariant::Weighted] {
        let config = TrainConfig {
            cost,
            epochs: 200,
            learning_rate: LearningRate::Fixed(0.5),
            seed: 3,
            ..TrainConfig::default()
        };
        let net = Mlp::init(2, 8, 4, 3, None).unwrap();
        let (net, _) = train(&net, &inputs, &targets, &config).unwrap();
        let correct = inputs
            .iter()
            .zip(&labels)
            .filter(|(u, &l)| ecoc::decoder::classify(&net.forward(u).unwrap(), &matrix).unwrap() == l)
            .count();
        assert!(correct >= 95, "{cost:?}: {correct}/100");
    }
}

#[test]
fn tiny_learning_rate_barely_moves_weights() {
    let (inputs, labels) = blobs(2);
    let matrix = one_vs_all(4).unwrap();
    let targets: Vec<_> = labels.iter().map(|&l| matrix.encode_targets(l).unwrap()).collect();
    let net = Mlp::init(2, 5, 4, 9, None).unwrap();
    let config = TrainConfig {
        epochs: 20,
        learning_rate: LearningRate::Fixed(1e-9),
        ..TrainConfig::default()
    };
    let (trained, _) = train(&net, &inputs, &targets, &config).unwrap();
    let max_change = net
        .hidden_weights()
        .iter()
        .chain(net.output_weights())
        .zip(trained.hidden_weights().iter().chain(trained.output_weights()))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(max_change < 1e-6);
}

#[test]
fn training_is_deterministic() {
    let (inputs, labels) = blobs(3);
    let matrix = one_vs_all(4).unwrap();
    let targets: Vec<_> = labels.iter().map(|&l| matrix.encode_targets(l).unwrap()).collect();
    let net = Mlp::init(2, 6, 4, 1, None).unwrap();
    let config = TrainConfig { epochs: 30, seed: 5, ..TrainConfig::default() };
    let a = train(&net, &inputs, &targets, &config).unwrap();
    let b = train(&net, &inputs, &targets, &config).unwrap();
    assert_eq!(a, b);
    let other = TrainConfig { seed: 6, ..config };
    assert_ne!(a.0, train(&net, &inputs, &targets, &other).unwrap().0);
}
