//! Deterministic synthetic datasets for tests, demos and benchmarks.
//!
//! UCI-style benchmark tables cannot be redistributed here, so the bundled
//! benchmarks use generated stand-ins with the same shape (instances,
//! features, classes) and comparable difficulty: a few informative
//! columns, some weakly informative ones and pure noise.

use crate::data::Dataset;
use crate::rng::derive_seed;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng_for(name: &str, seed: u64) -> ChaCha8Rng {
    let tag = name.bytes().fold(0u64, |acc, b| acc.wrapping_mul(131).wrapping_add(b as u64));
    ChaCha8Rng::seed_from_u64(derive_seed(seed, &[tag]))
}

/// Two jointly informative features (an XOR pattern over quadrants — each
/// is useless alone) plus `noise_features` uniform-noise columns. A margin
/// around the decision boundary keeps the pattern learnable by KNN.
pub fn two_feature_xor(instances: usize, noise_features: usize, seed: u64) -> Dataset {
    let mut rng = rng_for("xor", seed);
    let margin = 0.05;
    let mut rows = Vec::with_capacity(instances);
    let mut labels = Vec::with_capacity(instances);
    for _ in 0..instances {
        let mut draw = || loop {
            let v: f64 = rng.gen();
            if (v - 0.5).abs() >= margin {
                return v;
            }
        };
        let x0 = draw();
        let x1 = draw();
        let label = u32::from((x0 > 0.5) ^ (x1 > 0.5));
        let mut row = vec![x0, x1];
        for _ in 0..noise_features {
            row.push(rng.gen());
        }
        rows.push(row);
        labels.push(label);
    }
    Dataset::new("xor-synth", rows, labels, None).expect("generator invariants hold")
}

/// Gaussian class clusters over continuous measurements: 178 instances,
/// 13 features, 3 classes. Six features carry class signal at varying
/// strength, the rest are noise at heterogeneous scales.
pub fn wine_like(seed: u64) -> Dataset {
    let class_sizes = [59usize, 71, 48];
    let d = 13;
    // per-class means for the informative features, in feature units
    let informative: [(usize, [f64; 3], f64); 6] = [
        (0, [13.7, 12.3, 13.2], 0.5),
        (1, [2.0, 1.9, 3.3], 0.6),
        (4, [106.0, 94.0, 99.0], 11.0),
        (6, [3.0, 2.1, 0.8], 0.45),
        (9, [5.5, 3.1, 7.4], 1.3),
        (12, [1115.0, 520.0, 630.0], 180.0),
    ];
    let noise_scale = [2.4, 0.3, 20.0, 1.0, 0.1, 0.7, 4.0];
    let mut rng = rng_for("wine", seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (class, &size) in class_sizes.iter().enumerate() {
        for _ in 0..size {
            let mut row = vec![0.0; d];
            let mut noise_idx = 0;
            for (f, cell) in row.iter_mut().enumerate() {
                if let Some(&(_, means, sd)) = informative.iter().find(|(i, _, _)| *i == f) {
                    *cell = means[class] + sd * gaussian(&mut rng);
                } else {
                    *cell = noise_scale[noise_idx % noise_scale.len()] * (1.0 + gaussian(&mut rng));
                    noise_idx += 1;
                }
            }
            rows.push(row);
            labels.push(class as u32);
        }
    }
    let names = (0..d).map(|i| format!("f{i}")).collect();
    Dataset::new("wine-synth", rows, labels, Some(names)).expect("generator invariants hold")
}

/// Boolean-ish trait table: 101 instances, 16 features, 6 classes. Each
/// class has a characteristic trait profile; bits flip away from the
/// profile with small probability, one count-valued column (legs-style)
/// and a few uninformative columns round it out.
pub fn zoo_like(seed: u64) -> Dataset {
    let class_sizes = [41usize, 20, 13, 10, 9, 8];
    let d = 16;
    // 12 profile bits per class
    let profiles: [[u8; 12]; 6] = [
        [1, 0, 0, 1, 0, 0, 1, 1, 1, 1, 0, 0],
        [0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 0],
        [0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 1],
        [1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1],
        [0, 0, 0, 1, 1, 1, 0, 0, 1, 0, 1, 1],
    ];
    let legs = [4.0f64, 2.0, 0.0, 6.0, 4.0, 8.0];
    let mut rng = rng_for("zoo", seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (class, &size) in class_sizes.iter().enumerate() {
        for _ in 0..size {
            let mut row = Vec::with_capacity(d);
            for &bit in &profiles[class] {
                let flip = rng.gen::<f64>() < 0.08;
                row.push(f64::from(u8::from((bit == 1) ^ flip)));
            }
            // count column with occasional off-profile values
            let leg = if rng.gen::<f64>() < 0.1 {
                2.0 * f64::from(rng.gen_range(0u8..5))
            } else {
                legs[class]
            };
            row.push(leg);
            // three uninformative bits
            for _ in 0..3 {
                row.push(f64::from(u8::from(rng.gen_bool(0.5))));
            }
            rows.push(row);
            labels.push(class as u32);
        }
    }
    let names = (0..d).map(|i| format!("t{i}")).collect();
    Dataset::new("zoo-synth", rows, labels, Some(names)).expect("generator invariants hold")
}

/// Box-Muller standard normal.
fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = loop {
        let v: f64 = rng.gen();
        if v > 0.0 {
            break v;
        }
    };
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Write a dataset as headered CSV with the label in the last column.
pub fn to_csv(ds: &Dataset) -> String {
    let mut out = String::new();
    let names: Vec<String> = match &ds.feature_names {
        Some(n) => n.clone(),
        None => (0..ds.feature_count()).map(|i| format!("f{i}")).collect(),
    };
    out.push_str(&names.join(","));
    out.push_str(",class\n");
    for i in 0..ds.instances() {
        for v in ds.row(i) {
            // trim float noise for readability; 6 significant digits round-trip fine here
            out.push_str(&format!("{:.6},", v));
        }
        out.push_str(&format!("{}\n", ds.label(i)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{parse_csv, LabelColumn};

    #[test]
    fn shapes_match_their_billing() {
        let wine = wine_like(0);
        assert_eq!(
            (wine.instances(), wine.feature_count(), wine.class_count()),
            (178, 13, 3)
        );
        let zoo = zoo_like(0);
        assert_eq!(
            (zoo.instances(), zoo.feature_count(), zoo.class_count()),
            (101, 16, 6)
        );
        let xor = two_feature_xor(200, 8, 0);
        assert_eq!(
            (xor.instances(), xor.feature_count(), xor.class_count()),
            (200, 10, 2)
        );
    }

    #[test]
    fn generation_is_deterministic() {
        let a = wine_like(5);
        let b = wine_like(5);
        for i in 0..a.instances() {
            assert_eq!(a.row(i), b.row(i));
        }
        let c = wine_like(6);
        assert_ne!(a.row(0), c.row(0));
    }

    #[test]
    fn csv_roundtrip_preserves_shape() {
        let ds = zoo_like(1);
        let text = to_csv(&ds);
        let back = parse_csv(&text, &LabelColumn::Last, "zoo-synth").unwrap();
        assert_eq!(back.instances(), ds.instances());
        assert_eq!(back.feature_count(), ds.feature_count());
        assert_eq!(back.labels(), ds.labels());
    }
}
