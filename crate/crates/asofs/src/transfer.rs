//! Transfer functions: map real velocities to bit-flip decisions.

use crate::mask::FeatureMask;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Shape of the velocity-to-probability mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransferKind {
    /// Sigmoid `1 / (1 + e^-v)`.
    SShaped,
    /// `|tanh(v)|`.
    VShaped,
}

/// How the flip threshold is chosen per bit.
///
/// `Fixed` compares the transfer value against a constant (0.5 by
/// default), which makes the flip decision deterministic given the
/// velocity. `Sampled` draws a fresh Uniform[0,1] threshold per bit, the
/// behaviour common in the binarization literature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "value")]
pub enum FlipPolicy {
    Fixed(f64),
    Sampled,
}

impl Default for FlipPolicy {
    fn default() -> Self {
        FlipPolicy::Fixed(0.5)
    }
}

/// Flip probability for one velocity component.
pub fn transfer(kind: TransferKind, v: f64) -> f64 {
    debug_assert!(v.is_finite());
    match kind {
        TransferKind::SShaped => 1.0 / (1.0 + (-v).exp()),
        TransferKind::VShaped => v.tanh().abs(),
    }
}

/// Apply the flip rule to every bit: the bit is negated when the
/// threshold is strictly below the transfer value, kept otherwise.
/// In `Sampled` mode one threshold is drawn per bit, in mask order.
pub fn apply_flip<R: Rng>(
    mask: &FeatureMask,
    velocity: &[f64],
    kind: TransferKind,
    policy: FlipPolicy,
    rng: &mut R,
) -> FeatureMask {
    debug_assert_eq!(mask.len(), velocity.len());
    let mut out = mask.clone();
    for (d, &v) in velocity.iter().enumerate() {
        let threshold = match policy {
            FlipPolicy::Fixed(value) => value,
            FlipPolicy::Sampled => rng.gen(),
        };
        if threshold < transfer(kind, v) {
            out.negate(d);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Phase};

    #[test]
    fn transfer_values() {
        assert_eq!(transfer(TransferKind::SShaped, 0.0), 0.5);
        assert_eq!(transfer(TransferKind::VShaped, 0.0), 0.0);
        assert!((transfer(TransferKind::VShaped, 1.0) - 0.7615941559557649).abs() < 1e-15);
        assert!((transfer(TransferKind::SShaped, 2.0) - 0.8807970779778823).abs() < 1e-15);
        assert!((transfer(TransferKind::VShaped, -1.0) - 0.7615941559557649).abs() < 1e-15);
    }

    #[test]
    fn fixed_mode_flip_rule() {
        let mask = FeatureMask::from_bit_string("1010").unwrap();
        // S(v): 2.2 -> ~0.9 flips; -0.85 -> ~0.3 keeps; 0.0 -> exactly 0.5 keeps
        let velocity = [2.2, -0.85, 0.0, 3.0];
        let mut rng = substream(0, Phase::Flip, 1, 0);
        let out = apply_flip(
            &mask,
            &velocity,
            TransferKind::SShaped,
            FlipPolicy::Fixed(0.5),
            &mut rng,
        );
        assert_eq!(out.to_bit_string(), "0011");
    }

    #[test]
    fn zero_velocity_never_flips() {
        let mask = FeatureMask::from_bit_string("10110").unwrap();
        let velocity = [0.0; 5];
        for kind in [TransferKind::SShaped, TransferKind::VShaped] {
            let mut rng = substream(1, Phase::Flip, 1, 0);
            let out = apply_flip(&mask, &velocity, kind, FlipPolicy::Fixed(0.5), &mut rng);
            assert_eq!(out, mask);
        }
        // V(0) = 0 never clears any sampled threshold either
        let mut rng = substream(2, Phase::Flip, 1, 0);
        let out = apply_flip(
            &mask,
            &velocity,
            TransferKind::VShaped,
            FlipPolicy::Sampled,
            &mut rng,
        );
        assert_eq!(out, mask);
    }

    #[test]
    fn sampled_mode_frequency_tracks_transfer_value() {
        let mask = FeatureMask::zeros(1);
        let v = [1.3];
        for kind in [TransferKind::SShaped, TransferKind::VShaped] {
            let want = transfer(kind, v[0]);
            let mut rng = substream(5, Phase::Flip, 1, 0);
            let mut flips = 0usize;
            let trials = 10_000;
            for _ in 0..trials {
                if apply_flip(&mask, &v, kind, FlipPolicy::Sampled, &mut rng).get(0) {
                    flips += 1;
                }
            }
            let freq = flips as f64 / trials as f64;
            assert!(
                (freq - want).abs() < 0.02,
                "{kind:?}: {freq} vs {want}"
            );
        }
    }

    proptest::proptest! {
        // S-shape with a 0.5 threshold flips exactly the positive velocities.
        #[test]
        fn fixed_s_flip_is_a_sign_test(
            vs in proptest::collection::vec(-8.0f64..8.0, 1..64)
        ) {
            let mask = FeatureMask::zeros(vs.len());
            let mut rng = substream(6, Phase::Flip, 1, 0);
            let out = apply_flip(&mask, &vs, TransferKind::SShaped, FlipPolicy::Fixed(0.5), &mut rng);
            for (d, &v) in vs.iter().enumerate() {
                proptest::prop_assert_eq!(out.get(d), v > 0.0);
            }
        }

        // V-shape with a 0.5 threshold flips exactly |v| > atanh(0.5).
        #[test]
        fn fixed_v_flip_is_a_magnitude_test(
            vs in proptest::collection::vec(-8.0f64..8.0, 1..64)
        ) {
            let cut = 0.5f64.atanh();
            let mask = FeatureMask::zeros(vs.len());
            let mut rng = substream(7, Phase::Flip, 1, 0);
            let out = apply_flip(&mask, &vs, TransferKind::VShaped, FlipPolicy::Fixed(0.5), &mut rng);
            for (d, &v) in vs.iter().enumerate() {
                proptest::prop_assert_eq!(out.get(d), v.abs() > cut);
            }
        }

        // restricted to the velocity-cap regime; the sigmoid saturates to
        // exactly 1.0 in f64 beyond |v| ~ 37
        #[test]
        fn transfer_stays_in_unit_interval(v in -12.0f64..12.0) {
            let s = transfer(TransferKind::SShaped, v);
            let t = transfer(TransferKind::VShaped, v);
            proptest::prop_assert!(s > 0.0 && s < 1.0);
            proptest::prop_assert!((0.0..=1.0).contains(&t));
        }
    }
}
