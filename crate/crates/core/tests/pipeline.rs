use proptest::prelude::*;

use tepwp::metrics::{mix_at_snr, segsnr, MetricsReport};
use tepwp::noise::NoiseMode;
use tepwp::pipeline::{enhance_signal, enhance_signal_traced, EnhanceConfig};
use tepwp::pwpt::{build_perceptual_tree, default_tree, PerceptualTree};
use tepwp::shrink::{ShrinkageKind, ShrinkageSpec};
use tepwp::synth::{gen_test_signal, white_noise, SignalKind};
use tepwp::threshold::ThresholdMapping;
use tepwp::AudioBuffer;

fn vowel(seconds: f64) -> AudioBuffer {
    gen_test_signal(SignalKind::Vowel, seconds, 8000, 0).unwrap()
}

#[test]
fn deterministic_bit_identical() {
    let clean = vowel(1.0);
    let mix = mix_at_snr(&clean, &white_noise(1.0, 8000, 0.1, 1).unwrap(), 5.0).unwrap();
    for mode in [NoiseMode::Tracking, NoiseMode::Oracle] {
        let cfg = EnhanceConfig { noise_mode: mode, ..EnhanceConfig::default() };
        let a = enhance_signal(&mix.noisy, Some(&mix.scaled_noise), &cfg).unwrap();
        let b = enhance_signal(&mix.noisy, Some(&mix.scaled_noise), &cfg).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn zero_noise_reference_gives_identity() {
    let clean = vowel(0.75);
    let zero = AudioBuffer::silence(clean.len(), 8000).unwrap();
    let cfg = EnhanceConfig { noise_mode: NoiseMode::Oracle, ..EnhanceConfig::default() };
    let out = enhance_signal(&clean, Some(&zero), &cfg).unwrap();
    let err = out.samples().iter().zip(clean.samples()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-10, "{err}");
}

#[test]
fn every_method_shrinks_subband_energy() {
    let mix = mix_at_snr(&vowel(0.5), &white_noise(0.5, 8000, 0.1, 3).unwrap(), 0.0).unwrap();
    for kind in [
        ShrinkageKind::ProposedCustom,
        ShrinkageKind::MuLaw,
        ShrinkageKind::Semisoft,
        ShrinkageKind::Soft,
        ShrinkageKind::Hard,
    ] {
        for mapping in [ThresholdMapping::Sqrt, ThresholdMapping::Direct] {
            let cfg = EnhanceConfig {
                shrinkage: ShrinkageSpec::of_kind(kind),
                threshold_mapping: mapping,
                ..EnhanceConfig::default()
            };
            let r = enhance_signal_traced(&mix.noisy, None, &cfg).unwrap();
            assert_eq!(r.audio.len(), mix.noisy.len());
            for t in r.frames.iter().flatten() {
                assert!(t.energy_out <= t.energy_in * (1.0 + 1e-12), "{kind:?} {mapping:?}");
            }
        }
    }
}

#[test]
fn custom_tree_round_trips_through_config() {
    let tree = build_perceptual_tree(8000, 5, 16).unwrap();
    let parsed = PerceptualTree::from_spec_str(&tree.to_spec_string(), 8000).unwrap();
    assert_eq!(parsed, tree);
    let cfg = EnhanceConfig { tree: Some(parsed), frame_len: 256, hop: 128, ..EnhanceConfig::default() };
    let x = vowel(0.3);
    assert_eq!(enhance_signal(&x, None, &cfg).unwrap().len(), x.len());
    let wrong_rate = EnhanceConfig { tree: Some(default_tree(16000).unwrap()), ..EnhanceConfig::default() };
    assert!(enhance_signal(&x, None, &wrong_rate).is_err());
}

#[test]
fn enhancing_clean_speech_stays_close() {
    // with no noise in the mixture, tracking mode should not wreck the signal
    let clean = vowel(1.0);
    let out = enhance_signal(&clean, None, &EnhanceConfig::default()).unwrap();
    assert!(segsnr(&clean, &out, 256).unwrap() > 0.0);
}

#[test]
fn metrics_report_is_consistent() {
    let clean = vowel(1.0);
    let mix = mix_at_snr(&clean, &white_noise(1.0, 8000, 0.1, 2).unwrap(), 5.0).unwrap();
    let out = enhance_signal(&mix.noisy, None, &EnhanceConfig::default()).unwrap();
    let r = MetricsReport::compute(&clean, &mix.noisy, &out, 256, true).unwrap();
    assert_eq!(r.snr_seg_improvement, r.snr_seg_enhanced - r.snr_seg_noisy);
    assert!(r.wss >= 0.0);
    assert_eq!(r.per_frame.unwrap().len(), clean.len() / 256);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn output_length_matches_input(len in 1usize..3000, seed in 0u64..1000) {
        let x = white_noise(len as f64 / 8000.0, 8000, 0.2, seed).unwrap();
        let y = enhance_signal(&x, None, &EnhanceConfig::default()).unwrap();
        prop_assert_eq!(y.len(), x.len());
        prop_assert!(y.samples().iter().all(|v| v.is_finite()));
    }
}
