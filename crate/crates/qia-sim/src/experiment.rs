//! Monte Carlo execution: independent trials over counter-based RNG
//! substreams, aggregated into result rows with Wilson intervals.

use rayon::prelude::*;

use qia_core::adversary::{
    ancilla_forge_p3, forge_p1, impersonation_trial, AncillaForgeAttack, ForgePolicy,
    MeasureResend, ProtocolId,
};
use qia_core::analysis::{round_detection_closed_form, AttackKind};
use qia_core::protocol1;
use qia_core::protocol2;
use qia_core::protocol3::{p3_protocol, HopTaps};
use qia_core::runtime::{
    rng_substream, transmit, AuthKey, HonestTap, Party, SeededRng, Thresholds, Transcript,
    Verdict,
};

use crate::config::{ConfigError, ExperimentConfig};
use crate::stats::wilson_interval;

/// Aggregated outcome of one experiment.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub protocol: ProtocolId,
    pub attack: AttackKind,
    pub n: usize,
    pub trials: usize,
    pub detections: usize,
    pub detection_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub closed_form: Option<f64>,
    pub seed: u64,
}

impl ResultRow {
    pub const CSV_HEADER: &'static str =
        "protocol,attack,n,trials,detections,detection_rate,ci_low,ci_high,closed_form,seed";

    pub fn to_csv_line(&self) -> String {
        let closed = self
            .closed_form
            .map(|c| format!("{c}"))
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.protocol.number(),
            self.attack.name(),
            self.n,
            self.trials,
            self.detections,
            self.detection_rate,
            self.ci_low,
            self.ci_high,
            closed,
            self.seed
        )
    }
}

/// Runs one full experiment: `trials` independent protocol instances, each
/// on its own substream, counting detections.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultRow, ConfigError> {
    let attack_coeffs = match (config.attack, &config.coefficients) {
        (AttackKind::AncillaForge, Some((b0, b1))) => {
            Some(ancilla_forge_p3(*b0, *b1).map_err(|e| ConfigError::Invalid(e.to_string()))?)
        }
        (AttackKind::AncillaForge, None) => {
            // The published extremal case |b0|²+|c0|² = 1.
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let b0 = [
                num_complex::Complex64::new(0.0, 0.0),
                num_complex::Complex64::new(h, 0.0),
                num_complex::Complex64::new(h, 0.0),
                num_complex::Complex64::new(0.0, 0.0),
            ];
            Some(ancilla_forge_p3(b0, None).map_err(|e| ConfigError::Invalid(e.to_string()))?)
        }
        _ => None,
    };

    let detections = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng_substream(config.seed, trial as u64);
            u64::from(run_trial(config, attack_coeffs.as_ref(), &mut rng))
        })
        .sum::<u64>() as usize;

    let detection_rate = detections as f64 / config.trials as f64;
    let (ci_low, ci_high) = wilson_interval(detections, config.trials);
    let closed_form = round_detection_closed_form(
        config.protocol,
        config.attack,
        config.n as u32,
        attack_coeffs.as_ref().map(|a| a.branch0()),
    );
    Ok(ResultRow {
        protocol: config.protocol,
        attack: config.attack,
        n: config.n,
        trials: config.trials,
        detections,
        detection_rate,
        ci_low,
        ci_high,
        closed_form,
        seed: config.seed,
    })
}

/// One trial: a full n-round protocol instance under the configured attack.
/// Returns true when the verifier rejects.
fn run_trial(
    config: &ExperimentConfig,
    forge: Option<&AncillaForgeAttack>,
    rng: &mut SeededRng,
) -> bool {
    let n = config.n;
    match config.attack {
        AttackKind::Impersonation => {
            impersonation_trial(config.protocol, n, config.thresholds, rng)
        }
        AttackKind::AncillaForge => {
            let attack = forge.expect("validated in run_experiment");
            (0..n).any(|_| !attack.run_round(rng))
        }
        AttackKind::None => run_tapped_trial(config, &mut HonestTap, rng),
        AttackKind::MeasureResend => run_tapped_trial(config, &mut MeasureResend::new(), rng),
        AttackKind::Forge => {
            run_tapped_trial(config, &mut forge_p1(ForgePolicy::UniformBb84), rng)
        }
    }
}

fn run_tapped_trial(
    config: &ExperimentConfig,
    tap: &mut dyn qia_core::runtime::ChannelTap,
    rng: &mut SeededRng,
) -> bool {
    let n = config.n;
    match config.protocol {
        ProtocolId::P1 => {
            let key = AuthKey::random(2 * n, rng).expect("even length");
            let mut transcript = Transcript::new();
            let outcome = protocol1::p1_directed(
                &key,
                Party::Alice,
                tap,
                config.thresholds,
                rng,
                &mut transcript,
                "1.2",
            )
            .expect("valid key");
            outcome.verdict == Verdict::Reject
        }
        ProtocolId::P2 => {
            let half: Vec<u8> = {
                use rand::Rng;
                (0..2 * n).map(|_| rng.gen_range(0..2u8)).collect()
            };
            let msg = protocol2::p2_encode(&half).expect("even length");
            let msg = transmit(msg, tap, rng);
            protocol2::p2_decode(msg, &half, config.thresholds, rng).verdict == Verdict::Reject
        }
        ProtocolId::P3 => {
            let key = AuthKey::random(2 * n, rng).expect("even length");
            // The same strategy taps every hop.
            let mut taps = HopTaps {
                alice_to_charlie: tap,
                bob_to_charlie: &mut HonestTap,
                charlie_to_bob: &mut HonestTap,
                charlie_to_alice: &mut HonestTap,
            };
            p3_protocol(&key, &mut taps, config.thresholds, rng)
                .expect("valid key")
                .verdict
                == Verdict::Reject
        }
    }
}

/// Detection-curve rows: the impersonation experiment for each n.
pub fn curve_rows(
    protocol: ProtocolId,
    n_min: usize,
    n_max: usize,
    trials: usize,
    seed: u64,
    thresholds: Thresholds,
) -> Result<Vec<ResultRow>, ConfigError> {
    if n_min == 0 || n_min > n_max {
        return Err(ConfigError::Invalid(format!(
            "need 1 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    (n_min..=n_max)
        .map(|n| {
            let config = ExperimentConfig {
                protocol,
                attack: AttackKind::Impersonation,
                n,
                trials,
                // Decorrelated but reproducible per-n seeds.
                seed: seed.wrapping_add(n as u64),
                thresholds,
                coefficients: None,
                out_path: None,
                deterministic: true,
            };
            run_experiment(&config)
        })
        .collect()
}
