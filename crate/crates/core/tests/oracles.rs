//! Independent-oracle tests: every check here recomputes the expected
//! behavior from scratch (hand-rolled draw replays, brute-force scans,
//! scalar energy arithmetic) instead of calling back into the code paths
//! under test.

use std::collections::BTreeMap;

use clustersim_core::protocols::{elect_cluster_heads, epoch_reset};
use clustersim_core::sim::form_clusters;
use clustersim_core::{Network, NetworkConfig, ProtocolConfig, SimRng, Simulation, TeenParams};

/// Scalar transmit-cost replica of the radio model, written independently
/// of the library's implementation.
fn oracle_tx(bits: u32, d: f64, e_elec: f64, eps_fs: f64, eps_mp: f64) -> f64 {
    let l = bits as f64;
    let d0 = (eps_fs / eps_mp).sqrt();
    if d < d0 {
        l * e_elec + l * eps_fs * d * d
    } else {
        l * e_elec + l * eps_mp * d * d * d * d
    }
}

#[test]
fn election_matches_scalar_draw_replay() {
    // Five nodes, LEACH p=0.2 (5-round epoch): replay the documented draw
    // protocol by hand and require the same CH sets round by round.
    let config = NetworkConfig {
        n_nodes: 5,
        seed: 2024,
        ..NetworkConfig::default()
    };
    let proto = ProtocolConfig::leach(0.2).unwrap();
    let mut net = Network::deploy(&config).unwrap();

    let mut rng = SimRng::new(2024);
    for _ in 0..10 {
        rng.uniform(); // deployment consumed 2N position draws
    }
    let mut eligible = [true; 5];
    for round in 0..15u32 {
        if round % 5 == 0 {
            eligible = [true; 5];
        }
        let mut expected = Vec::new();
        let phase = (round % 5) as f64;
        let threshold = 0.2 / (1.0 - 0.2 * phase);
        for (id, flag) in eligible.iter_mut().enumerate() {
            if !*flag {
                continue;
            }
            if rng.uniform() < threshold.min(1.0) {
                expected.push(id as u32);
                *flag = false;
            }
        }

        epoch_reset(&mut net, &proto, round);
        let heads = elect_cluster_heads(&mut net, &proto, round).unwrap();
        assert_eq!(heads, expected, "round {round} diverged from replay");
    }
}

#[test]
fn cluster_assignment_matches_brute_force_scan() {
    let config = NetworkConfig {
        seed: 42,
        ..NetworkConfig::default()
    };
    let net = Network::deploy(&config).unwrap();
    let chs = [7u32, 33, 81];
    let assignment = form_clusters(&net, &chs, None);

    let mut expected = BTreeMap::new();
    for node in &net.nodes {
        if chs.contains(&node.id) {
            continue;
        }
        let mut best = chs[0];
        let mut best_d = f64::INFINITY;
        for &ch in &chs {
            let other = &net.nodes[ch as usize];
            let d = ((node.x - other.x).powi(2) + (node.y - other.y).powi(2)).sqrt();
            if d < best_d {
                best_d = d;
                best = ch;
            }
        }
        expected.insert(node.id, best);
    }
    assert_eq!(assignment.members, expected);
    assert!(assignment.direct_to_bs.is_empty());
    // Partition invariant: CHs + members = all alive nodes.
    assert_eq!(assignment.members.len() + chs.len(), 100);
}

#[test]
fn round_zero_debit_matches_scalar_ledger() {
    // One LEACH round on the standard field; recompute every node's cost
    // from the trace with scalar arithmetic and compare the books.
    let config = NetworkConfig {
        seed: 7,
        ..NetworkConfig::default()
    };
    let mut sim = Simulation::new(&config, ProtocolConfig::leach(0.1).unwrap()).unwrap();
    let positions: Vec<(f64, f64)> = sim.network.nodes.iter().map(|n| (n.x, n.y)).collect();
    let before = sim.network.total_residual_energy();
    let (metrics, trace) = sim.step_traced().unwrap();

    let (e_elec, eps_fs, eps_mp, e_da) = (50e-9, 10e-12, 0.0013e-12, 5e-9);
    let bits = 4000u32;
    let bs = (50.0, 50.0);
    let dist = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();

    let mut cost = vec![0.0f64; 100];
    let mut delivered: BTreeMap<u32, u32> = trace.ch_ids.iter().map(|&c| (c, 0)).collect();
    for (&member, &ch) in &trace.assignment.members {
        let d = dist(positions[member as usize], positions[ch as usize]);
        cost[member as usize] += oracle_tx(bits, d, e_elec, eps_fs, eps_mp);
        *delivered.get_mut(&ch).unwrap() += 1;
    }
    for &ch in &trace.ch_ids {
        let k = delivered[&ch] as f64;
        let d_bs = dist(positions[ch as usize], bs);
        cost[ch as usize] += k * bits as f64 * e_elec
            + bits as f64 * (k + 1.0) * e_da
            + oracle_tx(bits, d_bs, e_elec, eps_fs, eps_mp);
    }
    for &id in &trace.assignment.direct_to_bs {
        cost[id as usize] += oracle_tx(
            bits,
            dist(positions[id as usize], bs),
            e_elec,
            eps_fs,
            eps_mp,
        );
    }

    let total_debit: f64 = cost.iter().sum();
    let engine_debit = before - metrics.total_residual;
    assert!(
        (engine_debit - total_debit).abs() <= 1e-9 * total_debit,
        "engine {engine_debit} vs oracle {total_debit}"
    );
    // Per-node books must agree too.
    for (id, node) in sim.network.nodes.iter().enumerate() {
        let expected = 0.5 - cost[id];
        assert!(
            (node.e_residual - expected).abs() <= 1e-12,
            "node {id}: {} vs {expected}",
            node.e_residual
        );
    }
}

#[test]
fn full_run_ledger_matches_independent_replay() {
    // Replay the complete energy ledger for every protocol over a run long
    // enough to include deaths, with an independently maintained per-node
    // book (clamped debits, one death evaluation per round).
    let protocols = [
        ProtocolConfig::leach(0.1).unwrap(),
        ProtocolConfig::sep(0.1).unwrap(),
        ProtocolConfig::deec(0.1).unwrap(),
        ProtocolConfig::teen(0.1, TeenParams::default()).unwrap(),
    ];
    for proto in protocols {
        let config = NetworkConfig {
            n_nodes: 40,
            e0: 0.04,
            seed: 11,
            m_fraction: 0.1,
            a_advanced: 1.0,
            max_rounds: 300,
            ..NetworkConfig::default()
        };
        let mut sim = Simulation::new(&config, proto.clone()).unwrap();
        let positions: Vec<(f64, f64)> = sim.network.nodes.iter().map(|n| (n.x, n.y)).collect();
        let mut book: Vec<f64> = sim.network.nodes.iter().map(|n| n.e_residual).collect();

        let (e_elec, eps_fs, eps_mp, e_da) = (50e-9, 10e-12, 0.0013e-12, 5e-9);
        let bits = 4000u32;
        let bs = (50.0, 50.0);
        let dist =
            |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();

        let mut rounds = 0;
        while let Some((metrics, trace)) = sim.step_traced() {
            let mut cost = vec![0.0f64; book.len()];
            let mut delivered: BTreeMap<u32, u32> = trace.ch_ids.iter().map(|&c| (c, 0)).collect();
            for (&member, &ch) in &trace.assignment.members {
                if trace.suppressed.contains(&member) {
                    continue;
                }
                let d = dist(positions[member as usize], positions[ch as usize]);
                cost[member as usize] += oracle_tx(bits, d, e_elec, eps_fs, eps_mp);
                *delivered.get_mut(&ch).unwrap() += 1;
            }
            for &ch in &trace.ch_ids {
                let k = delivered[&ch] as f64;
                let d_bs = dist(positions[ch as usize], bs);
                cost[ch as usize] += k * bits as f64 * e_elec
                    + bits as f64 * (k + 1.0) * e_da
                    + oracle_tx(bits, d_bs, e_elec, eps_fs, eps_mp);
            }
            for &id in &trace.assignment.direct_to_bs {
                cost[id as usize] += oracle_tx(
                    bits,
                    dist(positions[id as usize], bs),
                    e_elec,
                    eps_fs,
                    eps_mp,
                );
            }
            for (entry, c) in book.iter_mut().zip(&cost) {
                *entry = (*entry - c).max(0.0);
            }
            let oracle_total: f64 = book.iter().sum();
            assert!(
                (metrics.total_residual - oracle_total).abs() <= 1e-9 * oracle_total.max(1e-12),
                "{} round {}: engine {} vs oracle {oracle_total}",
                proto.kind,
                metrics.round,
                metrics.total_residual
            );
            rounds += 1;
            if metrics.n_alive == 0 {
                break;
            }
        }
        assert!(
            rounds > 50,
            "{}: run too short to exercise the ledger",
            proto.kind
        );
    }
}

#[test]
fn average_energy_equals_independent_fold() {
    let config = NetworkConfig {
        seed: 77,
        ..NetworkConfig::default()
    };
    let mut sim = Simulation::new(&config, ProtocolConfig::leach(0.1).unwrap()).unwrap();
    sim.step().unwrap();
    let alive: Vec<f64> = sim
        .network
        .nodes
        .iter()
        .filter(|n| n.alive)
        .map(|n| n.e_residual)
        .collect();
    let fold = alive.iter().sum::<f64>() / alive.len() as f64;
    let reported = sim.network.average_energy().unwrap();
    assert!((reported - fold).abs() <= 1e-12 * fold.max(1.0));
}

#[test]
fn deec_ch_counts_stay_in_band() {
    // Early-warning check for the per-node epoch clock: DEEC on the
    // standard field must keep its per-round CH count in a healthy band
    // rather than collapsing into epoch-boundary bursts.
    let config = NetworkConfig {
        seed: 3,
        max_rounds: 400,
        ..NetworkConfig::default()
    };
    let result =
        clustersim_core::sim::run_simulation(&config, &ProtocolConfig::deec(0.1).unwrap()).unwrap();
    let qualifying: Vec<u32> = result
        .per_round
        .iter()
        .filter(|m| m.n_alive >= 60)
        .map(|m| m.n_ch)
        .collect();
    assert!(qualifying.len() >= 300, "run died too early");
    let in_band = qualifying
        .iter()
        .filter(|&&ch| (1..=60).contains(&ch))
        .count();
    let frac = in_band as f64 / qualifying.len() as f64;
    assert!(frac >= 0.90, "in-band fraction {frac}");
    let mean = qualifying.iter().map(|&c| c as f64).sum::<f64>() / qualifying.len() as f64;
    assert!((2.0..=60.0).contains(&mean), "mean CH count {mean}");
}
