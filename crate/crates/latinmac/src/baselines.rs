//! Comparison schedulers: SMS static spectrum allocation and single-channel
//! TDMA with guaranteed-time-slot recovery.

use crate::simulator::Topology;

/// Marks the sensors that belong to some in-range pair of networks.
///
/// Membership is decided per network pair: when two coordinators are within
/// interference range, every sensor of both networks joins the region.
#[derive(Debug, Clone)]
pub struct InterferenceGraph {
    pub in_region: Vec<Vec<bool>>,
}

pub fn interference_graph(topo: &Topology, n_wbans: usize, sensors: usize) -> InterferenceGraph {
    let mut wban_hit = vec![false; n_wbans];
    for a in 0..n_wbans {
        for b in a + 1..n_wbans {
            if topo.in_range(topo.coordinators[a], topo.coordinators[b]) {
                wban_hit[a] = true;
                wban_hit[b] = true;
            }
        }
    }
    InterferenceGraph {
        in_region: wban_hit
            .iter()
            .map(|&hit| vec![hit; sensors])
            .collect(),
    }
}

/// Static per-sensor channel plan plus the network-local TDMA slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmsSchedule {
    /// Channel per (wban, sensor).
    pub channels: Vec<Vec<usize>>,
    /// TDMA slot per (wban, sensor); always the sensor index.
    pub slots: Vec<Vec<usize>>,
}

/// Greedy distinct-channel assignment over the interference region in
/// (wban, sensor) index order; once the `m` channels are exhausted the
/// assignment wraps around, so large regions share channels. Sensors outside
/// the region keep channel 0.
pub fn sms_build(graph: &InterferenceGraph, channels: usize) -> SmsSchedule {
    let mut rank = 0usize;
    let mut chan = Vec::with_capacity(graph.in_region.len());
    let mut slots = Vec::with_capacity(graph.in_region.len());
    for wban in &graph.in_region {
        let mut per_sensor = Vec::with_capacity(wban.len());
        for &interfering in wban {
            if interfering {
                per_sensor.push(rank % channels);
                rank += 1;
            } else {
                per_sensor.push(0);
            }
        }
        chan.push(per_sensor);
        slots.push((0..wban.len()).collect());
    }
    SmsSchedule {
        channels: chan,
        slots,
    }
}

/// Single shared channel, sensor-index TDMA slots and `K` guaranteed time
/// slots per superframe for collided sensors.
#[derive(Debug, Clone)]
pub struct ZigbeeSchedule {
    pub channel: usize,
    pub tdma_slots: Vec<usize>,
    pub cfp_slots: usize,
}

pub fn zigbee_build(n_wbans: usize, sensors: usize) -> Vec<ZigbeeSchedule> {
    (0..n_wbans)
        .map(|_| ZigbeeSchedule {
            channel: 0,
            tdma_slots: (0..sensors).collect(),
            cfp_slots: sensors,
        })
        .collect()
}

/// First-come GTS grant: `pending` sensors (already ordered) receive the
/// contention-free slots `0..capacity`; the overflow stays deferred.
pub fn zigbee_grant_gts(pending: &[usize], capacity: usize) -> (Vec<usize>, Vec<usize>) {
    let granted = pending.iter().copied().take(capacity).collect();
    let deferred = pending.iter().copied().skip(capacity).collect();
    (granted, deferred)
}
