//! Show CHIM network setup: default channels, TDMA slots and the per-sensor
//! backup (channel, slot) hopping cycle used after a failed transmission.
//!
//! ```bash
//! cargo run --example chim_backup_hopping
//! ```

use latinmac::scheduler::chim_build;

fn main() -> latinmac::Result<()> {
    let (n_wbans, sensors, channels, seed) = (2, 5, 4, 3);
    let (schedules, spec) = chim_build(n_wbans, sensors, channels, seed)?;
    println!(
        "active frame: {} TDMA + {} backup slots",
        spec.tdma_slots, spec.recovery_slots
    );

    let cycle = channels.min(sensors) as u64;
    for ws in &schedules {
        println!(
            "\nnetwork {}: default channel {}, rectangle {}",
            ws.wban_id, ws.default_channel, ws.rectangle_index
        );
        for (j, sensor) in ws.sensors.iter().enumerate() {
            let hops: Vec<String> = (0..cycle)
                .map(|f| match ws.backup_for(j, f) {
                    Some(c) => format!("ch{}@t{}", c.channel, c.slot),
                    None => "out-of-frame".to_string(),
                })
                .collect();
            println!(
                "  sensor {j}: tdma slot {}, backup cycle [{}]",
                sensor.tdma_slot,
                hops.join(" -> ")
            );
        }
    }
    println!("\nbackup channels never equal the default channel of their network");
    Ok(())
}
