//! Build DAIL schedules for a few coexisting networks and audit the pairwise
//! pattern overlaps: zero cells within a network, at most one cell across
//! networks.
//!
//! ```bash
//! cargo run --example dail_patterns
//! ```

use latinmac::scheduler::{dail_build, pattern_overlap};

fn main() -> latinmac::Result<()> {
    let (n_wbans, sensors, channels, seed) = (3, 4, 4, 7);
    let (schedules, spec) = dail_build(n_wbans, sensors, channels, seed)?;
    println!(
        "{} networks, {} sensors each, {} channels, frame of {} slots",
        n_wbans, sensors, channels, spec.active_slots
    );

    for ws in &schedules {
        println!("\nnetwork {} picked rectangle {}", ws.wban_id, ws.rectangle_index);
        for (j, s) in ws.sensors.iter().enumerate() {
            let cells: Vec<String> = s
                .pattern
                .cells
                .iter()
                .map(|c| format!("ch{}@t{}", c.channel, c.slot))
                .collect();
            println!("  sensor {j} (symbol {}): {}", s.symbol, cells.join(" "));
        }
    }

    println!("\npairwise overlaps (cells shared per superframe):");
    for a in &schedules {
        for b in &schedules {
            if (a.wban_id, 0) >= (b.wban_id, 1) {
                continue;
            }
            for (i, sa) in a.sensors.iter().enumerate() {
                for (j, sb) in b.sensors.iter().enumerate() {
                    let overlap = pattern_overlap(&sa.pattern, &sb.pattern);
                    if overlap > 0 {
                        println!(
                            "  wban{}:sensor{} x wban{}:sensor{} -> {} cell(s)",
                            a.wban_id, i, b.wban_id, j, overlap
                        );
                    }
                }
            }
        }
    }
    Ok(())
}
