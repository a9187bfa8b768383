//! Build the complete orthogonal family of a prime order and check every
//! pair.
//!
//! ```bash
//! cargo run --example gen_latin
//! ```

use latinmac::latin::{is_orthogonal, mols_family};

fn main() -> latinmac::Result<()> {
    let order = 5;
    let family = mols_family(order)?;
    println!("order {order}: family of {} squares", family.len());
    for (i, square) in family.members().iter().enumerate() {
        println!("\nsquare a={} :", i + 1);
        print!("{}", square.truncate(order).dump());
    }

    let mut pairs = 0;
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            assert!(is_orthogonal(family.get(i), family.get(j))?);
            pairs += 1;
        }
    }
    println!("\nall {pairs} unordered pairs are orthogonal");
    Ok(())
}
