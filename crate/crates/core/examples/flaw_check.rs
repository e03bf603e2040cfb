//! Evaluates the printed expression `L_{m,v}` for growing `m`. The values
//! settle at `(3 + 4k|ln v|)/(1 + 2k|ln v|)`, not at the claimed 2.
//!
//! cargo run --example flaw_check

use resched::experiments::flaw::CLAIMED_LIMIT;
use resched::experiments::flaw_table;

fn main() -> resched::Result<()> {
    let ms = [3.0, 10.0, 100.0, 1e4, 1e6, 1e8];
    let rows = flaw_table(&[1, 2], &[0.3, 0.5, 0.9], &ms)?;
    for chunk in rows.chunks(ms.len()) {
        let values: Vec<String> = chunk.iter().map(|r| format!("{:.5}", r.value)).collect();
        println!(
            "k={} v={}: {}  -> {:.5} (claimed {CLAIMED_LIMIT})",
            chunk[0].k,
            chunk[0].v,
            values.join(" "),
            chunk[0].limit
        );
    }
    Ok(())
}
