//! Prints the pre-Bloch, Bloch and K₂ groups of each zoo ring.

use blochlab::bloch::bw_report;
use blochlab::rings::{ring, ZOO};

fn main() -> blochlab::Result<()> {
    for spec in ZOO {
        let rep = bw_report(&ring(spec)?)?;
        let g = &rep.groups;
        println!(
            "{spec:>14}  p = {:<16} B = {:<16} K2 = {:<6} {}",
            g.pre_bloch.description,
            g.bloch.description,
            g.k2m_symbolic.description,
            if rep.all_pass() { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
