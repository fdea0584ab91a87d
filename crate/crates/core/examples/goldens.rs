//! Closed forms against the reference tables.

use hyperkin::goldens::run_goldens;
use hyperkin::robot::RobotGeometry;

fn main() {
    let checks = run_goldens(&RobotGeometry::default()).unwrap();
    for c in &checks {
        println!(
            "{:5} {:>4} {:<22} {:>10.4} {:>12.6} {}",
            c.table,
            c.row,
            c.column,
            c.expected,
            c.got,
            if c.pass { "ok" } else { "MISS" }
        );
    }
    println!(
        "{}/{} within tolerance",
        checks.iter().filter(|c| c.pass).count(),
        checks.len()
    );
}
