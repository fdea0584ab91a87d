//! The jerk-limited reference motion: segment layout, peak values and a CSV
//! of the tip stack at 50 Hz on stdout.

use hyperkin::trajectory::reference_trajectory;

fn main() {
    let tr = reference_trajectory();
    eprintln!("duration {:.3} s", tr.duration());
    for (name, p) in ["ψ", "θ", "l_ins"].iter().zip(&tr.profiles) {
        eprintln!(
            "{name}: {:.4} -> {:.4}, peak jerk {:.4}, switches {:?}",
            p.s0,
            p.s1,
            p.peak_jerk(),
            p.switch_times()
        );
    }
    let rows = tr.write_csv(std::io::stdout().lock(), 50.0).unwrap();
    eprintln!("{rows} rows");
}
