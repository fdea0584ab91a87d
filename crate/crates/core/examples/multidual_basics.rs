//! Jets carry a function's value and its time derivatives through ordinary
//! arithmetic. Here f(t) = sin(t²)·√(1 + t) is differentiated three times
//! at t = 0.7 and compared against the hand-derived first derivative.

use hyperkin::multidual::{Elementary, Jet3, MultiDual};

fn main() {
    let t0 = 0.7;
    // t itself: value t0, dt/dt = 1, higher derivatives zero.
    let t = Jet3::variable(t0, &[1.0]);
    let f = (t * t).sin() * (MultiDual::constant(1.0) + t).sqrt();

    println!("f     = {:.12}", f.re());
    for k in 1..=3 {
        println!("f^({k}) = {:.12}", f.derivative(k).unwrap());
    }

    let by_hand = 2.0 * t0 * (t0 * t0).cos() * (1.0 + t0).sqrt()
        + (t0 * t0).sin() / (2.0 * (1.0 + t0).sqrt());
    println!("f' by hand = {by_hand:.12}");

    // ε is nilpotent: the infinitesimal part raised past the order vanishes.
    let e = t.infinitesimal();
    println!("ε⁴ = {:?}", e * e * e * e);

    // Lifts check their domain at the real part.
    let neg = Jet3::variable(-1.0, &[1.0]);
    println!(
        "sqrt(-1 + ε) -> {}",
        MultiDual::lift(Elementary::Sqrt, &neg).unwrap_err()
    );
}
