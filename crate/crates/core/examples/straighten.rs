// Normal ordering in U(V): brackets, products and iterated adjoints.

use vira::expr::parse_uea;
use vira::virasoro::{ad_power, bracket, Uea};

fn main() {
    let u = parse_uea("d2*d-2").expect("valid expression");
    println!("d2*d-2          = {u}");
    assert_eq!(u.to_string(), "d-2*d2 - 4*d0 + (1/2)*z");

    for (i, j) in [(1, -1), (3, -3), (2, 5)] {
        println!("[d{i}, d{j}] = {}", bracket(i, j));
    }

    let u = parse_uea("d3*d1*d-1*d-2").expect("valid expression");
    println!("d3*d1*d-1*d-2   = {u}");
    assert_eq!(u.homogeneous_weight(), Some(1));

    // ad(d1)^k d-1 dies at k = 3
    for k in 0..=3 {
        println!("ad(d1)^{k} d-1    = {}", ad_power(1, k, &Uea::generator(-1)));
    }
    assert!(ad_power(1, 3, &Uea::generator(-1)).is_zero());
}
