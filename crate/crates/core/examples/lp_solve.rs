//! Solve a small allocation LP with the simplex solver and check it against
//! brute-force vertex enumeration.

use roguewk::lp::{self, solve_by_vertex_enumeration, LpInstance};

fn main() -> roguewk::Result<()> {
    let inst = LpInstance {
        objective: vec![0.5, 0.7, 0.3],
        costs: vec![vec![0.2, 0.1], vec![0.9, 0.4], vec![0.05, 0.05]],
        rate: 0.5,
    };
    let sol = lp::solve(&inst)?;
    let reference = solve_by_vertex_enumeration(&inst)?;

    for (a, p) in sol.pi.iter().enumerate() {
        println!("pi[{a}] = {p:.6}");
    }
    println!("null  = {:.6}", sol.null_mass);
    println!("value = {:.9} (enumeration {:.9})", sol.value, reference.value);
    println!("max constraint violation = {:e}", inst.violation(&sol.pi));
    Ok(())
}
