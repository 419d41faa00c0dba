//! The full inventory of sporadic generators: two plane automorphisms,
//! one birational map per orbit class on each minimal surface, and the
//! two Geiser types with a 5+2 base orbit. The tally is 111.
//!
//! Run with: cargo run --release --example generator_inventory

fn main() {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let inv = cremona2::cli::generator_inventory(&pool);
    for row in &inv.rows {
        println!("{:>3}  {:<3} orbit size {:>4}  {}", row.count, row.surface, row.base_orbit, row.kind);
        for rep in row.representatives.iter().take(3) {
            println!("         {rep}");
        }
        if row.representatives.len() > 3 {
            println!("         ... {} more", row.representatives.len() - 3);
        }
    }
    println!("\ntotal: {}", inv.total);
}
