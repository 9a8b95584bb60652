//! Fredholm index of Toeplitz operators from finite sections, against the
//! winding number of the symbol.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regulab::operators::{toeplitz_index, WindowSpec};
use regulab::{TrigPoly, UnitFunction};

fn main() -> regulab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [64, 128] {
        let w = WindowSpec::new(n, 48)?;
        for wind in [-2, -1, 0, 1, 2] {
            let u = UnitFunction::new(vec![wind], TrigPoly::random(&mut rng, 1, 3, 4, 0.2))?;
            println!("N = {n:>3}  winding {wind:>2}  index {:>2}", toeplitz_index(&u, &w)?);
        }
    }
    Ok(())
}
