//! Reference designs used throughout the tests, the CLI presets and the demo.

use num_traits::Zero;

use crate::design::Design;
use crate::exact::{ratio, Rational};

/// Five points on three indeterminates with 3, 2 and 3 levels.
pub fn small_three_factor() -> Design {
    Design::from_i64(&[
        &[1, -1, 0],
        &[-1, -1, 1],
        &[0, 1, 1],
        &[0, 1, -1],
        &[1, -1, -1],
    ])
    .expect("valid design")
}

/// Nine-run definitive screening design on four three-level indeterminates.
pub fn definitive_screening_4() -> Design {
    Design::from_i64(&[
        &[0, 1, -1, -1],
        &[-1, 0, -1, 1],
        &[-1, -1, 0, -1],
        &[-1, 1, 1, 0],
        &[0, 0, 0, 0],
        &[0, -1, 1, 1],
        &[1, 0, 1, -1],
        &[1, 1, 0, 1],
        &[1, -1, -1, 0],
    ])
    .expect("valid design")
}

/// Seven points of the `{-1, 1}^4` cube.
pub fn seven_point_two_level() -> Design {
    Design::from_i64(&[
        &[1, 1, 1, 1],
        &[1, 1, -1, 1],
        &[1, -1, 1, 1],
        &[1, -1, -1, -1],
        &[-1, 1, 1, -1],
        &[-1, 1, -1, -1],
        &[-1, -1, 1, -1],
    ])
    .expect("valid design")
}

/// `k` equally spaced levels from -1 to 1, e.g. `-1, -1/3, 1/3, 1` for `k = 4`.
pub fn symmetric_levels(k: usize) -> Vec<Rational> {
    match k {
        0 => Vec::new(),
        1 => vec![Rational::zero()],
        _ => (0..k)
            .map(|i| ratio(2 * i as i64 - (k as i64 - 1), k as i64 - 1))
            .collect(),
    }
}

/// All points of the grid `levels[0] × levels[1] × ...`, first factor
/// varying slowest.
pub fn full_factorial(levels: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    levels.iter().fold(vec![Vec::new()], |acc, values| {
        acc.into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_level_values() {
        assert_eq!(
            symmetric_levels(4),
            vec![ratio(-1, 1), ratio(-1, 3), ratio(1, 3), ratio(1, 1)]
        );
        assert_eq!(symmetric_levels(3), vec![ratio(-1, 1), ratio(0, 1), ratio(1, 1)]);
    }

    #[test]
    fn factorial_size() {
        let grid = full_factorial(&[symmetric_levels(4), symmetric_levels(3)]);
        assert_eq!(grid.len(), 12);
        assert_eq!(grid[1], vec![ratio(-1, 1), ratio(0, 1)]);
    }
}
