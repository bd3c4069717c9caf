//! The three reference bases of the four-dimensional example lattice.

use iqoap_core::lattice::Basis;

/// Shortest basis; squared lengths 1, 4, 9, 16.
pub const BASIS_A: [[i64; 4]; 4] = [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]];

pub const BASIS_B: [[i64; 4]; 4] = [[3, 0, 15, -12], [0, 4, 3, 8], [28, -18, 9, 8], [0, 0, 3, -4]];

/// The long, nearly parallel basis the convergence experiment starts from.
pub const BASIS_C: [[i64; 4]; 4] =
    [[25, 78, 105, 160], [-3, 32, 18, 64], [53, 128, 195, 264], [0, 8, 9, 12]];

/// Squared successive minima of the lattice all three bases generate.
pub const MINIMA: [i64; 4] = [1, 4, 9, 16];

pub const LABELS: [&str; 3] = ["a", "b", "c"];

pub fn builtin(label: &str) -> Option<Basis> {
    let rows = match label {
        "a" => BASIS_A,
        "b" => BASIS_B,
        "c" => BASIS_C,
        _ => return None,
    };
    Some(Basis::new(rows.iter().map(|r| r.to_vec()).collect()).expect("builtin bases are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checksum(b: &Basis) -> i64 {
        // position-weighted so transposed or swapped entries change it
        b.rows()
            .iter()
            .flatten()
            .enumerate()
            .map(|(i, &x)| (i as i64 + 1) * x)
            .sum()
    }

    #[test]
    fn builtins_match_transcription() {
        let sums: Vec<i64> = LABELS.iter().map(|l| checksum(&builtin(l).unwrap())).collect();
        assert_eq!(sums, vec![1 + 2 * 6 + 3 * 11 + 4 * 16, 357, 9460]);
        let dets: Vec<i128> = LABELS.iter().map(|l| builtin(l).unwrap().determinant()).collect();
        assert_eq!(dets, vec![24, 24, -24]);
        assert!(builtin("d").is_none());
        assert_eq!(builtin("a").unwrap().sorted_squared_lengths(), MINIMA.to_vec());
    }
}
