//! The two bundled benchmark instances.
//!
//! The tensor data is shipped as plain-text files whose lines carry the
//! nonzero components exactly as published: one `(i1 i2 | i3 i4)` entry per
//! line with `i1 ≤ i2`, `i3 ≤ i4`, expanded under the `pairwise` symmetry
//! class. Example 1 is 4th order, dimension 4, over `K² × K²`; Example 2 is
//! 4th order, dimension 6, over `K⁴ × K²`.

use crate::io::{parse_problem_with, parse_tensor, IoError};
use crate::problem::Problem;
use crate::scalar::Real;
use crate::tensor::SymTensor;

pub const EXAMPLE1_A_TNS: &str = include_str!("../assets/example1_A.tns");
pub const EXAMPLE1_B_TNS: &str = include_str!("../assets/example1_B.tns");
pub const EXAMPLE2_A_TNS: &str = include_str!("../assets/example2_A.tns");
pub const EXAMPLE2_B_TNS: &str = include_str!("../assets/example2_B.tns");
pub const EXAMPLE1_PROB: &str = include_str!("../assets/example1.prob");
pub const EXAMPLE2_PROB: &str = include_str!("../assets/example2.prob");

/// (file name, contents) pairs for one bundled instance.
pub fn bundle_files(name: &str) -> Option<Vec<(&'static str, &'static str)>> {
    match name {
        "example1" => Some(vec![
            ("example1_A.tns", EXAMPLE1_A_TNS),
            ("example1_B.tns", EXAMPLE1_B_TNS),
            ("example1.prob", EXAMPLE1_PROB),
        ]),
        "example2" => Some(vec![
            ("example2_A.tns", EXAMPLE2_A_TNS),
            ("example2_B.tns", EXAMPLE2_B_TNS),
            ("example2.prob", EXAMPLE2_PROB),
        ]),
        _ => None,
    }
}

fn resolve(name: &str) -> Result<String, IoError> {
    for files in [bundle_files("example1").unwrap(), bundle_files("example2").unwrap()] {
        for (fname, contents) in files {
            if fname == name {
                return Ok(contents.to_string());
            }
        }
    }
    Err(IoError::Parse { line: 0, message: format!("unknown bundled file {name}") })
}

pub fn example1<T: Real>() -> Problem<T> {
    parse_problem_with(EXAMPLE1_PROB, &resolve).expect("bundled instance parses")
}

pub fn example2<T: Real>() -> Problem<T> {
    parse_problem_with(EXAMPLE2_PROB, &resolve).expect("bundled instance parses")
}

pub fn example1_tensors<T: Real>() -> (SymTensor<T>, SymTensor<T>) {
    (
        parse_tensor(EXAMPLE1_A_TNS).expect("bundled tensor parses"),
        parse_tensor(EXAMPLE1_B_TNS).expect("bundled tensor parses"),
    )
}

pub fn example2_tensors<T: Real>() -> (SymTensor<T>, SymTensor<T>) {
    (
        parse_tensor(EXAMPLE2_A_TNS).expect("bundled tensor parses"),
        parse_tensor(EXAMPLE2_B_TNS).expect("bundled tensor parses"),
    )
}

/// Frozen manifest of the bundled tensor data: entry counts and an
/// order-independent FNV-1a digest over the canonical entries.
pub const MANIFEST: [(&str, usize, u64); 4] = [
    ("example1_A", 34, 0x552fc454fdbe281b),
    ("example1_B", 58, 0xa65819b161b6fc39),
    ("example2_A", 70, 0x88d31532fb9f107d),
    ("example2_B", 427, 0x021fd713138dd7d8),
];

/// FNV-1a digest of a tensor's canonical entries, matching [`MANIFEST`].
pub fn tensor_digest(t: &SymTensor<f64>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |byte: u8| {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    for (key, value) in t.entries() {
        let head: String =
            key.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",") + ":";
        for b in head.bytes() {
            eat(b);
        }
        for b in value.to_bits().to_le_bytes() {
            eat(b);
        }
        eat(b';');
    }
    h
}
