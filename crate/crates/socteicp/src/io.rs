//! Plain-text instance formats and the random instance generator.
//!
//! Tensor files are line oriented, 1-based, whitespace separated, with `#`
//! comments:
//!
//! ```text
//! # optional comment
//! tensor 4 4 pairwise
//! 1 1 1 1 2
//! 1 3 1 1 3
//! ```
//!
//! Problem files name the cone partition and the two tensors, either by
//! relative path or inline:
//!
//! ```text
//! cones 2 2
//! a example1_A.tns
//! b example1_B.tns
//! ```
//!
//! ```text
//! cones 2 2
//! begin a
//! tensor 4 4 full
//! 1 1 1 1 1
//! end
//! begin b
//! tensor 4 4 full
//! 1 1 1 1 2
//! end
//! ```

use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::cone::ConeStructure;
use crate::problem::{Problem, ProblemError};
use crate::scalar::Real;
use crate::tensor::{SymTensor, Symmetry, TensorError};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("could not read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("no strictly K-positive A found in {attempts} attempts")]
    PositivityUnattainable { attempts: usize },
}

fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// Parse a tensor document.
pub fn parse_tensor<T: Real>(text: &str) -> Result<SymTensor<T>, IoError> {
    let mut lines = meaningful_lines(text);
    let (lno, header) = lines
        .next()
        .ok_or_else(|| IoError::Parse { line: 0, message: "empty tensor document".into() })?;
    let mut parts = header.split_whitespace();
    let bad = |message: String| IoError::Parse { line: lno, message };
    if parts.next() != Some("tensor") {
        return Err(bad("expected header `tensor <order> <dim> <symmetry>`".into()));
    }
    let order: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("bad order".into()))?;
    let dim: usize =
        parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad dim".into()))?;
    let sym = parts
        .next()
        .and_then(Symmetry::from_keyword)
        .ok_or_else(|| bad("symmetry must be full|trailing|pairwise|none".into()))?;
    if parts.next().is_some() {
        return Err(bad("trailing tokens after header".into()));
    }

    let mut generators = Vec::new();
    for (lno, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != order + 1 {
            return Err(IoError::Parse {
                line: lno,
                message: format!(
                    "expected {} indices and a value, got {} tokens",
                    order,
                    toks.len()
                ),
            });
        }
        let mut idx = Vec::with_capacity(order);
        for t in &toks[..order] {
            idx.push(t.parse::<usize>().map_err(|_| IoError::Parse {
                line: lno,
                message: format!("bad index `{t}`"),
            })?);
        }
        let value: f64 = toks[order].parse().map_err(|_| IoError::Parse {
            line: lno,
            message: format!("bad value `{}`", toks[order]),
        })?;
        generators.push((idx, T::c(value)));
    }
    Ok(SymTensor::build(order, dim, sym, generators)?)
}

/// Emit a tensor document; `parse_tensor(emit_tensor(t)) == t`.
pub fn emit_tensor<T: Real>(t: &SymTensor<T>) -> String {
    let mut out = format!("tensor {} {} {}\n", t.order(), t.dim(), t.symmetry().keyword());
    for (key, value) in t.entries() {
        for i in key {
            out.push_str(&i.to_string());
            out.push(' ');
        }
        out.push_str(&format!("{value}\n"));
    }
    out
}

enum TensorSource<T> {
    Path(String),
    Inline(SymTensor<T>),
}

/// Parse a problem document, resolving tensor references through `resolve`
/// (path -> file contents).
pub fn parse_problem_with<T: Real>(
    text: &str,
    resolve: &dyn Fn(&str) -> Result<String, IoError>,
) -> Result<Problem<T>, IoError> {
    let mut cones: Option<Vec<usize>> = None;
    let mut a: Option<TensorSource<T>> = None;
    let mut b: Option<TensorSource<T>> = None;

    let lines: Vec<(usize, &str)> = meaningful_lines(text).collect();
    let mut i = 0;
    while i < lines.len() {
        let (lno, line) = lines[i];
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("cones") => {
                let blocks: Result<Vec<usize>, _> = toks.map(|t| t.parse::<usize>()).collect();
                let blocks = blocks.map_err(|_| IoError::Parse {
                    line: lno,
                    message: "bad cone block sizes".into(),
                })?;
                cones = Some(blocks);
                i += 1;
            }
            Some(which @ ("a" | "b")) => {
                let path = toks.next().ok_or_else(|| IoError::Parse {
                    line: lno,
                    message: format!("`{which}` needs a file path"),
                })?;
                let src = TensorSource::Path(path.to_string());
                if which == "a" {
                    a = Some(src);
                } else {
                    b = Some(src);
                }
                i += 1;
            }
            Some("begin") => {
                let which = toks.next().ok_or_else(|| IoError::Parse {
                    line: lno,
                    message: "`begin` needs `a` or `b`".into(),
                })?;
                let start = i + 1;
                let mut end = start;
                while end < lines.len() && lines[end].1 != "end" {
                    end += 1;
                }
                if end == lines.len() {
                    return Err(IoError::Parse {
                        line: lno,
                        message: "unterminated block".into(),
                    });
                }
                let body: String =
                    lines[start..end].iter().map(|(_, l)| format!("{l}\n")).collect();
                let t = parse_tensor::<T>(&body)?;
                match which {
                    "a" => a = Some(TensorSource::Inline(t)),
                    "b" => b = Some(TensorSource::Inline(t)),
                    other => {
                        return Err(IoError::Parse {
                            line: lno,
                            message: format!("unknown block `{other}`"),
                        })
                    }
                }
                i = end + 1;
            }
            Some(other) => {
                return Err(IoError::Parse {
                    line: lno,
                    message: format!("unknown directive `{other}`"),
                })
            }
            None => i += 1,
        }
    }

    let cones = cones
        .ok_or_else(|| IoError::Parse { line: 0, message: "missing `cones` line".into() })?;
    let structure = ConeStructure::new(cones)
        .map_err(|e| IoError::Parse { line: 0, message: e.to_string() })?;
    let load = |src: Option<TensorSource<T>>, which: &str| -> Result<SymTensor<T>, IoError> {
        match src {
            Some(TensorSource::Inline(t)) => Ok(t),
            Some(TensorSource::Path(p)) => parse_tensor(&resolve(&p)?),
            None => {
                Err(IoError::Parse { line: 0, message: format!("missing tensor `{which}`") })
            }
        }
    };
    let a = load(a, "a")?;
    let b = load(b, "b")?;
    let problem = Problem::new(a, b, structure)?;
    // attach the sampled positivity sign; boundary zeros are tolerated,
    // a genuine sign flip is an error
    let report = problem.check_strict_positivity(200, 0)?;
    Ok(problem.with_positivity_sign(report.sign))
}

/// Parse a self-contained (inline) problem document.
pub fn parse_problem<T: Real>(text: &str) -> Result<Problem<T>, IoError> {
    parse_problem_with(text, &|path| {
        Err(IoError::Parse {
            line: 0,
            message: format!("file reference `{path}` in an inline-only context"),
        })
    })
}

/// Load a problem file from disk, resolving tensor paths relative to it.
pub fn load_problem<T: Real>(path: &Path) -> Result<Problem<T>, IoError> {
    let read = |p: &Path| {
        std::fs::read_to_string(p)
            .map_err(|source| IoError::Read { path: p.display().to_string(), source })
    };
    let text = read(path)?;
    let base = path.parent().map(|p| p.to_path_buf()).unwrap_or_default();
    parse_problem_with(&text, &move |rel| read(&base.join(rel)))
}

/// Emit a self-contained problem document with both tensors inline.
pub fn emit_problem_inline<T: Real>(p: &Problem<T>) -> String {
    let blocks: Vec<String> = p.structure().blocks().iter().map(|b| b.to_string()).collect();
    format!(
        "cones {}\nbegin a\n{}end\nbegin b\n{}end\n",
        blocks.join(" "),
        emit_tensor(p.a()),
        emit_tensor(p.b()),
    )
}

/// Recipe for a random instance: B fully symmetric with entries uniform on
/// (−2, 2) rounded to one decimal; A sparse with a positive pattern on the
/// squares (diagonal plus paired squares), which makes it strictly positive
/// on all of ℝⁿ∖{0}.
#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub order: usize,
    pub dim: usize,
    pub blocks: Vec<usize>,
    pub seed: u64,
}

/// Generate a random problem. Deterministic for a fixed spec; A is re-drawn
/// (fresh derived seeds) until the positivity sampler accepts it.
#[allow(clippy::needless_range_loop)]
pub fn generate_random_problem<T: Real>(spec: &RandomSpec) -> Result<Problem<T>, IoError> {
    let structure = ConeStructure::new(spec.blocks.clone())
        .map_err(|e| IoError::Parse { line: 0, message: e.to_string() })?;
    if structure.total() != spec.dim {
        return Err(IoError::Parse {
            line: 0,
            message: format!("cone blocks total {} but dim is {}", structure.total(), spec.dim),
        });
    }
    let m = spec.order;
    let n = spec.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    // B: every sorted m-tuple gets a rounded uniform draw
    let mut b_gens: Vec<(Vec<usize>, T)> = Vec::new();
    let mut idx = vec![1usize; m];
    'tuples: loop {
        let v = (rng.gen_range(-2.0..2.0) * 10.0f64).round() / 10.0;
        b_gens.push((idx.clone(), T::c(v)));
        // next sorted tuple
        let mut k = m;
        loop {
            if k == 0 {
                break 'tuples;
            }
            k -= 1;
            if idx[k] < n {
                idx[k] += 1;
                let bump = idx[k];
                for j in k + 1..m {
                    idx[j] = bump;
                }
                break;
            }
        }
    }
    let b = SymTensor::build(m, n, Symmetry::Full, b_gens)?;

    let max_attempts = 100;
    for attempt in 0..max_attempts {
        let mut a_rng = ChaCha8Rng::seed_from_u64(spec.seed ^ (0xA000 + attempt as u64));
        let mut a_gens: Vec<(Vec<usize>, T)> = Vec::new();
        let two_or_three =
            |r: &mut ChaCha8Rng| T::c(if r.gen_bool(0.5) { 2.0 } else { 3.0 });
        for i in 1..=n {
            let v = two_or_three(&mut a_rng);
            a_gens.push((vec![i; m], v));
        }
        for i in 1..=n {
            for j in i + 1..=n {
                // paired squares: x_i^(m/2) x_j^(m-m/2) monomial support
                let mut idx = vec![i; m / 2];
                idx.extend(std::iter::repeat_n(j, m - m / 2));
                let v = two_or_three(&mut a_rng);
                a_gens.push((idx, v));
            }
        }
        let a = SymTensor::build(m, n, Symmetry::Full, a_gens)?;
        let candidate = Problem::new(a, b.clone(), structure.clone())?;
        match candidate.check_strict_positivity(1000, spec.seed) {
            Ok(rep) if rep.sign == 1 && rep.min_observed > T::zero() => {
                return Ok(candidate.with_positivity_sign(1));
            }
            _ => continue,
        }
    }
    Err(IoError::PositivityUnattainable { attempts: max_attempts })
}
