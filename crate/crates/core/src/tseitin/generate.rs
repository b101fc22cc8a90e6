use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ChargedGraph, TseitinError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Charges {
    AllZero,
    SingleOne(usize),
    Random(u64),
    /// One charge per component, on its smallest vertex.
    TargetUnsat,
}

fn with_charges(n: usize, pairs: &[(usize, usize)], charges: Charges) -> Result<ChargedGraph, TseitinError> {
    let g = ChargedGraph::from_pairs(vec![false; n], pairs)?;
    let c = match charges {
        Charges::AllZero => vec![false; n],
        Charges::SingleOne(v) => {
            if v >= n {
                return Err(TseitinError::UnknownVertex(v));
            }
            let mut c = vec![false; n];
            c[v] = true;
            c
        }
        Charges::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| rng.gen()).collect()
        }
        Charges::TargetUnsat => {
            let mut c = vec![false; n];
            for comp in g.components() {
                c[*comp.first().unwrap()] = true;
            }
            c
        }
    };
    Ok(g.with_charges(c))
}

/// `rows × cols` grid. Vertex `r·cols + c`; each vertex contributes its right
/// edge, then its down edge.
pub fn grid(rows: usize, cols: usize, charges: Charges) -> Result<ChargedGraph, TseitinError> {
    if rows == 0 || cols == 0 {
        return Err(TseitinError::InvalidParameters(format!("grid({rows},{cols})")));
    }
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                pairs.push((v, v + 1));
            }
            if r + 1 < rows {
                pairs.push((v, v + cols));
            }
        }
    }
    with_charges(rows * cols, &pairs, charges)
}

pub fn cycle(n: usize, charges: Charges) -> Result<ChargedGraph, TseitinError> {
    if n < 3 {
        return Err(TseitinError::InvalidParameters(format!("cycle({n})")));
    }
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    with_charges(n, &pairs, charges)
}

pub fn complete(n: usize, charges: Charges) -> Result<ChargedGraph, TseitinError> {
    if n == 0 {
        return Err(TseitinError::InvalidParameters("complete(0)".into()));
    }
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    with_charges(n, &pairs, charges)
}

pub fn path(n: usize, charges: Charges) -> Result<ChargedGraph, TseitinError> {
    if n == 0 {
        return Err(TseitinError::InvalidParameters("path(0)".into()));
    }
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    with_charges(n, &pairs, charges)
}

/// Simple `d`-regular graph from the pairing model, resampled until simple.
pub fn random_regular(n: usize, d: usize, seed: u64, charges: Charges) -> Result<ChargedGraph, TseitinError> {
    if d >= n || (n * d) % 2 == 1 {
        return Err(TseitinError::InvalidParameters(format!("random_regular({n},{d})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    for _ in 0..10_000 {
        points.shuffle(&mut rng);
        let mut pairs: Vec<(usize, usize)> = points
            .chunks(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        pairs.sort_unstable();
        let simple = pairs.iter().all(|&(a, b)| a != b) && pairs.windows(2).all(|w| w[0] != w[1]);
        if simple {
            return with_charges(n, &pairs, charges);
        }
    }
    Err(TseitinError::InvalidParameters(format!(
        "random_regular({n},{d}): no simple pairing found"
    )))
}
