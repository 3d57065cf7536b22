use crate::{Error, Result};

/// Default cap on the number of compositions enumerated for one outer index.
pub const MAX_COMPOSITIONS: usize = 2_000_000;

/// A weak composition `r_1 + ... + r_k = l` with its multinomial weight
/// `l! / (r_1! ... r_k!)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    pub parts: Vec<u32>,
    pub weight: f64,
}

fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        // stays integral at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as f64
}

/// Number of weak compositions of `l` into `k` parts.
pub fn composition_count(l: u32, k: usize) -> f64 {
    if k == 0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    binomial(u64::from(l) + k as u64 - 1, k as u64 - 1)
}

/// All weak compositions of `l` into `k` parts, in lexicographic order.
pub fn enumerate_compositions(l: u32, k: usize, bound: usize) -> Result<Vec<Composition>> {
    let count = composition_count(l, k);
    if count > bound as f64 {
        return Err(Error::Resource(format!(
            "{count} compositions of {l} into {k} parts exceed the bound {bound}"
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    if k == 0 {
        if l == 0 {
            out.push(Composition {
                parts: Vec::new(),
                weight: 1.0,
            });
        }
        return Ok(out);
    }
    let mut parts = vec![0u32; k];
    fill(&mut parts, 0, l, &mut out);
    Ok(out)
}

fn fill(parts: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Composition>) {
    if pos + 1 == parts.len() {
        parts[pos] = remaining;
        out.push(Composition {
            weight: multinomial(parts),
            parts: parts.to_vec(),
        });
        return;
    }
    for r in (0..=remaining).rev() {
        parts[pos] = r;
        fill(parts, pos + 1, remaining - r, out);
    }
}

fn multinomial(parts: &[u32]) -> f64 {
    let mut total = 0u64;
    let mut w = 1.0;
    for &r in parts {
        total += u64::from(r);
        w *= binomial(total, u64::from(r));
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_weights() {
        let c = enumerate_compositions(4, 3, 1000).unwrap();
        assert_eq!(c.len(), 15);
        let total: f64 = c.iter().map(|c| c.weight).sum();
        // Σ multinomials = k^l
        assert_eq!(total, 81.0);
        assert!(c.iter().all(|c| c.parts.iter().sum::<u32>() == 4));
        assert_eq!(c[0].parts, vec![4, 0, 0]);
    }

    #[test]
    fn degenerate_part_counts() {
        assert_eq!(enumerate_compositions(0, 0, 10).unwrap().len(), 1);
        assert!(enumerate_compositions(3, 0, 10).unwrap().is_empty());
        let one = enumerate_compositions(7, 1, 10).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].weight, 1.0);
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            enumerate_compositions(40, 12, 1000),
            Err(Error::Resource(_))
        ));
        assert_eq!(composition_count(40, 12), binomial(51, 11));
    }
}
