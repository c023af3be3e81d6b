//! Standard families of finite inverse monoids.
//!
//! Builder specs are `kind` or `kind:n`; `A*B` is the direct product and
//! `adjoin_zero:A` adjoins a fresh zero. The unit is always index 0.

use crate::semigroup::{FiniteInvSgp, SemigroupError};

pub const KINDS: &[&str] = &[
    "trivial",
    "chain",
    "diamond",
    "cyclic",
    "symmetric_group",
    "group_with_zero",
    "brandt_unital",
    "symmetric_inverse",
];

/// Build a named family with integer parameters.
pub fn build(kind: &str, params: &[usize]) -> Result<FiniteInvSgp, SemigroupError> {
    let one = |default: Option<usize>| -> Result<usize, SemigroupError> {
        match (params, default) {
            ([n], _) => Ok(*n),
            ([], Some(d)) => Ok(d),
            _ => Err(SemigroupError::UnknownBuilder(format!("{kind} expects one size parameter"))),
        }
    };
    let unsupported = |size| Err(SemigroupError::UnsupportedSize { kind: kind.to_string(), size });
    match kind {
        "trivial" => chain(1),
        "chain" => match one(None)? {
            m @ 1..=64 => chain(m),
            m => unsupported(m),
        },
        "diamond" => diamond(),
        "cyclic" => match one(None)? {
            n @ 1..=60 => cyclic(n),
            n => unsupported(n),
        },
        "symmetric_group" => match one(None)? {
            n @ 1..=4 => symmetric_group(n),
            n => unsupported(n),
        },
        "group_with_zero" => match one(None)? {
            n @ 1..=60 => adjoin_zero(&cyclic(n)?),
            n => unsupported(n),
        },
        "brandt_unital" => match one(None)? {
            n @ 1..=6 => brandt_unital(n),
            n => unsupported(n),
        },
        "symmetric_inverse" => match one(None)? {
            n @ 1..=3 => symmetric_inverse(n),
            n => unsupported(n),
        },
        _ => Err(SemigroupError::UnknownBuilder(kind.to_string())),
    }
}

/// Parse and build a spec such as `chain:3`, `cyclic:2*chain:2` or `adjoin_zero:cyclic:3`.
pub fn build_spec(spec: &str) -> Result<FiniteInvSgp, SemigroupError> {
    let spec = spec.trim();
    if spec.contains('*') {
        let mut parts = spec.split('*').map(build_spec);
        let first = parts.next().expect("split yields at least one part")?;
        return parts.try_fold(first, |acc, next| product(&acc, &next?));
    }
    if let Some(inner) = spec.strip_prefix("adjoin_zero:") {
        return adjoin_zero(&build_spec(inner)?);
    }
    let (kind, params) = match spec.split_once(':') {
        Some((k, p)) => {
            let params = p
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| SemigroupError::UnknownBuilder(spec.to_string()))?;
            (k, params)
        }
        None => (spec, vec![]),
    };
    build(kind, &params)
}

fn from_fn(
    names: Vec<String>,
    mul: impl Fn(usize, usize) -> usize,
    zero: Option<usize>,
) -> Result<FiniteInvSgp, SemigroupError> {
    let n = names.len();
    let table = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
    FiniteInvSgp::validate(names, table, 0, zero)
}

/// The m-element chain `1 > e1 > … > e(m−1)`.
pub fn chain(m: usize) -> Result<FiniteInvSgp, SemigroupError> {
    let names = (0..m).map(|i| if i == 0 { "1".to_string() } else { format!("e{i}") }).collect();
    from_fn(names, |a, b| a.max(b), None)
}

/// The four-element Boolean lattice `{1, a, b, ab}`.
pub fn diamond() -> Result<FiniteInvSgp, SemigroupError> {
    let names = ["1", "a", "b", "ab"].map(String::from).to_vec();
    // bit 0 = a, bit 1 = b; meet is union of the bits
    from_fn(names, |x, y| x | y, None)
}

/// A finite meet-semilattice from its meet table; the top becomes the unit.
pub fn semilattice(names: Vec<String>, meet: Vec<Vec<usize>>) -> Result<FiniteInvSgp, SemigroupError> {
    let n = names.len();
    let top = (0..n)
        .find(|&t| meet.get(t).is_some_and(|row| row.len() == n && (0..n).all(|x| row[x] == x)))
        .ok_or_else(|| SemigroupError::Malformed("meet table has no top element".into()))?;
    // move the top to index 0
    let perm: Vec<usize> = std::iter::once(top).chain((0..n).filter(|&i| i != top)).collect();
    let mut inv = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let table = perm.iter().map(|&a| perm.iter().map(|&b| inv[meet[a][b]]).collect()).collect();
    let names = perm.iter().map(|&i| names[i].clone()).collect();
    let s = FiniteInvSgp::validate(names, table, 0, None)?;
    if !s.is_semilattice() {
        return Err(SemigroupError::Malformed("meet table is not idempotent".into()));
    }
    Ok(s)
}

pub fn cyclic(n: usize) -> Result<FiniteInvSgp, SemigroupError> {
    let names = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g{i}"),
        })
        .collect();
    from_fn(names, |a, b| (a + b) % n, None)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in 0..n {
            if !prefix.contains(&x) {
                prefix.push(x);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

/// `S_n` in one-line notation, composition `(στ)(x) = σ(τ(x))`.
pub fn symmetric_group(n: usize) -> Result<FiniteInvSgp, SemigroupError> {
    let perms = permutations(n);
    let names = perms.iter().map(|p| p.iter().map(|x| (x + 1).to_string()).collect()).collect();
    let find = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed under composition");
    from_fn(names, |a, b| find(&(0..n).map(|x| perms[a][perms[b][x]]).collect()), None)
}

/// Unital Brandt semigroup `B_n¹`: matrix units `(i,j)`, a declared zero and a unit.
pub fn brandt_unital(n: usize) -> Result<FiniteInvSgp, SemigroupError> {
    let mut names = vec!["1".to_string()];
    for i in 1..=n {
        for j in 1..=n {
            names.push(format!("({i},{j})"));
        }
    }
    names.push("0".to_string());
    let zero = n * n + 1;
    let unit_of = |x: usize| ((x - 1) / n, (x - 1) % n);
    let mul = |a: usize, b: usize| {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        if a == zero || b == zero {
            return zero;
        }
        let ((i, j), (k, l)) = (unit_of(a), unit_of(b));
        if j == k {
            1 + i * n + l
        } else {
            zero
        }
    };
    from_fn(names, mul, Some(zero))
}

/// Symmetric inverse monoid `I_n`, composition right to left. The empty map
/// is an ordinary idempotent here, no zero is declared.
pub fn symmetric_inverse(n: usize) -> Result<FiniteInvSgp, SemigroupError> {
    let mut maps: Vec<Vec<Option<usize>>> = Vec::new();
    fn rec(prefix: &mut Vec<Option<usize>>, n: usize, out: &mut Vec<Vec<Option<usize>>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        prefix.push(None);
        rec(prefix, n, out);
        prefix.pop();
        for y in 0..n {
            if !prefix.contains(&Some(y)) {
                prefix.push(Some(y));
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    rec(&mut Vec::new(), n, &mut maps);
    let identity: Vec<Option<usize>> = (0..n).map(Some).collect();
    maps.sort_by_key(|m| (*m != identity, std::cmp::Reverse(m.iter().flatten().count()), m.clone()));
    let names =
        maps.iter().map(|m| m.iter().map(|x| x.map_or("_".to_string(), |y| (y + 1).to_string())).collect()).collect();
    let find = |m: &Vec<Option<usize>>| maps.iter().position(|x| x == m).expect("closed under composition");
    let compose = |a: usize, b: usize| find(&(0..n).map(|x| maps[b][x].and_then(|y| maps[a][y])).collect());
    from_fn(names, compose, None)
}

/// Direct product; the zero is declared iff both factors declare one.
pub fn product(a: &FiniteInvSgp, b: &FiniteInvSgp) -> Result<FiniteInvSgp, SemigroupError> {
    let m = b.len();
    let names = a
        .elements()
        .flat_map(|x| b.elements().map(move |y| (x, y)))
        .map(|(x, y)| format!("({},{})", a.name(x), b.name(y)))
        .collect();
    let mul = |p: usize, q: usize| a.mul(p / m, q / m) * m + b.mul(p % m, q % m);
    let zero = a.zero().zip(b.zero()).map(|(x, y)| x * m + y);
    let n = a.len() * m;
    let table = (0..n).map(|p| (0..n).map(|q| mul(p, q)).collect()).collect();
    FiniteInvSgp::validate(names, table, a.unit() * m + b.unit(), zero)
}

/// `S ∪ {0}` with a fresh declared zero.
pub fn adjoin_zero(s: &FiniteInvSgp) -> Result<FiniteInvSgp, SemigroupError> {
    let mut name = "0".to_string();
    while s.index_of(&name).is_ok() {
        name.push('\'');
    }
    let mut names = s.names().to_vec();
    names.push(name);
    let z = s.len();
    let table = (0..=z).map(|a| (0..=z).map(|b| if a == z || b == z { z } else { s.mul(a, b) }).collect()).collect();
    FiniteInvSgp::validate(names, table, s.unit(), Some(z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(build("chain", &[2]).unwrap().len(), 2);
        assert_eq!(build("symmetric_inverse", &[2]).unwrap().len(), 7);
        assert_eq!(build("symmetric_inverse", &[3]).unwrap().len(), 34);
        assert_eq!(build("brandt_unital", &[2]).unwrap().len(), 6);
        assert_eq!(build("symmetric_group", &[3]).unwrap().len(), 6);
        assert_eq!(build("group_with_zero", &[3]).unwrap().len(), 4);
        assert_eq!(build_spec("cyclic:2*chain:2").unwrap().len(), 4);
        assert_eq!(build_spec("adjoin_zero:chain:2").unwrap().zero(), Some(2));
    }

    #[test]
    fn unsupported_sizes() {
        assert_eq!(
            build("symmetric_inverse", &[4]).unwrap_err(),
            SemigroupError::UnsupportedSize { kind: "symmetric_inverse".into(), size: 4 }
        );
        assert!(build_spec("nonsense:3").is_err());
    }

    #[test]
    fn symmetric_inverse_structure() {
        let i2 = symmetric_inverse(2).unwrap();
        assert_eq!(i2.name(0), "12");
        assert_eq!(i2.idempotents().count(), 4);
        assert!(!i2.is_e_unitary());
        let s3 = symmetric_group(3).unwrap();
        assert!(!s3.is_commutative());
        assert!(s3.is_group());
    }

    #[test]
    fn semilattice_from_meet_table() {
        let names = ["bot", "top"].map(String::from).to_vec();
        let s = semilattice(names, vec![vec![0, 0], vec![0, 1]]).unwrap();
        assert_eq!(s.name(s.unit()), "top");
        assert!(s.is_semilattice());
        assert!(s.leq(1, 0));
    }
}
