//! Enumeration of integer points in boxes, in the canonical order used by
//! every search: increasing sup-norm, then lexicographic.

/// All points of Z^d with sup-norm exactly `r`, lexicographically sorted.
pub fn shell(d: usize, r: i64) -> Vec<Vec<i64>> {
    assert!(r >= 0);
    if r == 0 {
        return vec![vec![0; d]];
    }
    let mut out = Vec::new();
    let mut cur = vec![0; d];
    shell_rec(&mut cur, 0, false, r, &mut out);
    out
}

fn shell_rec(cur: &mut [i64], pos: usize, hit: bool, r: i64, out: &mut Vec<Vec<i64>>) {
    if pos == cur.len() {
        if hit {
            out.push(cur.to_vec());
        }
        return;
    }
    if pos + 1 == cur.len() && !hit {
        for v in [-r, r] {
            cur[pos] = v;
            out.push(cur.to_vec());
        }
        return;
    }
    for v in -r..=r {
        cur[pos] = v;
        shell_rec(cur, pos + 1, hit || v.abs() == r, r, out);
    }
}

/// `{-n..n}^d \ {0}` in sup-norm-then-lex order.
pub fn cube(d: usize, n: i64) -> Vec<Vec<i64>> {
    (1..=n).flat_map(|r| shell(d, r)).collect()
}

/// Every point of `[lo, hi]^d` in lexicographic order, including 0 if present.
pub fn box_points(d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    if lo > hi {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![lo; d];
    loop {
        out.push(cur.clone());
        if !advance(&mut cur, lo, hi) {
            break;
        }
    }
    out
}

/// Odometer step over `[lo, hi]^d`; returns false after the last point.
pub fn advance(cur: &mut [i64], lo: i64, hi: i64) -> bool {
    for i in (0..cur.len()).rev() {
        if cur[i] < hi {
            cur[i] += 1;
            return true;
        }
        cur[i] = lo;
    }
    false
}

pub fn sup_norm(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

/// Squared Euclidean norm, exact.
pub fn norm_sq(v: &[i64]) -> i128 {
    v.iter().map(|&x| (x as i128) * (x as i128)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells_partition_the_cube() {
        assert_eq!(shell(2, 1).len(), 8);
        assert_eq!(shell(3, 2).len(), 125 - 27);
        assert_eq!(cube(2, 2).len(), 24);
        assert_eq!(cube(1, 3), vec![vec![-1], vec![1], vec![-2], vec![2], vec![-3], vec![3]]);
        assert_eq!(shell(2, 0), vec![vec![0, 0]]);
        for d in 1..=3 {
            for r in 1..=3 {
                let filtered: Vec<Vec<i64>> = box_points(d, -r, r).into_iter().filter(|p| sup_norm(p) == r).collect();
                assert_eq!(shell(d, r), filtered);
            }
        }
    }

    #[test]
    fn box_enumeration() {
        assert_eq!(box_points(2, 0, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert!(box_points(1, 2, 1).is_empty());
    }
}
