//! Integer plane geometry.

use std::cmp::Ordering;

pub type V2 = (i64, i64);

pub fn cross(a: V2, b: V2) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

pub fn dot(a: V2, b: V2) -> i64 {
    a.0 * b.0 + a.1 * b.1
}

pub fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

pub fn primitive(v: V2) -> Option<V2> {
    let g = gcd(v.0, v.1);
    (g != 0).then(|| (v.0 / g, v.1 / g))
}

pub fn is_primitive(v: V2) -> bool {
    gcd(v.0, v.1) == 1
}

/// 0 for angles in [0, π), 1 for [π, 2π).
fn half(v: V2) -> u8 {
    if v.1 > 0 || (v.1 == 0 && v.0 > 0) {
        0
    } else {
        1
    }
}

/// Orders nonzero vectors by their angle in [0, 2π) from the positive x-axis.
pub fn angle_cmp(a: V2, b: V2) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross(a, b)))
}

/// Orders nonzero vectors by the counterclockwise angle swept from `reference`,
/// with `reference` itself last.
pub fn angle_cmp_from(reference: V2, a: V2, b: V2) -> Ordering {
    let key = |v: V2| {
        // angle measured from the reference, in (0, 2π]
        let rel = (dot(reference, v), cross(reference, v));
        let zero = rel.1 == 0 && rel.0 > 0;
        (zero, rel)
    };
    let (za, ra) = key(a);
    let (zb, rb) = key(b);
    za.cmp(&zb).then_with(|| if za { Ordering::Equal } else { angle_cmp(ra, rb) })
}

pub fn same_direction(a: V2, b: V2) -> bool {
    cross(a, b) == 0 && dot(a, b) > 0
}

pub fn parallel(a: V2, b: V2) -> bool {
    cross(a, b) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angular_order() {
        let mut v = vec![(0, -1), (-1, 0), (1, 1), (1, 0), (-1, -3), (2, 3)];
        v.sort_by(|a, b| angle_cmp(*a, *b));
        assert_eq!(v, vec![(1, 0), (1, 1), (2, 3), (-1, 0), (-1, -3), (0, -1)]);
        v.sort_by(|a, b| angle_cmp_from((0, 1), *a, *b));
        assert_eq!(v, vec![(-1, 0), (-1, -3), (0, -1), (1, 0), (1, 1), (2, 3)]);
    }

    #[test]
    fn reference_sorts_last() {
        let mut v = vec![(1, 0), (0, 1), (-1, 0)];
        v.sort_by(|a, b| angle_cmp_from((1, 0), *a, *b));
        assert_eq!(v, vec![(0, 1), (-1, 0), (1, 0)]);
    }
}
