//! Sets of positive integers as finite unions of (possibly unbounded) ranges.

use std::fmt;

/// A set of local indices `j >= 1`, stored as sorted, disjoint, non-adjacent
/// inclusive ranges. `None` as an end means the range is unbounded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct JSet {
    ranges: Vec<(u64, Option<u64>)>,
}

fn end_lt(a: Option<u64>, b: Option<u64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        (None, _) => false,
    }
}

fn end_min(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    if end_lt(a, b) {
        a
    } else {
        b
    }
}

impl JSet {
    pub fn empty() -> Self {
        JSet { ranges: Vec::new() }
    }

    pub fn all() -> Self {
        JSet {
            ranges: vec![(1, None)],
        }
    }

    pub fn point(j: u64) -> Self {
        Self::range(j, Some(j))
    }

    /// `[start, end]`; empty when `end < start`.
    pub fn range(start: u64, end: Option<u64>) -> Self {
        Self::from_ranges(vec![(start, end)])
    }

    pub fn from_points(points: impl IntoIterator<Item = u64>) -> Self {
        Self::from_ranges(points.into_iter().map(|j| (j, Some(j))).collect())
    }

    pub fn from_ranges(mut raw: Vec<(u64, Option<u64>)>) -> Self {
        raw.retain_mut(|(s, e)| {
            *s = (*s).max(1);
            e.is_none_or(|e| e >= *s)
        });
        raw.sort_by_key(|r| r.0);
        let mut out: Vec<(u64, Option<u64>)> = Vec::with_capacity(raw.len());
        for (s, e) in raw {
            if let Some(last) = out.last_mut() {
                let touches = match last.1 {
                    None => true,
                    Some(le) => s <= le.saturating_add(1),
                };
                if touches {
                    if end_lt(last.1, e) {
                        last.1 = e;
                    }
                    continue;
                }
            }
            out.push((s, e));
        }
        JSet { ranges: out }
    }

    pub fn ranges(&self) -> &[(u64, Option<u64>)] {
        &self.ranges
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.ranges.last().is_none_or(|r| r.1.is_some())
    }

    pub fn is_all(&self) -> bool {
        self.ranges == [(1, None)]
    }

    pub fn count(&self) -> Option<u64> {
        let mut n = 0u64;
        for &(s, e) in &self.ranges {
            n += e? - s + 1;
        }
        Some(n)
    }

    /// Members in increasing order; `None` for an infinite set.
    pub fn members(&self) -> Option<Vec<u64>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = Vec::new();
        for &(s, e) in &self.ranges {
            out.extend(s..=e.unwrap());
        }
        Some(out)
    }

    /// Members not exceeding `limit`.
    pub fn members_up_to(&self, limit: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for &(s, e) in &self.ranges {
            if s > limit {
                break;
            }
            let hi = e.map_or(limit, |e| e.min(limit));
            out.extend(s..=hi);
        }
        out
    }

    pub fn count_up_to(&self, limit: u64) -> u64 {
        let mut n = 0;
        for &(s, e) in &self.ranges {
            if s > limit {
                break;
            }
            let hi = e.map_or(limit, |e| e.min(limit));
            n += hi - s + 1;
        }
        n
    }

    /// Largest member of a finite set.
    pub fn max(&self) -> Option<u64> {
        self.ranges.last().and_then(|r| r.1)
    }

    pub fn contains(&self, j: u64) -> bool {
        self.ranges
            .iter()
            .any(|&(s, e)| j >= s && e.is_none_or(|e| j <= e))
    }

    pub fn first_at_least(&self, x: u64) -> Option<u64> {
        for &(s, e) in &self.ranges {
            if e.is_none_or(|e| e >= x) {
                return Some(s.max(x));
            }
        }
        None
    }

    pub fn union(&self, other: &JSet) -> JSet {
        let mut v = self.ranges.clone();
        v.extend_from_slice(&other.ranges);
        JSet::from_ranges(v)
    }

    pub fn intersect(&self, other: &JSet) -> JSet {
        let mut v = Vec::new();
        for &(a, ae) in &self.ranges {
            for &(b, be) in &other.ranges {
                let s = a.max(b);
                let e = end_min(ae, be);
                if e.is_none_or(|e| e >= s) {
                    v.push((s, e));
                }
            }
        }
        JSet::from_ranges(v)
    }

    pub fn complement(&self) -> JSet {
        let mut v = Vec::new();
        let mut next = 1u64;
        for &(s, e) in &self.ranges {
            if s > next {
                v.push((next, Some(s - 1)));
            }
            match e {
                Some(e) => next = e + 1,
                None => return JSet::from_ranges(v),
            }
        }
        v.push((next, None));
        JSet::from_ranges(v)
    }

    pub fn difference(&self, other: &JSet) -> JSet {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &JSet) -> bool {
        self.difference(other).is_empty()
    }

    /// `{ J >= 1 : scale * J + offset ∈ self }`.
    pub fn pull_back(&self, scale: u64, offset: i64) -> JSet {
        let s = scale as i128;
        let o = offset as i128;
        let mut v = Vec::new();
        for &(a, e) in &self.ranges {
            // smallest J with s J + o >= a
            let lo = (a as i128 - o).div_euclid(s) + i128::from((a as i128 - o).rem_euclid(s) != 0);
            let lo = lo.max(1);
            let hi = e.map(|e| (e as i128 - o).div_euclid(s));
            if let Some(h) = hi {
                if h < lo {
                    continue;
                }
            }
            v.push((lo as u64, hi.map(|h| h as u64)));
        }
        JSet::from_ranges(v)
    }
}

impl fmt::Display for JSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, &(s, e)) in self.ranges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match e {
                Some(e) if e == s => write!(f, "{s}")?,
                Some(e) => write!(f, "{s}..{e}")?,
                None => write!(f, "{s}..")?,
            }
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_overlaps() {
        let s = JSet::from_ranges(vec![(5, Some(7)), (1, Some(2)), (3, Some(4)), (10, None), (12, Some(20))]);
        assert_eq!(s.ranges(), &[(1, Some(7)), (10, None)]);
        assert!(!s.is_finite());
        assert_eq!(s.to_string(), "{1..7, 10..}");
    }

    #[test]
    fn complement_roundtrip() {
        let s = JSet::from_ranges(vec![(2, Some(3)), (6, None)]);
        let c = s.complement();
        assert_eq!(c.members(), Some(vec![1, 4, 5]));
        assert_eq!(c.complement(), s);
        assert_eq!(JSet::empty().complement(), JSet::all());
    }

    #[test]
    fn pull_back_matches_definition() {
        let s = JSet::from_ranges(vec![(3, Some(9)), (20, None)]);
        for (scale, off) in [(1u64, 0i64), (2, -1), (3, 1), (6, -5)] {
            let p = s.pull_back(scale, off);
            for j in 1..40u64 {
                let v = scale as i64 * j as i64 + off;
                assert_eq!(p.contains(j), v >= 1 && s.contains(v as u64), "{scale} {off} {j}");
            }
        }
    }

    #[test]
    fn first_at_least_skips_gaps() {
        let s = JSet::from_ranges(vec![(2, Some(3)), (8, None)]);
        assert_eq!(s.first_at_least(1), Some(2));
        assert_eq!(s.first_at_least(4), Some(8));
        assert_eq!(s.first_at_least(100), Some(100));
        assert_eq!(JSet::point(4).first_at_least(5), None);
    }
}
