//! Sets of global indices `k >= 1` described strand by strand.

use std::collections::BTreeMap;
use std::fmt;

use super::jset::JSet;
use crate::rational::lcm_u64;

/// Global index of local index `j` on strand `r` at the given modulus.
pub fn global_index(modulus: usize, r: usize, j: u64) -> u64 {
    r as u64 + 1 + (j - 1) * modulus as u64
}

/// `(strand, local index)` of global index `k`.
pub fn local_index(modulus: usize, k: u64) -> (usize, u64) {
    let m = modulus as u64;
    let r = (k - 1) % m;
    (r as usize, (k - 1 - r) / m + 1)
}

/// A set of global indices: one [`JSet`] per strand, plus finitely many
/// overrides that force single indices in or out.
#[derive(Debug, Clone)]
pub struct IndexSet {
    modulus: usize,
    strands: Vec<JSet>,
    overrides: BTreeMap<u64, bool>,
}

impl IndexSet {
    pub fn new(modulus: usize, strands: Vec<JSet>, overrides: BTreeMap<u64, bool>) -> Self {
        assert_eq!(strands.len(), modulus, "one local set per strand");
        let mut s = IndexSet {
            modulus,
            strands,
            overrides,
        };
        s.canonicalize();
        s
    }

    pub fn empty() -> Self {
        IndexSet::new(1, vec![JSet::empty()], BTreeMap::new())
    }

    pub fn all() -> Self {
        IndexSet::new(1, vec![JSet::all()], BTreeMap::new())
    }

    pub fn from_indices(indices: impl IntoIterator<Item = u64>) -> Self {
        IndexSet::new(1, vec![JSet::from_points(indices)], BTreeMap::new())
    }

    fn canonicalize(&mut self) {
        let (m, strands) = (self.modulus, &self.strands);
        self.overrides.retain(|&k, &mut v| {
            let (r, j) = local_index(m, k);
            strands[r].contains(j) != v
        });
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn strands(&self) -> &[JSet] {
        &self.strands
    }

    pub fn overrides(&self) -> &BTreeMap<u64, bool> {
        &self.overrides
    }

    pub fn contains(&self, k: u64) -> bool {
        if let Some(&v) = self.overrides.get(&k) {
            return v;
        }
        let (r, j) = local_index(self.modulus, k);
        self.strands[r].contains(j)
    }

    pub fn is_finite(&self) -> bool {
        self.strands.iter().all(JSet::is_finite)
    }

    /// Lowest strand whose local set is unbounded.
    pub fn witness_strand(&self) -> Option<usize> {
        self.strands.iter().position(|s| !s.is_finite())
    }

    /// Members in increasing order; `None` for an infinite set.
    pub fn members(&self) -> Option<Vec<u64>> {
        if !self.is_finite() {
            return None;
        }
        let mut out: Vec<u64> = Vec::new();
        for (r, s) in self.strands.iter().enumerate() {
            for j in s.members().unwrap() {
                out.push(global_index(self.modulus, r, j));
            }
        }
        out.retain(|k| self.overrides.get(k) != Some(&false));
        out.extend(self.overrides.iter().filter(|(_, &v)| v).map(|(&k, _)| k));
        out.sort_unstable();
        out.dedup();
        Some(out)
    }

    pub fn count(&self) -> Option<u64> {
        self.members().map(|m| m.len() as u64)
    }

    /// Members `k <= limit`.
    pub fn members_up_to(&self, limit: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for (r, s) in self.strands.iter().enumerate() {
            if r as u64 + 1 > limit {
                continue;
            }
            let jmax = (limit - r as u64 - 1) / self.modulus as u64 + 1;
            out.extend(
                s.members_up_to(jmax)
                    .into_iter()
                    .map(|j| global_index(self.modulus, r, j)),
            );
        }
        out.retain(|k| self.overrides.get(k) != Some(&false));
        out.extend(
            self.overrides
                .iter()
                .filter(|(&k, &v)| v && k <= limit)
                .map(|(&k, _)| k),
        );
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Smallest member `k >= from` on strand `r`, skipping overrides that exclude.
    pub fn next_on_strand(&self, r: usize, from: u64) -> Option<u64> {
        let m = self.modulus as u64;
        let mut j0 = if from <= r as u64 + 1 {
            1
        } else {
            (from - r as u64 - 1).div_ceil(m) + 1
        };
        loop {
            let j = self.strands[r].first_at_least(j0)?;
            let k = global_index(self.modulus, r, j);
            if self.overrides.get(&k) != Some(&false) {
                return Some(k);
            }
            j0 = j + 1;
        }
    }

    /// The same set described at modulus `target`, a multiple of the current one.
    pub fn refine(&self, target: usize) -> IndexSet {
        assert_eq!(target % self.modulus, 0, "target modulus must be a multiple");
        if target == self.modulus {
            return self.clone();
        }
        let s = (target / self.modulus) as u64;
        let strands = (0..target)
            .map(|big_r| {
                let r = big_r % self.modulus;
                let c = (big_r / self.modulus) as i64 + 1 - s as i64;
                self.strands[r].pull_back(s, c)
            })
            .collect();
        IndexSet::new(target, strands, self.overrides.clone())
    }

    fn combine(&self, other: &IndexSet, op: impl Fn(&JSet, &JSet) -> JSet, pick: impl Fn(bool, bool) -> bool) -> IndexSet {
        let m = lcm_u64(self.modulus as u64, other.modulus as u64) as usize;
        let a = self.refine(m);
        let b = other.refine(m);
        let strands = a.strands.iter().zip(&b.strands).map(|(x, y)| op(x, y)).collect();
        let overrides = a
            .overrides
            .keys()
            .chain(b.overrides.keys())
            .map(|&k| (k, pick(a.contains(k), b.contains(k))))
            .collect();
        IndexSet::new(m, strands, overrides)
    }

    pub fn intersect(&self, other: &IndexSet) -> IndexSet {
        self.combine(other, JSet::intersect, |x, y| x && y)
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        self.combine(other, JSet::union, |x, y| x || y)
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        self.combine(other, JSet::difference, |x, y| x && !y)
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet::new(
            self.modulus,
            self.strands.iter().map(JSet::complement).collect(),
            self.overrides.iter().map(|(&k, &v)| (k, !v)).collect(),
        )
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_empty(&self) -> bool {
        // Canonical overrides only exclude members, so a strand is emptied when all of them are excluded.
        let mut excluded = vec![0u64; self.modulus];
        for (&k, &v) in &self.overrides {
            if v {
                return false;
            }
            excluded[local_index(self.modulus, k).0] += 1;
        }
        self.strands
            .iter()
            .zip(excluded)
            .all(|(s, n)| s.count() == Some(n))
    }

    /// Set equality, independent of the moduli used to describe either side.
    pub fn same_set(&self, other: &IndexSet) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }
}

impl PartialEq for IndexSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_set(other)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mod {} [", self.modulus)?;
        for (r, s) in self.strands.iter().enumerate() {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{r}: {s}")?;
        }
        write!(f, "]")?;
        for (k, v) in &self.overrides {
            write!(f, " {}{k}", if *v { '+' } else { '-' })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(s: &IndexSet, n: u64) -> Vec<bool> {
        (1..=n).map(|k| s.contains(k)).collect()
    }

    #[test]
    fn local_global_roundtrip() {
        for m in 1..7 {
            for k in 1..100 {
                let (r, j) = local_index(m, k);
                assert_eq!(global_index(m, r, j), k);
            }
        }
    }

    #[test]
    fn refine_preserves_membership() {
        let mut ov = BTreeMap::new();
        ov.insert(4, true);
        ov.insert(7, false);
        let s = IndexSet::new(2, vec![JSet::range(3, None), JSet::from_points([1, 5])], ov);
        for target in [2, 4, 6, 10] {
            assert_eq!(brute(&s.refine(target), 200), brute(&s, 200));
        }
    }

    #[test]
    fn set_algebra_matches_pointwise() {
        let a = IndexSet::new(2, vec![JSet::all(), JSet::range(1, Some(4))], BTreeMap::new());
        let mut ov = BTreeMap::new();
        ov.insert(2, true);
        let b = IndexSet::new(3, vec![JSet::range(2, None), JSet::empty(), JSet::all()], ov);
        let n = 120;
        let (va, vb) = (brute(&a, n), brute(&b, n));
        let i = brute(&a.intersect(&b), n);
        let u = brute(&a.union(&b), n);
        let d = brute(&a.difference(&b), n);
        let c = brute(&a.complement(), n);
        for k in 0..n as usize {
            assert_eq!(i[k], va[k] && vb[k]);
            assert_eq!(u[k], va[k] || vb[k]);
            assert_eq!(d[k], va[k] && !vb[k]);
            assert_eq!(c[k], !va[k]);
        }
        assert!(a.intersect(&b).is_subset(&a));
    }

    #[test]
    fn equality_ignores_modulus() {
        let a = IndexSet::all();
        let b = IndexSet::new(3, vec![JSet::all(), JSet::all(), JSet::all()], BTreeMap::new());
        assert_eq!(a, b);
        let c = IndexSet::from_indices([1, 2]);
        assert_ne!(a, c);
        assert_eq!(c.members(), Some(vec![1, 2]));
    }

    #[test]
    fn next_on_strand_skips_exclusions() {
        let mut ov = BTreeMap::new();
        ov.insert(3, false);
        let s = IndexSet::new(2, vec![JSet::all(), JSet::empty()], ov);
        assert_eq!(s.next_on_strand(0, 1), Some(1));
        assert_eq!(s.next_on_strand(0, 2), Some(5));
        assert_eq!(s.next_on_strand(1, 1), None);
    }

    #[test]
    fn overrides_can_empty_a_strand() {
        let mut ov = BTreeMap::new();
        ov.insert(15, false);
        let s = IndexSet::new(6, (0..6).map(|r| if r == 2 { JSet::point(3) } else { JSet::empty() }).collect(), ov);
        assert!(s.is_empty());
        assert_eq!(s, IndexSet::empty());
        let t = IndexSet::new(2, vec![JSet::range(1, Some(2)), JSet::empty()], BTreeMap::from([(1, false)]));
        assert!(!t.is_empty());
    }
}
