//! Realizability of branch data for branched covers of the sphere.
//!
//! Arithmetic criteria (total branching parity, the one-extra-cycle and
//! many-extra-cycles divisibility tests) decide realizability in closed form;
//! an exhaustive permutation-monodromy search certifies them independently at
//! small degree.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// Default degree cap for the permutation oracle.
pub const DEFAULT_DEGREE_CAP: u32 = 7;

/// Hard ceiling on oracle degree (fixed-size permutation buffers).
pub const MAX_ORACLE_DEGREE: u32 = 12;

/// Partition of a positive integer `d`; parts stored non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
    d: u32,
}

impl Partition {
    /// Builds a partition from positive parts (any order accepted).
    pub fn new(parts: &[u32]) -> Result<Self, HurwitzError> {
        if parts.is_empty() {
            return Err(HurwitzError::EmptyPartition);
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(HurwitzError::ZeroPart);
        }
        let mut parts = parts.to_vec();
        parts.sort_unstable_by(|x, y| y.cmp(x));
        let d = parts.iter().sum();
        Ok(Partition { parts, d })
    }

    /// The partition `(m+1, 1, ..., 1)` of `d`: one branch cycle over an
    /// otherwise unramified point.
    pub fn simple_branch(m: u32, d: u32) -> Result<Self, HurwitzError> {
        if m == 0 || m + 1 > d {
            return Err(HurwitzError::DegreeMismatch {
                expected: d,
                found: m + 1,
            });
        }
        let mut parts = vec![1u32; (d - m) as usize];
        parts[0] = m + 1;
        Ok(Partition { parts, d })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Number of parts, `Len`.
    pub fn len(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when every part is 1 (the unramified cycle type).
    pub fn is_trivial(&self) -> bool {
        self.parts[0] == 1
    }

    /// Branching contribution `d - Len`.
    pub fn branching(&self) -> u32 {
        self.d - self.len()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Branch data: a multiset of partitions of a common degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchData {
    d: u32,
    partitions: Vec<Partition>,
}

impl BranchData {
    pub fn new(d: u32, partitions: Vec<Partition>) -> Result<Self, HurwitzError> {
        if d == 0 {
            return Err(HurwitzError::ZeroPart);
        }
        for p in &partitions {
            if p.d() != d {
                return Err(HurwitzError::DegreeMismatch {
                    expected: d,
                    found: p.d(),
                });
            }
        }
        Ok(BranchData { d, partitions })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }
}

/// Errors for partition construction and realizability queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HurwitzError {
    EmptyPartition,
    ZeroPart,
    DegreeMismatch { expected: u32, found: u32 },
    /// The extra-cycle lengths do not form the required partition shape.
    InvalidBranchShape(String),
    /// Oracle degree above the configured cap.
    DegreeCap { d: u32, cap: u32 },
}

impl fmt::Display for HurwitzError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HurwitzError::EmptyPartition => write!(f, "empty-partition"),
            HurwitzError::ZeroPart => write!(f, "zero-part: parts must be positive"),
            HurwitzError::DegreeMismatch { expected, found } => {
                write!(f, "degree-mismatch: expected {expected}, found {found}")
            }
            HurwitzError::InvalidBranchShape(msg) => write!(f, "invalid-branch-shape: {msg}"),
            HurwitzError::DegreeCap { d, cap } => {
                write!(f, "degree-cap: degree {d} exceeds oracle cap {cap}")
            }
        }
    }
}

impl std::error::Error for HurwitzError {}

/// Total branching `v = sum(d - Len)` over the partitions.
pub fn total_branching(data: &BranchData) -> u32 {
    data.partitions.iter().map(Partition::branching).sum()
}

/// Genus of the covering surface over a sphere target, `(v - 2d + 2)/2`,
/// when that is a non-negative integer; `None` otherwise (no cover exists).
pub fn source_genus(data: &BranchData) -> Option<u32> {
    let v = i64::from(total_branching(data));
    let two_g = v - 2 * i64::from(data.d) + 2;
    if two_g < 0 || two_g % 2 != 0 {
        None
    } else {
        Some((two_g / 2) as u32)
    }
}

fn gcd_of_parts(a: &Partition, b: &Partition) -> u32 {
    let mut g = 0u32;
    for &p in a.parts().iter().chain(b.parts()) {
        g = num_integer::gcd(g, p);
    }
    g
}

/// Realizability of `{a, b, (m+1,1,...,1)}` as branch data of a cover of the
/// sphere: true iff `v >= 2d` is even, or `v = 2d-2` with
/// `m < d / GCD(parts of a and b)`.
pub fn boccara_realizable(a: &Partition, b: &Partition, m: u32) -> Result<bool, HurwitzError> {
    if a.d() != b.d() {
        return Err(HurwitzError::DegreeMismatch {
            expected: a.d(),
            found: b.d(),
        });
    }
    let d = a.d();
    let extra = Partition::simple_branch(m, d)?;
    let v = a.branching() + b.branching() + extra.branching();
    if v >= 2 * d && v % 2 == 0 {
        return Ok(true);
    }
    if v + 2 == 2 * d {
        let g = gcd_of_parts(a, b);
        return Ok(m < d / g);
    }
    Ok(false)
}

/// Realizability of `{a, b, (m_1+1,1,..),...,(m_l+1,1,..)}` by a rational
/// map, under the hypothesis that `ms` is a partition of `Len(a)+Len(b)-2 > 0`:
/// true iff `max(ms) < d / GCD(parts of a and b)`.
pub fn song_xu_realizable(a: &Partition, b: &Partition, ms: &[u32]) -> Result<bool, HurwitzError> {
    if a.d() != b.d() {
        return Err(HurwitzError::DegreeMismatch {
            expected: a.d(),
            found: b.d(),
        });
    }
    let d = a.d();
    let need = i64::from(a.len()) + i64::from(b.len()) - 2;
    if need <= 0 {
        return Err(HurwitzError::InvalidBranchShape(format!(
            "Len(a)+Len(b)-2 = {need} must be positive"
        )));
    }
    if ms.is_empty() || ms.iter().any(|&m| m == 0) {
        return Err(HurwitzError::InvalidBranchShape(
            "extra-cycle lengths must be positive".to_string(),
        ));
    }
    let total: i64 = ms.iter().map(|&m| i64::from(m)).sum();
    if total != need {
        return Err(HurwitzError::InvalidBranchShape(format!(
            "extra-cycle lengths sum to {total}, need Len(a)+Len(b)-2 = {need}"
        )));
    }
    let max = *ms.iter().max().expect("ms non-empty");
    if max + 1 > d {
        return Err(HurwitzError::DegreeMismatch {
            expected: d,
            found: max + 1,
        });
    }
    let g = gcd_of_parts(a, b);
    Ok(max < d / g)
}

/// All partitions of `d`, parts non-increasing, in a fixed deterministic
/// (reverse-lexicographic) order.
pub fn partitions_of(d: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>, d: u32) {
        if rest == 0 {
            out.push(Partition {
                parts: cur.clone(),
                d,
            });
            return;
        }
        let mut k = rest.min(max);
        while k >= 1 {
            cur.push(k);
            rec(rest - k, k, cur, out, d);
            cur.pop();
            k -= 1;
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(d, d, &mut Vec::new(), &mut out, d);
    }
    out
}

/// Exhaustive monodromy search with the default degree cap.
pub fn oracle_realizable(
    data: &BranchData,
    require_genus: Option<u32>,
) -> Result<bool, HurwitzError> {
    oracle_realizable_capped(data, require_genus, DEFAULT_DEGREE_CAP)
}

/// Decides whether permutations with the given cycle types, multiplying to
/// the identity and generating a transitive subgroup, exist; i.e. whether the
/// data arises from a branched cover of the sphere. `require_genus` restricts
/// to covering surfaces of that genus (the total branching already forces the
/// genus, so this is an arithmetic filter, not a search constraint).
///
/// # Errors
/// `DegreeCap` when `d` exceeds `cap` or the hard ceiling
/// [`MAX_ORACLE_DEGREE`].
pub fn oracle_realizable_capped(
    data: &BranchData,
    require_genus: Option<u32>,
    cap: u32,
) -> Result<bool, HurwitzError> {
    let cap = cap.min(MAX_ORACLE_DEGREE);
    if data.d > cap {
        return Err(HurwitzError::DegreeCap { d: data.d, cap });
    }
    let v = total_branching(data);
    let genus = match source_genus(data) {
        Some(g) => g,
        None => return Ok(false),
    };
    if let Some(need) = require_genus {
        if genus != need {
            return Ok(false);
        }
    }
    let d = data.d as usize;
    // Identity cycle types contribute nothing to the product or transitivity.
    let mut types: Vec<Vec<u32>> = data
        .partitions
        .iter()
        .filter(|p| !p.is_trivial())
        .map(|p| p.parts().to_vec())
        .collect();
    if types.is_empty() {
        // Unbranched cover of the sphere: connected only in degree 1.
        return Ok(d == 1);
    }
    if types.len() == 1 {
        // A single non-identity permutation cannot multiply to the identity.
        return Ok(false);
    }
    let _ = v;
    // Fix the largest conjugacy class, determine the second largest from the
    // product, and enumerate the rest (conjugation invariance of the tuple).
    types.sort_by(|x, y| class_size(y, d).cmp(&class_size(x, d)).then(y.cmp(x)));
    let mut order: Vec<Vec<u32>> = Vec::with_capacity(types.len());
    order.push(types[0].clone());
    for t in &types[2..] {
        order.push(t.clone());
    }
    order.push(types[1].clone());
    let mut rem_v = vec![0u32; order.len()];
    for j in (0..order.len() - 1).rev() {
        rem_v[j] = rem_v[j + 1] + branching_of_type(&order[j + 1], d);
    }
    let search = OracleSearch { d, order, rem_v };
    Ok(search.run())
}

fn branching_of_type(t: &[u32], d: usize) -> u32 {
    d as u32 - t.len() as u32
}

fn factorial(n: u64) -> u64 {
    (2..=n).product::<u64>().max(1)
}

/// Size of the conjugacy class in the symmetric group with this cycle type.
fn class_size(t: &[u32], d: usize) -> u64 {
    let mut denom = 1u64;
    let mut i = 0;
    while i < t.len() {
        let mut j = i;
        while j < t.len() && t[j] == t[i] {
            denom *= u64::from(t[j]);
            j += 1;
        }
        denom *= factorial((j - i) as u64);
        i = j;
    }
    factorial(d as u64) / denom
}

const MAX_D: usize = MAX_ORACLE_DEGREE as usize;

/// Permutation on up to [`MAX_ORACLE_DEGREE`] points; `map[i]` is the image.
#[derive(Clone, Copy)]
struct Perm {
    n: usize,
    map: [u8; MAX_D],
}

impl Perm {
    fn identity(n: usize) -> Self {
        let mut map = [0u8; MAX_D];
        for (i, m) in map.iter_mut().enumerate().take(n) {
            *m = i as u8;
        }
        Perm { n, map }
    }

    /// Canonical class member: cycles laid out on consecutive points.
    fn canonical(t: &[u32], n: usize) -> Self {
        let mut p = Perm::identity(n);
        let mut start = 0usize;
        for &len in t {
            let len = len as usize;
            for k in 0..len {
                p.map[start + k] = (start + (k + 1) % len) as u8;
            }
            start += len;
        }
        p
    }

    /// `self` then `other`.
    fn then(&self, other: &Perm) -> Perm {
        let mut map = [0u8; MAX_D];
        for i in 0..self.n {
            map[i] = other.map[self.map[i] as usize];
        }
        Perm { n: self.n, map }
    }

    fn inverse(&self) -> Perm {
        let mut map = [0u8; MAX_D];
        for i in 0..self.n {
            map[self.map[i] as usize] = i as u8;
        }
        Perm { n: self.n, map }
    }

    fn cycle_count(&self) -> u32 {
        let mut seen = [false; MAX_D];
        let mut count = 0;
        for i in 0..self.n {
            if seen[i] {
                continue;
            }
            count += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.map[j] as usize;
            }
        }
        count
    }

    /// Minimal transposition count, `d - #cycles`.
    fn branching(&self) -> u32 {
        self.n as u32 - self.cycle_count()
    }

    #[cfg(test)]
    fn cycle_type(&self) -> Vec<u32> {
        let mut seen = [false; MAX_D];
        let mut t = Vec::new();
        for i in 0..self.n {
            if seen[i] {
                continue;
            }
            let mut len = 0u32;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.map[j] as usize;
                len += 1;
            }
            t.push(len);
        }
        t.sort_unstable_by(|x, y| y.cmp(x));
        t
    }

    /// Allocation-free cycle-type test; `t` must be a partition of `n`.
    fn has_cycle_type(&self, t: &[u32]) -> bool {
        debug_assert_eq!(t.iter().sum::<u32>() as usize, self.n);
        let mut hist = [0u8; MAX_D + 1];
        for &len in t {
            let len = len as usize;
            if len == 0 || len > self.n {
                return false;
            }
            hist[len] += 1;
        }
        let mut seen = [false; MAX_D];
        for i in 0..self.n {
            if seen[i] {
                continue;
            }
            let mut len = 0usize;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.map[j] as usize;
                len += 1;
            }
            if hist[len] == 0 {
                return false;
            }
            hist[len] -= 1;
        }
        true
    }
}

/// Union-find over the moved points, for incremental transitivity pruning.
#[derive(Clone, Copy)]
struct Orbits {
    n: usize,
    parent: [u8; MAX_D],
}

impl Orbits {
    fn new(n: usize) -> Self {
        let mut parent = [0u8; MAX_D];
        for (i, p) in parent.iter_mut().enumerate().take(n) {
            *p = i as u8;
        }
        Orbits { n, parent }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] as usize != i {
            let up = self.parent[self.parent[i] as usize];
            self.parent[i] = up;
            i = up as usize;
        }
        i
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.parent[ri] = rj as u8;
        }
    }

    fn absorb(&mut self, p: &Perm) {
        for i in 0..self.n {
            self.union(i, p.map[i] as usize);
        }
    }

    fn count(&mut self) -> u32 {
        let mut c = 0;
        for i in 0..self.n {
            if self.find(i) == i {
                c += 1;
            }
        }
        c
    }
}

struct OracleSearch {
    d: usize,
    /// Cycle types in search order: `[0]` fixed, last determined.
    order: Vec<Vec<u32>>,
    /// `rem_v[j]`: total branching of the types after position `j`.
    rem_v: Vec<u32>,
}

impl OracleSearch {
    fn run(&self) -> bool {
        let sigma1 = Perm::canonical(&self.order[0], self.d);
        let mut orbits = Orbits::new(self.d);
        orbits.absorb(&sigma1);
        // The fixed permutation must itself pass the budget checks.
        let budget = self.rem_v[0];
        if sigma1.branching() > budget || (budget - sigma1.branching()) % 2 != 0 {
            return false;
        }
        if orbits.count() - 1 > budget {
            return false;
        }
        let mut failed = HashSet::new();
        self.dfs(1, sigma1, orbits, &mut failed)
    }

    /// Key for the subtree below `(level, prod, orbits)`: the outcome depends
    /// only on these, so orderings of the earlier factors that reach the same
    /// state share it. Orbit roots are relabeled in first-occurrence order to
    /// make the partition encoding canonical; 4 bits per point each for the
    /// permutation map and the orbit labels.
    fn state_key(level: usize, prod: &Perm, orbits: Orbits) -> u128 {
        let mut o = orbits;
        let mut label = [0xFFu8; MAX_D];
        let mut next = 0u8;
        let mut key = level as u128;
        let mut shift = 8;
        for i in 0..prod.n {
            key |= u128::from(prod.map[i]) << shift;
            shift += 4;
        }
        for i in 0..prod.n {
            let r = o.find(i);
            if label[r] == 0xFF {
                label[r] = next;
                next += 1;
            }
            key |= u128::from(label[r]) << shift;
            shift += 4;
        }
        key
    }

    fn dfs(&self, level: usize, prod: Perm, orbits: Orbits, failed: &mut HashSet<u128>) -> bool {
        if level == self.order.len() - 1 {
            let needed = prod.inverse();
            if !needed.has_cycle_type(&self.order[level]) {
                return false;
            }
            let mut o = orbits;
            o.absorb(&needed);
            return o.count() == 1;
        }
        let key = Self::state_key(level, &prod, orbits);
        if failed.contains(&key) {
            return false;
        }
        let budget = self.rem_v[level];
        let mut found = false;
        for_each_in_class(&self.order[level], self.d, &mut |sigma| {
            let next = prod.then(sigma);
            let nv = next.branching();
            if nv > budget || (budget - nv) % 2 != 0 {
                return false;
            }
            let mut o = orbits;
            o.absorb(sigma);
            if o.count() - 1 > budget {
                return false;
            }
            if self.dfs(level + 1, next, o, failed) {
                found = true;
                return true;
            }
            false
        });
        if !found {
            failed.insert(key);
        }
        found
    }
}

/// Calls `f` once per permutation of cycle type `t` on `{0..n-1}`, in a fixed
/// order, stopping early when `f` returns true. Each permutation is built by
/// assigning the cycle through the smallest unplaced point first, so every
/// class member appears exactly once.
fn for_each_in_class(t: &[u32], n: usize, f: &mut dyn FnMut(&Perm) -> bool) -> bool {
    let mut counts: Vec<(u32, u32)> = Vec::new();
    for &len in t {
        match counts.iter_mut().find(|c| c.0 == len) {
            Some(c) => c.1 += 1,
            None => counts.push((len, 1)),
        }
    }
    let mut used = [false; MAX_D];
    let mut perm = Perm::identity(n);
    gen_cycles(&mut counts, &mut used, &mut perm, n, f)
}

fn gen_cycles(
    counts: &mut Vec<(u32, u32)>,
    used: &mut [bool; MAX_D],
    perm: &mut Perm,
    n: usize,
    f: &mut dyn FnMut(&Perm) -> bool,
) -> bool {
    let s = match (0..n).find(|&i| !used[i]) {
        Some(s) => s,
        None => return f(perm),
    };
    for i in 0..counts.len() {
        if counts[i].1 == 0 {
            continue;
        }
        let len = counts[i].0 as usize;
        counts[i].1 -= 1;
        used[s] = true;
        let stop = if len == 1 {
            perm.map[s] = s as u8;
            gen_cycles(counts, used, perm, n, f)
        } else {
            extend_cycle(s, s, len - 1, counts, used, perm, n, f)
        };
        used[s] = false;
        counts[i].1 += 1;
        if stop {
            return true;
        }
    }
    false
}

fn extend_cycle(
    start: usize,
    prev: usize,
    need: usize,
    counts: &mut Vec<(u32, u32)>,
    used: &mut [bool; MAX_D],
    perm: &mut Perm,
    n: usize,
    f: &mut dyn FnMut(&Perm) -> bool,
) -> bool {
    if need == 0 {
        perm.map[prev] = start as u8;
        return gen_cycles(counts, used, perm, n, f);
    }
    for t in 0..n {
        if used[t] {
            continue;
        }
        used[t] = true;
        perm.map[prev] = t as u8;
        let stop = extend_cycle(start, t, need - 1, counts, used, perm, n, f);
        used[t] = false;
        if stop {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    fn data(d: u32, parts: &[&[u32]]) -> BranchData {
        BranchData::new(d, parts.iter().map(|p| part(p)).collect()).unwrap()
    }

    #[test]
    fn branching_counts() {
        assert_eq!(total_branching(&data(3, &[&[2, 1], &[2, 1]])), 2);
        assert_eq!(
            total_branching(&data(6, &[&[2, 2, 2], &[3, 3], &[4, 1, 1]])),
            10
        );
        assert_eq!(total_branching(&data(2, &[&[2], &[2]])), 2);
    }

    #[test]
    fn genus_from_branching() {
        assert_eq!(source_genus(&data(2, &[&[2], &[2]])), Some(0));
        // Odd total branching: no cover at all.
        assert_eq!(source_genus(&data(4, &[&[2, 2], &[2, 2], &[4]])), None);
        // v = 4 < 2d-2 would force negative genus.
        assert_eq!(source_genus(&data(4, &[&[3, 1], &[2, 2]])), None);
        // Even branching with the right count gives genus 0 even when the
        // data is not realizable (the formula is only a necessary filter).
        assert_eq!(source_genus(&data(4, &[&[2, 2], &[2, 2], &[3, 1]])), Some(0));
        // Torus cover: v = 2d.
        assert_eq!(source_genus(&data(4, &[&[4], &[4], &[2, 2]])), Some(1));
    }

    #[test]
    fn one_extra_cycle_criterion() {
        let a = part(&[2, 2, 2]);
        let b = part(&[3, 3]);
        assert_eq!(boccara_realizable(&a, &b, 3), Ok(true));

        // All parts divisible by 4: m would have to be < 1.
        let a = part(&[4]);
        let b = part(&[4]);
        assert_eq!(boccara_realizable(&a, &b, 3), Ok(false));

        // Degree 2: v = 3 is odd, neither clause applies.
        let a = part(&[2]);
        let b = part(&[2]);
        assert_eq!(boccara_realizable(&a, &b, 1), Ok(false));

        assert!(matches!(
            boccara_realizable(&part(&[2]), &part(&[3]), 1),
            Err(HurwitzError::DegreeMismatch { .. })
        ));
        assert!(matches!(
            boccara_realizable(&part(&[2]), &part(&[2]), 2),
            Err(HurwitzError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn many_extra_cycles_criterion() {
        let a = part(&[2, 2, 2]);
        let b = part(&[3, 3]);
        assert_eq!(song_xu_realizable(&a, &b, &[1, 2]), Ok(true));

        // GCD 2 bounds the allowed cycle length: max(ms) = 2 is not < 4/2,
        // but splitting into two simple cycles stays under the bound.
        let a = part(&[2, 2]);
        let b = part(&[2, 2]);
        assert_eq!(song_xu_realizable(&a, &b, &[2]), Ok(false));
        assert_eq!(song_xu_realizable(&a, &b, &[1, 1]), Ok(true));

        // Len(a)+Len(b)-2 = 0: the hypothesis excludes this shape.
        let a = part(&[4]);
        let b = part(&[4]);
        assert!(matches!(
            song_xu_realizable(&a, &b, &[1, 1]),
            Err(HurwitzError::InvalidBranchShape(_))
        ));
        // Sum mismatch.
        let a = part(&[2, 2, 2]);
        let b = part(&[3, 3]);
        assert!(matches!(
            song_xu_realizable(&a, &b, &[1, 1]),
            Err(HurwitzError::InvalidBranchShape(_))
        ));
    }

    #[test]
    fn oracle_spec_examples() {
        assert_eq!(
            oracle_realizable(&data(2, &[&[2], &[2]]), Some(0)),
            Ok(true)
        );
        assert_eq!(
            oracle_realizable(&data(6, &[&[2, 2, 2], &[3, 3], &[4, 1, 1]]), Some(0)),
            Ok(true)
        );
        // Odd total branching.
        assert_eq!(
            oracle_realizable(&data(4, &[&[2, 2], &[2, 2], &[4]]), None),
            Ok(false)
        );
        // Genus 0 by arithmetic, but two double-transpositions multiply
        // inside the Klein four-group and never give a 3-cycle.
        assert_eq!(
            oracle_realizable(&data(4, &[&[2, 2], &[2, 2], &[3, 1]]), None),
            Ok(false)
        );
    }

    #[test]
    fn oracle_degree_cap() {
        let d = data(8, &[&[8], &[8]]);
        assert_eq!(
            oracle_realizable(&d, None),
            Err(HurwitzError::DegreeCap { d: 8, cap: 7 })
        );
        // Above the default cap but under a raised one: two full cycles are
        // the cover z^8, realizable at genus 0.
        assert_eq!(oracle_realizable_capped(&d, Some(0), 8), Ok(true));
        assert_eq!(oracle_realizable_capped(&d, Some(1), 8), Ok(false));
    }

    #[test]
    fn oracle_order_invariant() {
        let perms = [
            data(6, &[&[2, 2, 2], &[3, 3], &[4, 1, 1]]),
            data(6, &[&[3, 3], &[4, 1, 1], &[2, 2, 2]]),
            data(6, &[&[4, 1, 1], &[2, 2, 2], &[3, 3]]),
        ];
        for p in &perms {
            assert_eq!(oracle_realizable(p, Some(0)), Ok(true));
        }
    }

    #[test]
    fn oracle_matches_one_extra_cycle_at_small_degree() {
        for d in 2..=5u32 {
            let parts = partitions_of(d);
            for a in &parts {
                for b in &parts {
                    for m in 1..d {
                        let expected = boccara_realizable(a, b, m).unwrap();
                        let extra = Partition::simple_branch(m, d).unwrap();
                        let bd =
                            BranchData::new(d, vec![a.clone(), b.clone(), extra]).unwrap();
                        let got = oracle_realizable(&bd, None).unwrap();
                        assert_eq!(
                            got, expected,
                            "d={d} a={a} b={b} m={m}: oracle {got}, criterion {expected}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_matches_many_extra_cycles_at_small_degree() {
        for d in 2..=5u32 {
            let parts = partitions_of(d);
            for a in &parts {
                for b in &parts {
                    let need = a.len() + b.len();
                    if need <= 2 {
                        continue;
                    }
                    for ms in partitions_of(need - 2) {
                        if ms.parts().iter().any(|&m| m + 1 > d) {
                            continue;
                        }
                        let expected = song_xu_realizable(a, b, ms.parts()).unwrap();
                        let mut all = vec![a.clone(), b.clone()];
                        for &m in ms.parts() {
                            all.push(Partition::simple_branch(m, d).unwrap());
                        }
                        let bd = BranchData::new(d, all).unwrap();
                        let got = oracle_realizable(&bd, Some(0)).unwrap();
                        assert_eq!(
                            got, expected,
                            "d={d} a={a} b={b} ms={ms}: oracle {got}, criterion {expected}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn partition_constructors() {
        let p = part(&[1, 3, 2]);
        assert_eq!(p.parts(), &[3, 2, 1]);
        assert_eq!(p.d(), 6);
        assert_eq!(p.len(), 3);
        assert!(!p.is_trivial());
        assert!(part(&[1, 1]).is_trivial());
        assert!(Partition::new(&[]).is_err());
        assert!(Partition::new(&[2, 0]).is_err());

        let s = Partition::simple_branch(3, 6).unwrap();
        assert_eq!(s.parts(), &[4, 1, 1]);
        assert!(Partition::simple_branch(6, 6).is_err());
        assert!(Partition::simple_branch(0, 6).is_err());
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(7).len(), 15);
        for p in partitions_of(6) {
            assert_eq!(p.d(), 6);
            assert_eq!(p.parts().iter().sum::<u32>(), 6);
        }
    }

    #[test]
    fn class_enumeration_counts() {
        // Class sizes in S_4: (2,1,1) -> 6, (2,2) -> 3, (3,1) -> 8, (4) -> 6.
        for (t, want) in [
            (vec![2u32, 1, 1], 6u64),
            (vec![2, 2], 3),
            (vec![3, 1], 8),
            (vec![4], 6),
            (vec![1, 1, 1, 1], 1),
        ] {
            assert_eq!(class_size(&t, 4), want);
            let mut n = 0u64;
            for_each_in_class(&t, 4, &mut |p| {
                assert_eq!(p.cycle_type(), t);
                n += 1;
                false
            });
            assert_eq!(n, want, "enumeration count for {t:?}");
        }
    }
}
