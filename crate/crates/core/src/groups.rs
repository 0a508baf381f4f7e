//! Groups acting on position labels, orbits, and the classical
//! orbit-representative solvers (look-up table and on-the-fly search).
//!
//! Positions are `n`-bit integers and are their own labels, so "smallest"
//! means numerically smallest. Group elements are addressed through an index
//! `x` in `[0, 2^m)`, the value held by the group register of the quantum
//! circuits.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default refusal threshold for [`build_lookup`].
pub const DEFAULT_LOOKUP_CAPACITY: u64 = 1 << 22;

/// A bijection on `[0, len)`, stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Permutation(Vec<u64>);

impl Permutation {
    pub fn new(images: Vec<u64>) -> Result<Self> {
        let len = images.len() as u64;
        let mut seen = vec![false; images.len()];
        for &img in &images {
            if img >= len || seen[img as usize] {
                return Err(Error::InvalidGroup(format!(
                    "image table is not a permutation of [0, {len})"
                )));
            }
            seen[img as usize] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(len: usize) -> Self {
        Self((0..len as u64).collect())
    }

    /// Builds the permutation `v -> f(v)` on `[0, len)`.
    pub fn from_fn(len: usize, f: impl Fn(u64) -> u64) -> Result<Self> {
        Self::new((0..len as u64).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, v: u64) -> u64 {
        self.0[v as usize]
    }

    pub fn images(&self) -> &[u64] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i as u64 == v)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&v| next.apply(v)).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u64;
        }
        Permutation(inv)
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Non-trivial cycles, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<u64>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as u64];
            seen[start] = true;
            let mut cur = self.apply(start as u64);
            while cur != start as u64 {
                seen[cur as usize] = true;
                cycle.push(cur);
                cur = self.apply(cur);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }
}

impl TryFrom<Vec<u64>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<u64> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupKind {
    /// `x · v = (x + v) mod 2^bits`.
    AddModN { bits: u32 },
    /// Cyclic translation of an `sites`-spin chain: index `x` rotates the
    /// bit string by `x mod sites` sites toward the least-significant bit.
    SpinTranslation { sites: u32 },
    /// Powers of one generator whose order is a power of two.
    SingleCycleAbelian { generator: Permutation },
    /// `g1^x1 g2^x2` in an order picked by one extra index bit.
    ///
    /// Index layout (LSB first): `x1` (log2 ord g1 bits), `x2` (log2 ord g2
    /// bits), then the order bit. Order bit 0 applies the `g1` power first,
    /// order bit 1 applies the `g2` power first.
    TwoGeneratorComposite { g1: Permutation, g2: Permutation },
}

/// A group together with its indexing `x -> g(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GroupKind", into = "GroupKind")]
pub struct GroupSpec {
    kind: GroupKind,
    index_bits: u32,
    position_bits: u32,
}

impl TryFrom<GroupKind> for GroupSpec {
    type Error = Error;
    fn try_from(kind: GroupKind) -> Result<Self> {
        GroupSpec::from_kind(kind)
    }
}

impl From<GroupSpec> for GroupKind {
    fn from(g: GroupSpec) -> Self {
        g.kind
    }
}

fn log2_exact(v: u64) -> Option<u32> {
    v.is_power_of_two().then(|| v.trailing_zeros())
}

fn ceil_log2(v: u64) -> u32 {
    64 - (v - 1).leading_zeros()
}

fn permutation_bits(p: &Permutation, which: &str) -> Result<u32> {
    log2_exact(p.len() as u64).ok_or_else(|| {
        Error::InvalidGroup(format!("{which} acts on {} labels, not a power of two", p.len()))
    })
}

fn generator_bits(p: &Permutation, which: &str) -> Result<u32> {
    let order = p.order();
    if order < 2 {
        return Err(Error::InvalidGroup(format!("{which} is the identity")));
    }
    log2_exact(order)
        .ok_or_else(|| Error::InvalidGroup(format!("{which} has order {order}, not a power of two")))
}

impl GroupSpec {
    pub fn from_kind(kind: GroupKind) -> Result<Self> {
        let (index_bits, position_bits) = match &kind {
            GroupKind::AddModN { bits } => {
                if *bits == 0 || *bits > 30 {
                    return Err(Error::InvalidGroup(format!("AddModN needs 1..=30 bits, got {bits}")));
                }
                (*bits, *bits)
            }
            GroupKind::SpinTranslation { sites } => {
                if *sites < 2 || *sites > 30 {
                    return Err(Error::InvalidGroup(format!(
                        "SpinTranslation needs 2..=30 sites, got {sites}"
                    )));
                }
                (ceil_log2(*sites as u64), *sites)
            }
            GroupKind::SingleCycleAbelian { generator } => {
                let n = permutation_bits(generator, "generator")?;
                (generator_bits(generator, "generator")?, n)
            }
            GroupKind::TwoGeneratorComposite { g1, g2 } => {
                let n1 = permutation_bits(g1, "g1")?;
                let n2 = permutation_bits(g2, "g2")?;
                if n1 != n2 {
                    return Err(Error::InvalidGroup("generators act on different position sets".into()));
                }
                (generator_bits(g1, "g1")? + generator_bits(g2, "g2")? + 1, n1)
            }
        };
        Ok(Self { kind, index_bits, position_bits })
    }

    pub fn add_mod(bits: u32) -> Result<Self> {
        Self::from_kind(GroupKind::AddModN { bits })
    }

    pub fn spin_translation(sites: u32) -> Result<Self> {
        Self::from_kind(GroupKind::SpinTranslation { sites })
    }

    pub fn single_cycle(generator: Permutation) -> Result<Self> {
        Self::from_kind(GroupKind::SingleCycleAbelian { generator })
    }

    pub fn two_generator(g1: Permutation, g2: Permutation) -> Result<Self> {
        Self::from_kind(GroupKind::TwoGeneratorComposite { g1, g2 })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    /// Width `m` of the group register.
    pub fn index_bits(&self) -> u32 {
        self.index_bits
    }

    /// Size of the search space, `|G| = 2^m` index states.
    pub fn index_count(&self) -> u64 {
        1 << self.index_bits
    }

    /// Number of position bits the group acts on.
    pub fn position_bits(&self) -> u32 {
        self.position_bits
    }

    /// Order of the group when it is cyclic with `x -> g^x` indexing.
    pub fn cyclic_order(&self) -> Option<u64> {
        match &self.kind {
            GroupKind::AddModN { bits } => Some(1 << bits),
            GroupKind::SpinTranslation { sites } => Some(*sites as u64),
            GroupKind::SingleCycleAbelian { generator } => Some(generator.order()),
            GroupKind::TwoGeneratorComposite { .. } => None,
        }
    }

    /// True when index `x` and `x'` compose as `(x + x') mod 2^m`.
    pub fn is_additive(&self) -> bool {
        match &self.kind {
            GroupKind::AddModN { .. } | GroupKind::SingleCycleAbelian { .. } => true,
            GroupKind::SpinTranslation { sites } => sites.is_power_of_two(),
            GroupKind::TwoGeneratorComposite { .. } => false,
        }
    }

    /// `g(x) · v` without range checks.
    pub(crate) fn apply_unchecked(&self, x: u64, v: u64) -> u64 {
        match &self.kind {
            GroupKind::AddModN { bits } => (x + v) & ((1 << bits) - 1),
            GroupKind::SpinTranslation { sites } => rotate_toward_lsb(v, x % *sites as u64, *sites),
            GroupKind::SingleCycleAbelian { generator } => apply_power(generator, x, v),
            GroupKind::TwoGeneratorComposite { g1, g2 } => {
                let m1 = generator_bits(g1, "g1").unwrap_or(0);
                let m2 = generator_bits(g2, "g2").unwrap_or(0);
                let x1 = x & ((1 << m1) - 1);
                let x2 = (x >> m1) & ((1 << m2) - 1);
                if (x >> (m1 + m2)) & 1 == 0 {
                    apply_power(g2, x2, apply_power(g1, x1, v))
                } else {
                    apply_power(g1, x1, apply_power(g2, x2, v))
                }
            }
        }
    }
}

fn apply_power(g: &Permutation, times: u64, mut v: u64) -> u64 {
    for _ in 0..times {
        v = g.apply(v);
    }
    v
}

/// Rotates an `n`-bit string by `shift` sites toward the least-significant bit.
pub fn rotate_toward_lsb(v: u64, shift: u64, n: u32) -> u64 {
    let n = n as u64;
    let shift = shift % n;
    if shift == 0 {
        return v;
    }
    let mask = (1u64 << n) - 1;
    ((v >> shift) | (v << (n - shift))) & mask
}

/// A group together with the position set `[0, 2^n)` it acts on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub group: GroupSpec,
    pub n_position_bits: u32,
}

impl ProblemInstance {
    pub fn new(group: GroupSpec, n_position_bits: u32) -> Result<Self> {
        if group.position_bits() != n_position_bits {
            return Err(Error::InvalidGroup(format!(
                "group acts on {} position bits, instance declares {}",
                group.position_bits(),
                n_position_bits
            )));
        }
        Ok(Self { group, n_position_bits })
    }

    pub fn add_mod(bits: u32) -> Result<Self> {
        Self::new(GroupSpec::add_mod(bits)?, bits)
    }

    pub fn spin_translation(sites: u32) -> Result<Self> {
        Self::new(GroupSpec::spin_translation(sites)?, sites)
    }

    pub fn position_count(&self) -> u64 {
        1 << self.n_position_bits
    }

    pub fn index_count(&self) -> u64 {
        self.group.index_count()
    }

    fn check_position(&self, v: u64) -> Result<()> {
        if v >= self.position_count() {
            return Err(Error::OutOfRange { what: "position", value: v, limit: self.position_count() });
        }
        Ok(())
    }
}

/// `g(x) · v`.
pub fn group_apply(spec: &GroupSpec, x: u64, v: u64) -> Result<u64> {
    if x >= spec.index_count() {
        return Err(Error::OutOfRange { what: "group index", value: x, limit: spec.index_count() });
    }
    let limit = 1u64 << spec.position_bits();
    if v >= limit {
        return Err(Error::OutOfRange { what: "position", value: v, limit });
    }
    Ok(spec.apply_unchecked(x, v))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitResult {
    /// Smallest label in the orbit.
    pub v_rep: u64,
    /// Smallest index `x` with `g(x) · v = v_rep`.
    pub x_rep: u64,
    pub orbit_size: u64,
}

/// Exact orbit minimum by enumerating every index.
pub fn orbit_on_the_fly(instance: &ProblemInstance, v: u64) -> Result<OrbitResult> {
    instance.check_position(v)?;
    let group = &instance.group;
    let mut best = (v, 0);
    let mut members = HashSet::new();
    for x in 0..group.index_count() {
        let u = group.apply_unchecked(x, v);
        members.insert(u);
        if u < best.0 {
            best = (u, x);
        }
    }
    Ok(OrbitResult { v_rep: best.0, x_rep: best.1, orbit_size: members.len() as u64 })
}

/// Precomputed orbit results for every position label.
#[derive(Clone, Debug, PartialEq)]
pub struct LookupTable {
    entries: Vec<OrbitResult>,
}

impl LookupTable {
    pub fn get(&self, v: u64) -> Option<&OrbitResult> {
        self.entries.get(v as usize)
    }

    /// Number of stored entries, `|V|`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[OrbitResult] {
        &self.entries
    }

    /// Distinct orbit representatives, ascending.
    pub fn representatives(&self) -> Vec<u64> {
        let mut reps: Vec<u64> = self.entries.iter().map(|e| e.v_rep).collect();
        reps.sort_unstable();
        reps.dedup();
        reps
    }
}

pub fn build_lookup(instance: &ProblemInstance) -> Result<LookupTable> {
    build_lookup_with_capacity(instance, DEFAULT_LOOKUP_CAPACITY)
}

pub fn build_lookup_with_capacity(instance: &ProblemInstance, capacity: u64) -> Result<LookupTable> {
    let requested = instance.position_count();
    if requested > capacity {
        return Err(Error::CapacityExceeded { requested, capacity });
    }
    let entries = (0..requested)
        .map(|v| orbit_on_the_fly(instance, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(LookupTable { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_mod_examples() {
        let g = GroupSpec::add_mod(4).unwrap();
        assert_eq!(group_apply(&g, 3, 5).unwrap(), 8);
        assert_eq!(group_apply(&g, 15, 1).unwrap(), 0);
        assert!(matches!(group_apply(&g, 16, 1), Err(Error::OutOfRange { .. })));
        assert!(matches!(group_apply(&g, 1, 16), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn spin_rotation_direction() {
        let g = GroupSpec::spin_translation(4).unwrap();
        // 0b0110 -> 0b0011 -> 0b1001 -> 0b1100
        let cycle: Vec<u64> = (0..4).map(|x| group_apply(&g, x, 0b0110).unwrap()).collect();
        assert_eq!(cycle, vec![6, 3, 9, 12]);
    }

    #[test]
    fn orbit_examples() {
        let add = ProblemInstance::add_mod(4).unwrap();
        let r = orbit_on_the_fly(&add, 5).unwrap();
        assert_eq!((r.v_rep, r.x_rep, r.orbit_size), (0, 11, 16));
        let r = orbit_on_the_fly(&add, 0).unwrap();
        assert_eq!((r.v_rep, r.x_rep), (0, 0));

        let spin = ProblemInstance::spin_translation(4).unwrap();
        let r = orbit_on_the_fly(&spin, 6).unwrap();
        assert_eq!((r.v_rep, r.x_rep, r.orbit_size), (3, 1, 4));
    }

    #[test]
    fn lookup_add_mod_single_orbit() {
        let t = build_lookup(&ProblemInstance::add_mod(3).unwrap()).unwrap();
        assert_eq!(t.len(), 8);
        assert!(t.entries().iter().all(|e| e.v_rep == 0));
    }

    #[test]
    fn lookup_spin_representatives() {
        // Necklaces of 4 bits: 0000, 0001, 0011, 0101, 0111, 1111.
        let t = build_lookup(&ProblemInstance::spin_translation(4).unwrap()).unwrap();
        assert_eq!(t.len(), 16);
        assert_eq!(t.representatives(), vec![0, 1, 3, 5, 7, 15]);
    }

    #[test]
    fn lookup_capacity_guard() {
        let inst = ProblemInstance::add_mod(10).unwrap();
        let err = build_lookup_with_capacity(&inst, 512).unwrap_err();
        assert_eq!(err, Error::CapacityExceeded { requested: 1024, capacity: 512 });
    }

    #[test]
    fn invalid_groups_rejected() {
        let not_pow2 = Permutation::new(vec![1, 2, 0, 3]).unwrap();
        assert!(GroupSpec::single_cycle(not_pow2).is_err());
        assert!(Permutation::new(vec![0, 0, 1, 2]).is_err());
        assert!(ProblemInstance::new(GroupSpec::add_mod(3).unwrap(), 4).is_err());
    }

    #[test]
    fn non_power_of_two_spin_has_redundant_indices() {
        let g = GroupSpec::spin_translation(3).unwrap();
        assert_eq!(g.index_bits(), 2);
        assert_eq!(group_apply(&g, 3, 0b001).unwrap(), group_apply(&g, 0, 0b001).unwrap());
    }

    #[test]
    fn two_generator_order_bit() {
        // g1 = swap of labels {0,1}, g2 = swap of labels {1,2} (non-commuting).
        let g1 = Permutation::new(vec![1, 0, 2, 3]).unwrap();
        let g2 = Permutation::new(vec![0, 2, 1, 3]).unwrap();
        let g = GroupSpec::two_generator(g1, g2).unwrap();
        assert_eq!(g.index_bits(), 3);
        // x1 = 1, x2 = 1: order 0 gives g2(g1(0)) = g2(1) = 2, order 1 gives g1(g2(0)) = 1.
        assert_eq!(group_apply(&g, 0b011, 0).unwrap(), 2);
        assert_eq!(group_apply(&g, 0b111, 0).unwrap(), 1);
    }
}
