//! Zero-sum sequences over finite abelian groups: the block monoid `B(G₀)`
//! and the T-block monoid `B(G₀, T, ι)` with `T` a product of numerical
//! monoids and `ι(t) = Σ tᵢ·gᵢ`.
//!
//! Internally a sequence over `G₀` is a multiplicity vector indexed by the
//! position of each element in the sorted list `G₀`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::factor::LengthSet;
use crate::groups::{FiniteAbelianGroup, GroupElement, GroupError};
use crate::numon::NumericalMonoid;

/// Largest group order accepted by the block-monoid enumerations.
pub const GROUP_CAP: u64 = 64;
/// Longest block whose set of lengths is computed.
pub const BLOCK_LENGTH_CAP: usize = 127;
/// Largest number of candidate sequences an enumeration may visit.
pub const ENUMERATION_CAP: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    GroupTooLarge { order: u64, cap: u64 },
    #[error("sequence does not sum to zero")]
    NotZeroSum,
    #[error("element {0:?} is not in G0")]
    NotOverG0(GroupElement),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("t has {found} coordinates, expected {expected}")]
    DimensionMismatch { found: usize, expected: usize },
    #[error("t coordinate {index} = {value} is not in its numerical monoid")]
    NotInComponent { index: usize, value: u64 },
}

/// A finite multiset of group elements.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    counts: BTreeMap<GroupElement, u64>,
}

impl Block {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_elements<I: IntoIterator<Item = GroupElement>>(elems: I) -> Self {
        let mut counts = BTreeMap::new();
        for e in elems {
            *counts.entry(e).or_insert(0) += 1;
        }
        Self { counts }
    }

    pub fn from_counts(counts: BTreeMap<GroupElement, u64>) -> Self {
        Self { counts: counts.into_iter().filter(|&(_, c)| c > 0).collect() }
    }

    pub fn counts(&self) -> &BTreeMap<GroupElement, u64> {
        &self.counts
    }

    /// Elements with multiplicity, in tuple order.
    pub fn elements(&self) -> Vec<GroupElement> {
        self.counts.iter().flat_map(|(e, &c)| std::iter::repeat_n(e.clone(), c as usize)).collect()
    }

    pub fn len(&self) -> usize {
        self.counts.values().sum::<u64>() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn sum(&self, g: &FiniteAbelianGroup) -> GroupElement {
        self.counts.iter().fold(g.zero(), |acc, (e, &c)| g.add(&acc, &g.scale(e, c)))
    }

    pub fn is_zero_sum(&self, g: &FiniteAbelianGroup) -> bool {
        self.sum(g).iter().all(|&x| x == 0)
    }

    fn canonical_key(&self) -> Vec<GroupElement> {
        self.elements()
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(|e| element_key(e)).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// `"a,b,…"`; the identity of the trivial group is the empty string.
pub fn element_key(e: &[u64]) -> String {
    e.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub fn parse_element_key(s: &str) -> Result<GroupElement, String> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"))).collect()
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, u64> = self.counts.iter().map(|(e, &c)| (element_key(e), c)).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = BTreeMap::<String, u64>::deserialize(d)?;
        let mut counts = BTreeMap::new();
        for (k, c) in m {
            let e = parse_element_key(&k).map_err(serde::de::Error::custom)?;
            *counts.entry(e).or_insert(0) += c;
        }
        Ok(Block::from_counts(counts))
    }
}

/// `{"group": [...], "multiplicities": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub group: FiniteAbelianGroup,
    pub multiplicities: Block,
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// `B(G₀)` together with its atoms and a memo of sets of lengths.
pub struct BlockMonoid {
    group: FiniteAbelianGroup,
    g0: Vec<GroupElement>,
    /// Group index of each `G₀` position.
    g0_index: Vec<usize>,
    /// `G₀` position of each group index.
    position: Vec<Option<usize>>,
    add: Vec<Vec<usize>>,
    neg: Vec<usize>,
    atoms: Vec<Vec<u32>>,
    atoms_with: Vec<Vec<usize>>,
    memo: HashMap<Vec<u32>, u128>,
}

impl BlockMonoid {
    pub fn new(group: FiniteAbelianGroup, g0: &[GroupElement]) -> Result<Self, BlockError> {
        let order = group.order();
        if order > GROUP_CAP {
            return Err(BlockError::GroupTooLarge { order, cap: GROUP_CAP });
        }
        for e in g0 {
            group.check(e)?;
        }
        let mut g0: Vec<GroupElement> = g0.to_vec();
        g0.sort();
        g0.dedup();
        let n = order as usize;
        let elems = group.elements();
        let add: Vec<Vec<usize>> =
            elems.iter().map(|a| elems.iter().map(|b| group.index_of(&group.add(a, b))).collect()).collect();
        let neg: Vec<usize> = elems.iter().map(|a| group.index_of(&group.neg(a))).collect();
        let g0_index: Vec<usize> = g0.iter().map(|e| group.index_of(e)).collect();
        let mut position = vec![None; n];
        for (p, &i) in g0_index.iter().enumerate() {
            position[i] = Some(p);
        }
        let mut bm = Self {
            group,
            g0,
            g0_index,
            position,
            add,
            neg,
            atoms: Vec::new(),
            atoms_with: Vec::new(),
            memo: HashMap::new(),
        };
        bm.atoms = bm.find_atoms();
        bm.atoms_with =
            (0..bm.g0.len()).map(|p| (0..bm.atoms.len()).filter(|&a| bm.atoms[a][p] > 0).collect()).collect();
        Ok(bm)
    }

    /// `B(G)` over the whole group.
    pub fn full(group: FiniteAbelianGroup) -> Result<Self, BlockError> {
        if group.order() > GROUP_CAP {
            return Err(BlockError::GroupTooLarge { order: group.order(), cap: GROUP_CAP });
        }
        let g0 = group.elements();
        Self::new(group, &g0)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn g0(&self) -> &[GroupElement] {
        &self.g0
    }

    /// Minimal zero-sum sequences `T·g` where `T` is zero-sum free and
    /// `g = −σ(T)` is at least every element of `T`, so each atom is produced
    /// exactly once. Zero-sum free sequences are grown while tracking their
    /// set of nonempty subsums as a bitmask over the group.
    fn find_atoms(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut seq: Vec<usize> = Vec::new();
        self.grow(&mut seq, 0, 0, 0, &mut out);
        let mut keyed: Vec<(Vec<usize>, Vec<u32>)> = out
            .into_iter()
            .map(|m: Vec<u32>| {
                let key: Vec<usize> =
                    m.iter().enumerate().flat_map(|(p, &c)| std::iter::repeat_n(p, c as usize)).collect();
                (key, m)
            })
            .collect();
        keyed.sort();
        keyed.into_iter().map(|(_, m)| m).collect()
    }

    fn grow(&self, seq: &mut Vec<usize>, start: usize, sum: usize, subsums: u64, out: &mut Vec<Vec<u32>>) {
        let closing = self.neg[sum];
        if let Some(p) = self.position[closing] {
            if p >= start || seq.is_empty() {
                let mut m = vec![0u32; self.g0.len()];
                for &q in seq.iter() {
                    m[q] += 1;
                }
                m[p] += 1;
                if seq.last().is_none_or(|&last| p >= last) {
                    out.push(m);
                }
            }
        }
        for p in start..self.g0.len() {
            let h = self.g0_index[p];
            let mut next = subsums | (1u64 << h);
            let mut bits = subsums;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                next |= 1u64 << self.add[i][h];
                bits &= bits - 1;
            }
            if next & 1 != 0 {
                // index 0 is the identity: T·h has a zero-sum subsequence
                continue;
            }
            seq.push(p);
            self.grow(seq, p, self.add[sum][h], next, out);
            seq.pop();
        }
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> Vec<Block> {
        self.atoms.iter().map(|m| self.to_block(m)).collect()
    }

    pub fn to_block(&self, m: &[u32]) -> Block {
        Block::from_counts(
            m.iter().enumerate().filter(|&(_, &c)| c > 0).map(|(p, &c)| (self.g0[p].clone(), c as u64)).collect(),
        )
    }

    /// Multiplicity vector of a zero-sum block over `G₀`.
    pub fn to_counts(&self, b: &Block) -> Result<Vec<u32>, BlockError> {
        let mut m = vec![0u32; self.g0.len()];
        for (e, &c) in b.counts() {
            self.group.check(e)?;
            let p = self.position[self.group.index_of(e)].ok_or_else(|| BlockError::NotOverG0(e.clone()))?;
            m[p] = c as u32;
        }
        if !b.is_zero_sum(&self.group) {
            return Err(BlockError::NotZeroSum);
        }
        Ok(m)
    }

    fn lengths_bits(&mut self, m: &[u32]) -> u128 {
        let Some(first) = m.iter().position(|&c| c > 0) else {
            return 1;
        };
        if let Some(&bits) = self.memo.get(m) {
            return bits;
        }
        let mut bits = 0u128;
        let candidates = self.atoms_with[first].clone();
        let mut rest = m.to_vec();
        for a in candidates {
            let atom = &self.atoms[a];
            if atom.iter().zip(m).all(|(x, y)| x <= y) {
                for (r, (&y, &x)) in rest.iter_mut().zip(m.iter().zip(atom)) {
                    *r = y - x;
                }
                let sub = rest.clone();
                bits |= self.lengths_bits(&sub) << 1;
            }
        }
        self.memo.insert(m.to_vec(), bits);
        bits
    }

    /// `L(b)`, exact.
    pub fn length_set(&mut self, b: &Block) -> Result<LengthSet, BlockError> {
        if b.len() > BLOCK_LENGTH_CAP {
            return Err(BlockError::CapExceeded(format!("block length {} > {BLOCK_LENGTH_CAP}", b.len())));
        }
        let m = self.to_counts(b)?;
        Ok(bits_to_set(self.lengths_bits(&m)))
    }

    /// All factorizations of `b`. Each is a list of atoms in canonical order;
    /// the list of factorizations is sorted lexicographically.
    pub fn factorizations(&self, b: &Block) -> Result<Vec<Vec<Block>>, BlockError> {
        let m = self.to_counts(b)?;
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.partitions(&mut m.clone(), 0, &mut chosen, &mut out);
        Ok(out.into_iter().map(|f| f.iter().map(|&a| self.to_block(&self.atoms[a])).collect()).collect())
    }

    fn partitions(&self, rest: &mut Vec<u32>, start: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(first) = rest.iter().position(|&c| c > 0) else {
            out.push(chosen.clone());
            return;
        };
        for a in start..self.atoms.len() {
            let atom = &self.atoms[a];
            if !atom.iter().zip(rest.iter()).all(|(x, y)| x <= y) {
                continue;
            }
            // The first remaining element has to be covered by this atom or a later one.
            if !self.atoms_with[first].iter().any(|&b| b >= a) {
                break;
            }
            for (r, &x) in rest.iter_mut().zip(atom) {
                *r -= x;
            }
            chosen.push(a);
            self.partitions(rest, a, chosen, out);
            chosen.pop();
            for (r, &x) in rest.iter_mut().zip(atom) {
                *r += x;
            }
        }
    }

    /// Visit every zero-sum multiplicity vector of total length `≤ cap`.
    fn for_each_block(&mut self, cap: usize, mut visit: impl FnMut(&mut Self, &[u32])) -> Result<(), BlockError> {
        if cap > BLOCK_LENGTH_CAP {
            return Err(BlockError::CapExceeded(format!("length cap {cap} > {BLOCK_LENGTH_CAP}")));
        }
        let k = self.g0.len() as u128;
        let count = binomial(cap as u128 + k, k);
        if count > ENUMERATION_CAP {
            return Err(BlockError::CapExceeded(format!("{count} candidate sequences exceed {ENUMERATION_CAP}")));
        }
        let mut m = vec![0u32; self.g0.len()];
        let mut stack: Vec<Vec<u32>> = Vec::new();
        self.collect_blocks(0, cap, 0, &mut m, &mut stack);
        for b in stack {
            visit(self, &b);
        }
        Ok(())
    }

    fn collect_blocks(&self, p: usize, left: usize, sum: usize, m: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if p == self.g0.len() {
            if sum == 0 {
                out.push(m.clone());
            }
            return;
        }
        let h = self.g0_index[p];
        let mut s = sum;
        for c in 0..=left {
            m[p] = c as u32;
            self.collect_blocks(p + 1, left - c, s, m, out);
            s = self.add[s][h];
        }
        m[p] = 0;
    }

    /// Union of `Δ(L(b))` over blocks of length `≤ cap`.
    pub fn delta_within(&mut self, cap: usize) -> Result<BTreeSet<u64>, BlockError> {
        let mut acc = BTreeSet::new();
        self.for_each_block(cap, |bm, m| {
            acc.extend(bits_to_set(bm.lengths_bits(m)).delta());
        })?;
        Ok(acc)
    }

    /// Union of the `L(b)` containing `k`, over blocks of length `≤ cap`.
    pub fn uk_within(&mut self, k: u64, cap: usize) -> Result<LengthSet, BlockError> {
        let mut acc = LengthSet::new();
        self.for_each_block(cap, |bm, m| {
            let l = bits_to_set(bm.lengths_bits(m));
            if l.contains(k) {
                acc.extend(&l);
            }
        })?;
        Ok(acc)
    }

    /// Every set of lengths of a block of length `≤ cap`.
    pub fn length_sets_within(&mut self, cap: usize) -> Result<BTreeSet<Vec<u64>>, BlockError> {
        let mut acc = BTreeSet::new();
        self.for_each_block(cap, |bm, m| {
            acc.insert(bits_to_set(bm.lengths_bits(m)).to_vec());
        })?;
        Ok(acc)
    }
}

fn bits_to_set(bits: u128) -> LengthSet {
    (0..128u64).filter(|&i| bits >> i & 1 == 1).collect()
}

/// Atoms of `B(G₀)` in canonical order.
pub fn minimal_zero_sum_atoms(g: &FiniteAbelianGroup, g0: &[GroupElement]) -> Result<Vec<Block>, BlockError> {
    Ok(BlockMonoid::new(g.clone(), g0)?.atoms())
}

/// Longest minimal zero-sum sequence over `G \ {0}`; 0 for the trivial group.
pub fn davenport_constant(g: &FiniteAbelianGroup) -> Result<u64, BlockError> {
    if g.order() > GROUP_CAP {
        return Err(BlockError::GroupTooLarge { order: g.order(), cap: GROUP_CAP });
    }
    let nonzero: Vec<GroupElement> = g.elements().into_iter().skip(1).collect();
    let bm = BlockMonoid::new(g.clone(), &nonzero)?;
    Ok(bm.atoms.iter().map(|m| m.iter().map(|&c| c as u64).sum()).max().unwrap_or(0))
}

pub fn block_length_set(g: &FiniteAbelianGroup, g0: &[GroupElement], b: &Block) -> Result<LengthSet, BlockError> {
    BlockMonoid::new(g.clone(), g0)?.length_set(b)
}

pub fn block_factorizations(
    g: &FiniteAbelianGroup,
    g0: &[GroupElement],
    b: &Block,
) -> Result<Vec<Vec<Block>>, BlockError> {
    BlockMonoid::new(g.clone(), g0)?.factorizations(b)
}

/// A result that is exhaustive only up to the recorded cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Capped<T> {
    pub values: T,
    pub cap: usize,
    pub complete: bool,
}

/// `Δ(B(G))` restricted to blocks of length `≤ cap`.
pub fn delta_block_monoid(g: &FiniteAbelianGroup, cap: usize) -> Result<Capped<BTreeSet<u64>>, BlockError> {
    let values = BlockMonoid::full(g.clone())?.delta_within(cap)?;
    Ok(Capped { values, cap, complete: false })
}

/// `U_k(B(G))` restricted to blocks of length `≤ cap`.
pub fn uk_block_monoid(g: &FiniteAbelianGroup, k: u64, cap: usize) -> Result<Capped<LengthSet>, BlockError> {
    let values = BlockMonoid::full(g.clone())?.uk_within(k, cap)?;
    Ok(Capped { values, cap, complete: false })
}

/// One factor `Dᵢ` of `T` together with its image class `gᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TBlockComponent {
    pub monoid: NumericalMonoid,
    pub class: GroupElement,
}

/// Data of `B(G₀, T, ι)` with `T = D₁ × … × Dₙ` and `ι(t) = Σ tᵢ·gᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TBlockSpec {
    pub group: FiniteAbelianGroup,
    pub g0: Vec<GroupElement>,
    pub components: Vec<TBlockComponent>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TBlockElement {
    pub block: Block,
    pub t: Vec<u64>,
}

/// Search caps: block length and the largest value of each `t` coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TBlockCaps {
    pub block_length: usize,
    pub t_max: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TBlockAtoms {
    pub atoms: Vec<TBlockElement>,
    pub caps: TBlockCaps,
    pub complete: bool,
}

impl TBlockSpec {
    pub fn new(
        group: FiniteAbelianGroup,
        g0: Vec<GroupElement>,
        components: Vec<TBlockComponent>,
    ) -> Result<Self, BlockError> {
        let spec = Self { group, g0, components };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<(), BlockError> {
        if self.group.order() > GROUP_CAP {
            return Err(BlockError::GroupTooLarge { order: self.group.order(), cap: GROUP_CAP });
        }
        for e in self.g0.iter().chain(self.components.iter().map(|c| &c.class)) {
            self.group.check(e)?;
        }
        Ok(())
    }

    pub fn iota(&self, t: &[u64]) -> GroupElement {
        self.components
            .iter()
            .zip(t)
            .fold(self.group.zero(), |acc, (c, &ti)| self.group.add(&acc, &self.group.scale(&c.class, ti)))
    }

    /// Exact membership test for `B(G₀, T, ι)`.
    pub fn validate(&self, e: &TBlockElement) -> Result<(), BlockError> {
        self.check()?;
        for x in e.block.counts().keys() {
            self.group.check(x)?;
            if !self.g0.contains(x) {
                return Err(BlockError::NotOverG0(x.clone()));
            }
        }
        if e.t.len() != self.components.len() {
            return Err(BlockError::DimensionMismatch { found: e.t.len(), expected: self.components.len() });
        }
        for (i, (c, &ti)) in self.components.iter().zip(&e.t).enumerate() {
            if !c.monoid.contains(ti as i64) {
                return Err(BlockError::NotInComponent { index: i, value: ti });
            }
        }
        let total = self.group.add(&e.block.sum(&self.group), &self.iota(&e.t));
        if total.iter().any(|&x| x != 0) {
            return Err(BlockError::NotZeroSum);
        }
        Ok(())
    }

    pub fn contains(&self, e: &TBlockElement) -> bool {
        self.validate(e).is_ok()
    }

    fn engine(&self) -> TBlockEngine<'_> {
        let mut g0 = self.g0.clone();
        g0.sort();
        g0.dedup();
        TBlockEngine { spec: self, g0, atom_memo: HashMap::new(), length_memo: HashMap::new() }
    }

    /// Atoms whose block part has length `≤ caps.block_length` and whose `t`
    /// coordinates are `≤ caps.t_max`, in canonical order. Atomicity of each
    /// listed element is exact; atoms beyond the caps are not listed.
    pub fn atoms_bounded(&self, caps: TBlockCaps) -> Result<TBlockAtoms, BlockError> {
        self.check()?;
        let mut eng = self.engine();
        let elems = eng.elements_within(caps)?;
        let mut atoms: Vec<TBlockElement> = Vec::new();
        for (m, t) in elems {
            if eng.is_atom(&m, &t) {
                atoms.push(eng.to_element(&m, &t));
            }
        }
        atoms.sort_by(|a, b| (a.block.canonical_key(), &a.t).cmp(&(b.block.canonical_key(), &b.t)));
        Ok(TBlockAtoms { atoms, caps, complete: false })
    }

    /// `L(e)`. Every divisor of `e` is bounded by `e`, so the result is exact;
    /// the caps only bound which elements are accepted.
    pub fn length_set(&self, e: &TBlockElement, caps: TBlockCaps) -> Result<LengthSet, BlockError> {
        self.validate(e)?;
        if e.block.len() > caps.block_length || e.t.iter().any(|&x| x > caps.t_max) {
            return Err(BlockError::CapExceeded(format!(
                "element exceeds caps (block length {}, t max {})",
                caps.block_length, caps.t_max
            )));
        }
        let mut eng = self.engine();
        let m = eng.to_counts(&e.block);
        Ok(eng.lengths(&m, &e.t))
    }
}

/// Block multiplicities over the sorted `G₀` together with `t`.
type Point = (Vec<u32>, Vec<u64>);

struct TBlockEngine<'a> {
    spec: &'a TBlockSpec,
    g0: Vec<GroupElement>,
    atom_memo: HashMap<Point, bool>,
    length_memo: HashMap<Point, LengthSet>,
}

impl TBlockEngine<'_> {
    fn to_counts(&self, b: &Block) -> Vec<u32> {
        self.g0.iter().map(|e| b.counts().get(e).copied().unwrap_or(0) as u32).collect()
    }

    fn to_element(&self, m: &[u32], t: &[u64]) -> TBlockElement {
        let block = Block::from_counts(self.g0.iter().cloned().zip(m.iter().map(|&c| c as u64)).collect());
        TBlockElement { block, t: t.to_vec() }
    }

    fn is_zero(&self, m: &[u32], t: &[u64]) -> bool {
        let g = &self.spec.group;
        let s = self.g0.iter().zip(m).fold(self.spec.iota(t), |acc, (e, &c)| g.add(&acc, &g.scale(e, c as u64)));
        s.iter().all(|&x| x == 0)
    }

    fn elements_within(&self, caps: TBlockCaps) -> Result<Vec<Point>, BlockError> {
        let k = self.g0.len() as u128;
        let blocks = binomial(caps.block_length as u128 + k, k);
        let ts = (caps.t_max as u128 + 1).saturating_pow(self.spec.components.len() as u32);
        if blocks.saturating_mul(ts) > ENUMERATION_CAP {
            return Err(BlockError::CapExceeded(format!(
                "{} candidate elements exceed {ENUMERATION_CAP}",
                blocks.saturating_mul(ts)
            )));
        }
        let mut multisets: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..self.g0.len() {
            multisets = multisets
                .into_iter()
                .flat_map(|m| {
                    let used: u32 = m.iter().sum();
                    (0..=caps.block_length as u32 - used).map(move |c| {
                        let mut n = m.clone();
                        n.push(c);
                        n
                    })
                })
                .collect();
        }
        let mut tvecs: Vec<Vec<u64>> = vec![vec![]];
        for c in &self.spec.components {
            let values: Vec<u64> = (0..=caps.t_max).filter(|&x| c.monoid.contains(x as i64)).collect();
            tvecs = tvecs
                .into_iter()
                .flat_map(|t| {
                    values.iter().map(move |&x| {
                        let mut u = t.clone();
                        u.push(x);
                        u
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for m in &multisets {
            for t in &tvecs {
                if self.is_zero(m, t) {
                    out.push((m.clone(), t.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Proper nonidentity divisors `(m', t')` of `(m, t)` inside the monoid.
    fn divisors(&self, m: &[u32], t: &[u64]) -> Vec<Point> {
        let mut subs: Vec<Vec<u32>> = vec![vec![]];
        for &c in m {
            subs = subs
                .into_iter()
                .flat_map(|s| {
                    (0..=c).map(move |x| {
                        let mut n = s.clone();
                        n.push(x);
                        n
                    })
                })
                .collect();
        }
        let mut tsubs: Vec<Vec<u64>> = vec![vec![]];
        for (c, &ti) in self.spec.components.iter().zip(t) {
            let values: Vec<u64> =
                (0..=ti).filter(|&x| c.monoid.contains(x as i64) && c.monoid.contains((ti - x) as i64)).collect();
            tsubs = tsubs
                .into_iter()
                .flat_map(|s| {
                    values.iter().map(move |&x| {
                        let mut u = s.clone();
                        u.push(x);
                        u
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for s in &subs {
            for u in &tsubs {
                let identity = s.iter().all(|&x| x == 0) && u.iter().all(|&x| x == 0);
                let whole = s.as_slice() == m && u.as_slice() == t;
                if !identity && !whole && self.is_zero(s, u) {
                    out.push((s.clone(), u.clone()));
                }
            }
        }
        out
    }

    fn is_atom(&mut self, m: &[u32], t: &[u64]) -> bool {
        if m.iter().all(|&x| x == 0) && t.iter().all(|&x| x == 0) {
            return false;
        }
        let key = (m.to_vec(), t.to_vec());
        if let Some(&a) = self.atom_memo.get(&key) {
            return a;
        }
        let a = self.divisors(m, t).is_empty();
        self.atom_memo.insert(key, a);
        a
    }

    fn lengths(&mut self, m: &[u32], t: &[u64]) -> LengthSet {
        if m.iter().all(|&x| x == 0) && t.iter().all(|&x| x == 0) {
            return LengthSet::singleton(0);
        }
        let key = (m.to_vec(), t.to_vec());
        if let Some(l) = self.length_memo.get(&key) {
            return l.clone();
        }
        let first = m.iter().position(|&c| c > 0);
        let mut candidates = self.divisors(m, t);
        candidates.push((m.to_vec(), t.to_vec()));
        let mut out = LengthSet::new();
        for (dm, dt) in candidates {
            if let Some(f) = first {
                if dm[f] == 0 {
                    continue;
                }
            }
            if !self.is_atom(&dm, &dt) {
                continue;
            }
            let rm: Vec<u32> = m.iter().zip(&dm).map(|(a, b)| a - b).collect();
            let rt: Vec<u64> = t.iter().zip(&dt).map(|(a, b)| a - b).collect();
            for l in self.lengths(&rm, &rt).iter() {
                out.insert(l + 1);
            }
        }
        self.length_memo.insert(key, out.clone());
        out
    }
}
