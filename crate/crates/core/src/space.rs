//! Finite measurable spaces.
//!
//! Every σ-algebra on a finite set is generated by its atoms, so a space is
//! a ground set together with a partition into blocks. Measurable sets are
//! unions of blocks and are stored as bit masks over the block indices.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ext::ExtReal;

/// Hard limit on the number of atoms (width of [`AtomSet`]).
pub const MAX_ATOMS: usize = 64;

/// Largest atom count for which operations enumerate all `2^k` sets.
pub const EXHAUSTIVE_BUDGET: usize = 12;

pub(crate) fn ensure_budget(what: &'static str, atoms: usize, limit: usize) -> Result<()> {
    if atoms > limit {
        Err(Error::ExplicitBudgetExceeded { what, atoms, limit })
    } else {
        Ok(())
    }
}

/// A measurable set: a union of atoms, as a bit mask over atom indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AtomSet(u64);

impl AtomSet {
    pub const EMPTY: AtomSet = AtomSet(0);

    pub fn from_bits(bits: u64) -> Self {
        AtomSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The whole space `E` on `k` atoms.
    pub fn full(k: usize) -> Self {
        if k >= 64 {
            AtomSet(u64::MAX)
        } else {
            AtomSet((1u64 << k) - 1)
        }
    }

    pub fn singleton(atom: usize) -> Self {
        AtomSet(1u64 << atom)
    }

    pub fn from_atoms<I: IntoIterator<Item = usize>>(atoms: I) -> Self {
        AtomSet(atoms.into_iter().fold(0, |m, a| m | (1u64 << a)))
    }

    pub fn contains(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }

    pub fn union(self, other: Self) -> Self {
        AtomSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        AtomSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        AtomSet(self.0 & !other.0)
    }

    pub fn complement(self, k: usize) -> Self {
        AtomSet(!self.0 & AtomSet::full(k).0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Lowest atom index, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Atom indices in increasing order.
    pub fn atoms(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self`, including `∅` and `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = AtomSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(AtomSet(cur))
        })
    }

    /// Set key: sorted atom indices joined by `+` (empty string for `∅`).
    pub fn key(self) -> String {
        self.atoms().map(|a| a.to_string()).collect::<Vec<_>>().join("+")
    }

    pub fn parse_key(key: &str, k: usize) -> Result<Self> {
        let key = key.trim();
        if key.is_empty() || key == "{}" {
            return Ok(AtomSet::EMPTY);
        }
        let mut set = AtomSet::EMPTY;
        for part in key.split('+') {
            let atom: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Model(format!("bad set key `{key}`")))?;
            if atom >= k {
                return Err(Error::DimensionMismatch { expected: k, found: atom + 1 });
            }
            set = set.union(AtomSet::singleton(atom));
        }
        Ok(set)
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key().replace('+', ","))
    }
}

impl serde::Serialize for AtomSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

/// Iterator over all `2^k` measurable sets of a `k`-atom space.
pub fn all_sets(k: usize) -> impl Iterator<Item = AtomSet> {
    AtomSet::full(k).subsets()
}

/// Like [`all_sets`] but refuses spaces above the exhaustive budget.
pub fn enumerate_sets(k: usize, what: &'static str) -> Result<impl Iterator<Item = AtomSet>> {
    ensure_budget(what, k, EXHAUSTIVE_BUDGET)?;
    Ok(all_sets(k))
}

/// All partitions of the atoms of `set` into nonempty blocks.
///
/// Generated by restricted-growth strings; the count is the Bell number of
/// `set.len()`.
pub fn set_partitions(set: AtomSet) -> Vec<Vec<AtomSet>> {
    let atoms: Vec<usize> = set.atoms().collect();
    let mut out = Vec::new();
    if atoms.is_empty() {
        out.push(Vec::new());
        return out;
    }
    let mut blocks: Vec<AtomSet> = Vec::new();
    fn rec(i: usize, atoms: &[usize], blocks: &mut Vec<AtomSet>, out: &mut Vec<Vec<AtomSet>>) {
        if i == atoms.len() {
            out.push(blocks.clone());
            return;
        }
        let a = AtomSet::singleton(atoms[i]);
        for b in 0..blocks.len() {
            let saved = blocks[b];
            blocks[b] = saved.union(a);
            rec(i + 1, atoms, blocks, out);
            blocks[b] = saved;
        }
        blocks.push(a);
        rec(i + 1, atoms, blocks, out);
        blocks.pop();
    }
    rec(0, &atoms, &mut blocks, &mut out);
    out
}

/// A finite measurable space: labelled ground set partitioned into atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    ground: Vec<String>,
    blocks: Vec<Vec<usize>>,
    atom_of: HashMap<String, usize>,
}

impl Space {
    /// Builds a space from a ground list and a partition of it.
    pub fn new<G: AsRef<str>, B: AsRef<str>>(ground: &[G], blocks: &[Vec<B>]) -> Result<Self> {
        let ground: Vec<String> = ground.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut position = HashMap::new();
        for (i, g) in ground.iter().enumerate() {
            if position.insert(g.clone(), i).is_some() {
                return Err(Error::DuplicateElement(g.clone()));
            }
        }
        if blocks.len() > MAX_ATOMS {
            return Err(Error::ExplicitBudgetExceeded {
                what: "space",
                atoms: blocks.len(),
                limit: MAX_ATOMS,
            });
        }
        let mut atom_of: HashMap<String, usize> = HashMap::new();
        let mut index_blocks = Vec::with_capacity(blocks.len());
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::EmptyBlock(b));
            }
            let mut idx = Vec::with_capacity(block.len());
            for label in block {
                let label = label.as_ref();
                let pos = *position
                    .get(label)
                    .ok_or_else(|| Error::UnknownElement(label.to_owned()))?;
                if atom_of.insert(label.to_owned(), b).is_some() {
                    return Err(Error::OverlappingBlocks(label.to_owned()));
                }
                idx.push(pos);
            }
            index_blocks.push(idx);
        }
        if let Some(missing) = ground.iter().find(|g| !atom_of.contains_key(*g)) {
            return Err(Error::UncoveredElement(missing.clone()));
        }
        Ok(Space {
            ground,
            blocks: index_blocks,
            atom_of,
        })
    }

    /// Discrete space: every element is its own atom.
    pub fn discrete<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let blocks: Vec<Vec<&str>> = labels.iter().map(|l| vec![l.as_ref()]).collect();
        Space::new(labels, &blocks)
    }

    /// Discrete space with labels `1..=k`.
    pub fn numbered(k: usize) -> Self {
        let labels: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
        Space::discrete(&labels).expect("numbered labels are distinct")
    }

    pub fn atom_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    /// Labels of the members of atom `i`.
    pub fn block_labels(&self, atom: usize) -> Vec<&str> {
        self.blocks[atom].iter().map(|&g| self.ground[g].as_str()).collect()
    }

    pub fn blocks(&self) -> Vec<Vec<&str>> {
        (0..self.atom_count()).map(|a| self.block_labels(a)).collect()
    }

    /// Label of the first member of atom `i`; names the atom in JSON documents.
    pub fn atom_label(&self, atom: usize) -> &str {
        &self.ground[self.blocks[atom][0]]
    }

    pub fn atom_of(&self, label: &str) -> Option<usize> {
        self.atom_of.get(label).copied()
    }

    pub fn full(&self) -> AtomSet {
        AtomSet::full(self.atom_count())
    }

    /// Number of measurable sets, `2^k`.
    pub fn algebra_size(&self) -> u128 {
        1u128 << self.atom_count()
    }

    pub fn sets(&self) -> Result<impl Iterator<Item = AtomSet>> {
        enumerate_sets(self.atom_count(), "set enumeration")
    }

    /// Parses a `+`-joined list of ground labels; the labels must form a
    /// union of whole atoms.
    pub fn parse_set(&self, text: &str) -> Result<AtomSet> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(AtomSet::EMPTY);
        }
        let distinct: std::collections::HashSet<&str> = text.split('+').map(str::trim).collect();
        let mut set = AtomSet::EMPTY;
        for &label in &distinct {
            let atom = self
                .atom_of(label)
                .ok_or_else(|| Error::UnknownElement(label.to_owned()))?;
            set = set.union(AtomSet::singleton(atom));
        }
        let members: usize = set.atoms().map(|a| self.blocks[a].len()).sum();
        if distinct.len() != members {
            return Err(Error::NotMeasurable(text.to_owned()));
        }
        Ok(set)
    }

    /// Renders a set as `+`-joined ground labels.
    pub fn format_set(&self, set: AtomSet) -> String {
        set.atoms()
            .flat_map(|a| self.block_labels(a))
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// An atom-constant (hence measurable) function `E → [0, ∞]`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(transparent)]
pub struct MeasurableFn {
    values: Vec<ExtReal>,
}

impl MeasurableFn {
    pub fn new(values: Vec<ExtReal>) -> Self {
        MeasurableFn { values }
    }

    pub fn from_f64(values: &[f64]) -> Result<Self> {
        Ok(MeasurableFn {
            values: values.iter().map(|&v| ExtReal::new(v)).collect::<Result<_>>()?,
        })
    }

    pub fn constant(k: usize, value: ExtReal) -> Self {
        MeasurableFn { values: vec![value; k] }
    }

    /// `value` on `set`, `0` elsewhere.
    pub fn indicator(k: usize, set: AtomSet, value: ExtReal) -> Self {
        MeasurableFn {
            values: (0..k)
                .map(|a| if set.contains(a) { value } else { ExtReal::ZERO })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> ExtReal {
        self.values[atom]
    }

    /// `{f > t}`, strict.
    pub fn level_set(&self, t: ExtReal) -> AtomSet {
        AtomSet::from_atoms((0..self.len()).filter(|&a| self.values[a] > t))
    }

    /// `{f ≥ t}`.
    pub fn level_set_ge(&self, t: ExtReal) -> AtomSet {
        AtomSet::from_atoms((0..self.len()).filter(|&a| self.values[a] >= t))
    }

    /// Infimum over `set`; `∞` on the empty set.
    pub fn inf_on(&self, set: AtomSet) -> ExtReal {
        set.atoms()
            .map(|a| self.values[a])
            .min()
            .unwrap_or(ExtReal::INFINITY)
    }

    /// Supremum over `set`; `0` on the empty set.
    pub fn sup_on(&self, set: AtomSet) -> ExtReal {
        set.atoms().map(|a| self.values[a]).max().unwrap_or(ExtReal::ZERO)
    }

    pub fn map(&self, f: impl Fn(ExtReal) -> ExtReal) -> Self {
        MeasurableFn {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(ExtReal, ExtReal) -> ExtReal) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(MeasurableFn {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Pointwise maximum `f ⊕ g`.
    pub fn sup(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, Ord::max)
    }

    /// Atoms on which the two functions differ beyond tolerance.
    pub fn disagreement(&self, other: &Self) -> Result<AtomSet> {
        check_len(self.len(), other.len())?;
        Ok(AtomSet::from_atoms(
            (0..self.len()).filter(|&a| !self.values[a].approx_eq(other.values[a])),
        ))
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Anything that assigns a value to every measurable set of a `k`-atom space.
pub trait SetFn {
    fn atom_count(&self) -> usize;
    fn eval(&self, set: AtomSet) -> ExtReal;

    /// Whether `set` is negligible: contained in a measurable null set. On
    /// the atom algebra this is `eval(set) == 0` for monotone set functions.
    fn is_negligible(&self, set: AtomSet) -> bool {
        self.eval(set).is_zero()
    }
}

/// A set function given by its full table over the `2^k` measurable sets.
#[derive(Clone, Debug, PartialEq)]
pub struct SetFunction {
    atoms: usize,
    table: Vec<ExtReal>,
}

impl SetFunction {
    /// `table[mask]` is the value of the set with that atom mask.
    pub fn new(atoms: usize, table: Vec<ExtReal>) -> Result<Self> {
        ensure_budget("set function table", atoms, EXHAUSTIVE_BUDGET)?;
        check_len(1 << atoms, table.len())?;
        if !table[0].is_zero() {
            return Err(Error::InvalidSetFunction(format!(
                "value at the empty set is {}, expected 0",
                table[0]
            )));
        }
        Ok(SetFunction { atoms, table })
    }

    pub fn from_fn(atoms: usize, f: impl Fn(AtomSet) -> ExtReal) -> Result<Self> {
        ensure_budget("set function table", atoms, EXHAUSTIVE_BUDGET)?;
        let table = all_sets(atoms)
            .map(|s| if s.is_empty() { ExtReal::ZERO } else { f(s) })
            .collect();
        Ok(SetFunction { atoms, table })
    }

    /// Tabulates any set function.
    pub fn tabulate(w: &impl SetFn) -> Result<Self> {
        SetFunction::from_fn(w.atom_count(), |s| w.eval(s))
    }

    pub fn table(&self) -> &[ExtReal] {
        &self.table
    }

    pub fn with_value(mut self, set: AtomSet, value: ExtReal) -> Result<Self> {
        if set.is_empty() && !value.is_zero() {
            return Err(Error::InvalidSetFunction("value at the empty set must be 0".into()));
        }
        self.table[set.bits() as usize] = value;
        Ok(self)
    }

    /// Whether every value agrees with `other` within tolerance.
    pub fn approx_eq(&self, other: &impl SetFn) -> Option<AtomSet> {
        all_sets(self.atoms).find(|&s| !self.eval(s).approx_eq(other.eval(s)))
    }
}

impl SetFn for SetFunction {
    fn atom_count(&self) -> usize {
        self.atoms
    }

    fn eval(&self, set: AtomSet) -> ExtReal {
        self.table[set.bits() as usize]
    }
}
