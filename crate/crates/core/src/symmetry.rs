//! Signed permutations of coordinates and the finite groups they generate.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rat::{Rat, RVec};

/// A signed coordinate permutation of `R^n`: coordinate `i` of the input is
/// multiplied by `signs[i]` and sent to position `perm[i]` of the output.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    perm: Vec<usize>, // 0-based internally
    signs: Vec<i8>,   // each ±1
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("perm and signs have mismatched lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("perm is not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("signs must all be ±1")]
    BadSign,
}

impl SignedPerm {
    /// `perm` is 0-based here; the JSON form is 1-based.
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self, SymmetryError> {
        if perm.len() != signs.len() {
            return Err(SymmetryError::LengthMismatch(perm.len(), signs.len()));
        }
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(SymmetryError::NotAPermutation(n));
            }
            seen[p] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(SymmetryError::BadSign);
        }
        Ok(SignedPerm { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPerm {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// Sign flip at 0-based coordinate `i`.
    pub fn sign_flip(n: usize, i: usize) -> Self {
        let mut signs = vec![1; n];
        signs[i] = -1;
        SignedPerm {
            perm: (0..n).collect(),
            signs,
        }
    }

    /// Pure permutation sending input coordinate `i` to position `perm[i]`.
    pub fn permutation(perm: Vec<usize>) -> Result<Self, SymmetryError> {
        let n = perm.len();
        Self::new(perm, vec![1; n])
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p == i) && self.signs.iter().all(|&s| s == 1)
    }

    pub fn apply(&self, v: &[Rat]) -> RVec {
        assert_eq!(v.len(), self.dim());
        let mut out = vec![Rat::zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            out[self.perm[i]] = if self.signs[i] == 1 { x.clone() } else { -x };
        }
        out
    }

    /// Action on linear functionals so that `(g · f)(g · v) = f(v)`.
    pub fn apply_functional(&self, linear: &[Rat]) -> RVec {
        // Same formula as the point action: coefficients transform covariantly
        // because the matrix of a signed permutation is its own inverse
        // transpose up to the same signed-permutation structure.
        self.apply(linear)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut signs = vec![1i8; n];
        for i in 0..n {
            perm[i] = self.perm[other.perm[i]];
            signs[i] = other.signs[i] * self.signs[other.perm[i]];
        }
        SignedPerm { perm, signs }
    }

    pub fn inverse(&self) -> SignedPerm {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut signs = vec![1i8; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        SignedPerm { perm, signs }
    }

    /// Where 0-based index `i` is sent (ignoring sign).
    pub fn image_of(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn sign_of(&self, i: usize) -> i8 {
        self.signs[i]
    }

    /// Restriction to the first `k` coordinates; valid only when the
    /// permutation maps that block to itself.
    pub fn restrict(&self, k: usize) -> Option<SignedPerm> {
        if self.perm[..k].iter().any(|&p| p >= k) {
            return None;
        }
        Some(SignedPerm {
            perm: self.perm[..k].to_vec(),
            signs: self.signs[..k].to_vec(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct SignedPermWire {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl Serialize for SignedPerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SignedPermWire {
            perm: self.perm.iter().map(|&p| p + 1).collect(),
            signs: self.signs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedPerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = SignedPermWire::deserialize(d)?;
        if wire.perm.contains(&0) {
            return Err(D::Error::custom("perm entries are 1-based"));
        }
        let perm = wire.perm.iter().map(|&p| p - 1).collect();
        SignedPerm::new(perm, wire.signs).map_err(D::Error::custom)
    }
}

/// A finite group of signed permutations, closed under composition.
#[derive(Debug, Clone)]
pub struct Group {
    elements: Vec<SignedPerm>,
}

impl Group {
    /// Closure of the generators under composition and inversion.
    pub fn generate(n: usize, generators: &[SignedPerm]) -> Group {
        let mut seen: HashSet<SignedPerm> = HashSet::new();
        let mut queue: VecDeque<SignedPerm> = VecDeque::new();
        let id = SignedPerm::identity(n);
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(g) = queue.pop_front() {
            for h in generators {
                let gh = h.compose(&g);
                if seen.insert(gh.clone()) {
                    queue.push_back(gh);
                }
            }
        }
        let mut elements: Vec<SignedPerm> = seen.into_iter().collect();
        elements.sort();
        Group { elements }
    }

    pub fn trivial(n: usize) -> Group {
        Group {
            elements: vec![SignedPerm::identity(n)],
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SignedPerm] {
        &self.elements
    }

    pub fn contains(&self, g: &SignedPerm) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Orbit of a point, sorted and deduplicated.
    pub fn orbit(&self, v: &[Rat]) -> Vec<RVec> {
        let mut orbit: BTreeSet<RVec> = BTreeSet::new();
        for g in &self.elements {
            orbit.insert(g.apply(v));
        }
        orbit.into_iter().collect()
    }

    /// Elements fixing `set` as a set, given as indices into `points`.
    pub fn setwise_stabilizer(&self, points: &[RVec], set: &[usize]) -> Group {
        let index: HashMap<&RVec, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let target: BTreeSet<usize> = set.iter().copied().collect();
        let elements = self
            .elements
            .iter()
            .filter(|g| {
                set.iter().all(|&i| {
                    index
                        .get(&g.apply(&points[i]))
                        .map(|j| target.contains(j))
                        .unwrap_or(false)
                })
            })
            .cloned()
            .collect();
        Group { elements }
    }
}

/// Precomputed action of a group on a fixed point list: `table[g][i]` is the
/// index of the image of `points[i]` under element `g`, when the point set is
/// group-invariant.
#[derive(Debug, Clone)]
pub struct IndexAction {
    table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
#[error("point set is not invariant under the group")]
pub struct NotInvariant;

impl IndexAction {
    pub fn new(group: &Group, points: &[RVec]) -> Result<IndexAction, NotInvariant> {
        let index: HashMap<&RVec, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut table = Vec::with_capacity(group.order());
        for g in group.elements() {
            let mut row = Vec::with_capacity(points.len());
            for p in points {
                row.push(*index.get(&g.apply(p)).ok_or(NotInvariant)?);
            }
            table.push(row);
        }
        Ok(IndexAction { table })
    }

    pub fn num_elements(&self) -> usize {
        self.table.len()
    }

    pub fn image(&self, g: usize, i: usize) -> usize {
        self.table[g][i]
    }

    pub fn image_of_set(&self, g: usize, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&i| self.table[g][i]).collect();
        out.sort_unstable();
        out
    }

    /// Lexicographically least image of `set` (given sorted) over the group.
    pub fn canonical_subset(&self, set: &[usize]) -> Vec<usize> {
        let mut best = set.to_vec();
        for g in 0..self.table.len() {
            let img = self.image_of_set(g, set);
            if img < best {
                best = img;
            }
        }
        best
    }

    pub fn is_canonical_subset(&self, set: &[usize]) -> bool {
        for g in 0..self.table.len() {
            if self.image_of_set(g, set)[..] < *set {
                return false;
            }
        }
        true
    }

    /// Orbit of an index set, as sorted deduplicated sets.
    pub fn subset_orbit(&self, set: &[usize]) -> Vec<Vec<usize>> {
        let mut orbit: BTreeSet<Vec<usize>> = BTreeSet::new();
        for g in 0..self.table.len() {
            orbit.insert(self.image_of_set(g, set));
        }
        orbit.into_iter().collect()
    }
}
