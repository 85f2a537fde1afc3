//! Fully enumerated permutation groups, subgroups, cosets, quotients and the
//! transfer map.
//!
//! Elements are addressed by their index in the enumeration of the group.
//! Index 0 is always the identity. The product of indices `a` and `b` is the
//! index of `element(a) ∘ element(b)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::perm::{Perm, PermError};

/// Default enumeration cap for [`FiniteGroup::from_generators`].
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;
/// Environment variable overriding the enumeration caps.
pub const CAP_ENV: &str = "PLECTIC_LAB_CAP";

/// Groups of at most this order get a precomputed multiplication table.
const TABLE_LIMIT: usize = 1500;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("generator {index} has degree {found}, expected {expected}")]
    Degree {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("instance too large: enumeration exceeded the cap of {cap} elements")]
    TooLarge { cap: usize },
    #[error("element set is not closed under the group law")]
    NotSubgroup,
    #[error("{0} is not contained in the expected subgroup")]
    NotMember(String),
    #[error("subgroup is not contained in the given ambient subgroup")]
    NotNested,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("coset section is invalid: {0}")]
    InvalidSection(String),
    #[error("objects belong to different groups")]
    ForeignGroup,
}

/// Reads the enumeration cap from `PLECTIC_LAB_CAP`, falling back to `default`.
pub fn cap_from_env(default: usize) -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}

struct Inner {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    inverses: Vec<usize>,
    table: Option<Vec<u32>>,
}

/// A finite permutation group with all of its elements enumerated.
///
/// Cloning is cheap: the enumeration is shared.
#[derive(Clone)]
pub struct FiniteGroup(Arc<Inner>);

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.0.degree)
            .field("order", &self.0.elements.len())
            .finish()
    }
}

impl FiniteGroup {
    /// Closure of `gens` under composition, enumerated breadth-first from the
    /// identity with generators tried in the given order.
    pub fn from_generators(degree: usize, gens: Vec<Perm>) -> Result<Self, GroupError> {
        Self::from_generators_with_cap(degree, gens, cap_from_env(DEFAULT_GROUP_CAP))
    }

    pub fn from_generators_with_cap(
        degree: usize,
        gens: Vec<Perm>,
        cap: usize,
    ) -> Result<Self, GroupError> {
        for (i, g) in gens.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::Degree {
                    index: i,
                    found: g.degree(),
                    expected: degree,
                });
            }
            Perm::from_images(g.images().to_vec())?;
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = elements[x].compose(g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(GroupError::TooLarge { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        let inverses = elements.iter().map(|e| index[&e.inverse()]).collect();
        let n = elements.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.compose(b)] as u32);
                }
            }
            t
        });
        Ok(FiniteGroup(Arc::new(Inner {
            degree,
            generators: gens,
            elements,
            index,
            inverses,
            table,
        })))
    }

    /// Parses `;`-separated cycle notation generators.
    pub fn from_cycle_text(degree: usize, text: &str) -> Result<Self, GroupError> {
        let gens = parse_perm_list(degree, text)?;
        Self::from_generators(degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn order(&self) -> usize {
        self.0.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.0.generators
    }

    /// Indices of the generators.
    pub fn generator_indices(&self) -> Vec<usize> {
        self.0.generators.iter().map(|g| self.0.index[g]).collect()
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.0.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.0.index.get(p).copied()
    }

    pub const IDENTITY: usize = 0;

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.0.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.0.index[&self.0.elements[a].compose(&self.0.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.0.inverses[a]
    }

    /// Product of a sequence of elements, left to right.
    pub fn product<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(0, |acc, x| self.mul(acc, x))
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.product([self.inv(a), self.inv(b), a, b])
    }

    /// `u x u⁻¹`.
    pub fn conj(&self, u: usize, x: usize) -> usize {
        self.product([u, x, self.inv(u)])
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.element(a).order()
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generator_indices();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn same(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn format(&self, a: usize) -> String {
        self.element(a).to_string()
    }

    pub fn parse_element(&self, text: &str) -> Result<usize, GroupError> {
        let p = Perm::from_cycles(self.degree(), text)?;
        self.index_of(&p)
            .ok_or_else(|| GroupError::NotMember(format!("{text} in the group")))
    }
}

/// Parses a `;`-separated list of permutations in cycle notation.
pub fn parse_perm_list(degree: usize, text: &str) -> Result<Vec<Perm>, PermError> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Perm::from_cycles(degree, s))
        .collect()
}

/// A subgroup of a [`FiniteGroup`], given by its member indices.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: FiniteGroup,
    mask: Vec<bool>,
    members: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group.same(&other.group) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Smallest subgroup containing `gens`.
    pub fn generated(group: &FiniteGroup, gens: &[usize]) -> Subgroup {
        let mut mask = vec![false; group.order()];
        mask[0] = true;
        let mut members = vec![0];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in gens {
                let y = group.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        Subgroup {
            group: group.clone(),
            mask,
            members,
        }
    }

    /// Subgroup generated by permutations given in cycle notation.
    pub fn from_cycle_text(group: &FiniteGroup, text: &str) -> Result<Subgroup, GroupError> {
        let mut gens = Vec::new();
        for p in parse_perm_list(group.degree(), text)? {
            gens.push(
                group
                    .index_of(&p)
                    .ok_or_else(|| GroupError::NotMember(format!("{p} in the group")))?,
            );
        }
        Ok(Subgroup::generated(group, &gens))
    }

    /// Validates that `members` is closed under the group law.
    pub fn from_members(group: &FiniteGroup, members: &[usize]) -> Result<Subgroup, GroupError> {
        let mut mask = vec![false; group.order()];
        for &m in members {
            mask[m] = true;
        }
        if !mask[0] {
            return Err(GroupError::NotSubgroup);
        }
        for &a in members {
            if !mask[group.inv(a)] {
                return Err(GroupError::NotSubgroup);
            }
            for &b in members {
                if !mask[group.mul(a, b)] {
                    return Err(GroupError::NotSubgroup);
                }
            }
        }
        let mut members: Vec<usize> = (0..group.order()).filter(|&i| mask[i]).collect();
        members.dedup();
        Ok(Subgroup {
            group: group.clone(),
            mask,
            members,
        })
    }

    pub fn whole(group: &FiniteGroup) -> Subgroup {
        Subgroup {
            group: group.clone(),
            mask: vec![true; group.order()],
            members: (0..group.order()).collect(),
        }
    }

    pub fn trivial(group: &FiniteGroup) -> Subgroup {
        Subgroup::generated(group, &[])
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index_in_group(&self) -> usize {
        self.group.order() / self.order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.group.same(&other.group) && self.members.iter().all(|&m| other.contains(m))
    }

    /// Whether `k n k⁻¹ ∈ self` for every `k` in `ambient` and `n` in `self`.
    pub fn is_normal_in(&self, ambient: &Subgroup) -> bool {
        ambient.members.iter().all(|&k| {
            self.members
                .iter()
                .all(|&n| self.contains(self.group.conj(k, n)))
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.members.iter().all(|&a| {
            self.members
                .iter()
                .all(|&b| self.group.mul(a, b) == self.group.mul(b, a))
        })
    }

    /// `u H u⁻¹`.
    pub fn conjugate(&self, u: usize) -> Subgroup {
        let members: Vec<usize> = self
            .members
            .iter()
            .map(|&h| self.group.conj(u, h))
            .collect();
        Subgroup::from_members(&self.group, &members).expect("conjugate of a subgroup")
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let members: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&m| other.contains(m))
            .collect();
        Subgroup::from_members(&self.group, &members).expect("intersection of subgroups")
    }

    /// Image under a map of groups given on element indices.
    pub fn image(&self, target: &FiniteGroup, map: &[usize]) -> Subgroup {
        let gens: Vec<usize> = self.members.iter().map(|&m| map[m]).collect();
        Subgroup::generated(target, &gens)
    }

    /// Preimage under a homomorphism given on element indices.
    pub fn preimage(&self, source: &FiniteGroup, map: &[usize]) -> Subgroup {
        let members: Vec<usize> = (0..source.order())
            .filter(|&x| self.contains(map[x]))
            .collect();
        Subgroup::from_members(source, &members).expect("preimage of a subgroup")
    }
}

/// Left cosets `xK` of a subgroup `K` inside an ambient subgroup.
///
/// Cosets are numbered by position `0..len()`, ordered by their identifier,
/// which is the least element index in the coset.
#[derive(Clone, Debug)]
pub struct LeftCosets {
    group: FiniteGroup,
    position: Vec<Option<usize>>,
    members: Vec<Vec<usize>>,
}

impl LeftCosets {
    /// Left cosets of `sub` in the whole group.
    pub fn of(sub: &Subgroup) -> LeftCosets {
        Self::within(&Subgroup::whole(sub.group()), sub).expect("subgroup of the whole group")
    }

    /// Left cosets of `sub` inside `ambient`.
    pub fn within(ambient: &Subgroup, sub: &Subgroup) -> Result<LeftCosets, GroupError> {
        if !sub.is_subgroup_of(ambient) {
            return Err(GroupError::NotNested);
        }
        let g = ambient.group();
        let mut position = vec![None; g.order()];
        let mut members = Vec::new();
        for &x in ambient.members() {
            if position[x].is_some() {
                continue;
            }
            let pos = members.len();
            let mut coset: Vec<usize> = sub.members().iter().map(|&k| g.mul(x, k)).collect();
            coset.sort_unstable();
            for &y in &coset {
                position[y] = Some(pos);
            }
            members.push(coset);
        }
        Ok(LeftCosets {
            group: g.clone(),
            position,
            members,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Coset position of an element, if it lies in the ambient subgroup.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.position[x]
    }

    pub fn pos(&self, x: usize) -> usize {
        self.position[x].expect("element outside the ambient subgroup")
    }

    /// Canonical identifier: the least element index in the coset.
    pub fn id(&self, pos: usize) -> usize {
        self.members[pos][0]
    }

    pub fn ids(&self) -> Vec<usize> {
        self.members.iter().map(|m| m[0]).collect()
    }

    pub fn position_of_id(&self, id: usize) -> Option<usize> {
        self.members.iter().position(|m| m[0] == id)
    }

    pub fn members(&self, pos: usize) -> &[usize] {
        &self.members[pos]
    }

    /// Position of `g · x` for `x` the coset at `pos`.
    pub fn act(&self, g: usize, pos: usize) -> usize {
        self.pos(self.group.mul(g, self.id(pos)))
    }

    /// Permutation of coset positions induced by left multiplication.
    pub fn action(&self, g: usize) -> Vec<usize> {
        (0..self.len()).map(|p| self.act(g, p)).collect()
    }
}

/// One representative per coset, indexed by coset position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetSection {
    pub reps: Vec<usize>,
}

impl CosetSection {
    /// Section made of the least element of each coset.
    pub fn canonical(cosets: &LeftCosets) -> CosetSection {
        CosetSection { reps: cosets.ids() }
    }

    pub fn new(cosets: &LeftCosets, reps: Vec<usize>) -> Result<CosetSection, GroupError> {
        let s = CosetSection { reps };
        s.validate(cosets)?;
        Ok(s)
    }

    pub fn validate(&self, cosets: &LeftCosets) -> Result<(), GroupError> {
        if self.reps.len() != cosets.len() {
            return Err(GroupError::InvalidSection(format!(
                "{} representatives for {} cosets",
                self.reps.len(),
                cosets.len()
            )));
        }
        for (pos, &r) in self.reps.iter().enumerate() {
            if cosets.position(r) != Some(pos) {
                return Err(GroupError::InvalidSection(format!(
                    "representative {} does not lie in coset {}",
                    cosets.group().format(r),
                    pos
                )));
            }
        }
        Ok(())
    }

    /// Every section, in lexicographic order of member choices.
    pub fn all(cosets: &LeftCosets) -> Vec<CosetSection> {
        let choices: Vec<&[usize]> = (0..cosets.len()).map(|p| cosets.members(p)).collect();
        cartesian(&choices)
            .into_iter()
            .map(|reps| CosetSection { reps })
            .collect()
    }

    /// `s' = s t`, with `t` indexed by coset position.
    pub fn translate(&self, group: &FiniteGroup, t: &[usize]) -> CosetSection {
        CosetSection {
            reps: self
                .reps
                .iter()
                .zip(t)
                .map(|(&s, &t)| group.mul(s, t))
                .collect(),
        }
    }
}

/// Cartesian product of choice lists, first factor varying slowest.
pub fn cartesian(choices: &[&[usize]]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(choices.len())];
    for opts in choices {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for &o in opts.iter() {
                let mut v = prefix.clone();
                v.push(o);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// The quotient `K/N` of an ambient subgroup by a normal subgroup.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    ambient: Subgroup,
    normal: Subgroup,
    cosets: LeftCosets,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl QuotientGroup {
    pub fn new(ambient: &Subgroup, normal: &Subgroup) -> Result<QuotientGroup, GroupError> {
        let cosets = LeftCosets::within(ambient, normal)?;
        if !normal.is_normal_in(ambient) {
            return Err(GroupError::NotNormal);
        }
        let g = ambient.group();
        let k = cosets.len();
        let mut table = vec![0; k * k];
        for a in 0..k {
            for b in 0..k {
                table[a * k + b] = cosets.pos(g.mul(cosets.id(a), cosets.id(b)));
            }
        }
        let inverses = (0..k).map(|a| cosets.pos(g.inv(cosets.id(a)))).collect();
        Ok(QuotientGroup {
            ambient: ambient.clone(),
            normal: normal.clone(),
            cosets,
            table,
            inverses,
        })
    }

    pub fn ambient(&self) -> &Subgroup {
        &self.ambient
    }

    pub fn normal(&self) -> &Subgroup {
        &self.normal
    }

    pub fn cosets(&self) -> &LeftCosets {
        &self.cosets
    }

    pub fn order(&self) -> usize {
        self.cosets.len()
    }

    /// Quotient element of an ambient element.
    pub fn project(&self, x: usize) -> Option<usize> {
        self.cosets.position(x)
    }

    /// The least ambient element mapping to `q`.
    pub fn lift(&self, q: usize) -> usize {
        self.cosets.id(q)
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        let k = self.order();
        (0..k).all(|a| (0..k).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Regular permutation representation of the quotient as a group of
    /// degree `order()`, together with the map from quotient positions to
    /// element indices of that group.
    pub fn permutation_group(&self) -> (FiniteGroup, Vec<usize>) {
        let k = self.order();
        let regular = |q: usize| -> Perm {
            Perm::from_images((0..k).map(|x| self.mul(q, x)).collect()).expect("regular action")
        };
        // Greedy generating set keeps the degree-k closure cheap.
        let mut gens = Vec::new();
        let mut reached = vec![false; k];
        reached[0] = true;
        let mut span = vec![0usize];
        for q in 0..k {
            if reached[q] {
                continue;
            }
            gens.push(q);
            let mut i = 0;
            span = vec![0];
            reached = vec![false; k];
            reached[0] = true;
            while i < span.len() {
                let x = span[i];
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !reached[y] {
                        reached[y] = true;
                        span.push(y);
                    }
                }
                i += 1;
            }
        }
        debug_assert_eq!(span.len(), k);
        let perms = gens.iter().map(|&q| regular(q)).collect();
        let group = FiniteGroup::from_generators(k, perms).expect("quotient fits under the cap");
        let map = (0..k)
            .map(|q| group.index_of(&regular(q)).expect("regular image"))
            .collect();
        (group, map)
    }
}

/// Smallest normal subgroup of `h` containing every commutator of `h`.
///
/// The set of commutators is stable under conjugation by `h`, so the
/// subgroup it generates is already normal.
pub fn commutator_subgroup(h: &Subgroup) -> Subgroup {
    let g = h.group();
    let mut comms: Vec<usize> = Vec::new();
    let mut seen = vec![false; g.order()];
    for &a in h.members() {
        for &b in h.members() {
            let c = g.commutator(a, b);
            if !seen[c] {
                seen[c] = true;
                comms.push(c);
            }
        }
    }
    Subgroup::generated(g, &comms)
}

/// `h / [h, h]`.
pub fn abelianization(h: &Subgroup) -> QuotientGroup {
    QuotientGroup::new(h, &commutator_subgroup(h)).expect("commutator subgroup is normal")
}

/// The transfer `H^ab → H'^ab` for `H' ≤ H`, with the cosets `Y = H/H'` and
/// the target abelianization cached.
#[derive(Clone, Debug)]
pub struct Transfer {
    big: Subgroup,
    small: Subgroup,
    cosets: LeftCosets,
    target: QuotientGroup,
}

impl Transfer {
    pub fn new(big: &Subgroup, small: &Subgroup) -> Result<Transfer, GroupError> {
        let cosets = LeftCosets::within(big, small)?;
        Ok(Transfer {
            big: big.clone(),
            small: small.clone(),
            cosets,
            target: abelianization(small),
        })
    }

    pub fn cosets(&self) -> &LeftCosets {
        &self.cosets
    }

    /// The abelianization `H'^ab` in which values live.
    pub fn target(&self) -> &QuotientGroup {
        &self.target
    }

    pub fn source(&self) -> &Subgroup {
        &self.big
    }

    /// `∏_y t_{hy}⁻¹ h t_y` projected to `H'^ab`, product in coset order.
    pub fn apply(&self, h: usize, t: &CosetSection) -> Result<usize, GroupError> {
        let g = self.big.group();
        if !self.big.contains(h) {
            return Err(GroupError::NotMember(format!(
                "{} in the source subgroup",
                g.format(h)
            )));
        }
        t.validate(&self.cosets)?;
        let mut acc = self.target.identity();
        for y in 0..self.cosets.len() {
            let hy = self.cosets.act(h, y);
            let factor = g.product([g.inv(t.reps[hy]), h, t.reps[y]]);
            debug_assert!(self.small.contains(factor));
            acc = self
                .target
                .mul(acc, self.target.project(factor).expect("factor in H'"));
        }
        Ok(acc)
    }

    pub fn apply_canonical(&self, h: usize) -> Result<usize, GroupError> {
        self.apply(h, &CosetSection::canonical(&self.cosets))
    }
}

/// One-shot transfer of `h ∈ H` to `H'^ab` using section `t` of `H/H'`.
pub fn transfer(
    big: &Subgroup,
    small: &Subgroup,
    h: usize,
    t: &CosetSection,
) -> Result<usize, GroupError> {
    Transfer::new(big, small)?.apply(h, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic4() -> FiniteGroup {
        FiniteGroup::from_cycle_text(4, "(1 2 3 4)").unwrap()
    }

    #[test]
    fn identity_first_and_bfs_order() {
        let g = cyclic4();
        assert_eq!(g.order(), 4);
        assert!(g.element(0).is_identity());
        assert_eq!(g.element(1).to_string(), "(1 2 3 4)");
        assert_eq!(g.element(2).to_string(), "(1 3)(2 4)");
    }

    #[test]
    fn cap_is_enforced() {
        let err = FiniteGroup::from_generators_with_cap(
            5,
            vec![
                Perm::from_cycles(5, "(1 2 3 4 5)").unwrap(),
                Perm::from_cycles(5, "(1 2)").unwrap(),
            ],
            50,
        )
        .unwrap_err();
        assert_eq!(err, GroupError::TooLarge { cap: 50 });
    }

    #[test]
    fn degree_mismatch_rejected() {
        let err = FiniteGroup::from_generators(4, vec![Perm::from_cycles(3, "(1 2)").unwrap()])
            .unwrap_err();
        assert!(matches!(err, GroupError::Degree { .. }));
    }

    #[test]
    fn cosets_use_least_index_as_id() {
        let g = cyclic4();
        let h = Subgroup::generated(&g, &[2]);
        let x = LeftCosets::of(&h);
        assert_eq!(x.len(), 2);
        assert_eq!(x.ids(), vec![0, 1]);
        assert_eq!(x.members(1), &[1, 3]);
    }

    #[test]
    fn quotient_permutation_group_matches_table() {
        let g = cyclic4();
        let h = Subgroup::generated(&g, &[2]);
        let q = QuotientGroup::new(&Subgroup::whole(&g), &h).unwrap();
        let (pg, map) = q.permutation_group();
        assert_eq!(pg.order(), 2);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(map[q.mul(a, b)], pg.mul(map[a], map[b]));
            }
        }
    }

    #[test]
    fn transfer_cyclic_four_to_index_two() {
        let g = cyclic4();
        let whole = Subgroup::whole(&g);
        let small = Subgroup::generated(&g, &[2]);
        let ver = Transfer::new(&whole, &small).unwrap();
        let image = ver.apply_canonical(1).unwrap();
        assert_eq!(ver.target().lift(image), 2);
        assert!(ver.apply_canonical(5 % 4).is_ok());
    }
}
