//! Plectic groups `G#H`: bijections of `G` commuting with right translation
//! by `H`, and their wreath coordinates relative to a coset section.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::group::{cap_from_env, CosetSection, FiniteGroup, GroupError, LeftCosets, Subgroup};
use crate::perm::cycles_with_labels;

/// Default cap on `|X|!·|H|^|X|` for materializing a plectic group.
pub const DEFAULT_PLECTIC_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlecticError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("mapping is not a bijection of the group")]
    NotBijective,
    #[error("mapping does not commute with right translation by the subgroup")]
    NotEquivariant,
    #[error("plectic elements live over different (G, H)")]
    Mismatch,
    #[error("h-family entry at coset {0} lies outside the subgroup")]
    EntryOutsideSubgroup(usize),
    #[error("wreath datum has the wrong shape for {0} cosets")]
    Shape(usize),
    #[error("plectic group of order {order} exceeds the cap of {cap}")]
    TooLarge { order: String, cap: usize },
    #[error("wreath text: {0}")]
    Syntax(String),
}

/// An element of `G#H`, stored as its action on element indices of `G`.
#[derive(Clone)]
pub struct PlecticElement {
    sub: Subgroup,
    map: Vec<usize>,
}

impl PartialEq for PlecticElement {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && self.sub == other.sub
    }
}

impl Eq for PlecticElement {}

impl std::hash::Hash for PlecticElement {
    fn hash<S: std::hash::Hasher>(&self, state: &mut S) {
        self.map.hash(state);
    }
}

impl fmt::Debug for PlecticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlecticElement({:?})", self.map)
    }
}

impl PlecticElement {
    /// Validates bijectivity and right `H`-equivariance.
    pub fn new(sub: &Subgroup, map: Vec<usize>) -> Result<Self, PlecticError> {
        let g = sub.group();
        if map.len() != g.order() {
            return Err(PlecticError::NotBijective);
        }
        let mut seen = vec![false; map.len()];
        for &y in &map {
            if y >= map.len() || seen[y] {
                return Err(PlecticError::NotBijective);
            }
            seen[y] = true;
        }
        for x in 0..g.order() {
            for &h in sub.members() {
                if map[g.mul(x, h)] != g.mul(map[x], h) {
                    return Err(PlecticError::NotEquivariant);
                }
            }
        }
        Ok(PlecticElement {
            sub: sub.clone(),
            map,
        })
    }

    pub(crate) fn new_unchecked(sub: &Subgroup, map: Vec<usize>) -> Self {
        PlecticElement {
            sub: sub.clone(),
            map,
        }
    }

    pub fn identity(sub: &Subgroup) -> Self {
        Self::new_unchecked(sub, (0..sub.group().order()).collect())
    }

    /// `L_g : x ↦ g x`.
    pub fn left_translate(sub: &Subgroup, g: usize) -> Self {
        let grp = sub.group();
        Self::new_unchecked(sub, (0..grp.order()).map(|x| grp.mul(g, x)).collect())
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    pub fn group(&self) -> &FiniteGroup {
        self.sub.group()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PlecticElement) -> Result<Self, PlecticError> {
        if self.sub != other.sub {
            return Err(PlecticError::Mismatch);
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &PlecticElement) -> Self {
        Self::new_unchecked(&self.sub, other.map.iter().map(|&x| self.map[x]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Self::new_unchecked(&self.sub, inv)
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Whether the mapping is a left translation, returning the translating element.
    pub fn as_left_translation(&self) -> Option<usize> {
        let g = self.map[0];
        let grp = self.group();
        (0..grp.order())
            .all(|x| self.map[x] == grp.mul(g, x))
            .then_some(g)
    }

    /// Permutation of coset positions induced on `G/K` for any `K ≤ H`.
    pub fn coset_action(&self, cosets: &LeftCosets) -> Vec<usize> {
        (0..cosets.len())
            .map(|p| cosets.pos(self.map[cosets.id(p)]))
            .collect()
    }

    /// Wreath coordinates `(π, h_x = s_{πx}⁻¹ α(s_x))`.
    pub fn to_wreath(
        &self,
        cosets: &LeftCosets,
        s: &CosetSection,
    ) -> Result<WreathDatum, PlecticError> {
        s.validate(cosets)?;
        let g = self.group();
        let mut pi = Vec::with_capacity(cosets.len());
        let mut h = Vec::with_capacity(cosets.len());
        for x in 0..cosets.len() {
            let image = self.map[s.reps[x]];
            let px = cosets.pos(image);
            pi.push(px);
            h.push(g.mul(g.inv(s.reps[px]), image));
        }
        Ok(WreathDatum { pi, h })
    }

    /// Inverse of [`to_wreath`](Self::to_wreath): `α(s_x k) = s_{πx} h_x k`.
    pub fn from_wreath(
        sub: &Subgroup,
        cosets: &LeftCosets,
        s: &CosetSection,
        w: &WreathDatum,
    ) -> Result<Self, PlecticError> {
        s.validate(cosets)?;
        w.validate(sub, cosets)?;
        let g = sub.group();
        let mut map = vec![0; g.order()];
        for (x, slot) in map.iter_mut().enumerate() {
            let c = cosets.pos(x);
            let k = g.mul(g.inv(s.reps[c]), x);
            *slot = g.product([s.reps[w.pi[c]], w.h[c], k]);
        }
        Ok(Self::new_unchecked(sub, map))
    }

    /// The same bijection viewed in `G#H'` for `H' ≤ H`.
    pub fn include_into_finer(&self, finer: &Subgroup) -> Result<Self, PlecticError> {
        if !finer.is_subgroup_of(&self.sub) {
            return Err(GroupError::NotNested.into());
        }
        Ok(Self::new_unchecked(finer, self.map.clone()))
    }

    /// `[u]α : g ↦ α(g u) u⁻¹`, an element of `G#(uHu⁻¹)`.
    pub fn conjugate_transport(&self, u: usize) -> Self {
        let g = self.group();
        let ui = g.inv(u);
        let map = (0..g.order())
            .map(|x| g.mul(self.map[g.mul(x, u)], ui))
            .collect();
        Self::new_unchecked(&self.sub.conjugate(u), map)
    }

    /// Induced element on a quotient `G → Q` whose kernel lies in `H`.
    ///
    /// `proj` maps element indices of `G` onto element indices of the group
    /// underlying `target`, and `target` must be the image of `H`.
    pub fn descend(&self, proj: &[usize], target: &Subgroup) -> Result<Self, PlecticError> {
        let q = target.group();
        let mut map = vec![usize::MAX; q.order()];
        for x in 0..self.map.len() {
            let (a, b) = (proj[x], proj[self.map[x]]);
            if map[a] == usize::MAX {
                map[a] = b;
            } else if map[a] != b {
                return Err(PlecticError::NotEquivariant);
            }
        }
        if map.contains(&usize::MAX) {
            return Err(PlecticError::NotBijective);
        }
        PlecticElement::new(target, map)
    }
}

/// Wreath coordinates `(π, (h_x))` over coset positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathDatum {
    pub pi: Vec<usize>,
    pub h: Vec<usize>,
}

impl WreathDatum {
    pub fn identity(n: usize) -> Self {
        WreathDatum {
            pi: (0..n).collect(),
            h: vec![0; n],
        }
    }

    pub fn validate(&self, sub: &Subgroup, cosets: &LeftCosets) -> Result<(), PlecticError> {
        let n = cosets.len();
        if self.pi.len() != n || self.h.len() != n {
            return Err(PlecticError::Shape(n));
        }
        let mut seen = vec![false; n];
        for &p in &self.pi {
            if p >= n || seen[p] {
                return Err(PlecticError::Shape(n));
            }
            seen[p] = true;
        }
        for (x, &h) in self.h.iter().enumerate() {
            if h >= sub.group().order() || !sub.contains(h) {
                return Err(PlecticError::EntryOutsideSubgroup(x));
            }
        }
        Ok(())
    }

    /// Semidirect law `(π1,h1)(π2,h2) = (π1π2, x ↦ h1_{π2 x} h2_x)`.
    pub fn compose(&self, other: &WreathDatum, g: &FiniteGroup) -> WreathDatum {
        let pi = other.pi.iter().map(|&x| self.pi[x]).collect();
        let h = (0..self.h.len())
            .map(|x| g.mul(self.h[other.pi[x]], other.h[x]))
            .collect();
        WreathDatum { pi, h }
    }

    /// `(1,t)⁻¹ (π,h) (1,t) = (π, x ↦ t_{πx}⁻¹ h_x t_x)`.
    pub fn conjugate_by(&self, t: &[usize], g: &FiniteGroup) -> WreathDatum {
        let h = (0..self.h.len())
            .map(|x| g.product([g.inv(t[self.pi[x]]), self.h[x], t[x]]))
            .collect();
        WreathDatum {
            pi: self.pi.clone(),
            h,
        }
    }

    /// `pi: <cycles on coset ids>; h: <id> -> <cycles>, ...` with 1-based ids.
    pub fn format(&self, cosets: &LeftCosets) -> String {
        let ids = cosets.ids();
        let g = cosets.group();
        let parts: Vec<String> = self
            .h
            .iter()
            .enumerate()
            .map(|(x, &h)| format!("{} -> {}", ids[x] + 1, g.format(h)))
            .collect();
        format!(
            "pi: {}; h: {}",
            cycles_with_labels(&self.pi, &ids),
            parts.join(", ")
        )
    }

    /// Parses the text produced by [`format`](Self::format). Cosets missing
    /// from the `h` list get the identity.
    pub fn parse(text: &str, cosets: &LeftCosets) -> Result<WreathDatum, PlecticError> {
        let g = cosets.group();
        let syntax = |m: &str| PlecticError::Syntax(m.to_string());
        let (pi_part, h_part) = text
            .split_once(';')
            .ok_or_else(|| syntax("expected `pi: ...; h: ...`"))?;
        let pi_text = pi_part
            .trim()
            .strip_prefix("pi:")
            .ok_or_else(|| syntax("missing `pi:`"))?
            .trim();
        let h_text = h_part
            .trim()
            .strip_prefix("h:")
            .ok_or_else(|| syntax("missing `h:`"))?
            .trim();
        let pos_of_label = |label: usize| -> Result<usize, PlecticError> {
            label
                .checked_sub(1)
                .and_then(|id| cosets.position_of_id(id))
                .ok_or_else(|| PlecticError::Syntax(format!("{label} is not a coset id")))
        };
        let n = cosets.len();
        let mut pi: Vec<usize> = (0..n).collect();
        let mut rest = pi_text;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| syntax("expected '(' in pi"))?;
            let close = body.find(')').ok_or_else(|| syntax("unclosed '(' in pi"))?;
            let labels: Vec<usize> = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| syntax("bad coset id in pi")))
                .collect::<Result<_, _>>()?;
            let cycle: Vec<usize> = labels
                .into_iter()
                .map(pos_of_label)
                .collect::<Result<_, _>>()?;
            for k in 0..cycle.len() {
                pi[cycle[k]] = cycle[(k + 1) % cycle.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        let mut h = vec![0; n];
        for entry in h_text.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (label, perm) = entry
                .split_once("->")
                .ok_or_else(|| syntax("expected `<id> -> <cycles>`"))?;
            let label: usize = label
                .trim()
                .parse()
                .map_err(|_| syntax("bad coset id in h"))?;
            h[pos_of_label(label)?] = g.parse_element(perm.trim())?;
        }
        let w = WreathDatum { pi, h };
        let mut seen = vec![false; n];
        for &p in &w.pi {
            if seen[p] {
                return Err(syntax("pi is not a permutation"));
            }
            seen[p] = true;
        }
        Ok(w)
    }
}

/// Order `|X|!·|H|^|X|` of `G#H`, or `None` on overflow.
pub fn plectic_order(sub: &Subgroup) -> Option<usize> {
    let n = sub.index_in_group();
    let mut acc: usize = 1;
    for k in 1..=n {
        acc = acc.checked_mul(k)?;
    }
    for _ in 0..n {
        acc = acc.checked_mul(sub.order())?;
    }
    Some(acc)
}

/// A fully enumerated plectic group `G#H`.
#[derive(Clone, Debug)]
pub struct PlecticGroup {
    sub: Subgroup,
    cosets: LeftCosets,
    elements: Vec<PlecticElement>,
    index: HashMap<Vec<usize>, usize>,
}

impl PlecticGroup {
    /// Enumerates `G#H` through wreath data over the canonical section.
    /// Element 0 is the identity.
    pub fn enumerate(sub: &Subgroup) -> Result<PlecticGroup, PlecticError> {
        Self::enumerate_with_cap(sub, cap_from_env(DEFAULT_PLECTIC_CAP))
    }

    pub fn enumerate_with_cap(sub: &Subgroup, cap: usize) -> Result<PlecticGroup, PlecticError> {
        match plectic_order(sub) {
            Some(order) if order <= cap => {}
            other => {
                return Err(PlecticError::TooLarge {
                    order: other.map_or_else(|| "overflow".to_string(), |o| o.to_string()),
                    cap,
                })
            }
        }
        let cosets = LeftCosets::of(sub);
        let s = CosetSection::canonical(&cosets);
        let n = cosets.len();
        let families: Vec<&[usize]> = vec![sub.members(); n];
        let hs = crate::group::cartesian(&families);
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        for pi in (0..n).permutations(n) {
            for h in &hs {
                let w = WreathDatum {
                    pi: pi.clone(),
                    h: h.clone(),
                };
                let a = PlecticElement::from_wreath(sub, &cosets, &s, &w)?;
                index.insert(a.map.clone(), elements.len());
                elements.push(a);
            }
        }
        Ok(PlecticGroup {
            sub: sub.clone(),
            cosets,
            elements,
            index,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    pub fn cosets(&self) -> &LeftCosets {
        &self.cosets
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[PlecticElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &PlecticElement {
        &self.elements[i]
    }

    pub fn index_of(&self, a: &PlecticElement) -> Option<usize> {
        self.index.get(&a.map).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose_unchecked(&self.elements[b]).map]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse().map]
    }

    /// A small generating set, chosen greedily in enumeration order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = vec![false; self.order()];
        reached[0] = true;
        let mut span = vec![0];
        for cand in 0..self.order() {
            if reached[cand] {
                continue;
            }
            gens.push(cand);
            let mut i = 0;
            span.clear();
            span.push(0);
            reached.iter_mut().for_each(|r| *r = false);
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
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic4_with_c() -> (FiniteGroup, Subgroup) {
        let g = FiniteGroup::from_cycle_text(4, "(1 2 3 4)").unwrap();
        let f = Subgroup::generated(&g, &[2]);
        (g, f)
    }

    #[test]
    fn enumerates_wreath_product_order() {
        let (_, f) = cyclic4_with_c();
        let pg = PlecticGroup::enumerate(&f).unwrap();
        assert_eq!(pg.order(), 8);
        assert!(pg.element(0).is_identity());
    }

    #[test]
    fn rejects_non_equivariant_map() {
        let (_, f) = cyclic4_with_c();
        // swap 0 and 1 only; breaks right translation by the element of order 2
        assert_eq!(
            PlecticElement::new(&f, vec![1, 0, 2, 3]).unwrap_err(),
            PlecticError::NotEquivariant
        );
    }

    #[test]
    fn wreath_text_round_trip() {
        let (g, f) = cyclic4_with_c();
        let cosets = LeftCosets::of(&f);
        let s = CosetSection::canonical(&cosets);
        let a = PlecticElement::left_translate(&f, 1);
        let w = a.to_wreath(&cosets, &s).unwrap();
        let text = w.format(&cosets);
        assert_eq!(WreathDatum::parse(&text, &cosets).unwrap(), w);
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn cap_blocks_large_enumeration() {
        let (_, f) = cyclic4_with_c();
        assert!(matches!(
            PlecticGroup::enumerate_with_cap(&f, 7),
            Err(PlecticError::TooLarge { .. })
        ));
    }
}
