//! Weyl group enumeration and the parabolic combinatorics of `𝔚_p`.
//!
//! Elements are stored as permutations of the positive-root half of the root
//! table (the image of a negative root follows by sign symmetry), so the
//! action is an O(1) lookup and composition is a gather. Enumeration is a
//! breadth-first closure over the simple reflections with generators applied
//! in index order, which makes element ids reproducible run to run.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;

/// Default enumeration cap: covers everything through `E_7`; `E_8`
/// (|W| ≈ 7·10⁸) requires an explicit opt-in cap from the caller.
pub const DEFAULT_WEYL_CAP: u64 = 3_000_000;

/// One Weyl group element: images of the positive roots under `w`, as
/// indices into the full root table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub id: usize,
    /// `perm_pos[i]` = index of `w(α_i)` for the i-th positive root.
    pub perm_pos: Vec<u8>,
    pub length: u8,
}

#[derive(Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    /// (parent id, generator) pairs from the BFS tree; reconstructs reduced
    /// words without storing them per element.
    parent: Vec<(usize, u8)>,
    pub w0: usize,
    pub order: usize,
    n_pos: usize,
}

impl WeylGroup {
    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    /// Image of any root index under element `w`.
    pub fn act(&self, w: usize, root_index: usize) -> usize {
        let el = &self.elements[w];
        if root_index < self.n_pos {
            el.perm_pos[root_index] as usize
        } else {
            let img = el.perm_pos[root_index - self.n_pos] as usize;
            if img < self.n_pos {
                img + self.n_pos
            } else {
                img - self.n_pos
            }
        }
    }

    /// Reduced word of `w` in simple-reflection indices (0-based).
    pub fn word(&self, w: usize) -> Vec<u8> {
        let mut out = Vec::new();
        let mut cur = w;
        while cur != 0 {
            let (parent, gen) = self.parent[cur];
            out.push(gen);
            cur = parent;
        }
        out.reverse();
        out
    }

    /// `w1 ∘ w2` (first apply w2, then w1); returns the element id.
    pub fn compose(&self, w1: usize, w2: usize, index: &HashMap<Vec<u8>, usize>) -> usize {
        let perm = self.compose_perm(w1, w2);
        index[&perm]
    }

    fn compose_perm(&self, w1: usize, w2: usize) -> Vec<u8> {
        let e2 = &self.elements[w2];
        (0..self.n_pos as usize)
            .map(|i| self.act(w1, e2.perm_pos[i] as usize) as u8)
            .collect()
    }

    /// Lookup table from the positive-root permutation to the element id.
    pub fn index(&self) -> HashMap<Vec<u8>, usize> {
        self.elements
            .iter()
            .map(|e| (e.perm_pos.clone(), e.id))
            .collect()
    }

    /// Inversion set `Φ_w = {α ∈ Φ⁺ : wα ∈ Φ⁻}` as positive-root indices.
    pub fn inversion_set(&self, w: usize) -> Vec<usize> {
        let el = &self.elements[w];
        (0..self.n_pos)
            .filter(|&i| el.perm_pos[i] as usize >= self.n_pos)
            .collect()
    }

    /// `δ_{α,w}`: 1 if `wα ∈ Φ⁺`, 0 otherwise.
    pub fn delta_indicator(&self, w: usize, root_index: usize) -> i64 {
        i64::from(self.act(w, root_index) < self.n_pos)
    }
}

/// Enumerate the full Weyl group by BFS over the simple reflections.
///
/// Errors with [`Error::CapExceeded`] (carrying the classical order) when
/// the type's Weyl group is larger than `cap`.
pub fn enumerate_weyl(rs: &RootSystem, cap: u64) -> Result<WeylGroup> {
    let classical = rs.spec.weyl_order();
    if classical > cap {
        return Err(Error::CapExceeded { order: classical, cap });
    }
    let n_pos = rs.n_pos;
    let total = rs.total();
    assert!(total <= u8::MAX as usize + 1, "root table exceeds u8 index space");

    // Simple reflection permutations over the full table.
    let gens: Vec<Vec<usize>> = (0..rs.rank()).map(|j| rs.simple_reflection_perm(j)).collect();

    let identity: Vec<u8> = (0..n_pos as u8).collect();
    let mut elements = vec![WeylElement { id: 0, perm_pos: identity.clone(), length: 0 }];
    let mut parent = vec![(0usize, 0u8)];
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::with_capacity(classical as usize);
    seen.insert(identity, 0);

    let act_full = |perm_pos: &[u8], root: usize| -> usize {
        if root < n_pos {
            perm_pos[root] as usize
        } else {
            let img = perm_pos[root - n_pos] as usize;
            if img < n_pos {
                img + n_pos
            } else {
                img - n_pos
            }
        }
    };

    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &w in &frontier {
            let base = elements[w].perm_pos.clone();
            let len = elements[w].length;
            for (j, gen) in gens.iter().enumerate() {
                // Right multiplication w·σ_j: length changes by ±1 according
                // to whether w sends α_j negative.
                let alpha_j = rs.simple_index(j);
                if act_full(&base, alpha_j) >= n_pos {
                    continue; // length would decrease; already visited
                }
                let perm: Vec<u8> = (0..n_pos)
                    .map(|i| act_full(&base, gen[i]) as u8)
                    .collect();
                if !seen.contains_key(&perm) {
                    let id = elements.len();
                    seen.insert(perm.clone(), id);
                    elements.push(WeylElement { id, perm_pos: perm, length: len + 1 });
                    parent.push((w, j as u8));
                    next.push(id);
                }
            }
        }
        frontier = next;
    }

    if elements.len() as u64 != classical {
        return Err(Error::InternalInconsistency(format!(
            "enumerated {} elements, classical order is {}",
            elements.len(),
            classical
        )));
    }

    // Longest element: the unique one of maximal length (sends Φ⁺ to Φ⁻).
    let w0 = elements
        .iter()
        .max_by_key(|e| e.length)
        .map(|e| e.id)
        .unwrap();
    debug_assert!(elements[w0]
        .perm_pos
        .iter()
        .all(|&img| img as usize >= n_pos));

    let order = elements.len();
    Ok(WeylGroup { elements, parent, w0, order, n_pos })
}

/// Class labels for the partition of `𝔚_p` by the statistic `l_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FrakClass {
    Plus,
    Zero,
    Minus,
}

/// Parabolic data for a choice of `p`: the subsystem `Φ_p`, the subgroup
/// `W_p` with its longest element `w_p`, the distinguished subset `𝔚_p` and
/// the statistic `l_p` on it.
#[derive(Debug)]
pub struct ParabolicData {
    pub p: usize,
    /// 0-based simple-root indices of `Δ_p = Δ \ {α_p}`.
    pub delta_p: Vec<usize>,
    /// Positive-root indices of `Φ_p⁺`.
    pub phi_p_plus: Vec<usize>,
    /// Positive-root indices of `Φ⁺ \ Φ_p⁺`.
    pub outside: Vec<usize>,
    /// Element ids of the parabolic subgroup `W_p`.
    pub wp_subgroup: Vec<usize>,
    /// Longest element of `W_p`.
    pub wp: usize,
    /// Element ids of `𝔚_p = {w : wΔ_p ⊆ Δ ∪ Φ⁻}` in id order.
    pub frak_wp: Vec<usize>,
    /// `l_p(w) = |(Φ⁺ \ Φ_p⁺) ∩ w⁻¹Φ⁻|` for each member of `frak_wp`.
    pub lp: Vec<usize>,
    /// Classification of each member against `|Φ⁺ \ Φ_p⁺|/2`.
    pub classes: Vec<FrakClass>,
    /// Members with `l_p = 0` (the `𝔚_p^‡` stratum).
    pub ddagger: Vec<usize>,
}

impl ParabolicData {
    pub fn lp_of(&self, group: &WeylGroup, rs: &RootSystem, w: usize) -> usize {
        lp_statistic(group, rs, self.p, w)
    }

    pub fn contains(&self, w: usize) -> bool {
        self.frak_wp.binary_search(&w).is_ok()
    }

    pub fn class_of(&self, w: usize) -> Option<FrakClass> {
        self.frak_wp
            .binary_search(&w)
            .ok()
            .map(|pos| self.classes[pos])
    }

    /// Members of a class, in id order.
    pub fn members(&self, class: FrakClass) -> Vec<usize> {
        self.frak_wp
            .iter()
            .zip(&self.classes)
            .filter(|(_, c)| **c == class)
            .map(|(w, _)| *w)
            .collect()
    }
}

/// `l_p(w)`: inversions of `w` restricted to `Φ⁺ \ Φ_p⁺` (p is 1-based).
pub fn lp_statistic(group: &WeylGroup, rs: &RootSystem, p: usize, w: usize) -> usize {
    let el = &group.elements[w];
    (0..group.n_pos())
        .filter(|&i| rs.roots[i].coeffs[p - 1] != 0 && el.perm_pos[i] as usize >= group.n_pos())
        .count()
}

/// Compute the full parabolic package for `(Φ, p)`.
pub fn compute_frak_wp(group: &WeylGroup, rs: &RootSystem, p: usize) -> Result<ParabolicData> {
    let r = rs.rank();
    if p == 0 || p > r {
        return Err(Error::Usage(format!("p = {p} out of range 1..={r}")));
    }
    let delta_p: Vec<usize> = (0..r).filter(|&j| j != p - 1).collect();
    let phi_p_plus = rs.positive_parabolic(p);
    let outside = rs.positive_outside_parabolic(p);

    // W_p: BFS closure inside W over the Δ_p generators.
    let index = group.index();
    let gen_ids: Vec<usize> = delta_p
        .iter()
        .map(|&j| {
            let perm: Vec<u8> = (0..group.n_pos())
                .map(|i| rs.simple_reflection_perm(j)[i] as u8)
                .collect();
            index[&perm]
        })
        .collect();
    let mut wp_subgroup = vec![0usize];
    let mut seen = std::collections::BTreeSet::from([0usize]);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &w in &frontier {
            for &g in &gen_ids {
                let prod = group.compose(w, g, &index);
                if seen.insert(prod) {
                    wp_subgroup.push(prod);
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    wp_subgroup.sort_unstable();
    let wp = *wp_subgroup
        .iter()
        .max_by_key(|&&w| group.elements[w].length)
        .unwrap();

    // Membership: wΔ_p ⊆ Δ ∪ Φ⁻, tested per element on the Δ_p images.
    let simple_indices: std::collections::BTreeSet<usize> =
        (0..r).map(|j| rs.simple_index(j)).collect();
    let delta_p_roots: Vec<usize> = delta_p.iter().map(|&j| rs.simple_index(j)).collect();
    let mut frak_wp = Vec::new();
    for w in 0..group.order {
        let ok = delta_p_roots.iter().all(|&alpha| {
            let img = group.act(w, alpha);
            img >= group.n_pos() || simple_indices.contains(&img)
        });
        if ok {
            frak_wp.push(w);
        }
    }

    let half = outside.len();
    let lp: Vec<usize> = frak_wp
        .iter()
        .map(|&w| lp_statistic(group, rs, p, w))
        .collect();
    let classes: Vec<FrakClass> = lp
        .iter()
        .map(|&l| match (2 * l).cmp(&half) {
            std::cmp::Ordering::Less => FrakClass::Plus,
            std::cmp::Ordering::Equal => FrakClass::Zero,
            std::cmp::Ordering::Greater => FrakClass::Minus,
        })
        .collect();
    let ddagger: Vec<usize> = frak_wp
        .iter()
        .zip(&lp)
        .filter(|(_, &l)| l == 0)
        .map(|(&w, _)| w)
        .collect();

    Ok(ParabolicData {
        p,
        delta_p,
        phi_p_plus,
        outside,
        wp_subgroup,
        wp,
        frak_wp,
        lp,
        classes,
        ddagger,
    })
}

/// The involution `w ↦ w_0 w w_p` on `𝔚_p`.
pub fn involution(
    group: &WeylGroup,
    paradata: &ParabolicData,
    index: &HashMap<Vec<u8>, usize>,
    w: usize,
) -> Result<usize> {
    if !paradata.contains(w) {
        return Err(Error::NotInFrakWp(w));
    }
    let wwp = group.compose(w, paradata.wp, index);
    let out = group.compose(group.w0, wwp, index);
    debug_assert!(paradata.contains(out));
    Ok(out)
}

/// JSON summary of [`ParabolicData`]: class sizes and the `l_p` histogram.
#[derive(Debug, Serialize)]
pub struct ParabolicJson {
    pub p: usize,
    pub weyl_order: usize,
    pub wp_order: usize,
    pub frak_wp_size: usize,
    pub outside_size: usize,
    pub class_sizes: ClassSizes,
    /// Histogram of `l_p` over `𝔚_p` as (value, count) pairs.
    pub lp_histogram: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize)]
pub struct ClassSizes {
    pub plus: usize,
    pub zero: usize,
    pub minus: usize,
    pub ddagger: usize,
}

impl ParabolicData {
    pub fn to_json(&self, group: &WeylGroup) -> ParabolicJson {
        let mut hist = std::collections::BTreeMap::new();
        for &l in &self.lp {
            *hist.entry(l).or_insert(0usize) += 1;
        }
        let count = |c: FrakClass| self.classes.iter().filter(|&&x| x == c).count();
        ParabolicJson {
            p: self.p,
            weyl_order: group.order,
            wp_order: self.wp_subgroup.len(),
            frak_wp_size: self.frak_wp.len(),
            outside_size: self.outside.len(),
            class_sizes: ClassSizes {
                plus: count(FrakClass::Plus),
                zero: count(FrakClass::Zero),
                minus: count(FrakClass::Minus),
                ddagger: self.ddagger.len(),
            },
            lp_histogram: hist.into_iter().collect(),
        }
    }
}
