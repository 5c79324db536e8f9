//! The `λ_p`-grading of `Φ` and its counting tables.
//!
//! `Σ_p(k,h)` collects the roots with fundamental-weight pairing `k` and
//! coroot height `h`; everything here is computed from root data alone so it
//! stays available for `E_8` without enumerating its Weyl group. The
//! symmetric chain decompositions of the graded pieces are found by search
//! and gated behind their defining invariants rather than read from tables.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigRational, FromPrimitive, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::weyl::{ParabolicData, WeylGroup};

#[derive(Debug)]
pub struct GradingTables {
    pub p: usize,
    /// Functional-equation constant `c_p = 2⟨λ_p - ρ_p, α_p^∨⟩`.
    pub c_p: i64,
    /// Largest `k` with `Σ_p(k)` nonempty (coefficient of `α_p^∨` in the
    /// highest coroot).
    pub k_p: i64,
    /// `Σ_p(k,h)` as positive-root indices.
    pub sigma: BTreeMap<(i64, i64), Vec<usize>>,
    /// `N_p(k,h) = |Σ_p(k,h)|`.
    pub n: BTreeMap<(i64, i64), usize>,
    /// Lowest level `ħ_k⁻` per `k` (level = coroot height above `k·α_p^∨`).
    pub hbar_minus: BTreeMap<i64, i64>,
    /// Highest level `ħ_k⁺` per `k`.
    pub hbar_plus: BTreeMap<i64, i64>,
    /// Lowest root `α_p^-(k)` per `k` (positive-root index).
    pub lowest: BTreeMap<i64, usize>,
    /// Highest root `α_p^+(k)` per `k`.
    pub highest: BTreeMap<i64, usize>,
}

impl GradingTables {
    pub fn n_of(&self, k: i64, h: i64) -> usize {
        self.n.get(&(k, h)).copied().unwrap_or(0)
    }

    /// All of `Σ_p(k)` (positive-root indices, by increasing coroot height
    /// then lexicographic coroot digits).
    pub fn sigma_k(&self, k: i64) -> Vec<usize> {
        self.sigma
            .range((k, i64::MIN)..=(k, i64::MAX))
            .flat_map(|(_, v)| v.iter().copied())
            .collect()
    }

    /// `M_p(k,h)` by the closed form: `0` when `2h-1 ≤ k·c_p`, else
    /// `N_p(k,h-1) - N_p(k,h)`. Defined for `k ≥ 1`.
    pub fn m_of(&self, k: i64, h: i64) -> i64 {
        assert!(k >= 1, "the k = 0 column is handled by the symbolic layer");
        if 2 * h - 1 <= k * self.c_p {
            0
        } else {
            self.n_of(k, h - 1) as i64 - self.n_of(k, h) as i64
        }
    }

    /// All `(k,h)` with `M_p(k,h) > 0`.
    pub fn m_support(&self) -> Vec<(i64, i64, i64)> {
        let mut out = Vec::new();
        for k in 1..=self.k_p {
            // heights run up to k·c_p - ħ-floor; overshoot by one is fine.
            let max_h = self
                .sigma
                .range((k, i64::MIN)..=(k, i64::MAX))
                .map(|((_, h), _)| *h)
                .max()
                .unwrap_or(0);
            for h in 2..=max_h + 1 {
                let m = self.m_of(k, h);
                if m > 0 {
                    out.push((k, h, m));
                }
            }
        }
        out
    }
}

/// Build the grading tables from root data alone. `c_p` is computed from
/// the defining pairing formula and cross-checked against the level form
/// `c_p = 2 + ħ_1⁺`; disagreement is a construction bug, not an input error.
pub fn build_grading(rs: &RootSystem, p: usize) -> Result<GradingTables> {
    let r = rs.rank();
    if p == 0 || p > r {
        return Err(Error::Usage(format!("p = {p} out of range 1..={r}")));
    }

    let mut sigma: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for i in 0..rs.n_pos {
        let k = rs.pairing_fundamental(p, i);
        if k == 0 {
            continue;
        }
        let h = rs.height_coroot(i);
        sigma.entry((k, h)).or_default().push(i);
    }
    for members in sigma.values_mut() {
        members.sort_by_key(|&i| rs.coroots[i].coeffs.clone());
    }
    let n: BTreeMap<(i64, i64), usize> = sigma.iter().map(|(&kh, v)| (kh, v.len())).collect();

    let k_p = rs.highest_coroot_coeffs[p - 1];

    // c_p = 2⟨λ_p - ρ_p, α_p^∨⟩ via the rational half-sum.
    let (_, rho_p) = rs.rho_and_rho_p(p);
    let alpha_p_idx = rs.simple_index(p - 1);
    let pairing = rs.pairing_weight(&rho_p, alpha_p_idx);
    let c_p_rat = (BigRational::from_i64(1).unwrap() - pairing) * BigRational::from_i64(2).unwrap();
    if !c_p_rat.is_integer() {
        return Err(Error::InternalInconsistency(format!(
            "c_p = {c_p_rat} is not an integer"
        )));
    }
    let c_p = c_p_rat.to_integer().to_i64().unwrap();

    // Extremal roots per k, by dominance over simple-coroot coordinates:
    // the grading, the levels ħ_k^± and the published chain tables all live
    // on the coroot side (for simply-laced types the two orders coincide).
    let mut lowest = BTreeMap::new();
    let mut highest = BTreeMap::new();
    let mut hbar_minus = BTreeMap::new();
    let mut hbar_plus = BTreeMap::new();
    for k in 1..=k_p {
        let members: Vec<usize> = sigma
            .range((k, i64::MIN)..=(k, i64::MAX))
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        if members.is_empty() {
            return Err(Error::InternalInconsistency(format!(
                "Sigma_p({k}) empty below k_p = {k_p}"
            )));
        }
        let dominated_by = |a: usize, b: usize| {
            rs.coroots[b]
                .coeffs
                .iter()
                .zip(&rs.coroots[a].coeffs)
                .all(|(hi, lo)| hi >= lo)
        };
        let lo = members
            .iter()
            .copied()
            .find(|&cand| members.iter().all(|&other| dominated_by(cand, other)))
            .ok_or_else(|| Error::NoExtremalRoot(format!("lowest of Sigma_p({k})")))?;
        let hi = members
            .iter()
            .copied()
            .find(|&cand| members.iter().all(|&other| dominated_by(other, cand)))
            .ok_or_else(|| Error::NoExtremalRoot(format!("highest of Sigma_p({k})")))?;
        lowest.insert(k, lo);
        highest.insert(k, hi);
        hbar_minus.insert(k, rs.height_coroot(lo) - k);
        hbar_plus.insert(k, rs.height_coroot(hi) - k);
    }

    // Cross-check c_p = 2 + ħ_1⁺ (equivalently 1 + ht α_p⁺(1)^∨).
    if let Some(&h1) = hbar_plus.get(&1) {
        if c_p != 2 + h1 {
            return Err(Error::InternalInconsistency(format!(
                "c_p mismatch: pairing formula gives {c_p}, level formula gives {}",
                2 + h1
            )));
        }
    }

    Ok(GradingTables {
        p,
        c_p,
        k_p,
        sigma,
        n,
        hbar_minus,
        hbar_plus,
        lowest,
        highest,
    })
}

/// `N_{p,w}(k,h) = #{α ∈ w⁻¹Φ⁻ : ⟨λ_p, α^∨⟩ = k, ht α^∨ = h}` over all of
/// `Φ`, for any `w` in the enumerated group.
pub fn n_pw(rs: &RootSystem, group: &WeylGroup, p: usize, w: usize, k: i64, h: i64) -> usize {
    (0..rs.total())
        .filter(|&i| {
            rs.pairing_fundamental(p, i) == k
                && rs.height_coroot(i) == h
                && !rs.is_positive(group.act(w, i))
        })
        .count()
}

/// Brute-force `M_p(k,h)` straight from its definition as a max over `𝔚_p`;
/// the oracle for the closed form at small rank.
pub fn m_p_brute(
    rs: &RootSystem,
    group: &WeylGroup,
    paradata: &ParabolicData,
    k: i64,
    h: i64,
) -> i64 {
    paradata
        .frak_wp
        .iter()
        .map(|&w| {
            n_pw(rs, group, paradata.p, w, k, h - 1) as i64
                - n_pw(rs, group, paradata.p, w, k, h) as i64
        })
        .max()
        .unwrap_or(0)
}

/// A symmetric chain decomposition of `Σ_p(k)`: each chain climbs by single
/// `Δ_p` coroot steps from its start `β_m` to the mirror height
/// `k·c_p - ht β_m^∨`.
#[derive(Debug, Clone, Serialize)]
pub struct ChainDecomposition {
    pub k: i64,
    /// Chains as positive-root indices, ordered upward (lowest first);
    /// chain 1 runs from `α_p^-(k)` to `α_p^+(k)`.
    pub chains: Vec<Vec<usize>>,
    /// For each chain, the 0-based `Δ_p` simple indices used between
    /// consecutive members.
    pub step_roots: Vec<Vec<usize>>,
}

/// Find the decomposition by search: repeatedly take the uncovered coroot of
/// minimal height (ties by lexicographically smallest digit vector) and
/// extend an uncovered upward path by single `Δ_p`-coroot steps to exactly
/// the mirror height, backtracking across chains if a tail cannot be
/// completed. Exhaustion would contradict the existence guarantee, so it
/// surfaces as [`Error::DecompositionNotFound`].
pub fn chain_decomposition(
    rs: &RootSystem,
    tables: &GradingTables,
    k: i64,
) -> Result<ChainDecomposition> {
    if k < 1 || k > tables.k_p {
        return Err(Error::Usage(format!(
            "k = {k} outside 1..={} for p = {}",
            tables.k_p, tables.p
        )));
    }
    let p = tables.p;
    let members = tables.sigma_k(k);
    let kcp = k * tables.c_p;

    // Coroot-coordinate lookup within Σ_p(k).
    let coord_index: BTreeMap<Vec<i64>, usize> = members
        .iter()
        .map(|&i| (rs.coroots[i].coeffs.clone(), i))
        .collect();
    let delta_p: Vec<usize> = (0..rs.rank()).filter(|&j| j != p - 1).collect();

    let by_height_lex = |i: &usize| (rs.height_coroot(*i), rs.coroots[*i].coeffs.clone());

    struct Search<'a> {
        rs: &'a RootSystem,
        coord_index: &'a BTreeMap<Vec<i64>, usize>,
        delta_p: &'a [usize],
        kcp: i64,
        lowest: usize,
        highest: usize,
    }

    impl Search<'_> {
        /// Extend `chain` upward to `target_h`; on success recurse into the
        /// remaining cover.
        fn extend(
            &self,
            chain: &mut Vec<usize>,
            steps: &mut Vec<usize>,
            target_h: i64,
            covered: &mut BTreeSet<usize>,
            chains: &mut Vec<Vec<usize>>,
            step_roots: &mut Vec<Vec<usize>>,
        ) -> bool {
            let last = *chain.last().unwrap();
            let h = self.rs.height_coroot(last);
            if h == target_h {
                // First chain must end exactly at the highest root.
                if chains.is_empty() && last != self.highest {
                    return false;
                }
                chains.push(chain.clone());
                step_roots.push(steps.clone());
                if self.cover(covered, chains, step_roots) {
                    return true;
                }
                chains.pop();
                step_roots.pop();
                return false;
            }
            let coeffs = &self.rs.coroots[last].coeffs;
            for &j in self.delta_p {
                let mut up = coeffs.clone();
                up[j] += 1;
                if let Some(&next) = self.coord_index.get(&up) {
                    if covered.contains(&next) {
                        continue;
                    }
                    covered.insert(next);
                    chain.push(next);
                    steps.push(j);
                    if self.extend(chain, steps, target_h, covered, chains, step_roots) {
                        return true;
                    }
                    steps.pop();
                    chain.pop();
                    covered.remove(&next);
                }
            }
            false
        }

        fn cover(
            &self,
            covered: &mut BTreeSet<usize>,
            chains: &mut Vec<Vec<usize>>,
            step_roots: &mut Vec<Vec<usize>>,
        ) -> bool {
            let uncovered: Vec<usize> = self
                .coord_index
                .values()
                .copied()
                .filter(|i| !covered.contains(i))
                .collect();
            if uncovered.is_empty() {
                return true;
            }
            let start = uncovered
                .iter()
                .copied()
                .min_by_key(|&i| (self.rs.height_coroot(i), self.rs.coroots[i].coeffs.clone()))
                .unwrap();
            if chains.is_empty() && start != self.lowest {
                return false;
            }
            let target_h = self.kcp - self.rs.height_coroot(start);
            covered.insert(start);
            let mut chain = vec![start];
            let mut steps = Vec::new();
            let ok = self.extend(&mut chain, &mut steps, target_h, covered, chains, step_roots);
            if !ok {
                covered.remove(&start);
            }
            ok
        }
    }

    let search = Search {
        rs,
        coord_index: &coord_index,
        delta_p: &delta_p,
        kcp,
        lowest: tables.lowest[&k],
        highest: tables.highest[&k],
    };
    let mut covered = BTreeSet::new();
    let mut chains = Vec::new();
    let mut step_roots = Vec::new();
    if !search.cover(&mut covered, &mut chains, &mut step_roots) {
        return Err(Error::DecompositionNotFound(format!(
            "Sigma_{p}({k}) of {}{}",
            rs.spec.series, rs.spec.rank
        )));
    }

    let decomposition = ChainDecomposition { k, chains, step_roots };
    verify_chain_invariants(rs, tables, &decomposition)?;
    let _ = by_height_lex;
    Ok(decomposition)
}

/// Assert the six defining invariants of a chain decomposition; wrong
/// outputs cannot be returned silently.
pub fn verify_chain_invariants(
    rs: &RootSystem,
    tables: &GradingTables,
    dec: &ChainDecomposition,
) -> Result<()> {
    let k = dec.k;
    let kcp = k * tables.c_p;
    let fail = |msg: String| Err(Error::InternalInconsistency(format!("chains k={k}: {msg}")));

    // Partition.
    let mut seen = BTreeSet::new();
    for chain in &dec.chains {
        for &i in chain {
            if !seen.insert(i) {
                return fail(format!("root {i} covered twice"));
            }
        }
    }
    let members: BTreeSet<usize> = tables.sigma_k(k).into_iter().collect();
    if seen != members {
        return fail("chains do not cover Sigma_p(k)".into());
    }

    // Chain 1 endpoints and size.
    let first = &dec.chains[0];
    if first.first() != Some(&tables.lowest[&k]) || first.last() != Some(&tables.highest[&k]) {
        return fail("chain 1 does not run from the lowest to the highest root".into());
    }
    let expected_len =
        (rs.height_coroot(tables.highest[&k]) - rs.height_coroot(tables.lowest[&k]) + 1) as usize;
    if first.len() != expected_len {
        return fail(format!("chain 1 has size {} != {expected_len}", first.len()));
    }

    // Strict dominance of chain 1's size.
    for (m, chain) in dec.chains.iter().enumerate().skip(1) {
        if chain.is_empty() || chain.len() >= first.len() {
            return fail(format!("chain {} breaks |L_1| > |L_m| >= 1", m + 1));
        }
    }

    // Steps are single Δ_p coroot increments.
    for (chain, steps) in dec.chains.iter().zip(&dec.step_roots) {
        if steps.len() + 1 != chain.len() {
            return fail("step list length mismatch".into());
        }
        for (w, &j) in chain.windows(2).zip(steps) {
            if j == tables.p - 1 {
                return fail("step uses α_p".into());
            }
            let mut up = rs.coroots[w[0]].coeffs.clone();
            up[j] += 1;
            if up != rs.coroots[w[1]].coeffs {
                return fail("consecutive coroots do not differ by one simple coroot".into());
            }
        }
    }

    // Start heights: ht β_1 < ht β_2 ≤ … ≤ k·c_p/2.
    let starts: Vec<i64> = dec
        .chains
        .iter()
        .map(|chain| rs.height_coroot(chain[0]))
        .collect();
    for (m, pair) in starts.windows(2).enumerate() {
        let strict = m == 0;
        if (strict && pair[0] >= pair[1]) || (!strict && pair[0] > pair[1]) {
            return fail("start heights are not ordered".into());
        }
    }
    if let Some(&last) = starts.last() {
        if 2 * last > kcp {
            return fail("a chain starts above k·c_p/2".into());
        }
    }

    // Mirror ends: ht(last) = k·c_p - ht(first).
    for chain in &dec.chains {
        let lo = rs.height_coroot(chain[0]);
        let hi = rs.height_coroot(*chain.last().unwrap());
        if lo + hi != kcp {
            return fail(format!("chain ends at height {hi}, mirror of {lo} is {}", kcp - lo));
        }
    }
    Ok(())
}

impl ChainDecomposition {
    /// The chains as coroot digit strings, printed downward from the top as
    /// in the published tables.
    pub fn digit_rows(&self, rs: &RootSystem) -> Vec<Vec<String>> {
        self.chains
            .iter()
            .map(|chain| chain.iter().rev().map(|&i| rs.coroots[i].digits()).collect())
            .collect()
    }
}

/// Lowest and highest roots of `Σ_p(k)`.
pub fn lowest_highest(tables: &GradingTables, k: i64) -> Result<(usize, usize)> {
    match (tables.lowest.get(&k), tables.highest.get(&k)) {
        (Some(&lo), Some(&hi)) => Ok((lo, hi)),
        _ => Err(Error::Usage(format!("k = {k} outside 1..={}", tables.k_p))),
    }
}

/// JSON payload for the `tables` CLI command.
#[derive(Debug, Serialize)]
pub struct TablesJson {
    pub series: String,
    pub rank: usize,
    pub p: usize,
    pub c_p: i64,
    pub k_p: i64,
    pub n: Vec<(i64, i64, usize)>,
    pub m: Vec<(i64, i64, i64)>,
    pub hbar_minus: Vec<(i64, i64)>,
    pub hbar_plus: Vec<(i64, i64)>,
}

impl GradingTables {
    pub fn to_json(&self, rs: &RootSystem) -> TablesJson {
        TablesJson {
            series: rs.spec.series.to_string(),
            rank: rs.spec.rank,
            p: self.p,
            c_p: self.c_p,
            k_p: self.k_p,
            n: self.n.iter().map(|(&(k, h), &v)| (k, h, v)).collect(),
            m: self.m_support(),
            hbar_minus: self.hbar_minus.iter().map(|(&k, &v)| (k, v)).collect(),
            hbar_plus: self.hbar_plus.iter().map(|(&k, &v)| (k, v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, RootSystemSpec, Series};
    use crate::weyl::{compute_frak_wp, enumerate_weyl, DEFAULT_WEYL_CAP};

    fn rs(series: Series, rank: usize) -> RootSystem {
        build_root_system(RootSystemSpec::new(series, rank).unwrap()).unwrap()
    }

    #[test]
    fn f4_cp_values_match_published_table() {
        let f4 = rs(Series::F, 4);
        let cps: Vec<i64> = (1..=4).map(|p| build_grading(&f4, p).unwrap().c_p).collect();
        assert_eq!(cps, vec![11, 7, 5, 8]);
    }

    #[test]
    fn a_series_cp_is_rank_plus_one() {
        for r in 1..=6 {
            let a = rs(Series::A, r);
            for p in 1..=r {
                assert_eq!(build_grading(&a, p).unwrap().c_p, (r + 1) as i64, "A{r} p={p}");
            }
        }
    }

    #[test]
    fn g2_p1_sigma1_digit_vectors() {
        let g2 = rs(Series::G, 2);
        let t = build_grading(&g2, 1).unwrap();
        let digits: Vec<String> = t
            .sigma_k(1)
            .iter()
            .map(|&i| g2.coroots[i].digits())
            .collect();
        assert_eq!(digits, vec!["10", "11", "12", "13"]);
        assert_eq!(t.c_p, 5);
        assert_eq!(t.k_p, 2);
    }

    #[test]
    fn a1_m_table_forces_the_shift_two_multiplier() {
        let a1 = rs(Series::A, 1);
        let t = build_grading(&a1, 1).unwrap();
        assert_eq!(t.c_p, 2);
        assert_eq!(t.m_of(1, 2), 1);
        assert_eq!(t.m_support(), vec![(1, 2, 1)]);
    }

    #[test]
    fn m_vanishes_below_the_symmetry_line() {
        let c3 = rs(Series::C, 3);
        for p in 1..=3 {
            let t = build_grading(&c3, p).unwrap();
            for k in 1..=t.k_p {
                for h in 2..=(k * t.c_p + 1) / 2 {
                    assert_eq!(t.m_of(k, h), 0, "p={p} k={k} h={h}");
                }
            }
        }
    }

    #[test]
    fn m_closed_form_matches_brute_force_max_rank_le_3() {
        for (series, rank) in [
            (Series::A, 2),
            (Series::A, 3),
            (Series::B, 2),
            (Series::B, 3),
            (Series::C, 3),
            (Series::G, 2),
        ] {
            let sys = rs(series, rank);
            let group = enumerate_weyl(&sys, DEFAULT_WEYL_CAP).unwrap();
            for p in 1..=rank {
                let t = build_grading(&sys, p).unwrap();
                let pd = compute_frak_wp(&group, &sys, p).unwrap();
                let max_h = sys.n_pos as i64 + 2;
                for k in 1..=t.k_p {
                    for h in 1..=max_h {
                        assert_eq!(
                            t.m_of(k, h),
                            m_p_brute(&sys, &group, &pd, k, h),
                            "{series}{rank} p={p} k={k} h={h}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn n_pw_at_w0_equals_n_p() {
        let b3 = rs(Series::B, 3);
        let group = enumerate_weyl(&b3, DEFAULT_WEYL_CAP).unwrap();
        for p in 1..=3 {
            let t = build_grading(&b3, p).unwrap();
            for k in 1..=t.k_p {
                for h in 1..=12 {
                    assert_eq!(
                        n_pw(&b3, &group, p, group.w0, k, h),
                        t.n_of(k, h),
                        "p={p} k={k} h={h}"
                    );
                }
            }
        }
    }

    #[test]
    fn n_pw_at_identity_vanishes_for_positive_kh() {
        let a3 = rs(Series::A, 3);
        let group = enumerate_weyl(&a3, DEFAULT_WEYL_CAP).unwrap();
        for k in 1..=3 {
            for h in 1..=6 {
                assert_eq!(n_pw(&a3, &group, 1, 0, k, h), 0);
            }
        }
    }

    #[test]
    fn g2_p1_single_chain_matches_published_digits() {
        let g2 = rs(Series::G, 2);
        let t = build_grading(&g2, 1).unwrap();
        let dec = chain_decomposition(&g2, &t, 1).unwrap();
        let rows = dec.digit_rows(&g2);
        assert_eq!(rows, vec![vec!["13", "12", "11", "10"]]);
    }

    #[test]
    fn f4_p3_chains_match_published_digits() {
        let f4 = rs(Series::F, 4);
        let t = build_grading(&f4, 3).unwrap();
        let dec = chain_decomposition(&f4, &t, 1).unwrap();
        let rows = dec.digit_rows(&f4);
        assert_eq!(
            rows,
            vec![
                vec!["1111", "1110", "0110", "0010"],
                vec!["0111", "0011"],
            ]
        );
    }

    #[test]
    fn a6_p3_chain_sizes_are_6_4_2() {
        let a6 = rs(Series::A, 6);
        let t = build_grading(&a6, 3).unwrap();
        let dec = chain_decomposition(&a6, &t, 1).unwrap();
        let sizes: Vec<usize> = dec.chains.iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![6, 4, 2]);
    }

    #[test]
    fn lowest_of_sigma_1_is_alpha_p() {
        for (series, rank) in [(Series::B, 4), (Series::D, 4), (Series::F, 4)] {
            let sys = rs(series, rank);
            for p in 1..=rank {
                let t = build_grading(&sys, p).unwrap();
                let (lo, _) = lowest_highest(&t, 1).unwrap();
                assert_eq!(lo, sys.simple_index(p - 1), "{series}{rank} p={p}");
            }
        }
    }

    #[test]
    fn extremal_heights_match_hbar() {
        let e6 = rs(Series::E, 6);
        for p in 1..=6 {
            let t = build_grading(&e6, p).unwrap();
            for k in 1..=t.k_p {
                let (lo, hi) = lowest_highest(&t, k).unwrap();
                assert_eq!(e6.height_coroot(lo), k + t.hbar_minus[&k]);
                assert_eq!(e6.height_coroot(hi), k + t.hbar_plus[&k]);
            }
        }
    }

    #[test]
    fn chains_exist_for_all_k_through_rank_8() {
        // Exercises k ≥ 2 where no published table exists; the invariant
        // gate inside chain_decomposition is the correctness check.
        for (series, ranks) in [
            (Series::A, 1..=8usize),
            (Series::B, 2..=8),
            (Series::C, 2..=8),
            (Series::D, 4..=8),
            (Series::E, 6..=8),
            (Series::F, 4..=4),
            (Series::G, 2..=2),
        ] {
            for rank in ranks {
                let sys = rs(series, rank);
                for p in 1..=rank {
                    let t = build_grading(&sys, p).unwrap();
                    for k in 1..=t.k_p {
                        chain_decomposition(&sys, &t, k)
                            .unwrap_or_else(|e| panic!("{series}{rank} p={p} k={k}: {e}"));
                    }
                }
            }
        }
    }

    #[test]
    fn wp_mirrors_lowest_to_highest() {
        // w_p α_p⁻(k) = α_p⁺(k), checked where W_p is enumerated.
        for (series, rank) in [(Series::A, 3), (Series::B, 3), (Series::G, 2)] {
            let sys = rs(series, rank);
            let group = enumerate_weyl(&sys, DEFAULT_WEYL_CAP).unwrap();
            for p in 1..=rank {
                let t = build_grading(&sys, p).unwrap();
                let pd = compute_frak_wp(&group, &sys, p).unwrap();
                for k in 1..=t.k_p {
                    let (lo, hi) = lowest_highest(&t, k).unwrap();
                    assert_eq!(group.act(pd.wp, lo), hi, "{series}{rank} p={p} k={k}");
                }
            }
        }
    }
}

#[cfg(test)]
mod duality_probe {
    use super::*;
    use crate::rootsys::{build_root_system, RootSystemSpec, Series};

    #[test]
    fn appendix_b6_p1_table_is_c6_here() {
        // The published chain tables are organized by the type of Φ^∨, so
        // the "B6" rows describe the C6 root system in this labeling.
        let c6 = build_root_system(RootSystemSpec::new(Series::C, 6).unwrap()).unwrap();
        let t = build_grading(&c6, 1).unwrap();
        let dec = chain_decomposition(&c6, &t, 1).unwrap();
        let rows = dec.digit_rows(&c6);
        assert_eq!(
            rows,
            vec![vec![
                "122222", "112222", "111222", "111122", "111112", "111111",
                "111110", "111100", "111000", "110000", "100000"
            ]]
        );
    }

    #[test]
    fn appendix_c6_p6_table_is_b6_here() {
        let b6 = build_root_system(RootSystemSpec::new(Series::B, 6).unwrap()).unwrap();
        let t = build_grading(&b6, 6).unwrap();
        let dec = chain_decomposition(&b6, &t, 1).unwrap();
        let rows = dec.digit_rows(&b6);
        assert_eq!(rows.len(), 3);
        assert_eq!(
            rows[0],
            vec![
                "222221", "122221", "112221", "111221", "111121", "111111",
                "011111", "001111", "000111", "000011", "000001"
            ]
        );
        assert_eq!(rows[2], vec!["002221", "001221", "000221"]);
    }
}
