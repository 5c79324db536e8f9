//! Exact symbolic zeta expressions: sums `Σ coeff · rat(s) · ∏ẑ(ks+c)^e`
//! with formal-constant coefficients and factored rational functions.
//!
//! Normal form merges terms with identical (rational-factor, monomial)
//! shape and drops vanishing coefficients; the zero test additionally
//! combines same-monomial terms over a common denominator per constant
//! monomial, so equality is decided exactly, never numerically.

use std::collections::BTreeMap;

use num::{BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::factor::{
    dense_add_assign, dense_is_zero, dense_scale, expand, multiset_subtract, multiset_union,
    rational_display, FactorMultiset, LinearFactor,
};
use super::monomial::{ConstMonomial, ConstantCombo, ZhatArg, ZhatMonomial};

/// Shape of a term: the factored rational function (scalar folded into the
/// coefficient) and the `ẑ` monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TermKey {
    pub numer: FactorMultiset,
    pub denom: FactorMultiset,
    pub mono: ZhatMonomial,
}

/// A zeta expression in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "ZetaExpressionJson", try_from = "ZetaExpressionJson")]
pub struct ZetaExpression {
    pub terms: BTreeMap<TermKey, ConstantCombo>,
}

/// Flat JSON mirror of [`ZetaExpression`]; documented in
/// `schemas/zeta_expression.schema.json`. Deserializing re-normalizes, so
/// a round trip lands on the identical normal form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZetaExpressionJson {
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    /// Coefficient as a sum of weighted constant monomials; weights are
    /// exact rationals rendered as strings.
    pub coeff: Vec<ComboEntryJson>,
    /// Numerator factors `[k, c, exponent]` meaning `(k·s + c)^exponent`.
    pub numer: Vec<(i64, i64, u32)>,
    pub denom: Vec<(i64, i64, u32)>,
    /// `ẑ` factors `[k, c, exponent]` meaning `ẑ(k·s + c)^exponent`.
    pub zhat: Vec<(i64, i64, i32)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComboEntryJson {
    /// Exact rational weight, e.g. `"-1/2"`.
    pub weight: String,
    /// Constant monomial `[n, exponent]` pairs meaning `ẑ(n)^exponent`.
    pub mono: Vec<(i64, i32)>,
}

impl From<ZetaExpression> for ZetaExpressionJson {
    fn from(expr: ZetaExpression) -> Self {
        let terms = expr
            .terms
            .iter()
            .map(|(key, combo)| TermJson {
                coeff: combo
                    .0
                    .iter()
                    .map(|(mono, q)| ComboEntryJson {
                        weight: q.to_string(),
                        mono: mono.iter().map(|(&n, &e)| (n, e)).collect(),
                    })
                    .collect(),
                numer: key.numer.iter().map(|(f, &e)| (f.k, f.c, e)).collect(),
                denom: key.denom.iter().map(|(f, &e)| (f.k, f.c, e)).collect(),
                zhat: key.mono.0.iter().map(|(a, &e)| (a.k, a.c, e)).collect(),
            })
            .collect();
        ZetaExpressionJson { terms }
    }
}

impl TryFrom<ZetaExpressionJson> for ZetaExpression {
    type Error = String;

    fn try_from(json: ZetaExpressionJson) -> Result<Self, String> {
        let mut expr = ZetaExpression::zero();
        for term in json.terms {
            let mut combo = ConstantCombo::zero();
            for entry in term.coeff {
                let q: BigRational = entry
                    .weight
                    .parse()
                    .map_err(|e| format!("bad rational {:?}: {e}", entry.weight))?;
                let mono: ConstMonomial = entry.mono.into_iter().collect();
                combo.add_assign(&ConstantCombo::monomial(q, mono));
            }
            let mut b = TermBuilder::new();
            b.combo = combo;
            for (k, c, e) in term.numer {
                for _ in 0..e {
                    b.push_linear(k, c, true);
                }
            }
            for (k, c, e) in term.denom {
                for _ in 0..e {
                    b.push_linear(k, c, false);
                }
            }
            for (k, c, e) in term.zhat {
                b.push_zhat(k, c, e);
            }
            expr.push(b);
        }
        Ok(expr)
    }
}

/// Accumulates one term's pieces before normalization.
#[derive(Debug, Clone)]
pub struct TermBuilder {
    pub scalar: BigRational,
    pub combo: ConstantCombo,
    pub numer: FactorMultiset,
    pub denom: FactorMultiset,
    pub mono: ZhatMonomial,
}

impl Default for TermBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl TermBuilder {
    pub fn new() -> Self {
        TermBuilder {
            scalar: BigRational::one(),
            combo: ConstantCombo::one(),
            numer: BTreeMap::new(),
            denom: BTreeMap::new(),
            mono: ZhatMonomial::one(),
        }
    }

    /// Multiply by `(k·s + c)^{±1}`; constants fold into the scalar.
    pub fn push_linear(&mut self, k: i64, c: i64, numerator: bool) {
        let (content, factor) = LinearFactor::canonical(k, c);
        if numerator {
            self.scalar *= content;
        } else {
            self.scalar /= content;
        }
        if let Some(f) = factor {
            let target = if numerator { &mut self.numer } else { &mut self.denom };
            *target.entry(f).or_insert(0) += 1;
        }
    }

    /// Multiply by `ẑ(k·s + c)^exp` with reflection canonicalization;
    /// constant arguments land in the coefficient combo.
    pub fn push_zhat(&mut self, k: i64, c: i64, exp: i32) {
        let arg = ZhatArg::canonical(k, c);
        if arg.k == 0 {
            let mut m = ConstMonomial::new();
            m.insert(arg.c, exp);
            self.combo = self.combo.mul(&ConstantCombo::monomial(BigRational::one(), m));
        } else {
            self.mono.insert(arg, exp);
        }
    }

    /// Multiply by `ξ(k·s + c)^exp = [(ks+c)(ks+c-1)ẑ(ks+c)]^exp`.
    pub fn push_xi(&mut self, k: i64, c: i64, exp: i32) {
        if k == 0 {
            // Constant ξ(c): scalar c(c-1) times ẑ(c).
            let q = BigRational::from_integer((c * (c - 1)).into());
            debug_assert!(!q.is_zero(), "xi at 0 or 1 is the zero polynomial factor");
            self.scalar *= pow_rational(&q, exp);
            self.push_zhat(0, c, exp);
            return;
        }
        for _ in 0..exp.unsigned_abs() {
            let numerator = exp > 0;
            self.push_linear(k, c, numerator);
            self.push_linear(k, c - 1, numerator);
        }
        self.push_zhat(k, c, exp);
    }

    pub fn scale(&mut self, q: &BigRational) {
        self.scalar *= q;
    }

    pub fn mul_combo(&mut self, combo: &ConstantCombo) {
        self.combo = self.combo.mul(combo);
    }

    fn finish(mut self) -> Option<(TermKey, ConstantCombo)> {
        // Cancel factors shared between numerator and denominator.
        let shared: Vec<(LinearFactor, u32)> = self
            .numer
            .iter()
            .filter_map(|(&f, &e)| self.denom.get(&f).map(|&e2| (f, e.min(e2))))
            .collect();
        for (f, e) in shared {
            let n = self.numer.get_mut(&f).unwrap();
            *n -= e;
            if *n == 0 {
                self.numer.remove(&f);
            }
            let d = self.denom.get_mut(&f).unwrap();
            *d -= e;
            if *d == 0 {
                self.denom.remove(&f);
            }
        }
        let combo = self.combo.scale(&self.scalar);
        if combo.is_zero() {
            return None;
        }
        Some((TermKey { numer: self.numer, denom: self.denom, mono: self.mono }, combo))
    }
}

fn pow_rational(q: &BigRational, exp: i32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..exp.unsigned_abs() {
        out *= q;
    }
    if exp < 0 {
        out.recip()
    } else {
        out
    }
}

impl ZetaExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn push(&mut self, builder: TermBuilder) {
        if let Some((key, combo)) = builder.finish() {
            let entry = self.terms.entry(key.clone()).or_insert_with(ConstantCombo::zero);
            entry.add_assign(&combo);
            if entry.is_zero() {
                self.terms.remove(&key);
            }
        }
    }

    pub fn add_assign(&mut self, other: &ZetaExpression) {
        for (key, combo) in &other.terms {
            let entry = self.terms.entry(key.clone()).or_insert_with(ConstantCombo::zero);
            entry.add_assign(combo);
            if entry.is_zero() {
                self.terms.remove(key);
            }
        }
    }

    pub fn neg(&self) -> Self {
        ZetaExpression {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        ZetaExpression {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.scale(q))).collect(),
        }
    }

    /// Multiply every term by a builder-shaped factor (rational factors,
    /// `ẑ` powers, constants).
    pub fn mul_term(&self, factor: &TermBuilder) -> Self {
        let mut out = ZetaExpression::zero();
        for (key, combo) in &self.terms {
            let mut b = factor.clone();
            b.mul_combo(combo);
            b.numer = multiset_union(&b.numer, &key.numer);
            b.denom = multiset_union(&b.denom, &key.denom);
            b.mono = b.mono.mul(&key.mono);
            out.push(b);
        }
        out
    }

    /// Substitute `s ↦ -c0 - s` and re-canonicalize. Involutive.
    pub fn reflect(&self, c0: i64) -> Self {
        let mut out = ZetaExpression::zero();
        for (key, combo) in &self.terms {
            let mut b = TermBuilder::new();
            b.combo = combo.clone();
            let mut sign = 1i64;
            for (f, &e) in &key.numer {
                let (s, g) = f.reflect(c0);
                if e % 2 == 1 {
                    sign *= s;
                }
                *b.numer.entry(g).or_insert(0) += e;
            }
            for (f, &e) in &key.denom {
                let (s, g) = f.reflect(c0);
                if e % 2 == 1 {
                    sign *= s;
                }
                *b.denom.entry(g).or_insert(0) += e;
            }
            b.mono = key.mono.reflect(c0);
            if sign < 0 {
                b.scalar = -b.scalar;
            }
            out.push(b);
        }
        out
    }

    /// Exact zero test: after normal-form merging, terms sharing a monomial
    /// are summed over a common denominator separately for every constant
    /// monomial, and the expanded numerators must vanish.
    pub fn is_zero(&self) -> bool {
        self.residual_groups().is_empty()
    }

    /// Monomials whose combined rational coefficient does not vanish;
    /// empty means the expression is zero.
    pub fn residual_groups(&self) -> Vec<ZhatMonomial> {
        let mut by_mono: BTreeMap<&ZhatMonomial, Vec<(&TermKey, &ConstantCombo)>> = BTreeMap::new();
        for (key, combo) in &self.terms {
            by_mono.entry(&key.mono).or_default().push((key, combo));
        }
        let mut residual = Vec::new();
        'outer: for (mono, parts) in by_mono {
            // Common denominator: per-factor max exponent.
            let mut common: FactorMultiset = BTreeMap::new();
            for (key, _) in &parts {
                for (&f, &e) in &key.denom {
                    let cur = common.entry(f).or_insert(0);
                    *cur = (*cur).max(e);
                }
            }
            // Constant monomials appearing anywhere in this group.
            let mut const_monos: Vec<&ConstMonomial> = parts
                .iter()
                .flat_map(|(_, combo)| combo.0.keys())
                .collect();
            const_monos.sort();
            const_monos.dedup();
            for cm in const_monos {
                let mut total: Vec<BigRational> = vec![BigRational::zero()];
                for (key, combo) in &parts {
                    let Some(q) = combo.0.get(cm) else { continue };
                    let cofactor = multiset_subtract(&common, &key.denom)
                        .expect("common denominator contains each term denominator");
                    let mut poly = expand(&multiset_union(&key.numer, &cofactor));
                    dense_scale(&mut poly, q);
                    dense_add_assign(&mut total, &poly);
                }
                if !dense_is_zero(&total) {
                    residual.push(mono.clone());
                    continue 'outer;
                }
            }
        }
        residual
    }

    /// The monomials present, in normal-form order.
    pub fn monomials(&self) -> Vec<ZhatMonomial> {
        let mut out: Vec<ZhatMonomial> = self.terms.keys().map(|k| k.mono.clone()).collect();
        out.dedup();
        out
    }

    /// Terms attached to one monomial: (coefficient combo, numerator,
    /// denominator) triples.
    pub fn coefficient_parts(&self, mono: &ZhatMonomial) -> Vec<(&ConstantCombo, &FactorMultiset, &FactorMultiset)> {
        self.terms
            .iter()
            .filter(|(k, _)| &k.mono == mono)
            .map(|(k, c)| (c, &k.numer, &k.denom))
            .collect()
    }

    /// Largest deficiency of the constant `ẑ(n)` across coefficients.
    pub fn constant_deficiency(&self, n: i64) -> i32 {
        self.terms.values().map(|c| c.deficiency(n)).max().unwrap_or(0)
    }

    /// All constants `ẑ(n)` appearing in some denominator.
    pub fn constant_denominators(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .terms
            .values()
            .flat_map(|c| c.denominator_constants())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Largest deficiency of `ẑ(k·s+c)` across monomials (negative
    /// exponents that a clearing product must cover).
    pub fn mono_deficiency(&self, arg: ZhatArg) -> i32 {
        self.terms
            .keys()
            .map(|k| k.mono.0.get(&arg).map_or(0, |&e| (-e).max(0)))
            .max()
            .unwrap_or(0)
    }

    /// All s-dependent `ẑ` arguments with a negative exponent somewhere.
    pub fn mono_denominators(&self) -> Vec<ZhatArg> {
        let mut out: Vec<ZhatArg> = self
            .terms
            .keys()
            .flat_map(|k| {
                k.mono
                    .0
                    .iter()
                    .filter(|&(_, &e)| e < 0)
                    .map(|(&a, _)| a)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn render_text(&self) -> String {
        self.render(RenderStyle::Text)
    }

    pub fn render_latex(&self) -> String {
        self.render(RenderStyle::Latex)
    }

    fn render(&self, style: RenderStyle) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        // Deterministic display order: by monomial descending (highest
        // shift first, matching the published displays), then by shape.
        let mut keys: Vec<&TermKey> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.mono.cmp(&a.mono).then(a.numer.cmp(&b.numer)).then(a.denom.cmp(&b.denom)));
        let mut out = String::new();
        for key in keys {
            let combo = &self.terms[key];
            let piece = render_term(key, combo, style);
            if out.is_empty() {
                out.push_str(&piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&piece);
            }
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq)]
enum RenderStyle {
    Text,
    Latex,
}

fn render_term(key: &TermKey, combo: &ConstantCombo, style: RenderStyle) -> String {
    let zhat = |arg: &str| match style {
        RenderStyle::Text => format!("zhat({arg})"),
        RenderStyle::Latex => format!("\\hat{{\\zeta}}({arg})"),
    };
    let mut numer_parts: Vec<String> = Vec::new();
    let mut denom_parts: Vec<String> = Vec::new();

    // Coefficient.
    let mut lead_sign = false;
    if combo.len() == 1 {
        let (mono, q) = combo.0.iter().next().unwrap();
        lead_sign = q.is_negative();
        let mag = q.abs();
        if !mag.is_one() || mono.is_empty() && key.mono.0.is_empty() && key.numer.is_empty() {
            numer_parts.push(rational_display(&mag));
        }
        for (&n, &e) in mono {
            let f = zhat(&n.to_string());
            let part = if e.abs() == 1 { f } else { format!("{f}^{}", e.abs()) };
            if e > 0 {
                numer_parts.push(part);
            } else {
                denom_parts.push(part);
            }
        }
    } else {
        let inner = match style {
            RenderStyle::Text => combo.render_text(),
            RenderStyle::Latex => combo.render_text().replace("zhat", "\\hat{\\zeta}"),
        };
        numer_parts.push(format!("({inner})"));
    }

    for (f, &e) in &key.numer {
        let base = match style {
            RenderStyle::Text => format!("({f})"),
            RenderStyle::Latex => format!("({f})"),
        };
        let part = if e == 1 { base } else { format!("{base}^{e}") };
        numer_parts.push(part);
    }
    for (&a, &e) in &key.mono.0 {
        let f = zhat(&a.to_string());
        let part = if e.abs() == 1 { f } else { format!("{f}^{}", e.abs()) };
        if e > 0 {
            numer_parts.push(part);
        } else {
            denom_parts.push(part);
        }
    }
    for (f, &e) in &key.denom {
        let base = if f.k == 1 && f.c == 0 {
            "s".to_string()
        } else {
            format!("({f})")
        };
        let part = if e == 1 { base } else { format!("{base}^{e}") };
        denom_parts.push(part);
    }

    if numer_parts.is_empty() {
        numer_parts.push("1".into());
    }
    let numer = numer_parts.join(match style {
        RenderStyle::Text => "*",
        RenderStyle::Latex => " ",
    });
    let body = if denom_parts.is_empty() {
        numer
    } else if style == RenderStyle::Latex {
        format!("\\frac{{{numer}}}{{{}}}", denom_parts.join(" "))
    } else if denom_parts.len() == 1 {
        format!("{numer}/{}", denom_parts[0])
    } else {
        format!("{numer}/({})", denom_parts.join("*"))
    };
    if lead_sign {
        format!("-{body}")
    } else {
        body
    }
}
