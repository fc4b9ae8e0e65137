//! Differential polynomials in `u`, `v` and their x-derivatives with
//! coefficients in `ℚ[λ]`, and the Gardner ladder of conserved densities.
//!
//! Everything here is exact. Equivalence modulo total x-derivatives is decided
//! by the Euler operator.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Largest Gardner order the ladder is built to.
pub const MAX_ORDER: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    U,
    V,
}

impl Field {
    pub const BOTH: [Field; 2] = [Field::U, Field::V];

    pub fn symbol(self) -> &'static str {
        match self {
            Field::U => "u",
            Field::V => "v",
        }
    }
}

/// A product of factors `∂ₓᵏ f`, kept sorted by field then order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffMonomial(Vec<(Field, u32)>);

impl DiffMonomial {
    pub fn one() -> Self {
        DiffMonomial(Vec::new())
    }

    pub fn new(mut factors: Vec<(Field, u32)>) -> Self {
        factors.sort_unstable();
        DiffMonomial(factors)
    }

    pub fn factors(&self) -> &[(Field, u32)] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Highest derivative order of any factor.
    pub fn max_order(&self) -> Option<u32> {
        self.0.iter().map(|f| f.1).max()
    }

    fn multiplicity(&self, f: (Field, u32)) -> usize {
        self.0.iter().filter(|&&g| g == f).count()
    }

    fn without_one(&self, f: (Field, u32)) -> Self {
        let mut v = self.0.clone();
        let i = v.iter().position(|&g| g == f).expect("factor present");
        v.remove(i);
        DiffMonomial(v)
    }

    fn with(&self, f: (Field, u32)) -> Self {
        let mut v = self.0.clone();
        let i = v.partition_point(|&g| g <= f);
        v.insert(i, f);
        DiffMonomial(v)
    }

    fn times(&self, other: &DiffMonomial) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        DiffMonomial::new(v)
    }

    /// Factors grouped into `(field, order, power)`.
    pub fn powers(&self) -> Vec<(Field, u32, u32)> {
        let mut out: Vec<(Field, u32, u32)> = Vec::new();
        for &(f, k) in &self.0 {
            match out.last_mut() {
                Some(last) if last.0 == f && last.1 == k => last.2 += 1,
                _ => out.push((f, k, 1)),
            }
        }
        out
    }
}

/// Higher degree first, then the factor lists lexicographically.
impl Ord for DiffMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DiffMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DiffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (field, k, p)) in self.powers().into_iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(field.symbol())?;
            if k > 0 {
                write!(f, "_{{{}}}", "x".repeat(k as usize))?;
            }
            if p > 1 {
                write!(f, "^{p}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in `λ` with exact rational coefficients, keyed by power.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaPoly(BTreeMap<u32, BigRational>);

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly(BTreeMap::new())
    }

    pub fn constant(c: BigRational) -> Self {
        LambdaPoly::term(0, c)
    }

    pub fn term(power: u32, c: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(power, c);
        }
        LambdaPoly(m)
    }

    pub fn lambda() -> Self {
        LambdaPoly::term(1, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.0.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.0.iter().map(|(&k, c)| (k, c))
    }

    /// The coefficient when this is a pure constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => self.0.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return LambdaPoly::zero();
        }
        LambdaPoly(self.0.iter().map(|(&k, v)| (k, v * c)).collect())
    }

    fn add_term(&mut self, power: u32, c: BigRational) {
        let e = self.0.entry(power).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&power);
        }
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.0
            .iter()
            .map(|(&k, c)| rational_to_f64(c) * lambda.powi(k as i32))
            .sum()
    }

    /// Substitutes a rational value for `λ`.
    pub fn at(&self, lambda: &BigRational) -> BigRational {
        self.0
            .iter()
            .map(|(&k, c)| c * num_traits::pow(lambda.clone(), k as usize))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    fn is_negative_lead(&self) -> bool {
        self.0.len() == 1 && self.0.values().next().is_some_and(|c| c.is_negative())
    }
}

impl Add for &LambdaPoly {
    type Output = LambdaPoly;
    fn add(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.0 {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Mul for &LambdaPoly {
    type Output = LambdaPoly;
    fn mul(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (&i, a) in &self.0 {
            for (&j, b) in &rhs.0 {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Neg for &LambdaPoly {
    type Output = LambdaPoly;
    fn neg(self) -> LambdaPoly {
        LambdaPoly(self.0.iter().map(|(&k, c)| (k, -c)).collect())
    }
}

fn rational_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_lambda_term(k: u32, c: &BigRational, with_unit: bool) -> String {
    let lam = match k {
        0 => String::new(),
        1 => "λ".to_string(),
        _ => format!("λ^{k}"),
    };
    match (c.is_one(), lam.is_empty()) {
        (true, true) if with_unit => "1".to_string(),
        (true, true) => String::new(),
        (true, false) => lam,
        (false, true) => fmt_rational(c),
        (false, false) => format!("{}*{lam}", fmt_rational(c)),
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&k, c) in &self.0 {
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            f.write_str(&fmt_lambda_term(k, &c.abs(), true))?;
            first = false;
        }
        Ok(())
    }
}

/// A differential polynomial: monomials with nonzero `ℚ[λ]` coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffPoly(BTreeMap<DiffMonomial, LambdaPoly>);

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly(BTreeMap::new())
    }

    /// `∂ₓᵏ f`
    pub fn var(field: Field, order: u32) -> Self {
        DiffPoly::monomial(
            DiffMonomial::new(vec![(field, order)]),
            LambdaPoly::constant(BigRational::one()),
        )
    }

    pub fn u() -> Self {
        DiffPoly::var(Field::U, 0)
    }

    pub fn v() -> Self {
        DiffPoly::var(Field::V, 0)
    }

    pub fn constant(c: LambdaPoly) -> Self {
        DiffPoly::monomial(DiffMonomial::one(), c)
    }

    pub fn lambda() -> Self {
        DiffPoly::constant(LambdaPoly::lambda())
    }

    pub fn monomial(m: DiffMonomial, c: LambdaPoly) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffMonomial, &LambdaPoly)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &DiffMonomial) -> Option<&LambdaPoly> {
        self.0.get(m)
    }

    fn add_term(&mut self, m: DiffMonomial, c: LambdaPoly) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&m) {
            Some(e) => {
                *e = &*e + &c;
                if e.is_zero() {
                    self.0.remove(&m);
                }
            }
            None => {
                self.0.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = DiffPoly::zero();
        for (m, k) in &self.0 {
            out.add_term(m.clone(), k.scale(c));
        }
        out
    }

    pub fn scale_poly(&self, c: &LambdaPoly) -> Self {
        let mut out = DiffPoly::zero();
        for (m, k) in &self.0 {
            out.add_term(m.clone(), k * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(
            DiffPoly::constant(LambdaPoly::constant(BigRational::one())),
            |acc, _| &acc * self,
        )
    }

    /// Largest power of `λ` in any coefficient.
    pub fn lambda_degree(&self) -> u32 {
        self.0.values().filter_map(LambdaPoly::degree).max().unwrap_or(0)
    }

    /// Highest derivative order of `field`, if it occurs.
    pub fn max_order(&self, field: Field) -> Option<u32> {
        self.0
            .keys()
            .flat_map(|m| m.0.iter())
            .filter(|f| f.0 == field)
            .map(|f| f.1)
            .max()
    }

    /// Total x-derivative.
    pub fn d_x(&self) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.0 {
            let mut i = 0;
            while i < m.0.len() {
                let f = m.0[i];
                let mult = m.multiplicity(f);
                let raised = m.without_one(f).with((f.0, f.1 + 1));
                out.add_term(raised, c.scale(&BigRational::from_integer(BigInt::from(mult))));
                i += mult;
            }
        }
        out
    }

    pub fn d_x_n(&self, n: u32) -> Self {
        (0..n).fold(self.clone(), |p, _| p.d_x())
    }

    /// `∂P/∂f_k`, treating every jet variable as independent.
    pub fn partial(&self, field: Field, order: u32) -> Self {
        let f = (field, order);
        let mut out = DiffPoly::zero();
        for (m, c) in &self.0 {
            let mult = m.multiplicity(f);
            if mult > 0 {
                out.add_term(
                    m.without_one(f),
                    c.scale(&BigRational::from_integer(BigInt::from(mult))),
                );
            }
        }
        out
    }

    /// Variational derivative `E_f = Σ_k (−D_x)^k ∂/∂f_k`, by Horner's rule.
    pub fn euler(&self, field: Field) -> Self {
        let Some(top) = self.max_order(field) else {
            return DiffPoly::zero();
        };
        let mut acc = self.partial(field, top);
        for k in (0..top).rev() {
            acc = &self.partial(field, k) - &acc.d_x();
        }
        acc
    }

    /// `D_t P` with `u_t`, `v_t` and their x-derivatives eliminated through
    /// the system.
    pub fn subst_t(&self) -> Self {
        let mut out = DiffPoly::zero();
        for field in Field::BOTH {
            let Some(top) = self.max_order(field) else {
                continue;
            };
            let mut flow = time_derivative(field);
            for k in 0..=top {
                let dp = self.partial(field, k);
                if !dp.is_zero() {
                    out = &out + &(&dp * &flow);
                }
                flow = flow.d_x();
            }
        }
        out
    }

    /// Whether `D_t P` is a total x-derivative along the flow.
    pub fn is_conserved(&self) -> bool {
        let dt = self.subst_t();
        Field::BOTH.iter().all(|&f| dt.euler(f).is_zero())
    }

    /// [`DiffPoly::is_conserved`] along the flow with `λ` fixed.
    pub fn is_conserved_at(&self, lambda: &BigRational) -> bool {
        let dt = self.subst_t().at_lambda(lambda);
        Field::BOTH.iter().all(|&f| dt.euler(f).is_zero())
    }

    /// Whether `P − Q` is a total x-derivative.
    pub fn equivalent_mod_dx(&self, other: &DiffPoly) -> bool {
        let d = self - other;
        Field::BOTH.iter().all(|&f| d.euler(f).is_zero())
    }

    /// Whether this is a total x-derivative.
    pub fn is_exact(&self) -> bool {
        self.equivalent_mod_dx(&DiffPoly::zero())
    }

    /// The rational `c` with `P ≡ c·Q` modulo total x-derivatives, if any.
    pub fn ratio_mod_dx(&self, other: &DiffPoly) -> Option<BigRational> {
        let ep: Vec<DiffPoly> = Field::BOTH.iter().map(|&f| self.euler(f)).collect();
        let eq: Vec<DiffPoly> = Field::BOTH.iter().map(|&f| other.euler(f)).collect();
        let c = eq.iter().zip(&ep).find_map(|(q, p)| {
            q.0.iter().find_map(|(m, qc)| {
                let qc = qc.as_constant()?;
                let pc = p.coeff(m).map_or(Some(BigRational::zero()), LambdaPoly::as_constant)?;
                Some(pc / qc)
            })
        })?;
        let matches = ep.iter().zip(&eq).all(|(p, q)| *p == q.scale(&c));
        matches.then_some(c)
    }

    /// Strips total-derivative pieces by integrating by parts, term by term,
    /// wherever the top derivative of a term occurs linearly and every other
    /// factor sits at least two orders below it. The result is equivalent
    /// modulo total x-derivatives but is not a canonical form.
    pub fn normal_form(&self) -> Self {
        let mut p = self.clone();
        loop {
            let pick =
                p.0.iter()
                    .find_map(|(m, c)| integrable(m).map(|s| (m.clone(), c.clone(), s)));
            let Some((m, c, (top, lower, rest))) = pick else {
                return p;
            };
            // c·f_K·f_{K−1}^j·R = D(c f_{K−1}^{j+1} R/(j+1)) − c f_{K−1}^{j+1} D(R)/(j+1)
            p.0.remove(&m);
            let j = lower.len() as i64;
            let raised = DiffMonomial::new(vec![(top.0, top.1 - 1); (j + 1) as usize]);
            let carried = &DiffPoly::monomial(raised, c.scale(&rat(-1, j + 1))) * &rest.d_x();
            p = &p + &carried;
        }
    }

    /// Numeric value with `λ` and every jet variable substituted.
    pub fn eval(&self, lambda: f64, var: impl Fn(Field, u32) -> f64) -> f64 {
        self.0
            .iter()
            .map(|(m, c)| c.eval(lambda) * m.0.iter().map(|&(f, k)| var(f, k)).product::<f64>())
            .sum()
    }

    /// Specializes `λ` to a rational value.
    pub fn at_lambda(&self, lambda: &BigRational) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.0 {
            out.add_term(m.clone(), LambdaPoly::constant(c.at(lambda)));
        }
        out
    }

    pub fn json_terms(&self) -> Vec<JsonTerm> {
        self.0
            .iter()
            .map(|(m, c)| JsonTerm {
                factors: m.0.iter().map(|&(f, k)| (f, k)).collect(),
                coeff: c
                    .terms()
                    .map(|(k, q)| CoeffTriple(k, q.numer().clone(), q.denom().clone()))
                    .collect(),
            })
            .collect()
    }
}

/// Splits `m = f_K · f_{K−1}^j · R` when `f_K` is the unique factor of top
/// order `K ≥ 1` and `R` stays at order `≤ K − 2`.
fn integrable(m: &DiffMonomial) -> Option<((Field, u32), Vec<(Field, u32)>, DiffPoly)> {
    let top_order = m.max_order()?;
    if top_order == 0 {
        return None;
    }
    let tops: Vec<_> = m.0.iter().filter(|f| f.1 == top_order).collect();
    if tops.len() != 1 {
        return None;
    }
    let top = *tops[0];
    let below = (top.0, top_order - 1);
    let (lower, rest): (Vec<_>, Vec<_>) = m.0.iter().copied().filter(|&f| f != top).partition(|&f| f == below);
    if rest.iter().any(|f| f.1 + 1 >= top_order) {
        return None;
    }
    let rest = DiffPoly::monomial(DiffMonomial::new(rest), LambdaPoly::constant(BigRational::one()));
    Some((top, lower, rest))
}

/// `u_t` or `v_t` from the system.
pub fn time_derivative(field: Field) -> DiffPoly {
    let (u, v) = (DiffPoly::u(), DiffPoly::v());
    match field {
        Field::U => -&(&(&(&u * &u.d_x()) + &DiffPoly::var(Field::U, 3)) + &(&DiffPoly::lambda() * &(&v * &v.d_x()))),
        Field::V => -&(&(&(&u.d_x() * &v) + &(&u * &v.d_x())) + &DiffPoly::var(Field::V, 3)),
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        self + &(-rhs)
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &rhs.0 {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl fmt::Display for DiffPoly {
    /// e.g. `1/6*u^2 + 1/6*λ*v^2 + u_{xx}`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            let negative = c.is_negative_lead();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_one = m.0.is_empty();
            let coeff = if c.0.len() == 1 {
                let (&k, q) = c.0.iter().next().expect("one term");
                fmt_lambda_term(k, &q.abs(), is_one)
            } else {
                format!("({c})")
            };
            match (coeff.is_empty(), is_one) {
                (true, _) => write!(f, "{m}")?,
                (false, true) => f.write_str(&coeff)?,
                (false, false) => write!(f, "{coeff}*{m}")?,
            }
        }
        Ok(())
    }
}

/// `[λ-power, numerator, denominator]`
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTriple(pub u32, pub BigInt, pub BigInt);

impl Serialize for CoeffTriple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(3)?;
        t.serialize_element(&self.0)?;
        t.serialize_element(&json_int(&self.1))?;
        t.serialize_element(&json_int(&self.2))?;
        t.end()
    }
}

/// Integers that fit `i64` serialize as JSON numbers, larger ones as strings.
fn json_int(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(i) => serde_json::Value::from(i),
        None => serde_json::Value::from(n.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JsonTerm {
    pub factors: Vec<(Field, u32)>,
    pub coeff: Vec<CoeffTriple>,
}

// ---------------------------------------------------------------------------
// Gardner ladder
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    R,
    S,
}

/// Coefficients `r₀..r_N`, `s₀..s_N` of the formal inverse of
/// `u = r + ε r_x − (ε²/6)(r² + λs²)`, `v = s + ε s_x − (ε²/3) r s`.
#[derive(Clone, Debug, PartialEq)]
pub struct GardnerSeries {
    pub r: Vec<DiffPoly>,
    pub s: Vec<DiffPoly>,
}

impl GardnerSeries {
    pub fn order(&self) -> usize {
        self.r.len() - 1
    }

    pub fn get(&self, n: usize, which: Component) -> &DiffPoly {
        match which {
            Component::R => &self.r[n],
            Component::S => &self.s[n],
        }
    }

    /// The transformation applied to the truncated series, as the
    /// coefficients of `ε⁰..ε^N` for `u` and `v`.
    pub fn resubstitute(&self) -> (Vec<DiffPoly>, Vec<DiffPoly>) {
        let n = self.order();
        let lam = DiffPoly::lambda();
        let shift = |a: &[DiffPoly]| -> Vec<DiffPoly> {
            let mut out = vec![DiffPoly::zero(); n + 1];
            for k in 1..=n {
                out[k] = a[k - 1].d_x();
            }
            out
        };
        let times = |a: &[DiffPoly], b: &[DiffPoly]| -> Vec<DiffPoly> {
            let mut out = vec![DiffPoly::zero(); n + 1];
            for k in 2..=n {
                for i in 0..=k - 2 {
                    out[k] = &out[k] + &(&a[i] * &b[k - 2 - i]);
                }
            }
            out
        };
        let (rx, sx) = (shift(&self.r), shift(&self.s));
        let (rr, ss, rs) = (
            times(&self.r, &self.r),
            times(&self.s, &self.s),
            times(&self.r, &self.s),
        );
        let u = (0..=n)
            .map(|k| &(&self.r[k] + &rx[k]) - &(&rr[k] + &(&lam * &ss[k])).scale(&rat(1, 6)))
            .collect();
        let v = (0..=n)
            .map(|k| &(&self.s[k] + &sx[k]) - &rs[k].scale(&rat(1, 3)))
            .collect();
        (u, v)
    }

    /// Whether resubstitution gives back `u`, `v` exactly through `ε^N`.
    pub fn resubstitution_holds(&self) -> bool {
        let (u, v) = self.resubstitute();
        u[0] == DiffPoly::u()
            && v[0] == DiffPoly::v()
            && u[1..].iter().all(DiffPoly::is_zero)
            && v[1..].iter().all(DiffPoly::is_zero)
    }
}

/// Inverts the Gardner transformation order by order:
/// `r_n = −∂ₓr_{n−1} + (1/6)Σ_{i+j=n−2}(r_i r_j + λ s_i s_j)`,
/// `s_n = −∂ₓs_{n−1} + (1/3)Σ_{i+j=n−2} r_i s_j`.
pub fn gardner_invert(n: usize) -> GardnerSeries {
    let lam = DiffPoly::lambda();
    let mut r = vec![DiffPoly::u()];
    let mut s = vec![DiffPoly::v()];
    for k in 1..=n {
        let mut rk = -&r[k - 1].d_x();
        let mut sk = -&s[k - 1].d_x();
        if k >= 2 {
            let mut quad_r = DiffPoly::zero();
            let mut quad_s = DiffPoly::zero();
            for i in 0..=k - 2 {
                let j = k - 2 - i;
                quad_r = &quad_r + &(&(&r[i] * &r[j]) + &(&lam * &(&s[i] * &s[j])));
                quad_s = &quad_s + &(&r[i] * &s[j]);
            }
            rk = &rk + &quad_r.scale(&rat(1, 6));
            sk = &sk + &quad_s.scale(&rat(1, 3));
        }
        r.push(rk);
        s.push(sk);
    }
    GardnerSeries { r, s }
}

/// `r_n` or `s_n`.
pub fn density(n: usize, which: Component) -> DiffPoly {
    gardner_invert(n).get(n, which).clone()
}

/// The six classical conserved densities `u`, `v`, `u² + λv²`, `uv`,
/// `u³/3 + λuv² − λv_x² − u_x²`, `u²v/2 − u_x v_x + λv³/6`.
pub fn classical_densities() -> [DiffPoly; 6] {
    let (u, v, lam) = (DiffPoly::u(), DiffPoly::v(), DiffPoly::lambda());
    let (ux, vx) = (u.d_x(), v.d_x());
    [
        u.clone(),
        v.clone(),
        &u.pow(2) + &(&lam * &v.pow(2)),
        &u * &v,
        &(&u.pow(3).scale(&rat(1, 3)) + &(&lam * &(&u * &v.pow(2)))) - &(&(&lam * &vx.pow(2)) + &ux.pow(2)),
        &(&(&u.pow(2) * &v).scale(&rat(1, 2)) - &(&ux * &vx)) + &(&lam * &v.pow(3)).scale(&rat(1, 6)),
    ]
}

/// Human names of [`classical_densities`].
pub const CLASSICAL_NAMES: [&str; 6] = [
    "u",
    "v",
    "u^2 + λ*v^2",
    "u*v",
    "1/3*u^3 + λ*u*v^2 - λ*v_{x}^2 - u_{x}^2",
    "1/2*u^2*v - u_{x}*v_{x} + 1/6*λ*v^3",
];

/// Index into [`classical_densities`] and the factor `c` with
/// `density(n, which) ≡ c · classical` for `n ∈ {0, 2, 4}`.
pub fn classical_match(n: usize, which: Component) -> Option<(usize, BigRational)> {
    let idx = match (n, which) {
        (0, Component::R) => 0,
        (0, Component::S) => 1,
        (2, Component::R) => 2,
        (2, Component::S) => 3,
        (4, Component::R) => 4,
        (4, Component::S) => 5,
        _ => return None,
    };
    Some((idx, CLASSICAL_FACTORS[idx].clone()?))
}

static CLASSICAL_FACTORS: std::sync::LazyLock<[Option<BigRational>; 6]> = std::sync::LazyLock::new(|| {
    let g = gardner_invert(4);
    let c = classical_densities();
    let pairs = [
        (0, Component::R),
        (0, Component::S),
        (2, Component::R),
        (2, Component::S),
        (4, Component::R),
        (4, Component::S),
    ];
    std::array::from_fn(|i| g.get(pairs[i].0, pairs[i].1).ratio_mod_dx(&c[i]))
});
