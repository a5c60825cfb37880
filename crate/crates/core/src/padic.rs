//! Truncated p-adic numbers for odd `p`.
//!
//! A nonzero element is stored as `p^val * unit` with `unit` a residue
//! modulo `p^N` coprime to `p`, so every value carries `N` significant
//! digits. Zero has its own encoding (`unit == 0`, `val == 0`) and is never
//! represented as "valuation at least N".

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// Default number of p-adic digits carried by every unit.
pub const DEFAULT_PRECISION: u32 = 64;
/// Smallest accepted working precision.
pub const MIN_PRECISION: u32 = 16;
/// A residual entry counts as zero once its valuation reaches `N - ZERO_SLACK`.
pub const ZERO_SLACK: u32 = 8;
/// Checked additions refuse to return fewer significant digits than this.
pub const MIN_SIGNIFICANT_DIGITS: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("precision {0} is below the minimum of {MIN_PRECISION}")]
    PrecisionTooSmall(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation {val} underflows the working range (limit -{limit})")]
    ValuationUnderflow { val: i64, limit: u32 },
    #[error("cancellation left {digits} significant digits")]
    PrecisionExhausted { digits: u32 },
    #[error("operation is undefined at zero")]
    ZeroInput,
    #[error("operands belong to different p-adic contexts")]
    ContextMismatch,
}

/// Shared parameters of the field `Q_p` at a fixed working precision.
#[derive(Debug)]
pub struct PadicCtx {
    p: u64,
    precision: u32,
    rho: u64,
    minus_one_is_square: bool,
    powers: Vec<BigUint>,
}

impl PadicCtx {
    pub fn new(p: u64, precision: u32) -> Result<Arc<Self>, PadicError> {
        if p < 3 || !is_prime(p) {
            return Err(PadicError::NotOddPrime(p));
        }
        if precision < MIN_PRECISION {
            return Err(PadicError::PrecisionTooSmall(precision));
        }
        let rho = (2..p)
            .find(|&a| legendre_u64(a, p) == -1)
            .expect("every odd prime has a nonresidue");
        let big_p = BigUint::from(p);
        let mut powers = Vec::with_capacity(precision as usize + 1);
        let mut acc = BigUint::one();
        for _ in 0..=precision {
            powers.push(acc.clone());
            acc *= &big_p;
        }
        Ok(Arc::new(PadicCtx {
            p,
            precision,
            rho,
            minus_one_is_square: p % 4 == 1,
            powers,
        }))
    }

    pub fn with_default_precision(p: u64) -> Result<Arc<Self>, PadicError> {
        Self::new(p, DEFAULT_PRECISION)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Smallest positive quadratic nonresidue mod `p`.
    pub fn rho(&self) -> u64 {
        self.rho
    }

    /// True iff `p ≡ 1 mod 4`.
    pub fn minus_one_is_square(&self) -> bool {
        self.minus_one_is_square
    }

    pub fn modulus(&self) -> &BigUint {
        &self.powers[self.precision as usize]
    }

    /// Valuation from which residual entries are considered zero.
    pub fn zero_threshold(&self) -> i64 {
        i64::from(self.precision) - i64::from(ZERO_SLACK)
    }

    pub fn minus_one_class(&self) -> SquareClass {
        if self.minus_one_is_square {
            SquareClass::One
        } else {
            SquareClass::Rho
        }
    }

    fn pow_p(&self, e: u32) -> &BigUint {
        &self.powers[e as usize]
    }

    pub fn zero(self: &Arc<Self>) -> PadicNum {
        PadicNum {
            ctx: Arc::clone(self),
            val: 0,
            unit: BigUint::zero(),
        }
    }

    pub fn one(self: &Arc<Self>) -> PadicNum {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, x: i64) -> PadicNum {
        self.from_bigint(&BigInt::from(x))
    }

    pub fn from_bigint(self: &Arc<Self>, x: &BigInt) -> PadicNum {
        if x.is_zero() {
            return self.zero();
        }
        let big_p = BigUint::from(self.p);
        let mut mag = x.magnitude().clone();
        let mut val = 0i64;
        loop {
            let (q, r) = mag.div_rem(&big_p);
            if !r.is_zero() {
                break;
            }
            mag = q;
            val += 1;
        }
        let m = self.modulus();
        let mut unit = mag % m;
        if x.sign() == Sign::Minus {
            unit = m - unit;
        }
        PadicNum {
            ctx: Arc::clone(self),
            val,
            unit,
        }
    }

    /// The uniformizer `ϖ = p`.
    pub fn uniformizer(self: &Arc<Self>) -> PadicNum {
        PadicNum {
            ctx: Arc::clone(self),
            val: 1,
            unit: BigUint::one(),
        }
    }

    /// `p^e` for any integer exponent.
    pub fn p_power(self: &Arc<Self>, e: i64) -> PadicNum {
        PadicNum {
            ctx: Arc::clone(self),
            val: e,
            unit: BigUint::one(),
        }
    }

    /// Canonical representative of a square class: one of `1, ρ, p, ρp`.
    pub fn class_representative(self: &Arc<Self>, class: SquareClass) -> PadicNum {
        let unit = if class.is_nonsquare_unit() { self.rho as i64 } else { 1 };
        let mut x = self.from_int(unit);
        if class.has_odd_valuation() {
            x.val += 1;
        }
        x
    }

    /// A pair `(c, s)` with `c² + s² = -1`.
    ///
    /// `s` is the smallest `b ∈ [0, p)` for which `-1 - b²` is a nonzero
    /// square mod `p`, and `c` is the Hensel lift of its square root.
    pub fn sum_of_squares_minus_one(self: &Arc<Self>) -> (PadicNum, PadicNum) {
        let p = self.p;
        let b = (0..p)
            .find(|&b| {
                let t = (p - 1 + p - mul_mod(b, b, p)) % p;
                t != 0 && legendre_u64(t, p) == 1
            })
            .expect("-1 is a sum of two squares mod an odd prime");
        let s = self.from_int(b as i64);
        let target = -(self.one() + &s * &s);
        let c = target
            .hensel_sqrt()
            .expect("-1 - s^2 was chosen to be a unit square");
        (c, s)
    }
}

/// Element of `k^× / (k^×)²`, represented by `1, ρ, ϖ, ρϖ`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SquareClass {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "r")]
    Rho,
    #[serde(rename = "w")]
    Pi,
    #[serde(rename = "rw")]
    RhoPi,
}

impl SquareClass {
    pub const ALL: [SquareClass; 4] = [
        SquareClass::One,
        SquareClass::Rho,
        SquareClass::Pi,
        SquareClass::RhoPi,
    ];

    fn from_bits(odd_val: bool, nonsquare: bool) -> Self {
        match (odd_val, nonsquare) {
            (false, false) => SquareClass::One,
            (false, true) => SquareClass::Rho,
            (true, false) => SquareClass::Pi,
            (true, true) => SquareClass::RhoPi,
        }
    }

    pub fn has_odd_valuation(self) -> bool {
        matches!(self, SquareClass::Pi | SquareClass::RhoPi)
    }

    pub fn is_nonsquare_unit(self) -> bool {
        matches!(self, SquareClass::Rho | SquareClass::RhoPi)
    }

    /// Group law of `k^×/(k^×)²` (a Klein four-group).
    pub fn mul(self, other: SquareClass) -> SquareClass {
        SquareClass::from_bits(
            self.has_odd_valuation() ^ other.has_odd_valuation(),
            self.is_nonsquare_unit() ^ other.is_nonsquare_unit(),
        )
    }

    pub fn tag(self) -> &'static str {
        match self {
            SquareClass::One => "1",
            SquareClass::Rho => "r",
            SquareClass::Pi => "w",
            SquareClass::RhoPi => "rw",
        }
    }

    pub fn from_tag(tag: &str) -> Option<SquareClass> {
        SquareClass::ALL.into_iter().find(|c| c.tag() == tag)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A truncated p-adic number `p^val · unit`.
#[derive(Clone)]
pub struct PadicNum {
    ctx: Arc<PadicCtx>,
    val: i64,
    unit: BigUint,
}

impl PadicNum {
    pub fn ctx(&self) -> &Arc<PadicCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Valuation with zero mapped to the working precision.
    pub fn valuation_or_precision(&self) -> i64 {
        self.valuation()
            .unwrap_or(i64::from(self.ctx.precision))
            .min(i64::from(self.ctx.precision))
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    /// Zero, or small enough (valuation ≥ N − 8) to be read as a rounding residual.
    pub fn is_negligible(&self) -> bool {
        self.is_zero() || self.val >= self.ctx.zero_threshold()
    }

    /// Unit part reduced mod `p`; zero for zero.
    pub fn unit_residue(&self) -> u64 {
        (&self.unit % BigUint::from(self.ctx.p))
            .to_u64()
            .expect("residue fits in u64")
    }

    /// Unit part as a balanced integer in `(-p^N/2, p^N/2]`.
    pub fn signed_unit(&self) -> BigInt {
        let m = self.ctx.modulus();
        if &(&self.unit << 1usize) > m {
            BigInt::from_biguint(Sign::Minus, m - &self.unit)
        } else {
            BigInt::from_biguint(Sign::Plus, self.unit.clone())
        }
    }

    fn same_ctx(&self, other: &PadicNum) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx)
            || (self.ctx.p == other.ctx.p && self.ctx.precision == other.ctx.precision)
    }

    fn normalized(ctx: &Arc<PadicCtx>, val: i64, residue: BigUint) -> PadicNum {
        if residue.is_zero() {
            return ctx.zero();
        }
        let big_p = BigUint::from(ctx.p);
        let mut unit = residue;
        let mut val = val;
        loop {
            let (q, r) = unit.div_rem(&big_p);
            if !r.is_zero() {
                break;
            }
            unit = q;
            val += 1;
        }
        PadicNum {
            ctx: Arc::clone(ctx),
            val,
            unit,
        }
    }

    /// Sum together with the number of leading digits lost to cancellation.
    fn add_tracked(&self, other: &PadicNum) -> (PadicNum, u32) {
        assert!(self.same_ctx(other), "p-adic context mismatch");
        if self.is_zero() {
            return (other.clone(), 0);
        }
        if other.is_zero() {
            return (self.clone(), 0);
        }
        let (lo, hi) = if self.val <= other.val {
            (self, other)
        } else {
            (other, self)
        };
        let ctx = &self.ctx;
        let shift = hi.val - lo.val;
        if shift >= i64::from(ctx.precision) {
            return (lo.clone(), 0);
        }
        let m = ctx.modulus();
        let residue = (&lo.unit + ctx.pow_p(shift as u32) * &hi.unit) % m;
        let sum = PadicNum::normalized(ctx, lo.val, residue);
        let lost = if sum.is_zero() {
            0
        } else {
            (sum.val - lo.val) as u32
        };
        (sum, lost)
    }

    fn mul_unchecked(&self, other: &PadicNum) -> PadicNum {
        assert!(self.same_ctx(other), "p-adic context mismatch");
        if self.is_zero() || other.is_zero() {
            return self.ctx.zero();
        }
        PadicNum {
            ctx: Arc::clone(&self.ctx),
            val: self.val + other.val,
            unit: (&self.unit * &other.unit) % self.ctx.modulus(),
        }
    }

    fn check_range(self) -> Result<PadicNum, PadicError> {
        let limit = self.ctx.precision;
        if !self.is_zero() && self.val < -i64::from(limit) {
            return Err(PadicError::ValuationUnderflow { val: self.val, limit });
        }
        Ok(self)
    }

    /// Strict arithmetic: rejects division by zero, valuation underflow past
    /// `-N`, and additions whose cancellation leaves fewer than four digits.
    pub fn arith(&self, other: &PadicNum, op: ArithOp) -> Result<PadicNum, PadicError> {
        if !self.same_ctx(other) {
            return Err(PadicError::ContextMismatch);
        }
        let out = match op {
            ArithOp::Add | ArithOp::Sub => {
                let rhs = if op == ArithOp::Sub { -other } else { other.clone() };
                let (sum, lost) = self.add_tracked(&rhs);
                let digits = self.ctx.precision.saturating_sub(lost);
                if !sum.is_zero() && digits < MIN_SIGNIFICANT_DIGITS {
                    return Err(PadicError::PrecisionExhausted { digits });
                }
                sum
            }
            ArithOp::Mul => self.mul_unchecked(other),
            ArithOp::Div => self.mul_unchecked(&other.inv()?),
        };
        out.check_range()
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<PadicNum, PadicError> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let unit = self
            .unit
            .modinv(self.ctx.modulus())
            .expect("units are invertible mod p^N");
        PadicNum {
            ctx: Arc::clone(&self.ctx),
            val: -self.val,
            unit,
        }
        .check_range()
    }

    pub fn div(&self, other: &PadicNum) -> Result<PadicNum, PadicError> {
        self.arith(other, ArithOp::Div)
    }

    pub fn pow(&self, e: u32) -> PadicNum {
        let mut acc = self.ctx.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Class in `k^×/(k^×)²`: valuation parity and Legendre symbol of the unit.
    pub fn square_class(&self) -> Result<SquareClass, PadicError> {
        if self.is_zero() {
            return Err(PadicError::ZeroInput);
        }
        let nonsquare = legendre_u64(self.unit_residue(), self.ctx.p) == -1;
        Ok(SquareClass::from_bits(self.val.rem_euclid(2) == 1, nonsquare))
    }

    /// Square root to full precision, when `self` is a nonzero square.
    pub fn hensel_sqrt(&self) -> Option<PadicNum> {
        if self.square_class().ok()? != SquareClass::One {
            return None;
        }
        let ctx = &self.ctx;
        let p = ctx.p;
        let r0 = sqrt_mod_prime(self.unit_residue(), p)?;
        let r0 = r0.min(p - r0);
        let m = ctx.modulus();
        let two_inv = BigUint::from(2u32).modinv(m).expect("p is odd");
        // Newton iteration r <- (r + u/r)/2 doubles the correct digits each step.
        let mut r = BigUint::from(r0);
        let mut correct = 1u32;
        while correct < ctx.precision {
            let r_inv = r.modinv(m).expect("root is a unit");
            r = ((&r + &self.unit * r_inv) * &two_inv) % m;
            correct = correct.saturating_mul(2);
        }
        Some(PadicNum {
            ctx: Arc::clone(ctx),
            val: self.val / 2,
            unit: r,
        })
    }
}

impl PartialEq for PadicNum {
    fn eq(&self, other: &Self) -> bool {
        self.same_ctx(other) && self.val == other.val && self.unit == other.unit
    }
}

impl Eq for PadicNum {}

impl fmt::Debug for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        match self.val {
            0 => write!(f, "{}", self.signed_unit()),
            v => write!(f, "{}*p^{}", self.signed_unit(), v),
        }
    }
}

impl Serialize for PadicNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("PadicNum", 2)?;
        st.serialize_field("val", &self.valuation())?;
        st.serialize_field("unit", &self.signed_unit().to_string())?;
        st.end()
    }
}

impl Neg for &PadicNum {
    type Output = PadicNum;
    fn neg(self) -> PadicNum {
        if self.is_zero() {
            return self.clone();
        }
        PadicNum {
            ctx: Arc::clone(&self.ctx),
            val: self.val,
            unit: self.ctx.modulus() - &self.unit,
        }
    }
}

impl Neg for PadicNum {
    type Output = PadicNum;
    fn neg(self) -> PadicNum {
        -&self
    }
}

impl<'a> Add<&'a PadicNum> for &'a PadicNum {
    type Output = PadicNum;
    fn add(self, rhs: &PadicNum) -> PadicNum {
        self.add_tracked(rhs).0
    }
}

impl<'a> Sub<&'a PadicNum> for &'a PadicNum {
    type Output = PadicNum;
    fn sub(self, rhs: &PadicNum) -> PadicNum {
        self.add_tracked(&-rhs).0
    }
}

impl<'a> Mul<&'a PadicNum> for &'a PadicNum {
    type Output = PadicNum;
    fn mul(self, rhs: &PadicNum) -> PadicNum {
        self.mul_unchecked(rhs)
            .check_range()
            .expect("p-adic valuation underflow")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<PadicNum> for PadicNum {
            type Output = PadicNum;
            fn $method(self, rhs: PadicNum) -> PadicNum {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a PadicNum> for PadicNum {
            type Output = PadicNum;
            fn $method(self, rhs: &PadicNum) -> PadicNum {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<PadicNum> for &'a PadicNum {
            type Output = PadicNum;
            fn $method(self, rhs: PadicNum) -> PadicNum {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Legendre symbol `(a/p)` for an odd prime `p`: 0, 1 or -1.
pub fn legendre_u64(a: u64, p: u64) -> i8 {
    match pow_mod(a % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Tonelli–Shanks square root mod an odd prime.
fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre_u64(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre_u64(z, p) == -1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}
