//! Text inputs: ring specs such as `2x4@p2`, polynomial files and group JSON.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::poly::{parse_poly_list, Poly};
use crate::ring::RingCtx;
use crate::scalar::{is_prime, Field};

/// Characteristics with a compiled-in coefficient field. `0` is the rationals.
pub const SUPPORTED_CHARACTERISTICS: &[u64] = &[0, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 2_147_483_647];

/// Runs `$body` with `$F` bound to the coefficient field of characteristic `$p`.
/// `$body` must evaluate to a `Result`.
#[macro_export]
macro_rules! with_field {
    ($p:expr, $F:ident => $body:expr) => {{
        match $p {
            0 => { type $F = $crate::Q; $body }
            2 => { type $F = $crate::Fp<2>; $body }
            3 => { type $F = $crate::Fp<3>; $body }
            5 => { type $F = $crate::Fp<5>; $body }
            7 => { type $F = $crate::Fp<7>; $body }
            11 => { type $F = $crate::Fp<11>; $body }
            13 => { type $F = $crate::Fp<13>; $body }
            17 => { type $F = $crate::Fp<17>; $body }
            19 => { type $F = $crate::Fp<19>; $body }
            23 => { type $F = $crate::Fp<23>; $body }
            29 => { type $F = $crate::Fp<29>; $body }
            31 => { type $F = $crate::Fp<31>; $body }
            2_147_483_647 => { type $F = $crate::Fp<2_147_483_647>; $body }
            other => Err($crate::Error::UnsupportedCharacteristic {
                what: "this build".into(),
                characteristic: other,
            }),
        }
    }};
}

/// `NxD@pP`; `p0` selects the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub ctx: RingCtx,
    pub p: u64,
}

impl RingSpec {
    pub fn new(n: usize, d: usize, p: u64) -> Result<Self> {
        if p != 0 && !is_prime(p) {
            return Err(Error::Input(format!("characteristic {p} is not prime")));
        }
        if !SUPPORTED_CHARACTERISTICS.contains(&p) {
            return Err(Error::UnsupportedCharacteristic { what: "this build".into(), characteristic: p });
        }
        Ok(RingSpec { ctx: RingCtx::new(n, d)?, p })
    }

    /// Fails unless `F` has this spec's characteristic.
    pub fn check_field<F: Field>(&self) -> Result<()> {
        if F::characteristic() != self.p {
            return Err(Error::CharacteristicMismatch { expected: self.p, found: F::characteristic() });
        }
        Ok(())
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("ring spec must look like 2x4@p2, got {s:?}"));
        let (dims, ch) = s.trim().split_once('@').ok_or_else(bad)?;
        let (n, d) = dims.split_once('x').ok_or_else(bad)?;
        let p = ch.strip_prefix('p').ok_or_else(bad)?;
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        RingSpec::new(num(n)? as usize, num(d)? as usize, num(p)?)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}@p{}", self.ctx.n, self.ctx.d, self.p)
    }
}

/// Parses and validates a polynomial list and an optional group against a ring.
pub fn parse_inputs<F: Field>(
    poly_text: &str,
    group_json: Option<&str>,
    ring: &RingSpec,
) -> Result<(Vec<Poly<F>>, Option<GroupSpec>)> {
    ring.check_field::<F>()?;
    let polys = parse_poly_list::<F>(poly_text)?;
    for p in &polys {
        ring.ctx.check_poly(p)?;
    }
    let group = match group_json {
        Some(text) => {
            let g = GroupSpec::from_json(text)?;
            g.validate::<F>(ring.ctx)?;
            Some(g)
        }
        None => None,
    };
    Ok((polys, group))
}
