//! Storage split between the two arithmetic backends.
//!
//! Public containers wrap a [`Dual`] so that every kernel is written once,
//! generically over [`Arith`](crate::field::Arith), and dispatched here.

use num_rational::BigRational;

use crate::field::{Arith, Field, ModArith, RatArith};
use crate::linalg::kernels::Echelon;
use crate::linalg::EchelonData;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Dual<M, R> {
    Mod(ModArith, M),
    Rat(RatArith, R),
}

impl<M, R> Dual<M, R> {
    pub(crate) fn field(&self) -> Field {
        match self {
            Dual::Mod(a, _) => a.field(),
            Dual::Rat(a, _) => a.field(),
        }
    }
}

pub(crate) type VecData = Dual<Vec<u32>, Vec<BigRational>>;

/// Run `$body` with `$ar: &impl Arith` and `$x` bound to the payload.
macro_rules! dual {
    ($e:expr, $ar:ident, $x:ident => $body:expr) => {
        match $e {
            $crate::dual::Dual::Mod($ar, $x) => $body,
            $crate::dual::Dual::Rat($ar, $x) => $body,
        }
    };
}

/// Like `dual!` but re-wraps the result in the same backend.
macro_rules! dual_map {
    ($e:expr, $ar:ident, $x:ident => $body:expr) => {
        match $e {
            $crate::dual::Dual::Mod($ar, $x) => $crate::dual::Dual::Mod(*$ar, $body),
            $crate::dual::Dual::Rat($ar, $x) => $crate::dual::Dual::Rat(*$ar, $body),
        }
    };
}

/// Two payloads that must share a field; yields `Result<_, Error>`.
macro_rules! dual2 {
    ($a:expr, $b:expr, $ar:ident, $x:ident, $y:ident => $body:expr) => {
        match ($a, $b) {
            ($crate::dual::Dual::Mod($ar, $x), $crate::dual::Dual::Mod(other, $y)) if $ar == other => Ok($body),
            ($crate::dual::Dual::Rat($ar, $x), $crate::dual::Dual::Rat(_, $y)) => Ok($body),
            (l, r) => Err($crate::error::Error::CharacteristicMismatch { left: l.field(), right: r.field() }),
        }
    };
}

/// `dual2!` that re-wraps the result.
macro_rules! dual2_map {
    ($a:expr, $b:expr, $ar:ident, $x:ident, $y:ident => $body:expr) => {
        match ($a, $b) {
            ($crate::dual::Dual::Mod($ar, $x), $crate::dual::Dual::Mod(other, $y)) if $ar == other => {
                Ok($crate::dual::Dual::Mod(*$ar, $body))
            }
            ($crate::dual::Dual::Rat($ar, $x), $crate::dual::Dual::Rat(_, $y)) => Ok($crate::dual::Dual::Rat(*$ar, $body)),
            (l, r) => Err($crate::error::Error::CharacteristicMismatch { left: l.field(), right: r.field() }),
        }
    };
}

pub(crate) use {dual, dual2, dual2_map, dual_map};

/// Construct a payload for `$field`, running `$body` with the matching `$ar`.
macro_rules! with_field {
    ($field:expr, $ar:ident => $body:expr) => {
        match $field {
            $crate::field::Field::Prime(p) => {
                let $ar = &$crate::field::ModArith::new(p);
                $crate::dual::Dual::Mod(*$ar, $body)
            }
            $crate::field::Field::Rational => {
                let $ar = &$crate::field::RatArith;
                $crate::dual::Dual::Rat(*$ar, $body)
            }
        }
    };
}

pub(crate) use with_field;

/// Conversions between backend-typed payloads and the public wrappers.
pub(crate) trait Backend: Arith + Sized {
    fn wrap_vec(&self, v: Vec<Self::E>) -> VecData;
    fn unwrap_vec(v: &VecData) -> Option<&Vec<Self::E>>;
    fn wrap_echelon(&self, e: Echelon<Self>) -> EchelonData;
    fn unwrap_echelon(e: &EchelonData) -> Option<&Echelon<Self>>;
}

impl Backend for ModArith {
    fn wrap_vec(&self, v: Vec<u32>) -> VecData {
        Dual::Mod(*self, v)
    }
    fn unwrap_vec(v: &VecData) -> Option<&Vec<u32>> {
        match v {
            Dual::Mod(_, x) => Some(x),
            Dual::Rat(..) => None,
        }
    }
    fn wrap_echelon(&self, e: Echelon<Self>) -> EchelonData {
        Dual::Mod(*self, e)
    }
    fn unwrap_echelon(e: &EchelonData) -> Option<&Echelon<Self>> {
        match e {
            Dual::Mod(_, x) => Some(x),
            Dual::Rat(..) => None,
        }
    }
}

impl Backend for RatArith {
    fn wrap_vec(&self, v: Vec<BigRational>) -> VecData {
        Dual::Rat(*self, v)
    }
    fn unwrap_vec(v: &VecData) -> Option<&Vec<BigRational>> {
        match v {
            Dual::Rat(_, x) => Some(x),
            Dual::Mod(..) => None,
        }
    }
    fn wrap_echelon(&self, e: Echelon<Self>) -> EchelonData {
        Dual::Rat(*self, e)
    }
    fn unwrap_echelon(e: &EchelonData) -> Option<&Echelon<Self>> {
        match e {
            Dual::Rat(_, x) => Some(x),
            Dual::Mod(..) => None,
        }
    }
}
