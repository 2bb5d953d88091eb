//! JSON encoding helpers shared by the library types and the CLI.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::Value;

/// Version tag carried by every top-level CLI document.
pub const SCHEMA_VERSION: u64 = 1;

const MAX_SAFE: i64 = (1 << 53) - 1;

/// Integers inside the IEEE-754 safe range become JSON numbers; anything
/// larger is emitted as a decimal string.
pub fn int(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) if (-MAX_SAFE..=MAX_SAFE).contains(&x) => Value::from(x),
        _ => Value::String(v.to_string()),
    }
}

pub fn small_int(v: i64) -> Value {
    int(&BigInt::from(v))
}

pub fn vector(v: &[i64]) -> Value {
    Value::Array(v.iter().map(|&x| small_int(x)).collect())
}
