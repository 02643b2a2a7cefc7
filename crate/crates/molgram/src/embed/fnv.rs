//! FNV-1a, 64-bit. The fingerprint hash is part of this crate's external
//! contract: any re-implementation in another language must reproduce the
//! exact bit patterns, so the algorithm is fixed here rather than delegated
//! to an opaque hasher.

/// FNV-1a 64-bit offset basis.
pub const FNV_OFFSET_BASIS: u64 = 0xcbf2_9ce4_8422_2325;
/// FNV-1a 64-bit prime.
pub const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Hash a byte string with FNV-1a (64-bit).
///
/// ```
/// use molgram::embed::fnv1a64;
/// assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
/// ```
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut state = FNV_OFFSET_BASIS;
    for &byte in bytes {
        state ^= u64::from(byte);
        state = state.wrapping_mul(FNV_PRIME);
    }
    state
}
