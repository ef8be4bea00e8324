//! Table-driven arithmetic over GF(2^8).
//!
//! Field with reduction polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D)
//! and generator 2. Addition is XOR; multiplication and inversion go
//! through log/exp tables built once at first use.

use std::sync::OnceLock;

/// Reduction polynomial.
pub const POLY: u16 = 0x11D;

struct Tables {
    exp: [u8; 512],
    log: [u8; 256],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut exp = [0u8; 512];
        let mut log = [0u8; 256];
        let mut value: u16 = 1;
        for (power, slot) in exp.iter_mut().enumerate().take(255) {
            *slot = value as u8;
            log[value as usize] = power as u8;
            value <<= 1;
            if value & 0x100 != 0 {
                value ^= POLY;
            }
        }
        // Doubled exp table lets mul skip a modulo.
        exp.copy_within(0..257, 255);
        Tables { exp, log }
    })
}

#[inline]
pub fn add(a: u8, b: u8) -> u8 {
    a ^ b
}

#[inline]
pub fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        return 0;
    }
    let t = tables();
    t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize]
}

/// Multiplicative inverse; zero has none.
pub fn inv(a: u8) -> Option<u8> {
    if a == 0 {
        return None;
    }
    let t = tables();
    Some(t.exp[255 - t.log[a as usize] as usize])
}

pub fn div(a: u8, b: u8) -> Option<u8> {
    inv(b).map(|bi| mul(a, bi))
}

pub fn pow(a: u8, e: u32) -> u8 {
    if e == 0 {
        return 1;
    }
    if a == 0 {
        return 0;
    }
    let t = tables();
    let log_a = t.log[a as usize] as u64;
    t.exp[((log_a * e as u64) % 255) as usize]
}
