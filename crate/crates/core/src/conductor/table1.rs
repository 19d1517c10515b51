//! Conductor exponents at 2 of E^γ_{1,z,w} for γ ∈ {1, −1, 2, −2}.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::int::{val_u64, Int};
use crate::error::{Error, Result};

/// Twists in tie-breaking order.
pub const GAMMAS: [i64; 4] = [1, -1, 2, -2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConductorProfile {
    /// Exponent at 2 for γ = 1, −1, 2, −2.
    pub exponents: [u32; 4],
    /// Row index into the table, 0-based.
    pub row: usize,
    pub gamma: i64,
}

impl ConductorProfile {
    pub fn min_exponent(&self) -> u32 {
        *self.exponents.iter().min().unwrap()
    }
}

struct Row {
    exps: [u32; 4],
    cond: fn(&Ctx) -> bool,
}

struct Ctx {
    v_diff: u32,
    /// ord₂(w + z²), ord₂(w − z²); capped at 64 when the value is 0.
    vp: u32,
    vm: u32,
    /// w ± z² mod 32.
    rp: u64,
    rm: u64,
    /// z mod 4.
    z4: u64,
}

const ROWS: [Row; 24] = [
    Row {
        exps: [8, 8, 8, 8],
        cond: |c| c.v_diff == 0,
    },
    Row {
        exps: [7, 7, 7, 7],
        cond: |c| c.v_diff == 3,
    },
    Row {
        exps: [4, 3, 6, 6],
        cond: |c| c.rp == 8 && c.z4 == 1,
    },
    Row {
        exps: [3, 4, 6, 6],
        cond: |c| c.rp == 8 && c.z4 == 3,
    },
    Row {
        exps: [2, 4, 6, 6],
        cond: |c| c.rp == 24 && c.z4 == 1,
    },
    Row {
        exps: [4, 2, 6, 6],
        cond: |c| c.rp == 24 && c.z4 == 3,
    },
    Row {
        exps: [6, 6, 4, 2],
        cond: |c| c.rm == 8 && c.z4 == 1,
    },
    Row {
        exps: [6, 6, 2, 4],
        cond: |c| c.rm == 8 && c.z4 == 3,
    },
    Row {
        exps: [6, 6, 3, 4],
        cond: |c| c.rm == 24 && c.z4 == 1,
    },
    Row {
        exps: [6, 6, 4, 3],
        cond: |c| c.rm == 24 && c.z4 == 3,
    },
    Row {
        exps: [5, 5, 6, 6],
        cond: |c| c.vp == 4,
    },
    Row {
        exps: [6, 6, 5, 5],
        cond: |c| c.vm == 4,
    },
    Row {
        exps: [3, 4, 6, 6],
        cond: |c| (c.vp == 5 || c.vp == 6) && c.z4 == 1,
    },
    Row {
        exps: [4, 3, 6, 6],
        cond: |c| (c.vp == 5 || c.vp == 6) && c.z4 == 3,
    },
    Row {
        exps: [6, 6, 4, 3],
        cond: |c| (c.vm == 5 || c.vm == 6) && c.z4 == 1,
    },
    Row {
        exps: [6, 6, 3, 4],
        cond: |c| (c.vm == 5 || c.vm == 6) && c.z4 == 3,
    },
    Row {
        exps: [0, 4, 6, 6],
        cond: |c| c.vp == 7 && c.z4 == 1,
    },
    Row {
        exps: [4, 0, 6, 6],
        cond: |c| c.vp == 7 && c.z4 == 3,
    },
    Row {
        exps: [6, 6, 4, 0],
        cond: |c| c.vm == 7 && c.z4 == 1,
    },
    Row {
        exps: [6, 6, 0, 4],
        cond: |c| c.vm == 7 && c.z4 == 3,
    },
    Row {
        exps: [1, 4, 6, 6],
        cond: |c| c.vp >= 8 && c.z4 == 1,
    },
    Row {
        exps: [4, 1, 6, 6],
        cond: |c| c.vp >= 8 && c.z4 == 3,
    },
    Row {
        exps: [6, 6, 4, 1],
        cond: |c| c.vm >= 8 && c.z4 == 1,
    },
    Row {
        exps: [6, 6, 1, 4],
        cond: |c| c.vm >= 8 && c.z4 == 3,
    },
];

fn v2(n: &Int) -> u32 {
    val_u64(n, 2).unwrap_or(64)
}

fn m32(n: &Int) -> u64 {
    n.mod_floor(&Int::from(32)).to_u64().unwrap()
}

/// Match (z, w) against the table top-down; γ is the first minimiser in
/// the order 1, −1, 2, −2.
pub fn classify_table1(z: &Int, w: &Int) -> Result<ConductorProfile> {
    if z.is_even() && w.is_even() {
        return Err(Error::Precondition("z and w must not both be even".into()));
    }
    let z2 = z * z;
    let (p, m) = (w + &z2, w - &z2);
    let diff = w * w - &z2 * &z2;
    if diff.is_zero() {
        return Err(Error::Precondition("w² = z⁴ gives a singular curve".into()));
    }
    let ctx = Ctx {
        v_diff: v2(&diff),
        vp: v2(&p),
        vm: v2(&m),
        rp: m32(&p),
        rm: m32(&m),
        z4: z.mod_floor(&Int::from(4)).to_u64().unwrap(),
    };
    for (i, row) in ROWS.iter().enumerate() {
        if (row.cond)(&ctx) {
            let min = *row.exps.iter().min().unwrap();
            let k = row.exps.iter().position(|&e| e == min).unwrap();
            return Ok(ConductorProfile {
                exponents: row.exps,
                row: i,
                gamma: GAMMAS[k],
            });
        }
    }
    Err(Error::NoTableRow {
        z: z.to_string(),
        w: w.to_string(),
    })
}
