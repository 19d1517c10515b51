//! Elimination contexts for the worked examples and the Table-3 rows.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::int::{int, primes_upto, rat, Int};
use crate::conductor::a1_family_levels;
use crate::curve::{pt, CurvePoint};
use crate::error::{Error, Result};
use crate::galois_cocycle::{case_d125, case_dm17};
use crate::newforms::{data_dir, fixture_name, genus_x0, load_newforms, NewformRecord};

use super::{DefinitionField, EliminationContext, LevelSpec};

/// Auxiliary primes used for D = −17.
pub const DM17_PRIMES: [u64; 17] = [
    3, 5, 7, 11, 13, 19, 29, 31, 37, 41, 43, 47, 59, 67, 73, 97, 113,
];

/// Odd primes below `bound` not dividing `n`.
pub fn primes_below_coprime(bound: u64, n: &Int) -> Vec<u64> {
    primes_upto(bound - 1)
        .into_iter()
        .filter(|&p| p != 2 && !(n % Int::from(p)).is_zero())
        .collect()
}

/// Default auxiliary primes: the D = −17 list, else p < 50 coprime to 2D.
pub fn default_primes(d: &Int) -> Vec<u64> {
    if *d == int(-17) {
        DM17_PRIMES.to_vec()
    } else {
        primes_below_coprime(50, d)
    }
}

/// E^γ_{1,z,w} over ℚ for the a = 1 class on E_D.
pub fn context_a1(d: &Int, two_divides_b: bool, constraints: &[u64]) -> Result<EliminationContext> {
    let levels = a1_family_levels(d, two_divides_b)?
        .into_iter()
        .map(|l| LevelSpec {
            level: l.level,
            character: None,
            twists: l.twists,
        })
        .collect();
    Ok(EliminationContext {
        name: format!(
            "D={d}, a=1{}",
            if two_divides_b { ", 2|B" } else { ", 2∤B" }
        ),
        a: int(1),
        a_hat: d.clone(),
        field: DefinitionField::Rational,
        levels,
        primes: default_primes(d),
        constraints: vec![],
        l_min: 3,
        l_max: 1000,
        fourth_power_filter: false,
    }
    .with_constraints(constraints))
}

/// E^γ_{125,z,w} over ℚ(ζ₄₀ + ζ₄₀⁻¹) at levels 2⁸·5 and 2⁸·5², character 20.3.
pub fn context_d125_qcurve(constraints: &[u64]) -> EliminationContext {
    let c = case_d125();
    EliminationContext {
        name: "D=125, a=125".into(),
        a: int(125),
        a_hat: int(1),
        field: DefinitionField::K40 {
            gf: c.gf,
            gamma: c.gamma,
        },
        levels: [1280, 6400]
            .into_iter()
            .map(|level| LevelSpec {
                level,
                character: Some("20.3".into()),
                twists: vec![],
            })
            .collect(),
        primes: primes_below_coprime(50, &int(10)),
        constraints: vec![],
        l_min: 3,
        l_max: 1000,
        fourth_power_filter: false,
    }
    .with_constraints(constraints)
}

/// E^γ_{−17,z,w} with γ = 1 + 3√2 over ℚ(√2, √−17) at levels 2⁵·17² and 2⁸·17².
pub fn context_dm17_qcurve(constraints: &[u64]) -> EliminationContext {
    let c = case_dm17();
    EliminationContext {
        name: "D=-17, a=-17".into(),
        a: int(-17),
        a_hat: int(1),
        field: DefinitionField::Sqrt2SqrtM17 {
            gf: c.gf,
            gamma: c.gamma,
        },
        levels: [9248, 73984]
            .into_iter()
            .map(|level| LevelSpec {
                level,
                character: None,
                twists: vec![],
            })
            .collect(),
        primes: DM17_PRIMES.to_vec(),
        constraints: vec![],
        l_min: 3,
        l_max: 1000,
        fourth_power_filter: false,
    }
    .with_constraints(constraints)
}

/// Named elimination runs; `constrained = false` drops the divisor constraints
/// (and, for the a = 1 case, the 2 | B level restriction).
pub fn elimination_case(name: &str, constrained: bool) -> Result<EliminationContext> {
    let pick = |qs: &'static [u64]| if constrained { qs } else { &[][..] };
    match name {
        "d125" => context_a1(&int(125), true, pick(&[2])),
        "d125T" => Ok(context_d125_qcurve(pick(&[11]))),
        "dm17" => context_a1(&int(-17), constrained, pick(&[2, 3, 7])),
        "dm17T" => Ok(context_dm17_qcurve(pick(&[7]))),
        _ => Err(Error::Unsupported(format!(
            "elimination case {name}; supported: d125, d125T, dm17, dm17T"
        ))),
    }
}

/// Newforms at the context levels. Levels with genus-zero X₀(N) and trivial
/// character contribute nothing; levels without a fixture are listed as missing.
pub fn load_context_newforms(ctx: &EliminationContext) -> Result<(Vec<NewformRecord>, Vec<u64>)> {
    let mut forms = Vec::new();
    let mut missing = Vec::new();
    for spec in &ctx.levels {
        if spec.character.is_none() && genus_x0(spec.level)? == 0 {
            continue;
        }
        let path = data_dir().join(fixture_name(spec.level, spec.character.as_deref()));
        if !path.exists() {
            missing.push(spec.level);
            continue;
        }
        let set = load_newforms(&path)?;
        forms.extend(set.records.into_iter().filter(|r| r.level == spec.level));
    }
    Ok((forms, missing))
}

/// One row of Table 3.
#[derive(Debug, Clone, Serialize)]
pub struct CaseDescriptor {
    pub name: String,
    #[serde(serialize_with = "crate::arith::int::ser_int")]
    pub d: Int,
    #[serde(skip)]
    pub point: CurvePoint,
    pub point_text: String,
    pub expected: String,
}

pub const TABLE3_NAMES: [&str; 9] = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix"];

/// Table 3: (D, P₁, excluded exponents).
pub fn table3_case(row: &str) -> Result<CaseDescriptor> {
    let row = row.strip_prefix("table3-").unwrap_or(row);
    let (d, xn, xd, yn, yd, expected): (i64, i64, i64, i64, i64, &str) = match row {
        "i" => (125, 121, 4, 1419, 8, "l > 2"),
        "ii" => (125, 500, 121, 32250, 1331, "l > 5, l ≠ 11"),
        "iii" => (-17, -153, 49, 1632, 343, "l > 17"),
        "iv" => (3, 1, 4, 7, 8, "l > 2"),
        "v" => (3, 27, 121, 1098, 1331, "l > 17"),
        "vi" => (-2, 9, 4, 21, 8, "l > 2"),
        "vii" => (-2, -1, 169, 239, 2197, "l > 2"),
        "viii" => (
            -2,
            4651250,
            1803649,
            8388283850,
            2422300607,
            "l > 5, l ≠ 79",
        ),
        "ix" => (-2, -8, 9, 28, 27, "l > 3"),
        _ => return Err(Error::Unsupported(format!("Table 3 row {row}; rows i–ix"))),
    };
    let point = pt(rat(xn, xd), rat(yn, yd));
    Ok(CaseDescriptor {
        name: format!("table3-{row}"),
        d: int(d),
        point_text: format!("({xn}/{xd}, {yn}/{yd})"),
        point,
        expected: expected.into(),
    })
}
