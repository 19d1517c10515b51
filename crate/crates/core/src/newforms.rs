//! Weight-2 newform eigenvalue data: records, JSON fixtures, genus of X₀(N).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::int::{prime_divisors, Int, Rat};
use crate::arith::numfield::{NfElem, NumberField};
use crate::error::{Error, Result};

/// Values of a Dirichlet character at primes, in the Hecke field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub modulus: u64,
    pub order: u32,
    pub values: BTreeMap<u64, NfElem>,
}

impl Character {
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// χ(p); a trivial character is 1 at every p.
    pub fn value(&self, p: u64, field: &Arc<NumberField>) -> Option<NfElem> {
        if self.is_trivial() {
            return Some(NfElem::one(field));
        }
        self.values.get(&p).cloned()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformRecord {
    pub level: u64,
    pub weight: u32,
    pub character: Character,
    pub field: Arc<NumberField>,
    pub ap: BTreeMap<u64, NfElem>,
    pub label: String,
    pub cm: Option<bool>,
}

impl NewformRecord {
    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NewformSet {
    pub records: Vec<NewformRecord>,
    pub provenance: String,
}

impl NewformSet {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn levels(&self) -> Vec<u64> {
        let mut l: Vec<u64> = self.records.iter().map(|r| r.level).collect();
        l.sort();
        l.dedup();
        l
    }

    pub fn at_level(&self, n: u64) -> impl Iterator<Item = &NewformRecord> {
        self.records.iter().filter(move |r| r.level == n)
    }

    pub fn extend(&mut self, other: NewformSet) {
        self.records.extend(other.records);
        if !other.provenance.is_empty() {
            if !self.provenance.is_empty() {
                self.provenance.push_str("; ");
            }
            self.provenance.push_str(&other.provenance);
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawCharacter {
    modulus: Value,
    order: Value,
    #[serde(default)]
    values: BTreeMap<String, Vec<Value>>,
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    level: Value,
    weight: Value,
    character: RawCharacter,
    field_poly: Vec<Value>,
    ap: BTreeMap<String, Vec<Value>>,
    #[serde(default)]
    labels: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cm: Option<bool>,
}

#[derive(Serialize, Deserialize)]
struct RawFile {
    #[serde(default)]
    provenance: String,
    newforms: Vec<RawRecord>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Data(msg.into())
}

fn parse_int(v: &Value) -> Result<Int> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| schema(format!("not an integer: {n}"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| schema(format!("not an integer: {s}"))),
        _ => Err(schema(format!("expected integer, got {v}"))),
    }
}

fn parse_u64(v: &Value) -> Result<u64> {
    parse_int(v)?
        .to_u64()
        .ok_or_else(|| schema(format!("expected non-negative integer, got {v}")))
}

fn parse_rat(v: &Value) -> Result<Rat> {
    let s = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(schema(format!("expected rational, got {v}"))),
    };
    let bad = || schema(format!("not a rational: {s}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d: Int = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(Rat::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn fmt_rat(r: &Rat) -> Value {
    if r.denom().is_one() {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

fn parse_elem(field: &Arc<NumberField>, cs: &[Value], what: &str) -> Result<NfElem> {
    if cs.len() > field.degree() {
        return Err(schema(format!(
            "{what}: {} coefficients for a degree-{} field",
            cs.len(),
            field.degree()
        )));
    }
    let c = cs.iter().map(parse_rat).collect::<Result<Vec<_>>>()?;
    Ok(NfElem::new(field, c))
}

fn elem_to_raw(x: &NfElem) -> Vec<Value> {
    let n = x.field.degree();
    (0..n)
        .map(|i| fmt_rat(x.c.get(i).unwrap_or(&Rat::zero())))
        .collect()
}

fn parse_prime_map(
    field: &Arc<NumberField>,
    m: &BTreeMap<String, Vec<Value>>,
    what: &str,
) -> Result<BTreeMap<u64, NfElem>> {
    m.iter()
        .map(|(k, v)| {
            let p: u64 = k
                .parse()
                .map_err(|_| schema(format!("{what}: key {k} is not a prime")))?;
            Ok((p, parse_elem(field, v, &format!("{what}[{p}]"))?))
        })
        .collect()
}

fn record_from_raw(raw: &RawRecord) -> Result<NewformRecord> {
    let level = parse_u64(&raw.level)?;
    let weight = parse_u64(&raw.weight)? as u32;
    if weight != 2 {
        return Err(schema(format!("weight {weight} unsupported")));
    }
    let poly = raw
        .field_poly
        .iter()
        .map(parse_int)
        .collect::<Result<Vec<_>>>()?;
    if poly.last().map(|c| !c.is_one()).unwrap_or(true) {
        return Err(schema("field_poly must be monic"));
    }
    let field = NumberField::new(format!("L({})", raw.labels), poly)?;
    let order = parse_u64(&raw.character.order)? as u32;
    let character = Character {
        modulus: parse_u64(&raw.character.modulus)?,
        order,
        values: parse_prime_map(&field, &raw.character.values, "character")?,
    };
    let ap = parse_prime_map(&field, &raw.ap, "ap")?;
    let rec = NewformRecord {
        level,
        weight,
        character,
        field,
        ap,
        label: raw.labels.clone(),
        cm: raw.cm,
    };
    validate(&rec)?;
    Ok(rec)
}

fn record_to_raw(r: &NewformRecord) -> RawRecord {
    let map = |m: &BTreeMap<u64, NfElem>| {
        m.iter()
            .map(|(p, x)| (p.to_string(), elem_to_raw(x)))
            .collect()
    };
    RawRecord {
        level: Value::from(r.level),
        weight: Value::from(r.weight),
        character: RawCharacter {
            modulus: Value::from(r.character.modulus),
            order: Value::from(r.character.order),
            values: map(&r.character.values),
        },
        field_poly: r
            .field
            .poly
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
        ap: map(&r.ap),
        labels: r.label.clone(),
        cm: r.cm,
    }
}

/// Character values have the stated order and every embedding of a_p lies in
/// [−2√p, 2√p] in absolute value (up to floating-point slack).
pub fn validate(r: &NewformRecord) -> Result<()> {
    for (p, v) in &r.character.values {
        if v.pow(r.character.order) != NfElem::one(&r.field) {
            return Err(schema(format!(
                "{}: χ({p}) is not a root of unity of order dividing {}",
                r.label, r.character.order
            )));
        }
    }
    let roots = complex_roots(&r.field)?;
    for (p, a) in &r.ap {
        let bound = 2.0 * (*p as f64).sqrt();
        for z in &roots {
            let v = eval_complex(a, *z);
            if v.norm() > bound * (1.0 + 1e-6) + 1e-6 {
                return Err(schema(format!(
                    "{}: a_{p} has an embedding of size {:.3} > 2√p",
                    r.label,
                    v.norm()
                )));
            }
        }
    }
    Ok(())
}

fn eval_complex(x: &NfElem, z: Complex64) -> Complex64 {
    x.c.iter().rev().fold(Complex64::zero(), |acc, c| {
        acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
    })
}

/// Roots of the defining polynomial by Durand–Kerner iteration with Newton polishing.
pub fn complex_roots(f: &NumberField) -> Result<Vec<Complex64>> {
    let n = f.degree();
    let c: Vec<f64> = f
        .poly
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::NAN))
        .collect();
    if n == 1 {
        return Ok(vec![Complex64::new(-c[0], 0.0)]);
    }
    let eval = |z: Complex64| {
        c.iter()
            .rev()
            .fold(Complex64::zero(), |acc, &a| acc * z + a)
    };
    let deriv = |z: Complex64| {
        c.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::zero(), |acc, (i, &a)| acc * z + a * i as f64)
    };
    let radius = 1.0 + c[..n].iter().map(|a| a.abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32) * (radius.min(1e6) / 2.0).max(1.0).powf(k as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::one();
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-14 {
            break;
        }
    }
    for zi in &mut z {
        for _ in 0..5 {
            let d = deriv(*zi);
            if d.norm() > 0.0 {
                *zi -= eval(*zi) / d;
            }
        }
    }
    if z.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::Internal(format!(
            "root finding failed for {}",
            f.name
        )));
    }
    Ok(z)
}

/// Parse a fixture: a single record, an array of records, or {"provenance", "newforms": [...]}.
pub fn parse_newforms(text: &str, provenance: &str) -> Result<NewformSet> {
    if text.trim().is_empty() {
        return Ok(NewformSet {
            records: vec![],
            provenance: provenance.into(),
        });
    }
    let v: Value = serde_json::from_str(text).map_err(|e| schema(format!("invalid JSON: {e}")))?;
    let (raws, prov): (Vec<RawRecord>, String) = match v {
        Value::Array(_) => (
            serde_json::from_value(v).map_err(|e| schema(e.to_string()))?,
            provenance.into(),
        ),
        Value::Object(ref o) if o.contains_key("newforms") => {
            let f: RawFile = serde_json::from_value(v).map_err(|e| schema(e.to_string()))?;
            let p = if f.provenance.is_empty() {
                provenance.into()
            } else {
                f.provenance
            };
            (f.newforms, p)
        }
        Value::Object(_) => (
            vec![serde_json::from_value(v).map_err(|e| schema(e.to_string()))?],
            provenance.into(),
        ),
        _ => return Err(schema("expected an object or an array")),
    };
    let records = raws
        .iter()
        .map(record_from_raw)
        .collect::<Result<Vec<_>>>()?;
    Ok(NewformSet {
        records,
        provenance: prov,
    })
}

pub fn load_newforms(path: &Path) -> Result<NewformSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    parse_newforms(&text, &path.display().to_string())
}

pub fn to_json(set: &NewformSet) -> String {
    let raw = RawFile {
        provenance: set.provenance.clone(),
        newforms: set.records.iter().map(record_to_raw).collect(),
    };
    serde_json::to_string(&raw).expect("serialisable")
}

pub fn save_newforms(set: &NewformSet, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::Data(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, to_json(set)).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

/// Data directory: $EDS_DATA_DIR, else ./data/newforms, else the bundled copy.
pub fn data_dir() -> PathBuf {
    if let Ok(d) = std::env::var("EDS_DATA_DIR") {
        return PathBuf::from(d);
    }
    let local = PathBuf::from("data/newforms");
    if local.is_dir() {
        return local;
    }
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/newforms"))
}

/// Fixture file name for a level and Conrey character label (None = trivial).
pub fn fixture_name(level: u64, character: Option<&str>) -> String {
    match character {
        Some(c) => format!("{level}_{}.json", c.replace('.', "_")),
        None => format!("{level}.json"),
    }
}

/// Load a bundled fixture, or report it missing.
pub fn load_fixture(level: u64, character: Option<&str>) -> Result<NewformSet> {
    let path = data_dir().join(fixture_name(level, character));
    if !path.exists() {
        return Err(Error::Data(format!(
            "no newform data for level {level} at {}",
            path.display()
        )));
    }
    load_newforms(&path)
}

/// Genus of X₀(N).
pub fn genus_x0(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::Precondition("N ≥ 1".into()));
    }
    let ps: Vec<u64> = prime_divisors(&Int::from(n))
        .iter()
        .map(|p| p.to_u64().unwrap())
        .collect();
    // 12·μ/12 computed as an integer.
    let mu = ps.iter().fold(n, |m, p| m / p * (p + 1));
    let nu2 = if n.is_multiple_of(4) {
        0
    } else {
        ps.iter().map(|&p| 1 + kron(-4, p)).product::<i64>()
    };
    let nu3 = if n.is_multiple_of(9) {
        0
    } else {
        ps.iter().map(|&p| 1 + kron(-3, p)).product::<i64>()
    };
    let cusps: i64 = divisors(n)
        .into_iter()
        .map(|d| totient(d.gcd(&(n / d))) as i64)
        .sum();
    let twelve_g = 12 + mu as i64 - 3 * nu2 - 4 * nu3 - 6 * cusps;
    Ok(twelve_g / 12)
}

fn kron(d: i64, p: u64) -> i64 {
    // (d/p) for d ∈ {−4, −3}.
    match (d, p) {
        (-4, 2) => 0,
        (-4, _) => {
            if p % 4 == 1 {
                1
            } else {
                -1
            }
        }
        (-3, 3) => 0,
        (-3, 2) => -1,
        (-3, _) => {
            if p % 3 == 1 {
                1
            } else {
                -1
            }
        }
        _ => unreachable!(),
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// Independent count via cosets: P¹(ℤ/N), elliptic points from x² + 1 and
/// x² + x + 1 mod N, cusps as orbits of (c : d) ↦ (c : c + d).
pub fn genus_x0_bruteforce(n: u64) -> i64 {
    let units: Vec<u64> = (1..=n.max(1))
        .filter(|u| u.gcd(&n) == 1)
        .map(|u| u % n.max(1))
        .collect();
    let canon = |c: u64, d: u64| {
        units
            .iter()
            .map(|u| ((u * c) % n, (u * d) % n))
            .min()
            .unwrap()
    };
    let mut pts = std::collections::BTreeSet::new();
    for c in 0..n {
        for d in 0..n {
            if c.gcd(&d).gcd(&n) == 1 {
                pts.insert(canon(c, d));
            }
        }
    }
    let mu = if n == 1 { 1 } else { pts.len() as i64 };
    let nu2 = (0..n).filter(|x| (x * x + 1) % n == 0).count() as i64;
    let nu3 = (0..n).filter(|x| (x * x + x + 1) % n == 0).count() as i64;
    let mut seen = std::collections::BTreeSet::new();
    let mut cusps = 0i64;
    for &p in &pts {
        if seen.contains(&p) {
            continue;
        }
        cusps += 1;
        let mut q = p;
        while seen.insert(q) {
            q = canon(q.0, (q.0 + q.1) % n);
        }
    }
    if n == 1 {
        return 0;
    }
    1 + (mu - 3 * nu2 - 4 * nu3 - 6 * cusps) / 12
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_examples() {
        assert_eq!(genus_x0(5).unwrap(), 0);
        assert_eq!(genus_x0(10).unwrap(), 0);
        assert_eq!(genus_x0(11).unwrap(), 1);
        assert_eq!(genus_x0(17).unwrap(), 1);
        assert_eq!(genus_x0(34).unwrap(), 3);
    }

    #[test]
    fn genus_vs_cosets() {
        for n in 1..=100 {
            assert_eq!(genus_x0(n).unwrap(), genus_x0_bruteforce(n), "N={n}");
        }
    }

    const TINY: &str = r#"{"level": 11, "weight": 2,
        "character": {"modulus": 1, "order": 1, "values": {}},
        "field_poly": [0, 1], "ap": {"2": ["-2"], "3": ["-1"], "5": [1], "7": ["-2"]},
        "labels": "11.2.a.a"}"#;

    #[test]
    fn parse_and_round_trip() {
        let s = parse_newforms(TINY, "inline").unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.records[0].is_rational());
        let again = parse_newforms(&to_json(&s), "x").unwrap();
        assert_eq!(again, s);
        assert!(parse_newforms("", "empty").unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_data() {
        let hasse = TINY.replace(r#""7": ["-2"]"#, r#""7": ["6"]"#);
        assert!(parse_newforms(&hasse, "x").is_err());
        let nonmonic = TINY.replace(r#""field_poly": [0, 1]"#, r#""field_poly": [1, 2]"#);
        assert!(parse_newforms(&nonmonic, "x").is_err());
        let chi = TINY.replace(
            r#""order": 1, "values": {}"#,
            r#""order": 2, "values": {"3": ["2"]}"#,
        );
        assert!(parse_newforms(&chi, "x").is_err());
    }

    #[test]
    fn quadratic_field_embeddings() {
        // ℚ(√2) with a_p = √2 at p = 2: |√2| ≤ 2√2.
        let j = r#"{"level": 256, "weight": 2, "character": {"modulus": 1, "order": 1},
            "field_poly": [-2, 0, 1], "ap": {"3": [0, 1]}, "labels": "t"}"#;
        assert!(parse_newforms(j, "x").is_ok());
        let bad = j.replace(r#"[0, 1]}"#, r#"[0, 3]}"#);
        assert!(parse_newforms(&bad, "x").is_err());
    }
}
