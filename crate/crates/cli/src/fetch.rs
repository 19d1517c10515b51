//! Client for the newform tables of the L-functions and modular forms database.
//! Eigenvalues arrive in the basis of the Hecke ring; they are rewritten in the
//! power basis of the Hecke field and validated by the fixture parser.

use std::collections::{BTreeMap, HashMap};

use anyhow::{anyhow, bail, Context, Result};
use num_integer::Integer;
use serde_json::{json, Value};

use eds_core::arith::int::{primes_upto, Int, Rat};
use eds_core::newforms::{parse_newforms, NewformSet};

/// (conductor, order) of the Conrey character χ_q(n, ·): the order is that of n mod q.
pub fn conrey_character(label: &str) -> Result<(u64, u64)> {
    let (q, n) = label
        .split_once('.')
        .ok_or_else(|| anyhow!("character label must be q.n, got {label}"))?;
    let (q, n): (u64, u64) = (q.parse()?, n.parse()?);
    if q == 0 || n.gcd(&q) != 1 {
        bail!("{n} is not a unit modulo {q}");
    }
    let (mut x, mut k) = (n % q, 1);
    while x != 1 % q {
        x = x * n % q;
        k += 1;
    }
    Ok((q, k))
}

fn get_all(client: &reqwest::blocking::Client, base: &str, path: &str) -> Result<Vec<Value>> {
    let mut url = format!("{base}{path}");
    let mut out = Vec::new();
    loop {
        let body: Value = client
            .get(&url)
            .send()
            .and_then(|r| r.error_for_status())
            .with_context(|| {
                format!("GET {url} failed; use the bundled fixtures or EDS_DATA_DIR instead")
            })?
            .json()
            .with_context(|| format!("{url}: response is not JSON"))?;
        let data = body
            .get("data")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("{url}: no data field"))?;
        out.extend(data.iter().cloned());
        match body.get("next").and_then(Value::as_str) {
            Some(next) if !next.is_empty() => {
                url = if next.starts_with("http") {
                    next.into()
                } else {
                    format!("{base}{next}")
                }
            }
            _ => break,
        }
    }
    Ok(out)
}

fn ints(v: &Value, what: &str) -> Result<Vec<Int>> {
    v.as_array()
        .ok_or_else(|| anyhow!("{what}: expected a list"))?
        .iter()
        .map(|x| match x {
            Value::Number(n) => n
                .to_string()
                .parse::<Int>()
                .map_err(|_| anyhow!("{what}: bad integer {n}")),
            Value::String(s) => s
                .parse::<Int>()
                .map_err(|_| anyhow!("{what}: bad integer {s}")),
            _ => bail!("{what}: expected integers"),
        })
        .collect()
}

/// Hecke-ring basis β_j = (Σ_k num[j][k] ν^k) / den[j]; identity when absent.
struct RingBasis {
    num: Vec<Vec<Int>>,
    den: Vec<Int>,
}

impl RingBasis {
    fn from_record(rec: &Value, degree: usize) -> Result<Self> {
        match (
            rec.get("hecke_ring_numerators"),
            rec.get("hecke_ring_denominators"),
        ) {
            (Some(n @ Value::Array(_)), Some(d @ Value::Array(_))) => {
                let num = n
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|r| ints(r, "hecke_ring_numerators"))
                    .collect::<Result<_>>()?;
                Ok(RingBasis {
                    num,
                    den: ints(d, "hecke_ring_denominators")?,
                })
            }
            _ => Ok(RingBasis {
                num: (0..degree)
                    .map(|j| (0..degree).map(|k| Int::from((j == k) as i64)).collect())
                    .collect(),
                den: vec![Int::from(1); degree],
            }),
        }
    }

    fn to_power_basis(&self, v: &[Int]) -> Vec<Rat> {
        let d = self.num.len();
        let mut c = vec![Rat::from_integer(Int::from(0)); d];
        for (j, vj) in v.iter().enumerate().take(d) {
            for (k, n) in self.num[j].iter().enumerate().take(d) {
                c[k] += Rat::new(vj * n, self.den[j].clone());
            }
        }
        c
    }
}

fn rat_str(r: &Rat) -> String {
    if r.denom() == &Int::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Power-basis product of two elements modulo the monic polynomial f.
fn mul_mod(a: &[Rat], b: &[Rat], f: &[Int]) -> Vec<Rat> {
    let d = f.len() - 1;
    let zero = Rat::from_integer(Int::from(0));
    let mut prod = vec![zero.clone(); 2 * d];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (d..prod.len()).rev() {
        let t = prod[k].clone();
        if t != zero {
            for (i, c) in f.iter().enumerate().take(d) {
                prod[k - d + i] -= &t * Rat::from_integer(c.clone());
            }
            prod[k] = zero.clone();
        }
    }
    prod.truncate(d);
    prod
}

/// χ(p) for primes p ∤ N up to maxp from the values of χ on generators of (ℤ/N)^*.
fn character_values(
    level: u64,
    gens: &[(u64, Vec<Rat>)],
    f: &[Int],
    maxp: u64,
) -> Result<BTreeMap<u64, Vec<Rat>>> {
    let d = f.len() - 1;
    let mut one = vec![Rat::from_integer(Int::from(0)); d];
    one[0] = Rat::from_integer(Int::from(1));
    // Breadth-first closure of the subgroup generated by the generators.
    let mut value: HashMap<u64, Vec<Rat>> = HashMap::from([(1 % level, one)]);
    let mut frontier = vec![1 % level];
    while let Some(x) = frontier.pop() {
        let vx = value[&x].clone();
        for (g, vg) in gens {
            let y = (x as u128 * *g as u128 % level as u128) as u64;
            if let std::collections::hash_map::Entry::Vacant(e) = value.entry(y) {
                e.insert(mul_mod(&vx, vg, f));
                frontier.push(y);
            }
        }
    }
    let mut out = BTreeMap::new();
    for p in primes_upto(maxp)
        .into_iter()
        .filter(|p| !level.is_multiple_of(*p))
    {
        let v = value
            .get(&(p % level))
            .ok_or_else(|| anyhow!("{p} is not generated by the character generators"))?;
        out.insert(p, v.clone());
    }
    Ok(out)
}

/// One database record (newform row + Hecke eigenvalue row) in the fixture schema.
pub fn convert(
    level: u64,
    conductor: u64,
    order: u64,
    form: &Value,
    hecke: &Value,
) -> Result<Value> {
    let label = form
        .get("label")
        .and_then(Value::as_str)
        .unwrap_or_default()
        .to_string();
    let poly = ints(
        hecke
            .get("field_poly")
            .or_else(|| form.get("field_poly"))
            .ok_or_else(|| anyhow!("{label}: no field_poly"))?,
        "field_poly",
    )?;
    if poly.last() != Some(&Int::from(1)) {
        bail!("{label}: field polynomial is not monic");
    }
    let degree = poly.len() - 1;
    let basis = RingBasis::from_record(hecke, degree)?;
    let aps = hecke
        .get("ap")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("{label}: eigenvalues are not stored"))?;
    let primes = primes_upto(8000);
    let mut ap = serde_json::Map::new();
    for (p, v) in primes.iter().zip(aps) {
        let coeffs = match v {
            Value::Array(_) => ints(v, "ap")?,
            _ => ints(&json!([v]), "ap")?,
        };
        ap.insert(
            p.to_string(),
            json!(basis
                .to_power_basis(&coeffs)
                .iter()
                .map(rat_str)
                .collect::<Vec<_>>()),
        );
    }
    let maxp = primes
        .get(aps.len().saturating_sub(1))
        .copied()
        .unwrap_or(2);
    let character = if order == 1 {
        json!({ "modulus": 1, "order": 1 })
    } else {
        let raw = hecke
            .get("hecke_ring_character_values")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("{label}: no character values"))?;
        let gens = raw
            .iter()
            .map(|pair| {
                let g = pair
                    .get(0)
                    .and_then(Value::as_u64)
                    .ok_or_else(|| anyhow!("{label}: bad generator"))?;
                let v = ints(
                    pair.get(1)
                        .ok_or_else(|| anyhow!("{label}: bad character value"))?,
                    "character",
                )?;
                Ok((g, basis.to_power_basis(&v)))
            })
            .collect::<Result<Vec<_>>>()?;
        let values = character_values(level, &gens, &poly, maxp)?;
        let values: serde_json::Map<String, Value> = values
            .iter()
            .map(|(p, v)| {
                (
                    p.to_string(),
                    json!(v.iter().map(rat_str).collect::<Vec<_>>()),
                )
            })
            .collect();
        json!({ "modulus": conductor, "order": order, "values": values })
    };
    Ok(json!({
        "level": level,
        "weight": 2,
        "character": character,
        "field_poly": poly.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "ap": ap,
        "labels": label,
        "cm": form.get("is_cm").and_then(Value::as_bool),
    }))
}

/// Download every newform of weight 2, the given level and character.
pub fn fetch_newforms(base: &str, level: u64, character: Option<&str>) -> Result<NewformSet> {
    let (conductor, order) = match character {
        Some(c) => conrey_character(c)?,
        None => (1, 1),
    };
    let client = reqwest::blocking::Client::builder()
        .user_agent("eds-cli")
        .build()?;
    let forms = get_all(
        &client,
        base,
        &format!(
            "/api/mf_newforms/?level=i{level}&weight=i2&char_conductor=i{conductor}&char_order=i{order}&_format=json"
        ),
    )?;
    if forms.is_empty() {
        bail!("no newforms of level {level} with this character in the database; use offline fixtures");
    }
    let orbits: std::collections::BTreeSet<String> = forms
        .iter()
        .filter_map(|f| {
            f.get("char_orbit_label")
                .and_then(Value::as_str)
                .map(String::from)
        })
        .collect();
    if orbits.len() > 1 {
        bail!("character orbits {orbits:?} all match conductor {conductor} and order {order}; use offline fixtures");
    }
    let mut records = Vec::new();
    for f in &forms {
        let code = f
            .get("hecke_orbit_code")
            .and_then(Value::as_u64)
            .ok_or_else(|| anyhow!("newform without hecke_orbit_code"))?;
        let hecke = get_all(
            &client,
            base,
            &format!("/api/mf_hecke_nf/?hecke_orbit_code=i{code}&_format=json"),
        )?;
        let h = hecke
            .first()
            .ok_or_else(|| anyhow!("no eigenvalue data for orbit {code}; use offline fixtures"))?;
        records.push(convert(level, conductor, order, f, h)?);
    }
    let provenance = format!(
        "{base} mf_newforms level={level} character={}",
        character.unwrap_or("trivial")
    );
    Ok(parse_newforms(
        &json!({ "provenance": provenance, "newforms": records }).to_string(),
        &provenance,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conrey_orders() {
        assert_eq!(conrey_character("20.3").unwrap(), (20, 4));
        assert_eq!(conrey_character("20.19").unwrap(), (20, 2));
        assert_eq!(conrey_character("1.1").unwrap(), (1, 1));
        assert!(conrey_character("20.5").is_err());
    }

    /// A ℚ(i) form whose Hecke ring basis is (1, (1 + i)/2).
    #[test]
    fn converts_ring_basis_and_character() {
        let form = json!({ "label": "20.2.e.a", "is_cm": false });
        let hecke = json!({
            "field_poly": [1, 0, 1],
            "hecke_ring_numerators": [[1, 0], [1, 1]],
            "hecke_ring_denominators": [1, 2],
            "ap": [[0, 0], [-2, 2], [0, 0], [0, 0]],
            "hecke_ring_character_values": [[11, [-1, 0]], [17, [-1, 2]]],
        });
        let rec = convert(20, 20, 4, &form, &hecke).unwrap();
        // −2 + 2·(1 + i)/2 = −1 + i.
        assert_eq!(rec["ap"]["3"], json!(["-1", "1"]));
        // 17 ↦ −1 + 2(1 + i)/2 = i and 11 ↦ −1; 3 ≡ 17³·11 ↦ i, 7 ≡ 17·11 ↦ −i.
        assert_eq!(rec["character"]["values"]["3"], json!(["0", "1"]));
        assert_eq!(rec["character"]["values"]["7"], json!(["0", "-1"]));
        assert!(rec["character"]["values"].get("5").is_none());
        let set = parse_newforms(&json!({ "newforms": [rec] }).to_string(), "test").unwrap();
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn rational_forms_accept_bare_integers() {
        let form = json!({ "label": "17.2.a.a" });
        let hecke = json!({ "field_poly": [0, 1], "ap": [-1, 0, -2, 4] });
        let rec = convert(17, 1, 1, &form, &hecke).unwrap();
        assert_eq!(rec["ap"]["7"], json!(["4"]));
        assert_eq!(rec["character"], json!({ "modulus": 1, "order": 1 }));
    }
}
