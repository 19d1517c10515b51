use eds_core::arith::ff::Fq;
use eds_core::arith::int::Rat;
use eds_core::curve::WeierstrassModel;
use eds_core::newforms::{load_fixture, parse_newforms, to_json};

#[test]
fn level17_matches_point_counts() {
    let set = load_fixture(17, None).unwrap();
    assert_eq!(set.len(), 1);
    let f = &set.records[0];
    assert!(f.is_rational());
    // 17a1: y² + xy + y = x³ − x² − x − 14.
    let e = WeierstrassModel::from_i64([1, -1, 1, -1, -14]);
    // #E(𝔽₂) = 4 by hand: (0,1), (1,0), (1,1) and O.
    assert_eq!(f.ap[&2].as_rational(), Some(Rat::from_integer((-1).into())));
    for (&p, ap) in &f.ap {
        if p == 2 || p == 17 {
            continue;
        }
        let t = e
            .reduce(&Fq::prime(p).unwrap())
            .unwrap()
            .frobenius_trace()
            .unwrap();
        assert_eq!(ap.as_rational(), Some(Rat::from_integer(t.into())), "p={p}");
    }
}

#[test]
fn level1280_has_gaussian_forms() {
    let set = load_fixture(1280, Some("20.3")).unwrap();
    assert!(set.records.iter().all(|r| r.character.order == 4));
    // ℚ(i): x² + 1.
    let gaussian = set
        .records
        .iter()
        .filter(|r| r.field.poly.len() == 3)
        .count();
    assert!(gaussian > 0);
    let dim: usize = set.records.iter().map(|r| r.degree() / 2).sum();
    assert_eq!(dim, 44);
}

#[test]
fn round_trip_is_exact() {
    let set = load_fixture(1280, Some("20.3")).unwrap();
    let again = parse_newforms(&to_json(&set), "").unwrap();
    assert_eq!(again, set);
}
