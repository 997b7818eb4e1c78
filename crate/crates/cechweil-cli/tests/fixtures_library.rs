//! Library-level facts about the shipped fixtures that the command surface
//! does not expose directly: a complex passing the Green check is in
//! particular cartesian, its comparison maps are injective, and the
//! synthetic fixture is genuinely not strongly cartesian.

use std::path::PathBuf;

use cechweil::algebra::matrix_rank;
use cechweil::bundles::check_green;
use cechweil_cli::scenario::load_file;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

#[test]
fn green_implies_cartesian_on_fixtures() {
    for name in ["green_p1.scn", "green_rank2.scn"] {
        let sc = load_file(&fixture(name)).unwrap();
        let cx = sc.complex.as_ref().unwrap();
        let gs = sc.green.as_ref().unwrap();
        assert!(check_green(cx, gs, &sc.cover).unwrap().pass(), "{name}");
        assert!(
            cx.check_cartesian(&sc.cover, false).unwrap().pass(),
            "{name}: green complex is not cartesian"
        );
        // rank jumps across opens keep both fixtures from being strongly
        // cartesian
        assert!(!cx.check_cartesian(&sc.cover, true).unwrap().pass());
    }
}

#[test]
fn broken_cocycle_is_caught() {
    let sc = load_file(&fixture("green_rank2.scn")).unwrap();
    let cx = sc.complex.as_ref().unwrap();
    let mut gs = sc.green.clone().unwrap();
    // scale a nonzero cocycle isomorphism: still invertible, but the
    // comparison diagram against the splittings no longer commutes
    let key = gs
        .cocycles
        .iter()
        .find(|(_, mats)| mats.iter().any(|m| m.rows() > 0))
        .map(|(k, _)| k.clone())
        .expect("depth-two fixture has nontrivial cocycles");
    let mats = gs.cocycles.get_mut(&key).unwrap();
    for m in mats.iter_mut() {
        if m.rows() > 0 {
            let two = cechweil::algebra::RatFunc::constant(
                cechweil::algebra::Rational::from_int(2),
            );
            *m = m.scale(&two).unwrap();
        }
    }
    let rep = check_green(cx, &gs, &sc.cover).unwrap();
    assert!(!rep.pass());
    assert!(rep
        .violations
        .iter()
        .any(|v| v.contains("diagram") || v.contains("cocycle")));
}

#[test]
fn green_comparison_maps_inject_on_fixtures() {
    for name in ["green_p1.scn", "green_rank2.scn"] {
        let sc = load_file(&fixture(name)).unwrap();
        let cx = sc.complex.as_ref().unwrap();
        for p in 1..=sc.cover.depth {
            for t in sc.cover.tuples(p) {
                for i in 0..=p {
                    for level in &cx.levels {
                        let m = level.transition(&t, i).unwrap();
                        assert_eq!(
                            matrix_rank(m).unwrap(),
                            m.cols(),
                            "{name}: comparison at {t} face {i} is not injective"
                        );
                    }
                }
            }
        }
    }
}
