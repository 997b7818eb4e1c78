//! Loading a scenario, rendering it, and loading the result again must
//! reproduce the same in-memory value; rendering is canonical, so the
//! second render must be byte-identical to the first.

use std::path::PathBuf;

use cechweil_cli::scenario::{load_file, load_str, render};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

#[test]
fn explicit_witnesses_round_trip() {
    let text = "\
[meta]
name = one-open
depth = 1

[opens]
U

[chart U]
vars = x

[complex]
stars = 1
rank (U) = 1
rank (U,U) = 1
t (U,U) 0 0 = [1]
t (U,U) 1 0 = [1]

[green]
L (U,U) (U) = none
S (U,U) (U) 0 = [1]

[witnesses]
A (U,U) 0 0 = []
B (U,U) 0 0 = []
A (U,U) 1 0 = []
B (U,U) 1 0 = []
";
    let sc = load_str(text).unwrap();
    let rendered = render(&sc);
    let sc2 = load_str(&rendered).unwrap();
    assert_eq!(render(&sc2), rendered);
    assert_eq!(sc.witness_spec, sc2.witness_spec);
    assert_eq!(
        sc.explicit_witnesses.len(),
        sc2.explicit_witnesses.len()
    );
}

#[test]
fn fixtures_round_trip() {
    for name in ["green_p1.scn", "green_rank2.scn"] {
        let sc = load_file(&fixture(name)).expect("fixture loads");
        let rendered = render(&sc);
        let sc2 = load_str(&rendered).unwrap_or_else(|e| panic!("{name} re-load: {e}"));
        let rendered2 = render(&sc2);
        assert_eq!(rendered, rendered2, "{name} does not round-trip");

        // spot-check in-memory equality of key structures
        let (a, b) = (&sc, &sc2);
        assert_eq!(a.name, b.name);
        assert_eq!(a.cover.depth, b.cover.depth);
        assert_eq!(a.cover.opens, b.cover.opens);
        match (&a.complex, &b.complex) {
            (Some(ca), Some(cb)) => {
                assert_eq!(ca.stars(), cb.stars());
                for p in 0..=a.cover.depth {
                    for t in a.cover.tuples(p) {
                        assert_eq!(ca.ranks_at(&t).unwrap(), cb.ranks_at(&t).unwrap());
                        for s in 0..ca.stars() - 1 {
                            assert_eq!(ca.diff(&t, s).unwrap(), cb.diff(&t, s).unwrap());
                        }
                        if p >= 1 {
                            for i in 0..=p {
                                for s in 0..ca.stars() {
                                    assert_eq!(
                                        ca.levels[s].transition(&t, i).unwrap(),
                                        cb.levels[s].transition(&t, i).unwrap()
                                    );
                                }
                            }
                        }
                    }
                }
            }
            (None, None) => {}
            _ => panic!("{name}: complex presence differs"),
        }
        match (&a.green, &b.green) {
            (Some(ga), Some(gb)) => {
                assert_eq!(ga.splittings.len(), gb.splittings.len());
                for (key, sa) in &ga.splittings {
                    let sb = &gb.splittings[key];
                    assert_eq!(sa.witness, sb.witness);
                    assert_eq!(sa.mats, sb.mats);
                }
            }
            (None, None) => {}
            _ => panic!("{name}: green presence differs"),
        }
        match (&a.family, &b.family) {
            (Some(fa), Some(fb)) => {
                assert_eq!(fa.degree, fb.degree);
                assert_eq!(fa.components, fb.components);
            }
            (None, None) => {}
            _ => panic!("{name}: family presence differs"),
        }
    }
}
