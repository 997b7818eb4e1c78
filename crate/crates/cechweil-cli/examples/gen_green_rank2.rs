//! Generates the `green_rank2.scn` fixture: three opens on the affine line
//! with two marked points, a rank-two resolution over Ua, a rank-one one
//! over Ub, zero over Uc, and the full splitting/cocycle structure at nerve
//! depth two. Run with
//!
//!     cargo run -p cechweil-cli --example gen_green_rank2 > crates/cechweil-cli/fixtures/green_rank2.scn
//!
//! The geometry behind the ranks: the resolved sheaf is a length-two
//! skyscraper with support {1, 2}; the point 1 lies in Ua ∩ Ub, the point 2
//! in Ua only, and Uc misses both, so z-1 and z-2 are invertible exactly
//! where the declarations say.

use std::collections::BTreeMap;

use cechweil::algebra::{Chart, ChartRef, Matrix, Poly, RatFunc, Rational, Var};
use cechweil::bundles::{
    proper_subtuples, BundleOnNerve, ComplexOnNerve, ElementarySummand, ElementaryWitness,
    GreenStructure, Splitting,
};
use cechweil::connections::LocalConnection;
use cechweil::cover::{Cover, Substitution, Support, Tuple};
use cechweil_cli::scenario::{render, Scenario, WitnessSpec};

fn z_minus(chart: &ChartRef, c: i64) -> RatFunc {
    RatFunc::from_poly(
        chart,
        Poly::var(Var::Coord(0)).sub(&Poly::constant(Rational::from_int(c))),
    )
}

fn main() {
    let depth = 2usize;
    let opens: Vec<String> = vec!["Ua".into(), "Ub".into(), "Uc".into()];
    // all supports are declared nonempty; z-1 and z-2 are invertible on
    // every intersection of at least two opens
    let mut supports: Vec<Support> = Vec::new();
    let mut restrictions: Vec<((usize, usize), Substitution)> = Vec::new();
    let all_sets: Vec<Vec<u8>> = vec![
        vec![0],
        vec![1],
        vec![2],
        vec![0, 1],
        vec![0, 2],
        vec![1, 2],
        vec![0, 1, 2],
    ];
    for set in &all_sets {
        let names: Vec<&str> = set.iter().map(|&i| opens[i as usize].as_str()).collect();
        let name = names.join("&");
        let invertible = if set.len() >= 2 {
            let bare = Chart::new(&name, &["z"], vec![]).unwrap();
            vec![
                z_minus(&bare, 1).numerator().clone(),
                z_minus(&bare, 2).numerator().clone(),
            ]
        } else {
            vec![]
        };
        let chart = Chart::new(&name, &["z"], invertible).unwrap();
        supports.push(Support {
            indices: set.iter().copied().collect(),
            chart,
        });
    }
    for (i, si) in supports.iter().enumerate() {
        for (j, sj) in supports.iter().enumerate() {
            if i != j && si.indices.is_subset(&sj.indices) {
                restrictions.push((
                    (i, j),
                    Substitution {
                        from: si.chart.clone(),
                        to: sj.chart.clone(),
                        images: vec![RatFunc::coord(&sj.chart, 0)],
                    },
                ));
            }
        }
    }
    let cover = Cover {
        opens,
        supports,
        restrictions,
        depth,
    };

    let rank_of = |t: &Tuple| -> usize {
        let s = t.support();
        if s.contains(&0) {
            2
        } else if s.contains(&1) {
            1
        } else {
            0
        }
    };
    let chart_of = |t: &Tuple| -> ChartRef { cover.chart_of(t).unwrap().clone() };

    // differential of the local resolution in the stored frame
    let d_of = |t: &Tuple| -> Matrix<RatFunc> {
        let chart = chart_of(t);
        match rank_of(t) {
            2 => Matrix::from_rows(vec![
                vec![z_minus(&chart, 1), RatFunc::zero()],
                vec![RatFunc::zero(), z_minus(&chart, 2)],
            ])
            .unwrap(),
            1 => Matrix::from_rows(vec![vec![z_minus(&chart, 1)]]).unwrap(),
            _ => Matrix::zeros(0, 0),
        }
    };
    // transitions: the rank-one resolution includes as the z-1 factor
    let trans_of = |from_rank: usize, to_rank: usize| -> Matrix<RatFunc> {
        match (to_rank, from_rank) {
            (2, 2) => Matrix::identity(2),
            (1, 1) => Matrix::identity(1),
            (2, 1) => Matrix::from_rows(vec![vec![RatFunc::one()], vec![RatFunc::zero()]])
                .unwrap(),
            (r, 0) => Matrix::zeros(r, 0),
            other => panic!("no transition shape for {other:?}"),
        }
    };

    let mut level0 = BundleOnNerve::default();
    let mut level1 = BundleOnNerve::default();
    let mut diffs: BTreeMap<Tuple, Vec<Matrix<RatFunc>>> = BTreeMap::new();
    for p in 0..=depth {
        for t in cover.tuples(p) {
            let r = rank_of(&t);
            level0.ranks.insert(t.clone(), r);
            level1.ranks.insert(t.clone(), r);
            diffs.insert(t.clone(), vec![d_of(&t)]);
            if p >= 1 {
                for i in 0..=p {
                    let face = t.face(i).unwrap();
                    let m = trans_of(rank_of(&face), r);
                    level0.transitions.insert((t.clone(), i), m.clone());
                    level1.transitions.insert((t.clone(), i), m);
                }
            }
        }
    }
    let complex = ComplexOnNerve {
        levels: vec![level0, level1],
        diffs,
    };

    // splittings: β of equal rank is the identity; a rank-one β leaves a
    // rank-one elementary complement twisted by z-2; a rank-zero β leaves
    // everything, twisted by the full differential
    let splitting_of = |alpha: &Tuple, beta: &Tuple| -> Splitting {
        let chart = chart_of(alpha);
        let ra = rank_of(alpha);
        let rb = rank_of(beta);
        match (ra, rb) {
            (r, s) if r == s => Splitting {
                witness: ElementaryWitness::default(),
                mats: vec![Matrix::identity(r), Matrix::identity(r)],
            },
            (2, 1) => Splitting {
                witness: ElementaryWitness {
                    summands: vec![ElementarySummand {
                        rank: 1,
                        low: 0,
                        tag_open: 1,
                        tag_star: 0,
                    }],
                },
                mats: vec![
                    Matrix::identity(2),
                    Matrix::from_rows(vec![
                        vec![RatFunc::one(), RatFunc::zero()],
                        vec![RatFunc::zero(), z_minus(&chart, 2)],
                    ])
                    .unwrap(),
                ],
            },
            (2, 0) => Splitting {
                witness: ElementaryWitness {
                    summands: vec![ElementarySummand {
                        rank: 2,
                        low: 0,
                        tag_open: 0,
                        tag_star: 0,
                    }],
                },
                mats: vec![Matrix::identity(2), d_of(alpha)],
            },
            (1, 0) => Splitting {
                witness: ElementaryWitness {
                    summands: vec![ElementarySummand {
                        rank: 1,
                        low: 0,
                        tag_open: 1,
                        tag_star: 0,
                    }],
                },
                mats: vec![Matrix::identity(1), d_of(alpha)],
            },
            other => panic!("no splitting shape for {other:?}"),
        }
    };

    let mut green = GreenStructure::default();
    for p in 0..=depth {
        for alpha in cover.tuples(p) {
            for beta in proper_subtuples(&alpha) {
                green
                    .splittings
                    .insert((alpha.clone(), beta.clone()), splitting_of(&alpha, &beta));
            }
            for beta in proper_subtuples(&alpha) {
                for gamma in proper_subtuples(&beta) {
                    let l_ag = green.splittings[&(alpha.clone(), gamma.clone())]
                        .witness
                        .clone();
                    let mats: Vec<Matrix<RatFunc>> = (0..2)
                        .map(|s| Matrix::identity(l_ag.rank_at(s)))
                        .collect();
                    green
                        .cocycles
                        .insert((alpha.clone(), beta.clone(), gamma.clone()), mats);
                }
            }
        }
    }

    // trivial local connections; the nonzero geometry all comes from the
    // z-dependent splittings
    let mut locals: BTreeMap<u8, LocalConnection> = BTreeMap::new();
    for open in 0..3u8 {
        let r = rank_of(&Tuple(vec![open]));
        locals.insert(
            open,
            LocalConnection {
                mats: vec![Matrix::zeros(r, r), Matrix::zeros(r, r)],
            },
        );
    }

    let sc = Scenario {
        name: "green-rank2".into(),
        cover,
        complex: Some(complex),
        green: Some(green),
        locals: Some(locals),
        witness_spec: WitnessSpec::Canonical,
        explicit_witnesses: BTreeMap::new(),
        twisting: None,
        family: None,
    };
    print!("{}", render(&sc));
}
