//! The Čech nerve of a finite cover, given combinatorially: declared
//! nonempty intersections (supports) with one chart each, and restriction
//! substitutions between nested supports. Tuples may repeat indices; a
//! tuple's chart is the chart of its support.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{ChartRef, RatFunc};
use crate::error::Error;

/// An ordered tuple of open-set indices (repetition allowed); the component
/// of the nerve it names is the intersection of its support.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Tuple(pub Vec<u8>);

impl Tuple {
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn support(&self) -> BTreeSet<u8> {
        self.0.iter().copied().collect()
    }

    /// Drops the `i`-th entry.
    pub fn face(&self, i: usize) -> Result<Tuple, Error> {
        if self.0.len() < 2 || i >= self.0.len() {
            return Err(Error::IndexOutOfRange(alloc::format!(
                "face {i} of {self}"
            )));
        }
        let mut v = self.0.clone();
        v.remove(i);
        Ok(Tuple(v))
    }

    /// Is `self` an order-preserving subtuple of `other`?
    pub fn is_subtuple_of(&self, other: &Tuple) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|x| it.any(|y| y == x))
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// Variable renaming/substitution from one chart's ring into another's:
/// the image of each source coordinate as a rational function on the
/// target chart.
#[derive(Clone, Debug)]
pub struct Substitution {
    pub from: ChartRef,
    pub to: ChartRef,
    pub images: Vec<RatFunc>,
}

impl Substitution {
    pub fn identity(chart: &ChartRef) -> Self {
        Substitution {
            from: chart.clone(),
            to: chart.clone(),
            images: (0..chart.vars.len())
                .map(|i| RatFunc::coord(chart, i as u16))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.from.name == self.to.name
    }

    pub fn apply(&self, r: &RatFunc) -> Result<RatFunc, Error> {
        if self.is_identity() {
            return Ok(r.clone());
        }
        r.substitute(&|i: u16| Ok(self.images[i as usize].clone()), &self.to)
    }

    /// `other ∘ self`: first this substitution, then `other`.
    pub fn then(&self, other: &Substitution) -> Result<Substitution, Error> {
        if self.to.name != other.from.name {
            return Err(Error::ChartMismatch(alloc::format!(
                "composing {}->{} with {}->{}",
                self.from.name, self.to.name, other.from.name, other.to.name
            )));
        }
        let mut images = Vec::with_capacity(self.images.len());
        for img in &self.images {
            images.push(other.apply(img)?);
        }
        Ok(Substitution {
            from: self.from.clone(),
            to: other.to.clone(),
            images,
        })
    }
}

/// One declared nonempty intersection.
#[derive(Clone, Debug)]
pub struct Support {
    pub indices: BTreeSet<u8>,
    pub chart: ChartRef,
}

/// The nerve of a finite cover.
#[derive(Clone, Debug)]
pub struct Cover {
    pub opens: Vec<String>,
    pub supports: Vec<Support>,
    /// Restriction substitutions keyed by (coarser support, finer support);
    /// all strictly nested declared pairs must be present.
    pub restrictions: Vec<((usize, usize), Substitution)>,
    pub depth: usize,
}

impl Cover {
    pub fn open_index(&self, name: &str) -> Option<u8> {
        self.opens.iter().position(|o| o == name).map(|i| i as u8)
    }

    pub fn support_index(&self, set: &BTreeSet<u8>) -> Option<usize> {
        self.supports.iter().position(|s| &s.indices == set)
    }

    pub fn support_of(&self, t: &Tuple) -> Result<usize, Error> {
        self.support_index(&t.support())
            .ok_or_else(|| Error::TupleNotInNerve(t.to_string()))
    }

    pub fn chart_of(&self, t: &Tuple) -> Result<&ChartRef, Error> {
        Ok(&self.supports[self.support_of(t)?].chart)
    }

    pub fn contains(&self, t: &Tuple) -> bool {
        self.support_index(&t.support()).is_some()
    }

    /// All tuples of simplicial degree `p` present in the nerve, in
    /// lexicographic order.
    pub fn tuples(&self, p: usize) -> Vec<Tuple> {
        let n = self.opens.len() as u8;
        let mut out = Vec::new();
        let mut cur = alloc::vec![0u8; p + 1];
        loop {
            let t = Tuple(cur.clone());
            if self.contains(&t) {
                out.push(t);
            }
            // odometer increment
            let mut k = p + 1;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < n {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    /// Restriction substitution from the chart of support `from` into the
    /// chart of support `to` (identity when they coincide).
    pub fn restriction(&self, from: usize, to: usize) -> Result<Substitution, Error> {
        if from == to {
            return Ok(Substitution::identity(&self.supports[from].chart));
        }
        self.restrictions
            .iter()
            .find(|((f, t), _)| *f == from && *t == to)
            .map(|(_, s)| s.clone())
            .ok_or_else(|| {
                Error::MissingRestriction(alloc::format!(
                    "{} -> {}",
                    self.supports[from].chart.name, self.supports[to].chart.name
                ))
            })
    }

    /// Restriction from the chart of (the support of) `coarse` into the
    /// chart of `fine`; `coarse`'s support must be contained in `fine`'s.
    pub fn restriction_between(&self, coarse: &Tuple, fine: &Tuple) -> Result<Substitution, Error> {
        let from = self.support_of(coarse)?;
        let to = self.support_of(fine)?;
        self.restriction(from, to)
    }

    /// The `i`-th nerve face: the tuple with entry `i` dropped together
    /// with the substitution embedding its chart ring into this tuple's.
    pub fn nerve_face(&self, t: &Tuple, i: usize) -> Result<(Tuple, Substitution), Error> {
        if !self.contains(t) {
            return Err(Error::TupleNotInNerve(t.to_string()));
        }
        let face = t.face(i)?;
        let sub = self.restriction_between(&face, t)?;
        Ok((face, sub))
    }

    pub fn render_tuple(&self, t: &Tuple) -> String {
        let names: Vec<&str> = t.0.iter().map(|&i| self.opens[i as usize].as_str()).collect();
        alloc::format!("({})", names.join(","))
    }

    /// Structural validation: support family closed under subsets,
    /// restrictions present for every strictly nested declared pair and
    /// functorial along chains.
    pub fn validate(&self) -> Result<(), Error> {
        for s in &self.supports {
            if s.indices.is_empty() {
                return Err(Error::TupleNotInNerve("empty support declared".into()));
            }
            // every nonempty subset must be declared
            let items: Vec<u8> = s.indices.iter().copied().collect();
            let m = items.len();
            for mask in 1..(1u32 << m) {
                let sub: BTreeSet<u8> = (0..m)
                    .filter(|&k| mask & (1 << k) != 0)
                    .map(|k| items[k])
                    .collect();
                if self.support_index(&sub).is_none() {
                    return Err(Error::TupleNotInNerve(alloc::format!(
                        "subset {:?} of a declared support is not declared",
                        sub
                    )));
                }
            }
        }
        // restrictions for all strictly nested pairs
        for (a, sa) in self.supports.iter().enumerate() {
            for (b, sb) in self.supports.iter().enumerate() {
                if a != b && sa.indices.is_subset(&sb.indices) {
                    self.restriction(a, b)?;
                }
            }
        }
        // functoriality along declared chains
        for (a, sa) in self.supports.iter().enumerate() {
            for (b, sb) in self.supports.iter().enumerate() {
                if !(sa.indices.is_subset(&sb.indices) && a != b) {
                    continue;
                }
                for (c, sc) in self.supports.iter().enumerate() {
                    if !(sb.indices.is_subset(&sc.indices) && b != c) {
                        continue;
                    }
                    let direct = self.restriction(a, c)?;
                    let composed = self.restriction(a, b)?.then(&self.restriction(b, c)?)?;
                    for (x, y) in direct.images.iter().zip(&composed.images) {
                        if x != y {
                            return Err(Error::ChartMismatch(alloc::format!(
                                "restriction not functorial along {} -> {} -> {}",
                                sa.chart.name, sb.chart.name, sc.chart.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod testcover {
    use super::*;
    use crate::algebra::{Chart, Poly, Var};
    use alloc::vec;

    /// The two-open cover of the projective line: charts z on U1, w on U2,
    /// z invertible on the overlap, w -> 1/z.
    pub fn p1_cover() -> Cover {
        let u1 = Chart::new("U1", &["z"], vec![]).unwrap();
        let u2 = Chart::new("U2", &["w"], vec![]).unwrap();
        let u12 = Chart::new("U12", &["z"], vec![Poly::var(Var::Coord(0))]).unwrap();
        let s1 = Support {
            indices: [0u8].into_iter().collect(),
            chart: u1.clone(),
        };
        let s2 = Support {
            indices: [1u8].into_iter().collect(),
            chart: u2.clone(),
        };
        let s12 = Support {
            indices: [0u8, 1u8].into_iter().collect(),
            chart: u12.clone(),
        };
        let r1 = Substitution {
            from: u1.clone(),
            to: u12.clone(),
            images: vec![RatFunc::coord(&u12, 0)],
        };
        let r2 = Substitution {
            from: u2.clone(),
            to: u12.clone(),
            images: vec![RatFunc::one().div(&RatFunc::coord(&u12, 0)).unwrap()],
        };
        Cover {
            opens: vec!["U1".into(), "U2".into()],
            supports: vec![s1, s2, s12],
            restrictions: vec![((0, 2), r1), ((1, 2), r2)],
            depth: 1,
        }
    }

    #[test]
    fn p1_nerve_structure() {
        let c = p1_cover();
        c.validate().unwrap();
        assert_eq!(c.tuples(0).len(), 2);
        assert_eq!(c.tuples(1).len(), 4);
        assert_eq!(c.tuples(2).len(), 8);
        // face of (0,1) dropping entry 1 is (0) with the U1 -> U12 embedding
        let (face, sub) = c.nerve_face(&Tuple(vec![0, 1]), 1).unwrap();
        assert_eq!(face, Tuple(vec![0]));
        assert_eq!(sub.from.name, "U1");
        assert_eq!(sub.to.name, "U12");
        // degenerate tuple (0,0) has the chart of (0)
        let (dface, dsub) = c.nerve_face(&Tuple(vec![0, 0]), 0).unwrap();
        assert_eq!(dface, Tuple(vec![0]));
        assert!(dsub.is_identity());
    }

    #[test]
    fn nerve_face_simplicial_identity() {
        // dropping positions i < j in either order reaches the same tuple
        let c = p1_cover();
        for t in c.tuples(2) {
            for j in 1..3usize {
                for i in 0..j {
                    let a = t.face(j).unwrap().face(i).unwrap();
                    let b = t.face(i).unwrap().face(j - 1).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }
}
