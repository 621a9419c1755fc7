//! Finite subgroups of SL2, Hom(π_1, H), mapping-class orbits and the
//! dimension of the associated representations.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::sl2::{moment_map, Cell, SL2Mat, SL2Rep};
use crate::curves::FreeAutomorphism;
use crate::error::{Error, Result};
use crate::exact::{rat, Cyclotomic};

pub const MAX_GROUP_ORDER: usize = 10_000;

/// Closure of a generating set under multiplication, sorted.
pub fn group_closure(gens: &[SL2Mat]) -> Result<Vec<SL2Mat>> {
    let order = gens.first().map_or(1, |g| g.order());
    let mut elems: BTreeSet<SL2Mat> = BTreeSet::from([SL2Mat::identity(order)]);
    let mut frontier: Vec<SL2Mat> = vec![SL2Mat::identity(order)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = x.mul(g);
                if elems.insert(y.clone()) {
                    if elems.len() > MAX_GROUP_ORDER {
                        return Err(Error::ClosureBlowup(MAX_GROUP_ORDER));
                    }
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Ok(elems.into_iter().collect())
}

/// The quaternion group Q_8 over Q(ζ_4).
pub fn quaternion_generators() -> Vec<SL2Mat> {
    let i = Cyclotomic::zeta(4);
    let z = Cyclotomic::zero(4);
    vec![
        SL2Mat::from_ints(4, [[0, 1], [-1, 0]]).unwrap(),
        SL2Mat::new(i.clone(), z.clone(), z, -&i).unwrap(),
    ]
}

/// The binary tetrahedral group (order 24) over Q(ζ_4): Q_8 together with
/// ½[[1+i, 1+i], [−1+i, 1−i]].
pub fn binary_tetrahedral_generators() -> Vec<SL2Mat> {
    let i = Cyclotomic::zeta(4);
    let one = Cyclotomic::one(4);
    let half = Cyclotomic::from_rational(4, &rat(1, 2));
    let w = SL2Mat::new(
        &half * &(&one + &i),
        &half * &(&one + &i),
        &half * &(&i - &one),
        &half * &(&one - &i),
    )
    .unwrap();
    let mut g = quaternion_generators();
    g.push(w);
    g
}

/// Every homomorphism π_1(Σ_g,1) → H (π_1 is free, so all 2g-tuples).
pub fn enumerate_hom_to_finite(gens: &[SL2Mat], genus: usize) -> Result<Vec<SL2Rep>> {
    let h = group_closure(gens)?;
    let total = h.len().checked_pow(2 * genus as u32).filter(|&n| n <= 10_000_000);
    if total.is_none() {
        return Err(Error::ClosureBlowup(h.len()));
    }
    let mut out = vec![Vec::new()];
    for _ in 0..2 * genus {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<SL2Mat>| {
                h.iter().map(move |m| {
                    let mut p = prefix.clone();
                    p.push(m.clone());
                    p
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(|images| SL2Rep { genus, images }).collect())
}

#[derive(Clone, Debug)]
pub struct OrbitData {
    pub generators: Vec<FreeAutomorphism>,
    pub points: Vec<SL2Rep>,
    pub cell: Cell,
    pub moment: SL2Mat,
}

impl OrbitData {
    pub fn genus(&self) -> usize {
        self.points.first().map_or(0, |p| p.genus)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Breadth-first closure of the seeds under the generators. Frontier
/// children are computed in parallel and deduplicated in a sorted set.
pub fn orbit_closure(seeds: &[SL2Rep], gens: &[FreeAutomorphism], cap: usize) -> Result<OrbitData> {
    if cap == 0 {
        return Err(Error::OrbitCap(0));
    }
    let first = seeds.first().ok_or_else(|| Error::Dimension("no seed representation".into()))?;
    for g in gens {
        if g.genus != first.genus || !g.validate() {
            return Err(Error::InvalidMappingClass(format!("generator {:?} rejected", g.to_words())));
        }
    }
    let moment = moment_map(first);
    let mut seen: BTreeSet<SL2Rep> = BTreeSet::new();
    let mut frontier: Vec<SL2Rep> = Vec::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            frontier.push(s.clone());
        }
    }
    while !frontier.is_empty() {
        let children: Vec<SL2Rep> =
            frontier.par_iter().flat_map_iter(|r| gens.iter().map(move |g| r.act(g))).collect();
        let mut next = Vec::new();
        for c in children {
            if !seen.contains(&c) {
                if moment_map(&c) != moment {
                    return Err(Error::MomentNotConstant);
                }
                seen.insert(c.clone());
                if seen.len() > cap {
                    return Err(Error::OrbitCap(cap));
                }
                next.push(c);
            }
        }
        frontier = next;
    }
    if seeds.iter().any(|s| moment_map(s) != moment) {
        return Err(Error::MomentNotConstant);
    }
    let cell = if moment.a.is_zero() { Cell::Reduced } else { Cell::Big };
    Ok(OrbitData { generators: gens.to_vec(), points: seen.into_iter().collect(), cell, moment })
}

/// N^{3g}|O| over the big cell, N^{3g−1}|O| over the reduced cell.
pub fn rep_dimension_formula(genus: usize, n: u64, cell: Cell, size: usize) -> u128 {
    let exp = match cell {
        Cell::Big => 3 * genus as u32,
        Cell::Reduced => 3 * genus as u32 - 1,
    };
    (n as u128).pow(exp) * size as u128
}

pub fn rep_dimension(o: &OrbitData, n: u64) -> u128 {
    rep_dimension_formula(o.genus(), n, o.cell, o.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitSummary {
    pub genus: usize,
    pub size: usize,
    pub cell: Cell,
    pub moment: [String; 4],
    pub dimension: Option<u128>,
}

impl OrbitData {
    pub fn summary(&self, n: Option<u64>) -> OrbitSummary {
        OrbitSummary {
            genus: self.genus(),
            size: self.len(),
            cell: self.cell,
            moment: self.moment.entries().map(|c| c.to_string()),
            dimension: n.map(|n| rep_dimension(self, n)),
        }
    }
}

/// The built-in torus twists T_α and T_β.
pub fn torus_twists() -> Vec<FreeAutomorphism> {
    vec![FreeAutomorphism::twist_alpha(), FreeAutomorphism::twist_beta()]
}

/// A representation into the binary tetrahedral group whose moment is
/// [[0,-1],[1,0]].
pub fn reduced_cell_example() -> SL2Rep {
    let target = SL2Mat::from_ints(4, [[0, -1], [1, 0]]).unwrap();
    enumerate_hom_to_finite(&binary_tetrahedral_generators(), 1)
        .unwrap()
        .into_iter()
        .find(|r| moment_map(r) == target)
        .expect("some commutator in the binary tetrahedral group is -j")
}
