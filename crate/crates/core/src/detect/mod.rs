//! Kernel detection for mapping-class-group representations: compares the
//! quantum-trace supports of α and φ(α) modulo the central sublattice and
//! emits a certificate when some coset separates them.

mod lifts;

pub use lifts::{reduced_character_space, CharacterSpace};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::curves::{
    act_on_curve, brute_force_states, check_supplied_image, coset_fibers, enumerate_admissible_states, torus_curve,
    MappingClass, NormalCurve, TraceSupport, DEFAULT_STATE_CAP,
};
use crate::error::{Error, Result};
use crate::exact::Lattice;
use crate::repvar::Cell;
use crate::surface::{balanced_lattice, definitional_kernel, refined_lattice};

/// Above this many intersection points the witness is re-checked with the
/// strand DP instead of the 2^m enumerator.
pub const REVERIFY_BRUTE_MAX: usize = 20;

pub const LIFT_ASSUMPTION: &str = "delta-liftable";

#[derive(Clone, Debug)]
pub struct DetectionRequest {
    pub n: u64,
    pub cell: Cell,
    pub alpha: NormalCurve,
    pub phi: MappingClass,
    /// φ(α), required in genus ≥ 2
    pub beta: Option<NormalCurve>,
    pub state_cap: usize,
}

impl DetectionRequest {
    pub fn new(n: u64, cell: Cell, alpha: NormalCurve, phi: MappingClass) -> Self {
        DetectionRequest { n, cell, alpha, phi, beta: None, state_cap: DEFAULT_STATE_CAP }
    }

    /// Genus-one request for the curve of slope (p, q).
    pub fn torus(n: u64, p: i64, q: i64, phi: MappingClass) -> Result<Self> {
        Ok(Self::new(n, Cell::Reduced, torus_curve(p, q)?, phi))
    }

    pub fn with_beta(mut self, beta: NormalCurve) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn with_cell(mut self, cell: Cell) -> Self {
        self.cell = cell;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.state_cap = cap;
        self
    }

    pub fn genus(&self) -> usize {
        self.alpha.triangulation().genus()
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 || self.n % 2 == 0 {
            return Err(Error::BadN { got: self.n, min: 3 });
        }
        if self.alpha.weight() == 0 || !self.alpha.is_closed() || !self.alpha.is_connected() {
            return Err(Error::InvalidCurve("α must be a nonempty connected closed curve".into()));
        }
        if self.phi.genus() != self.genus() {
            return Err(Error::InvalidMappingClass(format!(
                "mapping class of genus {} on a genus {} surface",
                self.phi.genus(),
                self.genus()
            )));
        }
        Ok(())
    }

    /// β = φ(α): computed in genus one, otherwise the supplied curve after a
    /// homology consistency check.
    pub fn image(&self) -> Result<NormalCurve> {
        match &self.beta {
            Some(b) => {
                if b.triangulation() != self.alpha.triangulation() && **b.triangulation() != **self.alpha.triangulation()
                {
                    return Err(Error::InvalidCurve("β lives on a different triangulation".into()));
                }
                if !b.is_closed() || !b.is_connected() || b.weight() == 0 {
                    return Err(Error::InvalidCurve("β must be a nonempty connected closed curve".into()));
                }
                if !check_supplied_image(&self.phi, &self.alpha, b)? {
                    return Err(Error::InvalidCurve("β is not in the homology class of φ(α)".into()));
                }
                Ok(b.clone())
            }
            None => act_on_curve(&self.phi, &self.alpha),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedNontrivial,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    IsotopicCurves,
    CapExceeded,
    FibersAmbiguous,
    BoundExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// both curves within the N-1 intersection bound
    Bound,
    Support,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    /// canonical coset representative modulo the central sublattice
    pub k: Vec<i128>,
    /// the support element with a single admissible state
    pub element: Vec<i128>,
    pub fiber_alpha: u64,
    pub fiber_beta: u64,
    /// true when the empty fiber sits on the β side
    pub swapped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Reverification {
    pub method: String,
    pub fiber_alpha: u64,
    pub fiber_beta: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub verdict: Verdict,
    pub route: Route,
    pub genus: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub cell: Cell,
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
    pub max_intersections: [u64; 2],
    pub bound: u64,
    pub witness: Option<Witness>,
    pub reasons: Vec<Reason>,
    pub assumptions: Vec<String>,
    /// the verdict holds for every lift of the orbit's central character
    pub lift_independent: bool,
    pub reverification: Option<Reverification>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedNontrivial
    }
}

/// The central sublattice together with the map placing support elements in
/// its ambient space.
struct CentralFrame {
    kernel: Lattice,
    pad: bool,
}

impl CentralFrame {
    fn new(alpha: &NormalCurve, cell: Cell, n: u64) -> Result<Self> {
        let t = alpha.triangulation().clone();
        Ok(match cell {
            Cell::Reduced => CentralFrame { kernel: definitional_kernel(&balanced_lattice(t), n as i128), pad: false },
            Cell::Big => CentralFrame { kernel: refined_lattice(t)?.definitional_kernel(n as i128), pad: true },
        })
    }

    fn place(&self, s: &TraceSupport) -> TraceSupport {
        if !self.pad {
            return s.clone();
        }
        let fibers = s
            .fibers
            .iter()
            .map(|(k, &f)| {
                let mut k = k.clone();
                k.push(0);
                (k, f)
            })
            .collect();
        TraceSupport { fibers, ..s.clone() }
    }

    fn fiber_of(&self, s: &TraceSupport, coset: &[i128]) -> u64 {
        self.place(s).fibers.iter().filter(|(k, _)| self.kernel.reduce(k) == coset).map(|(_, &f)| f).sum()
    }
}

type Fibers = BTreeMap<Vec<i128>, (Vec<Vec<i128>>, u64)>;

fn find_witness(fa: &Fibers, fb: &Fibers) -> Option<Witness> {
    let lonely = |own: &Fibers, other: &Fibers| {
        own.iter()
            .find(|(k, (_, total))| *total == 1 && !other.contains_key(*k))
            .map(|(k, (elems, _))| (k.clone(), elems[0].clone()))
    };
    if let Some((k, element)) = lonely(fb, fa) {
        return Some(Witness { k, element, fiber_alpha: 0, fiber_beta: 1, swapped: false });
    }
    lonely(fa, fb).map(|(k, element)| Witness { k, element, fiber_alpha: 1, fiber_beta: 0, swapped: true })
}

fn reverify(frame: &CentralFrame, alpha: &NormalCurve, beta: &NormalCurve, w: &Witness, cap: usize) -> Result<Reverification> {
    let m = alpha.num_points().max(beta.num_points());
    let (method, sa, sb) = if m <= REVERIFY_BRUTE_MAX {
        ("brute-force", brute_force_states(alpha)?, brute_force_states(beta)?)
    } else {
        ("strand-dp", enumerate_admissible_states(alpha, cap)?, enumerate_admissible_states(beta, cap)?)
    };
    let fiber_alpha = frame.fiber_of(&sa, &w.k);
    let fiber_beta = frame.fiber_of(&sb, &w.k);
    let ok = fiber_alpha == w.fiber_alpha && fiber_beta == w.fiber_beta;
    Ok(Reverification { method: method.into(), fiber_alpha, fiber_beta, ok })
}

struct Prepared {
    alpha: NormalCurve,
    beta: NormalCurve,
    base: Certificate,
}

fn prepare(req: &DetectionRequest, route: Route) -> Result<Prepared> {
    req.validate()?;
    let beta = req.image()?;
    let base = Certificate {
        verdict: Verdict::Inconclusive,
        route,
        genus: req.genus(),
        n: req.n,
        cell: req.cell,
        alpha: req.alpha.coords().to_vec(),
        beta: beta.coords().to_vec(),
        max_intersections: [req.alpha.max_intersection(), beta.max_intersection()],
        bound: req.n - 1,
        witness: None,
        reasons: vec![],
        assumptions: vec![LIFT_ASSUMPTION.into()],
        lift_independent: true,
        reverification: None,
    };
    Ok(Prepared { alpha: req.alpha.clone(), beta, base })
}

fn search(req: &DetectionRequest, p: Prepared) -> Result<Certificate> {
    let Prepared { alpha, beta, mut base } = p;
    if alpha == beta {
        base.reasons.push(Reason::IsotopicCurves);
        return Ok(base);
    }
    let frame = CentralFrame::new(&alpha, req.cell, req.n)?;
    let sa = frame.place(&enumerate_admissible_states(&alpha, req.state_cap)?);
    let sb = frame.place(&enumerate_admissible_states(&beta, req.state_cap)?);
    let fa = coset_fibers(&sa, &frame.kernel);
    let fb = coset_fibers(&sb, &frame.kernel);
    let Some(w) = find_witness(&fa, &fb) else {
        base.reasons.push(Reason::FibersAmbiguous);
        return Ok(base);
    };
    let check = reverify(&frame, &alpha, &beta, &w, req.state_cap)?;
    if check.ok {
        base.verdict = Verdict::CertifiedNontrivial;
        base.witness = Some(w);
    } else {
        base.reasons.push(Reason::FibersAmbiguous);
    }
    base.reverification = Some(check);
    Ok(base)
}

/// Detection under the N-1 intersection bound on both curves.
pub fn detect_within_bound(req: &DetectionRequest) -> Result<Certificate> {
    let mut p = prepare(req, Route::Bound)?;
    if p.alpha != p.beta && p.base.max_intersections.iter().any(|&x| x > p.base.bound) {
        p.base.reasons.push(Reason::BoundExceeded);
        return Ok(p.base);
    }
    search(req, p)
}

/// Detection by a separating coset of the supports, with no bound.
pub fn detect_support(req: &DetectionRequest) -> Result<Certificate> {
    let p = prepare(req, Route::Support)?;
    search(req, p)
}

fn cap_exceeded(req: &DetectionRequest, route: Route) -> Result<Certificate> {
    let mut c = prepare(req, route)?.base;
    c.reasons.push(Reason::CapExceeded);
    Ok(c)
}

/// The bound route first, falling back to the support route when a curve
/// exceeds the bound. An enumeration cap becomes an inconclusive verdict.
pub fn detect(req: &DetectionRequest) -> Result<Certificate> {
    let first = match detect_within_bound(req) {
        Err(Error::CapExceeded { .. }) => return cap_exceeded(req, Route::Bound),
        r => r?,
    };
    if !first.reasons.contains(&Reason::BoundExceeded) {
        return Ok(first);
    }
    match detect_support(req) {
        Err(Error::CapExceeded { .. }) => {
            let mut c = cap_exceeded(req, Route::Support)?;
            c.reasons.insert(0, Reason::BoundExceeded);
            Ok(c)
        }
        Ok(mut c) => {
            if !c.is_certified() {
                c.reasons.insert(0, Reason::BoundExceeded);
            }
            Ok(c)
        }
        Err(e) => Err(e),
    }
}
