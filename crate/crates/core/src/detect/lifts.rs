use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{intmat::gcd, Cyclotomic};
use crate::repvar::{moment_map, Cell, SL2Mat, SL2Rep};

/// Lifts (ρ, z) of a reduced-cell point: μ(ρ) = [[0, -z^-N], [z^N, d]].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CharacterSpace {
    #[serde(rename = "N")]
    pub n: u64,
    pub cyclotomic_order: u32,
    pub moment: [Cyclotomic; 4],
    pub lifts: Vec<Cyclotomic>,
    /// z^N = 1 for every lift
    pub unit_lifts: bool,
}

fn lcm(a: u32, b: u32) -> u32 {
    (a as i128 / gcd(a as i128, b as i128) * b as i128) as u32
}

pub fn reduced_character_space(rho: &SL2Rep, n: u64) -> Result<CharacterSpace> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::BadN { got: n, min: 3 });
    }
    let mu = moment_map(rho);
    if SL2Rep::cell(rho) != Cell::Reduced {
        return Err(Error::NotReduced);
    }
    let m = mu.order();
    let orders = [lcm(m, n as u32), lcm(m, n as u32) * n as u32];
    let (mu, z) = orders
        .iter()
        .find_map(|&o| {
            let mu = mu.embed(o).ok()?;
            let z = mu.c.try_root(n).ok()?;
            Some((mu, z))
        })
        .ok_or(Error::NoRoot(n, m))?;
    let order = mu.order();
    let lifts: Vec<Cyclotomic> = (0..n as i64)
        .map(|j| z.try_mul(&Cyclotomic::zeta_pow(order, j * (order as i64 / n as i64))))
        .collect::<Result<_>>()?;
    for w in &lifts {
        let zn = w.pow(n as i64)?;
        let rebuilt = SL2Mat::new(Cyclotomic::zero(order), -zn.inv()?, zn.clone(), mu.d.clone())?;
        debug_assert_eq!(rebuilt, mu);
        if rebuilt != mu {
            return Err(Error::NotReduced);
        }
    }
    let unit_lifts = lifts.iter().all(|w| w.pow(n as i64).map(|p| p.is_one()).unwrap_or(false));
    Ok(CharacterSpace {
        n,
        cyclotomic_order: order,
        moment: [mu.a.clone(), mu.b.clone(), mu.c.clone(), mu.d.clone()],
        lifts,
        unit_lifts,
    })
}
