use serde::Serialize;

use crate::coleman::CurveIntegrator;
use crate::curvegeom::{DiscKind, LocalParameter, Point, RationalPoint, ResidueDisc};
use crate::error::{Error, Result};
use crate::padic::PadicNumber;
use crate::pseries::{strassmann_roots, TruncatedSeries};

/// A root of ρ on one disc and the point it parametrizes.
#[derive(Clone, Debug)]
pub struct LocusPoint {
    pub t: PadicNumber,
    pub point: Point,
}

/// What is known about one residue disc.
#[derive(Clone, Debug)]
pub enum DiscStatus {
    /// All roots in the disc, with Strassmann's bound and the series of the
    /// first annihilator.
    Resolved { series: TruncatedSeries, bound: usize, points: Vec<LocusPoint> },
    /// No S-integral point lies here (the disc is at infinity).
    Excluded(String),
    /// The disc could not be decided.
    Unresolved(String),
}

#[derive(Clone, Debug)]
pub struct DiscLocus {
    pub disc: ResidueDisc,
    pub status: DiscStatus,
}

/// Discs containing no S-integral points when p ∉ S.
fn excluded(disc: &ResidueDisc) -> Option<String> {
    (disc.kind == DiscKind::Infinite).then(|| format!("{} lies over infinity, where x is not p-integral", disc.label()))
}

/// The parametrized disc around its default center.
fn disc_center(ci: &CurveIntegrator, disc: &ResidueDisc) -> Result<Point> {
    ci.curve().default_center(disc)
}

/// ρ(t) = ∫_{P₀}^{center} ω + ∫_{center}^{P(t)} ω − c on one disc.
pub fn rho_series(
    ci: &CurveIntegrator,
    omega: &[PadicNumber],
    c: &PadicNumber,
    base: &Point,
    center: &Point,
) -> Result<(LocalParameter, TruncatedSeries)> {
    let (to_center, _) = ci.basis_integrals(base, center)?;
    let (lp, local) = ci.local_expansion(center)?;
    let p = ci.prime();
    let mut constant = -c;
    let mut s: Option<TruncatedSeries> = None;
    for ((a, i), f) in omega.iter().zip(&to_center).zip(&local) {
        if a.is_exact_zero() {
            continue;
        }
        constant = &constant + &(a * i);
        let term = f.scale(a);
        s = Some(match s {
            None => term,
            Some(acc) => acc.add(&term),
        });
    }
    let s = s.ok_or_else(|| Error::ZeroInput("the differential is zero".into()))?;
    let mut coeffs = s.coeffs().to_vec();
    coeffs[0] = &coeffs[0] + &constant.reduce_precision(ci.precision());
    let series = TruncatedSeries::new(p, coeffs, s.tail()).with_tail(s.tail());
    Ok((lp, series))
}

/// The zeros in one disc of ∫_{P₀}^P ω_k − c_k for every annihilator k.
///
/// Roots of the first series are kept when every other series also vanishes
/// there to working precision.
pub fn disc_locus(
    ci: &CurveIntegrator,
    omegas: &[Vec<PadicNumber>],
    constants: &[PadicNumber],
    disc: &ResidueDisc,
    base: &Point,
) -> DiscLocus {
    let status = match excluded(disc) {
        Some(why) => DiscStatus::Excluded(why),
        None => match locus_inner(ci, omegas, constants, disc, base) {
            Ok(s) => s,
            Err(e) => DiscStatus::Unresolved(format!("{}: {e}", e.kind())),
        },
    };
    DiscLocus { disc: disc.clone(), status }
}

fn locus_inner(
    ci: &CurveIntegrator,
    omegas: &[Vec<PadicNumber>],
    constants: &[PadicNumber],
    disc: &ResidueDisc,
    base: &Point,
) -> Result<DiscStatus> {
    if ci.is_restricted(disc) {
        return Err(Error::EndpointRestriction(format!("disc {} cannot be reached by the integrator", disc.label())));
    }
    let center = disc_center(ci, disc)?;
    let mut series = Vec::with_capacity(omegas.len());
    let mut lp = None;
    for (w, c) in omegas.iter().zip(constants) {
        let (l, s) = rho_series(ci, w, c, base, &center)?;
        lp = Some(l);
        series.push(s);
    }
    let lp = lp.ok_or_else(|| Error::Invalid("no annihilating differential".into()))?;
    let iso = strassmann_roots(&series[0])?;
    let mut points = Vec::new();
    for root in &iso.roots {
        let keep = series[1..].iter().try_fold(true, |ok, s| -> Result<bool> { Ok(ok && s.eval(&root.value)?.is_zero()) })?;
        if keep {
            let point = ci.curve().point_at(&lp, &root.value)?;
            points.push(LocusPoint { t: root.value.clone(), point });
        }
    }
    Ok(DiscStatus::Resolved { series: series.swap_remove(0), bound: iso.bound, points })
}

/// Loci on every residue disc, computed in parallel.
pub fn all_disc_loci(ci: &CurveIntegrator, omegas: &[Vec<PadicNumber>], constants: &[PadicNumber], base: &Point) -> Vec<DiscLocus> {
    let discs = ci.curve().residue_discs();
    std::thread::scope(|sc| {
        let handles: Vec<_> = discs
            .iter()
            .map(|d| sc.spawn(move || disc_locus(ci, omegas, constants, d, base)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("disc thread")).collect()
    })
}

/// How a locus point relates to the known points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateKind {
    MatchedKnown,
    ExtraPadic,
    UnresolvedDisc,
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub kind: CandidateKind,
    pub disc: String,
    pub point: Option<Point>,
    pub known: Option<RationalPoint>,
}

/// Sorts locus points into matched-known and extra, and lists unresolved
/// discs.
pub fn classify(ci: &CurveIntegrator, loci: &[DiscLocus], known: &[RationalPoint]) -> Result<Vec<Candidate>> {
    let embedded: Vec<(RationalPoint, Point)> =
        known.iter().map(|k| Ok((k.clone(), ci.point(k)?))).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for l in loci {
        match &l.status {
            DiscStatus::Resolved { points, .. } => {
                for lp in points {
                    let hit = embedded.iter().find(|(_, e)| {
                        (&e.x - &lp.point.x).is_zero() && (&e.y - &lp.point.y).is_zero()
                    });
                    out.push(Candidate {
                        kind: if hit.is_some() { CandidateKind::MatchedKnown } else { CandidateKind::ExtraPadic },
                        disc: l.disc.label(),
                        point: Some(lp.point.clone()),
                        known: hit.map(|(k, _)| k.clone()),
                    });
                }
            }
            DiscStatus::Unresolved(_) => out.push(Candidate {
                kind: CandidateKind::UnresolvedDisc,
                disc: l.disc.label(),
                point: None,
                known: None,
            }),
            DiscStatus::Excluded(_) => {}
        }
    }
    Ok(out)
}
