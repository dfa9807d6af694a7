use serde::Serialize;

use crate::error::{Error, Result};

/// Variance below which a state is treated as an eigenstate and both moment
/// formulas return `c1`.
pub const EIGENSTATE_VARIANCE: f64 = 1e-12;

/// Relative size under which a QCM4 denominator counts as zero.
const QCM4_RELATIVE_TOL: f64 = 1e-12;

/// Connected moments `c1…c4` of a state with respect to `H`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CumulantSet {
    pub c: [f64; 4],
}

impl CumulantSet {
    pub fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        Self {
            c: [c1, c2, c3, c4],
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Cumulants from raw moments `(<H>, <H^2>, <H^3>, <H^4>)` via
/// `c_m = <H^m> - Σ_{p=0}^{m-2} C(m-1, p) c_{p+1} <H^{m-p-1}>`.
pub fn cumulants(moments: &[f64; 4]) -> CumulantSet {
    let mut c = [0.0; 4];
    for m in 1..=4 {
        let mut v = moments[m - 1];
        for p in 0..m.saturating_sub(1) {
            v -= binomial(m - 1, p) * c[p] * moments[m - p - 2];
        }
        c[m - 1] = v;
    }
    CumulantSet { c }
}

/// Lanczos-cumulant estimate
/// `c1 - c2² / (c3² - c2 c4) · (√(3c3² - 2c2c4) - c3)`.
pub fn qcm4(set: &CumulantSet) -> Result<f64> {
    let [c1, c2, c3, c4] = set.c;
    if c2 < EIGENSTATE_VARIANCE {
        return Ok(c1);
    }
    let scale = c3 * c3 + (c2 * c4).abs();
    let disc = 3.0 * c3 * c3 - 2.0 * c2 * c4;
    if disc <= QCM4_RELATIVE_TOL * scale {
        return Err(Error::DegenerateCumulants(disc));
    }
    let denom = c3 * c3 - c2 * c4;
    if denom.abs() <= QCM4_RELATIVE_TOL * scale {
        return Err(Error::DegenerateCumulants(disc));
    }
    Ok(c1 - c2 * c2 / denom * (disc.sqrt() - c3))
}

/// t-expansion estimate `c1 - c2² / c3`.
pub fn cmx2(set: &CumulantSet) -> Result<f64> {
    let [c1, c2, c3, _] = set.c;
    if c2 < EIGENSTATE_VARIANCE {
        return Ok(c1);
    }
    if c3.abs() <= 1e-12 {
        return Err(Error::ZeroThirdCumulant);
    }
    Ok(c1 - c2 * c2 / c3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_state_under_z() {
        let c = cumulants(&[0.0, 1.0, 0.0, 1.0]).c;
        assert_eq!(c, [0.0, 1.0, 0.0, -2.0]);
    }

    #[test]
    fn eigenstate_cumulants_vanish() {
        let e: f64 = -1.7;
        let c = cumulants(&[e, e * e, e.powi(3), e.powi(4)]).c;
        assert!((c[0] - e).abs() < 1e-15);
        assert!(c[1..].iter().all(|x| x.abs() < 1e-12));
        assert_eq!(qcm4(&CumulantSet::new(e, 0.0, 0.0, 0.0)).unwrap(), e);
        assert_eq!(cmx2(&CumulantSet::new(e, 0.0, 0.0, 0.0)).unwrap(), e);
    }

    #[test]
    fn two_point_example() {
        // √0.9|0> + √0.1|1> under Z: moments alternate 0.8, 1.
        let set = cumulants(&[0.8, 1.0, 0.8, 1.0]);
        let want = [0.8, 0.36, -0.576, 0.6624];
        for (a, b) in set.c.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((qcm4(&set).unwrap() + 1.0).abs() < 1e-12);
        assert!((cmx2(&set).unwrap() - 1.025).abs() < 1e-12);
    }

    #[test]
    fn guards() {
        assert_eq!(
            cmx2(&CumulantSet::new(0.0, 1.0, 0.0, -2.0)),
            Err(Error::ZeroThirdCumulant)
        );
        assert!(matches!(
            qcm4(&CumulantSet::new(0.0, 1.0, 0.1, 2.0)),
            Err(Error::DegenerateCumulants(d)) if d < 0.0
        ));
    }
}
