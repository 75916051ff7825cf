//! Reference parameter sets: the zero-centred ridge catalogs and the four
//! simulation scenarios used to compare TR-PCA with angular PCA.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::Result;
use crate::geometry::TorusPoint;
use crate::models::{rng_stream, sample_with_rng, BsvmParams, BwcParams, BwnParams, ModelParams};

/// `(κ1, κ2, λ)` of the zero-centred sine von Mises ridge catalog.
pub const BSVM_RIDGE_CATALOG: [(f64, f64, f64); 4] =
    [(0.3, 0.15, 0.25), (0.3, 0.6, 0.5), (0.3, 0.3, 1.0), (1.0, 0.5, 1.5)];

/// `(ξ1, ξ2, ρ)` of the zero-centred wrapped Cauchy ridge catalog.
pub const BWC_RIDGE_CATALOG: [(f64, f64, f64); 4] =
    [(0.15, 0.075, 0.25), (0.2, 0.7, 0.2), (0.3, 0.3, 0.6), (0.025, 0.6, 0.7)];

/// The eight zero-centred catalog models, sine von Mises first.
pub fn ridge_catalog() -> Vec<ModelParams<f64>> {
    let bsvm = BSVM_RIDGE_CATALOG
        .iter()
        .map(|&(k1, k2, l)| ModelParams::Bsvm(BsvmParams::new(0.0, 0.0, k1, k2, l).expect("valid catalog entry")));
    let bwc = BWC_RIDGE_CATALOG
        .iter()
        .map(|&(x1, x2, r)| ModelParams::Bwc(BwcParams::new(0.0, 0.0, x1, x2, r).expect("valid catalog entry")));
    bsvm.chain(bwc).collect()
}

/// Ten sine von Mises and ten wrapped Cauchy models used to check normalization.
pub fn normalization_catalog() -> Vec<ModelParams<f64>> {
    let mut out = ridge_catalog();
    let extra_bsvm = [
        (0.0, 0.0, 0.0, 1.0, 0.0),
        (0.0, 0.0, 1.0, 1.0, 2.0),
        (1.0, -2.0, 2.0, 1.0, 0.5),
        (-3.0, 0.5, 0.0, 0.0, 2.5),
        (0.0, 0.0, 4.0, 0.5, -1.0),
        (2.0, 2.0, 1.5, 1.5, -0.8),
    ];
    let extra_bwc = [
        (0.0, 0.0, 0.0, 0.5, 0.0),
        (0.0, 0.0, 0.4, 0.4, 0.6),
        (1.0, 2.0, 0.5, 0.1, -0.75),
        (-1.0, 0.0, 0.6, 0.3, 0.0),
        (0.0, 0.0, 0.8, 0.2, 0.5),
        (3.0, -3.0, 0.1, 0.9, -0.3),
    ];
    out.extend(extra_bsvm.iter().map(|&(m1, m2, k1, k2, l)| {
        ModelParams::Bsvm(BsvmParams::new(m1, m2, k1, k2, l).expect("valid catalog entry"))
    }));
    out.extend(
        extra_bwc
            .iter()
            .map(|&(m1, m2, x1, x2, r)| ModelParams::Bwc(BwcParams::new(m1, m2, x1, x2, r).expect("valid catalog entry"))),
    );
    out
}

/// One of the four illustrative comparison scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Concentrated wrapped normal.
    ConcentratedBwn,
    /// Spread wrapped normal with strong correlation.
    SpreadBwn,
    /// Wrapped Cauchy with negative dependence.
    Bwc,
    /// Equal mixture of two wrapped normals (a Simpson's paradox configuration).
    BwnMixture,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::ConcentratedBwn,
        Scenario::SpreadBwn,
        Scenario::Bwc,
        Scenario::BwnMixture,
    ];

    /// 1-based scenario number.
    pub fn number(self) -> usize {
        match self {
            Scenario::ConcentratedBwn => 1,
            Scenario::SpreadBwn => 2,
            Scenario::Bwc => 3,
            Scenario::BwnMixture => 4,
        }
    }

    pub fn from_number(n: usize) -> Option<Scenario> {
        Scenario::ALL.get(n.checked_sub(1)?).copied()
    }

    /// Mixture components (a single one except for the mixture scenario).
    pub fn components(self) -> Vec<ModelParams<f64>> {
        let bwn = |m1: f64, m2: f64, s1: f64, s2: f64, r: f64| {
            ModelParams::Bwn(BwnParams::new(TorusPoint::new(m1, m2), s1, s2, r).expect("valid scenario"))
        };
        match self {
            Scenario::ConcentratedBwn => vec![bwn(-PI, 0.0, 0.2, 0.8, 0.35)],
            Scenario::SpreadBwn => vec![bwn(FRAC_PI_2, 0.0, 3.0, 1.5, 0.85)],
            Scenario::Bwc => vec![ModelParams::Bwc(
                BwcParams::new(1.0, 2.0, 0.5, 0.1, -0.75).expect("valid scenario"),
            )],
            Scenario::BwnMixture => vec![
                bwn(FRAC_PI_2, -FRAC_PI_2, 0.4, 0.16, 0.35),
                bwn(-FRAC_PI_2, FRAC_PI_2, 0.16, 0.4, 0.35),
            ],
        }
    }

    /// Draws `n` points; mixtures are split into equal halves. Returns the
    /// points and the component label of each.
    pub fn sample(self, n: usize, seed: u64) -> Result<(Vec<TorusPoint<f64>>, Vec<usize>)> {
        let comps = self.components();
        let k = comps.len();
        let mut points = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for (label, comp) in comps.iter().enumerate() {
            let size = n / k + usize::from(label < n % k);
            if size == 0 {
                continue;
            }
            let mut rng = rng_stream(seed, label as u64);
            points.extend(sample_with_rng(comp, size, &mut rng)?);
            labels.extend(std::iter::repeat(label).take(size));
        }
        Ok((points, labels))
    }
}
