//! Midpoint product rules for integrals against the invariant measure
//! `dμ(z) = y⁻² dx dy`.
//!
//! Vertical directions are parametrised by `t = ln y`, where the measure
//! becomes `e^{-t} dx dt` and the `y⁻²` blow-up at the real axis turns into
//! plain exponential decay. Discs around a centre use geodesic polar
//! coordinates, where the measure is `sinh r dr dφ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{geodesic_polar_point, UpperHalfPoint};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("integrand returned non-finite value {value} at {point}")]
    NonFinite { value: f64, point: UpperHalfPoint },
}

/// Lower boundary of a column region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Floor {
    /// `y ≥ level`.
    Constant(f64),
    /// `|z - centre| ≥ radius` (real centre).
    Arc { centre: f64, radius: f64 },
}

impl Floor {
    fn height(&self, x: f64) -> Option<f64> {
        match *self {
            Floor::Constant(level) => (level > 0.0).then_some(level),
            Floor::Arc { centre, radius } => {
                let h2 = radius * radius - (x - centre).powi(2);
                (h2 > 0.0).then(|| h2.sqrt())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GridRegion {
    /// `x ∈ [x_min, x_max]`, `ln y ∈ [t_min, t_max]`.
    Rectangle {
        x_min: f64,
        x_max: f64,
        t_min: f64,
        t_max: f64,
    },
    /// `x ∈ [x_min, x_max]`, `floor(x) ≤ y ≤ e^{t_max}`.
    Columns {
        x_min: f64,
        x_max: f64,
        floor: Floor,
        t_max: f64,
    },
    /// Hyperbolic disc of radius `r_max` around `centre`.
    Polar { centre: UpperHalfPoint, r_max: f64 },
}

impl GridRegion {
    /// The classical fundamental domain `{|x| ≤ 1/2, |z| ≥ 1}` of PSL(2,ℤ),
    /// truncated at height `e^{t_max}`.
    pub fn modular_domain(t_max: f64) -> Self {
        GridRegion::Columns {
            x_min: -0.5,
            x_max: 0.5,
            floor: Floor::Arc {
                centre: 0.0,
                radius: 1.0,
            },
            t_max,
        }
    }
}

/// Nodes and positive weights of a product midpoint rule. Weights already
/// include the invariant density.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    region: GridRegion,
    resolution: (usize, usize),
    nodes: Vec<(UpperHalfPoint, f64)>,
}

impl QuadratureGrid {
    /// `resolution` is `(x nodes, t nodes)` for rectangle and column regions
    /// and `(radial nodes, angular nodes)` for polar regions.
    pub fn new(region: GridRegion, resolution: (usize, usize)) -> Result<Self, QuadratureError> {
        let (n1, n2) = resolution;
        if n1 == 0 || n2 == 0 {
            return Err(QuadratureError::InvalidGrid("resolution must be positive".into()));
        }
        let bad = |msg: &str| Err(QuadratureError::InvalidGrid(msg.into()));
        let mut nodes = Vec::with_capacity(n1 * n2);
        match region {
            GridRegion::Rectangle {
                x_min,
                x_max,
                t_min,
                t_max,
            } => {
                if !(x_max > x_min && t_max > t_min) || ![x_min, x_max, t_min, t_max].iter().all(|v| v.is_finite()) {
                    return bad("rectangle bounds must be finite and increasing");
                }
                let hx = (x_max - x_min) / n1 as f64;
                let ht = (t_max - t_min) / n2 as f64;
                for ix in 0..n1 {
                    let x = x_min + (ix as f64 + 0.5) * hx;
                    for it in 0..n2 {
                        let t = t_min + (it as f64 + 0.5) * ht;
                        nodes.push((UpperHalfPoint { x, y: t.exp() }, hx * ht * (-t).exp()));
                    }
                }
            }
            GridRegion::Columns {
                x_min,
                x_max,
                floor,
                t_max,
            } => {
                if !(x_max > x_min) || !t_max.is_finite() {
                    return bad("column bounds must be finite and increasing");
                }
                let hx = (x_max - x_min) / n1 as f64;
                for ix in 0..n1 {
                    let x = x_min + (ix as f64 + 0.5) * hx;
                    let Some(y0) = floor.height(x) else {
                        return bad("floor must be positive across the column range");
                    };
                    let t0 = y0.ln();
                    if t0 >= t_max {
                        return bad("floor lies above the truncation height");
                    }
                    let ht = (t_max - t0) / n2 as f64;
                    for it in 0..n2 {
                        let t = t0 + (it as f64 + 0.5) * ht;
                        nodes.push((UpperHalfPoint { x, y: t.exp() }, hx * ht * (-t).exp()));
                    }
                }
            }
            GridRegion::Polar { centre, r_max } => {
                if !(r_max > 0.0 && r_max.is_finite()) {
                    return bad("polar radius must be positive and finite");
                }
                let hr = r_max / n1 as f64;
                let hphi = 2.0 * PI / n2 as f64;
                for ir in 0..n1 {
                    let r = (ir as f64 + 0.5) * hr;
                    let w = hr * hphi * r.sinh();
                    for ip in 0..n2 {
                        let phi = (ip as f64 + 0.5) * hphi;
                        nodes.push((geodesic_polar_point(centre, r, phi), w));
                    }
                }
            }
        }
        Ok(Self {
            region,
            resolution,
            nodes,
        })
    }

    pub fn region(&self) -> &GridRegion {
        &self.region
    }

    pub fn resolution(&self) -> (usize, usize) {
        self.resolution
    }

    pub fn nodes(&self) -> &[(UpperHalfPoint, f64)] {
        &self.nodes
    }

    /// Same region with half the nodes in each direction (rounded up).
    pub fn coarsened(&self) -> Result<Self, QuadratureError> {
        let (n1, n2) = self.resolution;
        Self::new(self.region, (n1.div_ceil(2), n2.div_ceil(2)))
    }

    /// Same region with twice the nodes in each direction.
    pub fn refined(&self) -> Result<Self, QuadratureError> {
        let (n1, n2) = self.resolution;
        Self::new(self.region, (2 * n1, 2 * n2))
    }

    /// `Σ wₖ f(zₖ)` in node order.
    pub fn integrate(&self, mut f: impl FnMut(UpperHalfPoint) -> f64) -> Result<f64, QuadratureError> {
        let mut total = 0.0;
        for &(z, w) in &self.nodes {
            let value = f(z);
            if !value.is_finite() {
                return Err(QuadratureError::NonFinite { value, point: z });
            }
            total += w * value;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_integrand() {
        let g = QuadratureGrid::new(GridRegion::modular_domain(10.0), (10, 10)).unwrap();
        assert_eq!(g.integrate(|_| 0.0).unwrap(), 0.0);
    }

    #[test]
    fn weights_positive_nodes_inside() {
        let g = QuadratureGrid::new(GridRegion::modular_domain(6.0), (40, 30)).unwrap();
        for &(z, w) in g.nodes() {
            assert!(w > 0.0);
            assert!(z.x().abs() <= 0.5 && z.x() * z.x() + z.y() * z.y() >= 1.0);
        }
    }

    #[test]
    fn rectangle_area_closed_form() {
        // ∫_0^1 ∫_1^e y⁻² dy dx = 1 - 1/e, integrand constant in x.
        let g = QuadratureGrid::new(
            GridRegion::Rectangle {
                x_min: 0.0,
                x_max: 1.0,
                t_min: 0.0,
                t_max: 1.0,
            },
            (1, 2000),
        )
        .unwrap();
        let area = g.integrate(|_| 1.0).unwrap();
        assert!((area - (1.0 - (-1f64).exp())).abs() < 1e-7);
    }

    #[test]
    fn polar_disc_area() {
        let c = UpperHalfPoint::new(0.3, 0.8).unwrap();
        let g = QuadratureGrid::new(GridRegion::Polar { centre: c, r_max: 2.0 }, (800, 4)).unwrap();
        let area = g.integrate(|_| 1.0).unwrap();
        assert!((area - crate::hyperbolic::disc_area(2.0)).abs() / area < 1e-5);
    }

    #[test]
    fn non_finite_rejected() {
        let g = QuadratureGrid::new(GridRegion::modular_domain(3.0), (4, 4)).unwrap();
        assert!(matches!(
            g.integrate(|_| f64::INFINITY),
            Err(QuadratureError::NonFinite { .. })
        ));
    }

    #[test]
    fn invalid_grids() {
        assert!(QuadratureGrid::new(GridRegion::modular_domain(3.0), (0, 4)).is_err());
        let wide = GridRegion::Columns {
            x_min: -2.0,
            x_max: 2.0,
            floor: Floor::Arc {
                centre: 0.0,
                radius: 1.0,
            },
            t_max: 3.0,
        };
        assert!(QuadratureGrid::new(wide, (10, 10)).is_err());
    }
}
