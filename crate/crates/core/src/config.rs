//! Numerical defaults shared by every module.
//!
//! | knob          | default | meaning                                             |
//! |---------------|---------|-----------------------------------------------------|
//! | `rel_tol`     | 1e-10   | relative tolerance of every adaptive quadrature     |
//! | `max_depth`   | 40      | bisection depth limit of the adaptive quadrature    |
//! | `sup_count`   | 4096    | nodes of the `u`-grid used by supremum searches     |
//! | `golden_tol`  | 1e-8    | relative width at which golden-section search stops |
//! | `u_max`       | 35      | `u = 1 - Log t` upper end of discretization grids   |
//! | `panels`      | 600     | panels of a discretized model                       |
//! | `k_nodes`     | 200     | nodes of a K-curve                                  |
//! | `ceiling`     | 64      | largest admissible two-sided ratio bracket          |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumConfig {
    pub rel_tol: f64,
    pub max_depth: u32,
    pub sup_count: usize,
    pub golden_tol: f64,
    pub u_max: f64,
    pub panels: usize,
    pub k_nodes: usize,
    pub ceiling: f64,
}

impl Default for NumConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_depth: 40,
            sup_count: 4096,
            golden_tol: 1e-8,
            u_max: 35.0,
            panels: 600,
            k_nodes: 200,
            ceiling: 64.0,
        }
    }
}

impl NumConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-4) {
            return Err(Error::BadParameter(format!("rel_tol = {} outside (0, 1e-4]", self.rel_tol)));
        }
        if !(self.u_max > 1.0) || !self.u_max.is_finite() {
            return Err(Error::BadParameter(format!("u_max = {} must exceed 1", self.u_max)));
        }
        if self.panels < 2 || self.sup_count < 2 || self.k_nodes < 2 {
            return Err(Error::BadParameter("grid counts must be at least 2".into()));
        }
        if !(self.ceiling >= 1.0) {
            return Err(Error::BadParameter(format!("ceiling = {} must be at least 1", self.ceiling)));
        }
        Ok(())
    }

    /// The configuration used for the drift measurement: panel, supremum and
    /// K-curve node counts doubled.
    pub fn refined(&self) -> Self {
        Self {
            panels: self.panels * 2,
            sup_count: self.sup_count * 2,
            k_nodes: self.k_nodes * 2,
            ..*self
        }
    }
}
