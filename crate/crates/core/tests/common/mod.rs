//! Configurations shared by the integration and acceptance targets.
#![allow(dead_code)]

use hardy_core::admissibility::{check_space, power_weights, PowerWeightParams};
use hardy_core::exponents::ExponentConfig;
use hardy_core::functionals::{HardyProblem, TestFunction};
use hardy_core::spaces::SpaceModel;

pub struct Case {
    pub label: &'static str,
    pub space: SpaceModel,
    pub p: f64,
    pub q: f64,
    pub params: PowerWeightParams,
}

impl Case {
    pub fn exponents(&self) -> ExponentConfig {
        ExponentConfig::new(self.p, self.q).unwrap()
    }

    /// Power weights on flat spaces, sinh-power weights on curved ones.
    pub fn problem(&self) -> HardyProblem {
        let (u, v) = power_weights(self.params, &self.space).unwrap();
        HardyProblem::new(self.space.clone(), u, v, self.exponents())
    }

    pub fn admissible(&self) -> bool {
        check_space(self.params, &self.space, &self.exponents())
            .unwrap()
            .admissible
    }
}

fn case(label: &'static str, space: SpaceModel, p: f64, q: f64, a1: f64, a2: f64, b: f64) -> Case {
    Case {
        label,
        space,
        p,
        q,
        params: PowerWeightParams::new(a1, a2, b),
    }
}

/// Admissible configurations over every geometry and exponent pair in scope.
pub fn admissible_suite() -> Vec<Case> {
    let flat = |d| SpaceModel::homogeneous(d).unwrap();
    let hyp = |n| SpaceModel::hyperbolic(n).unwrap();
    let ch = |n, b| SpaceModel::cartan_hadamard(n, b).unwrap();
    vec![
        case("R1 (2,1) (0,-2,0)", flat(1.0), 2.0, 1.0, 0.0, -2.0, 0.0),
        case("R3 (2,1) (0,-6,0)", flat(3.0), 2.0, 1.0, 0.0, -6.0, 0.0),
        case("H2 (2,1) (0,-3,0)", hyp(2), 2.0, 1.0, 0.0, -3.0, 0.0),
        case("H3 (3,1.5) (0,-5,0)", hyp(3), 3.0, 1.5, 0.0, -5.0, 0.0),
        case("CH b=0 n=3 (4,2) (0,-9,0)", ch(3, 0.0), 4.0, 2.0, 0.0, -9.0, 0.0),
        case("CH b=1 n=2 (3,1.5) (0,-3,0)", ch(2, 1.0), 3.0, 1.5, 0.0, -3.0, 0.0),
        case("CH b=4 n=3 (2,1) (0,-4,0)", ch(3, 4.0), 2.0, 1.0, 0.0, -4.0, 0.0),
        case("R1 (4,2) (0,-4,0)", flat(1.0), 4.0, 2.0, 0.0, -4.0, 0.0),
        case("H3 (2,1) (-1,-4,1)", hyp(3), 2.0, 1.0, -1.0, -4.0, 1.0),
        case("R3 (3,1.5) (-3.5,-7,0)", flat(3.0), 3.0, 1.5, -3.5, -7.0, 0.0),
    ]
}

/// Ten closed-form test functions of assorted shapes.
pub fn test_family() -> Vec<TestFunction> {
    vec![
        TestFunction::power_bump(0.0, 1.0),
        TestFunction::power_bump(1.0, 2.0),
        TestFunction::power_bump(-0.3, 0.5),
        TestFunction::power_bump(2.0, 1.5),
        TestFunction::exp_decay(1.0),
        TestFunction::exp_decay(3.0),
        TestFunction::ramp(1.0, 1.0),
        TestFunction::ramp(2.0, 0.5),
        TestFunction::saturating(1.0),
        TestFunction::power_bump(0.5, 4.0).scaled(7.0),
    ]
}
