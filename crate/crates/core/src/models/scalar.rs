use super::{ConservationLaw, Direction, Eigensystem, ModelError};

/// `u_t + a u_x = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearAdvection {
    pub speed: f64,
}

impl Default for LinearAdvection {
    fn default() -> Self {
        LinearAdvection { speed: 1.0 }
    }
}

impl ConservationLaw<1> for LinearAdvection {
    fn name(&self) -> &'static str {
        "advection"
    }

    fn spatial_dims(&self) -> usize {
        1
    }

    fn flux(&self, u: &[f64; 1], _dir: Direction) -> [f64; 1] {
        [self.speed * u[0]]
    }

    fn eigenvalues(&self, _u: &[f64; 1], _dir: Direction) -> [f64; 1] {
        [self.speed]
    }

    fn roe_eigensystem(&self, _ul: &[f64; 1], _ur: &[f64; 1], _dir: Direction) -> Result<Eigensystem<1>, ModelError> {
        Ok(Eigensystem::identity([self.speed]))
    }
}

/// Inviscid Burgers, `u_t + (u²/2)_x = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Burgers;

impl ConservationLaw<1> for Burgers {
    fn name(&self) -> &'static str {
        "burgers"
    }

    fn spatial_dims(&self) -> usize {
        1
    }

    fn flux(&self, u: &[f64; 1], _dir: Direction) -> [f64; 1] {
        [0.5 * u[0] * u[0]]
    }

    fn eigenvalues(&self, u: &[f64; 1], _dir: Direction) -> [f64; 1] {
        [u[0]]
    }

    fn roe_eigensystem(&self, ul: &[f64; 1], ur: &[f64; 1], _dir: Direction) -> Result<Eigensystem<1>, ModelError> {
        Ok(Eigensystem::identity([0.5 * (ul[0] + ur[0])]))
    }
}
