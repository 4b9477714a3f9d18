use super::{ConservationLaw, Direction, Eigensystem, ModelError};

pub const DEFAULT_GAMMA: f64 = 1.4;

/// Pressure of a 1D `(ρ, ρv, E)` or 2D `(ρ, ρu, ρv, E)` state.
pub fn pressure(u: &[f64], gamma: f64) -> Result<f64, ModelError> {
    let rho = u[0];
    if !(rho > 0.0) {
        return Err(ModelError::NonPositiveDensity(rho));
    }
    let e = u[u.len() - 1];
    let m2: f64 = u[1..u.len() - 1].iter().map(|m| m * m).sum();
    Ok((gamma - 1.0) * (e - 0.5 * m2 / rho))
}

pub fn sound_speed(rho: f64, p: f64, gamma: f64) -> f64 {
    (gamma * p / rho).sqrt()
}

/// Conserved state from primitive `(ρ, v, p)`.
pub fn conserved_1d(rho: f64, v: f64, p: f64, gamma: f64) -> [f64; 3] {
    [rho, rho * v, p / (gamma - 1.0) + 0.5 * rho * v * v]
}

/// Conserved state from primitive `(ρ, vx, vy, p)`.
pub fn conserved_2d(rho: f64, vx: f64, vy: f64, p: f64, gamma: f64) -> [f64; 4] {
    [rho, rho * vx, rho * vy, p / (gamma - 1.0) + 0.5 * rho * (vx * vx + vy * vy)]
}

fn admissible(u: &[f64], gamma: f64) -> Result<f64, ModelError> {
    if let Some(k) = u.iter().position(|v| !v.is_finite()) {
        return Err(ModelError::NonFinite(k));
    }
    let p = pressure(u, gamma)?;
    if !(p > 0.0) {
        return Err(ModelError::NonPositivePressure(p));
    }
    Ok(p)
}

/// Roe-averaged normal velocity, tangential velocity, enthalpy and sound speed.
fn roe_average(
    rho_l: f64,
    un_l: f64,
    ut_l: f64,
    h_l: f64,
    rho_r: f64,
    un_r: f64,
    ut_r: f64,
    h_r: f64,
    gamma: f64,
) -> Result<(f64, f64, f64, f64), ModelError> {
    let sl = rho_l.sqrt();
    let sr = rho_r.sqrt();
    let inv = 1.0 / (sl + sr);
    let un = (sl * un_l + sr * un_r) * inv;
    let ut = (sl * ut_l + sr * ut_r) * inv;
    let h = (sl * h_l + sr * h_r) * inv;
    let c2 = (gamma - 1.0) * (h - 0.5 * (un * un + ut * ut));
    if !(c2 > 0.0) || !c2.is_finite() {
        return Err(ModelError::InadmissibleRoeState(c2));
    }
    Ok((un, ut, h, c2.sqrt()))
}

/// 1D Euler equations in `(ρ, ρv, E)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Euler1d {
    pub gamma: f64,
}

impl Default for Euler1d {
    fn default() -> Self {
        Euler1d { gamma: DEFAULT_GAMMA }
    }
}

impl Euler1d {
    fn primitive(&self, u: &[f64; 3]) -> (f64, f64, f64) {
        let v = u[1] / u[0];
        let p = (self.gamma - 1.0) * (u[2] - 0.5 * u[1] * v);
        (u[0], v, p)
    }
}

impl ConservationLaw<3> for Euler1d {
    fn name(&self) -> &'static str {
        "euler1d"
    }

    fn spatial_dims(&self) -> usize {
        1
    }

    fn flux(&self, u: &[f64; 3], _dir: Direction) -> [f64; 3] {
        let (_, v, p) = self.primitive(u);
        [u[1], u[1] * v + p, v * (u[2] + p)]
    }

    fn eigenvalues(&self, u: &[f64; 3], _dir: Direction) -> [f64; 3] {
        let (rho, v, p) = self.primitive(u);
        let c = sound_speed(rho, p, self.gamma);
        [v - c, v, v + c]
    }

    fn roe_eigensystem(&self, ul: &[f64; 3], ur: &[f64; 3], _dir: Direction) -> Result<Eigensystem<3>, ModelError> {
        let (rl, vl, pl) = self.primitive(ul);
        let (rr, vr, pr) = self.primitive(ur);
        let (u, _, h, c) =
            roe_average(rl, vl, 0.0, (ul[2] + pl) / rl, rr, vr, 0.0, (ur[2] + pr) / rr, self.gamma)?;
        let b1 = (self.gamma - 1.0) / (c * c);
        let b2 = 0.5 * b1 * u * u;
        let right = [[1.0, 1.0, 1.0], [u - c, u, u + c], [h - u * c, 0.5 * u * u, h + u * c]];
        let left = [
            [0.5 * (b2 + u / c), 0.5 * (-b1 * u - 1.0 / c), 0.5 * b1],
            [1.0 - b2, b1 * u, -b1],
            [0.5 * (b2 - u / c), 0.5 * (-b1 * u + 1.0 / c), 0.5 * b1],
        ];
        Ok(Eigensystem { left, right, lambda: [u - c, u, u + c] })
    }

    fn check_admissible(&self, u: &[f64; 3]) -> Result<(), ModelError> {
        admissible(u, self.gamma).map(|_| ())
    }

    fn normal_momentum(&self, dir: Direction) -> Option<usize> {
        match dir {
            Direction::X => Some(1),
            Direction::Y => None,
        }
    }

    fn gamma(&self) -> Option<f64> {
        Some(self.gamma)
    }
}

/// 2D Euler equations in `(ρ, ρu, ρv, E)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Euler2d {
    pub gamma: f64,
}

impl Default for Euler2d {
    fn default() -> Self {
        Euler2d { gamma: DEFAULT_GAMMA }
    }
}

impl Euler2d {
    /// `(ρ, normal velocity, tangential velocity, p)`.
    fn primitive(&self, u: &[f64; 4], dir: Direction) -> (f64, f64, f64, f64) {
        let vx = u[1] / u[0];
        let vy = u[2] / u[0];
        let p = (self.gamma - 1.0) * (u[3] - 0.5 * (u[1] * vx + u[2] * vy));
        match dir {
            Direction::X => (u[0], vx, vy, p),
            Direction::Y => (u[0], vy, vx, p),
        }
    }
}

impl ConservationLaw<4> for Euler2d {
    fn name(&self) -> &'static str {
        "euler2d"
    }

    fn spatial_dims(&self) -> usize {
        2
    }

    fn flux(&self, u: &[f64; 4], dir: Direction) -> [f64; 4] {
        let (_, un, _, p) = self.primitive(u, dir);
        match dir {
            Direction::X => [u[1], u[1] * un + p, u[2] * un, un * (u[3] + p)],
            Direction::Y => [u[2], u[1] * un, u[2] * un + p, un * (u[3] + p)],
        }
    }

    fn eigenvalues(&self, u: &[f64; 4], dir: Direction) -> [f64; 4] {
        let (rho, un, _, p) = self.primitive(u, dir);
        let c = sound_speed(rho, p, self.gamma);
        [un - c, un, un, un + c]
    }

    fn roe_eigensystem(&self, ul: &[f64; 4], ur: &[f64; 4], dir: Direction) -> Result<Eigensystem<4>, ModelError> {
        let (rl, nl, tl, pl) = self.primitive(ul, dir);
        let (rr, nr, tr, pr) = self.primitive(ur, dir);
        let (u, v, h, c) = roe_average(rl, nl, tl, (ul[3] + pl) / rl, rr, nr, tr, (ur[3] + pr) / rr, self.gamma)?;
        let q2 = u * u + v * v;
        let b1 = (self.gamma - 1.0) / (c * c);
        let b2 = 0.5 * b1 * q2;
        // Eigenvectors in the (ρ, ρ·normal, ρ·tangential, E) frame.
        let right = [
            [1.0, 1.0, 0.0, 1.0],
            [u - c, u, 0.0, u + c],
            [v, v, 1.0, v],
            [h - u * c, 0.5 * q2, v, h + u * c],
        ];
        let left = [
            [0.5 * (b2 + u / c), 0.5 * (-b1 * u - 1.0 / c), -0.5 * b1 * v, 0.5 * b1],
            [1.0 - b2, b1 * u, b1 * v, -b1],
            [-v, 0.0, 1.0, 0.0],
            [0.5 * (b2 - u / c), 0.5 * (-b1 * u + 1.0 / c), -0.5 * b1 * v, 0.5 * b1],
        ];
        let lambda = [u - c, u, u, u + c];
        Ok(match dir {
            Direction::X => Eigensystem { left, right, lambda },
            Direction::Y => {
                // swap the momentum rows of R and columns of L
                let mut es = Eigensystem { left, right, lambda };
                es.right.swap(1, 2);
                for row in es.left.iter_mut() {
                    row.swap(1, 2);
                }
                es
            }
        })
    }

    fn check_admissible(&self, u: &[f64; 4]) -> Result<(), ModelError> {
        admissible(u, self.gamma).map(|_| ())
    }

    fn normal_momentum(&self, dir: Direction) -> Option<usize> {
        Some(match dir {
            Direction::X => 1,
            Direction::Y => 2,
        })
    }

    fn gamma(&self) -> Option<f64> {
        Some(self.gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::max_wave_speed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat_mul<const M: usize>(a: &[[f64; M]; M], b: &[[f64; M]; M]) -> [[f64; M]; M] {
        let mut c = [[0.0; M]; M];
        for i in 0..M {
            for j in 0..M {
                c[i][j] = (0..M).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    }

    fn fd_jacobian<const M: usize, L: ConservationLaw<M>>(law: &L, u: &[f64; M], dir: Direction) -> [[f64; M]; M] {
        let mut jac = [[0.0; M]; M];
        for k in 0..M {
            let dh = 1e-6 * u[k].abs().max(1.0);
            let mut up = *u;
            let mut um = *u;
            up[k] += dh;
            um[k] -= dh;
            let (fp, fm) = (law.flux(&up, dir), law.flux(&um, dir));
            for i in 0..M {
                jac[i][k] = (fp[i] - fm[i]) / (2.0 * dh);
            }
        }
        jac
    }

    fn check_eigensystem<const M: usize, L: ConservationLaw<M>>(law: &L, u: &[f64; M], dir: Direction) {
        let es = law.eigensystem_at(u, dir).unwrap();
        let id = mat_mul(&es.left, &es.right);
        for i in 0..M {
            for j in 0..M {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((id[i][j] - e).abs() < 1e-12, "L·R at {u:?}: {id:?}");
            }
        }
        let mut rl = es.right;
        for row in rl.iter_mut() {
            for (j, x) in row.iter_mut().enumerate() {
                *x *= es.lambda[j];
            }
        }
        let a = mat_mul(&rl, &es.left);
        let jac = fd_jacobian(law, u, dir);
        let scale = jac.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..M {
            for j in 0..M {
                assert!((a[i][j] - jac[i][j]).abs() < 1e-8 * scale, "{dir} Jacobian at {u:?}: {a:?} vs {jac:?}");
            }
        }
    }

    #[test]
    fn equation_of_state() {
        // γ-1 = 0.4 is not exact in binary
        assert!((pressure(&[1.0, 0.0, 2.5], 1.4).unwrap() - 1.0).abs() < 1e-15);
        let sod = conserved_1d(1.0, 0.0, 1.0, 1.4);
        assert_eq!(&sod[..2], &[1.0, 0.0]);
        assert!((sod[2] - 2.5).abs() < 1e-15);
        assert_eq!(pressure(&[2.0, 0.0, 0.0, 3.0], 1.4).unwrap(), (1.4 - 1.0) * 3.0);
        assert!(matches!(pressure(&[0.0, 0.0, 1.0], 1.4), Err(ModelError::NonPositiveDensity(_))));
        let u = conserved_2d(0.5323, 1.206, 0.0, 0.3, 1.4);
        assert!((pressure(&u, 1.4).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn euler_fluxes_and_speeds() {
        let e = Euler1d::default();
        let f = e.flux(&[1.0, 0.0, 2.5], Direction::X);
        assert_eq!((f[0], f[2]), (0.0, 0.0));
        assert!((f[1] - 1.0).abs() < 1e-15);
        let a = max_wave_speed(&e, &[[1.0, 0.0, 2.5]], Direction::X).unwrap();
        assert!((a - 1.4f64.sqrt()).abs() < 1e-15);
        assert!(max_wave_speed(&e, &[[1.0, 0.0, -1.0]], Direction::X).is_err());
        let e2 = Euler2d::default();
        let u = conserved_2d(1.0, 2.0, -3.0, 1.0, 1.4);
        let fx = e2.flux(&u, Direction::X);
        let fy = e2.flux(&u, Direction::Y);
        assert!((fx[1] - 5.0).abs() < 1e-14 && (fx[2] + 6.0).abs() < 1e-14);
        assert!((fy[1] + 6.0).abs() < 1e-14 && (fy[2] - 10.0).abs() < 1e-14);
    }

    #[test]
    fn eigensystems_at_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (e1, e2) = (Euler1d::default(), Euler2d::default());
        for _ in 0..1000 {
            let rho = rng.gen_range(0.05..10.0);
            let p = rng.gen_range(0.01..100.0);
            let vx = rng.gen_range(-5.0..5.0);
            let vy = rng.gen_range(-5.0..5.0);
            check_eigensystem(&e1, &conserved_1d(rho, vx, p, 1.4), Direction::X);
            let u = conserved_2d(rho, vx, vy, p, 1.4);
            check_eigensystem(&e2, &u, Direction::X);
            check_eigensystem(&e2, &u, Direction::Y);
        }
    }

    #[test]
    fn roe_state_between_distinct_states() {
        let e = Euler1d::default();
        let ul = conserved_1d(1.0, 0.0, 1.0, 1.4);
        let ur = conserved_1d(0.125, 0.0, 0.1, 1.4);
        let es = e.roe_eigensystem(&ul, &ur, Direction::X).unwrap();
        let id = mat_mul(&es.left, &es.right);
        for i in 0..3 {
            for j in 0..3 {
                assert!((id[i][j] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        assert!(es.lambda[0] < es.lambda[1] && es.lambda[1] < es.lambda[2]);
    }

    #[test]
    fn spectrum_ordering_and_reflection() {
        let e = Euler1d::default();
        let u = conserved_1d(1.3, 0.7, 2.0, 1.4);
        let lam = e.eigenvalues(&u, Direction::X);
        assert!(lam[0] < lam[1] && lam[1] < lam[2]);
        let mirrored = e.eigenvalues(&[u[0], -u[1], u[2]], Direction::X);
        for k in 0..3 {
            assert!((mirrored[k] + lam[2 - k]).abs() < 1e-14);
        }
        let e2 = Euler2d::default();
        let u2 = conserved_2d(1.3, 0.7, -0.2, 2.0, 1.4);
        let lx = e2.eigenvalues(&u2, Direction::X);
        let ly = e2.eigenvalues(&[u2[0], u2[2], u2[1], u2[3]], Direction::Y);
        assert_eq!(lx, ly);
    }

    #[test]
    fn admissibility_checks() {
        let e = Euler2d::default();
        assert!(e.check_admissible(&[1.0, 0.0, 0.0, 2.5]).is_ok());
        assert!(matches!(e.check_admissible(&[1.0, 3.0, 0.0, 2.5]), Err(ModelError::NonPositivePressure(_))));
        assert!(matches!(e.check_admissible(&[-1.0, 0.0, 0.0, 2.5]), Err(ModelError::NonPositiveDensity(_))));
        assert!(matches!(e.check_admissible(&[1.0, f64::NAN, 0.0, 2.5]), Err(ModelError::NonFinite(1))));
    }
}
