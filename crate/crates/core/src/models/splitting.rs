use std::fmt;
use std::str::FromStr;

use super::{ConservationLaw, Direction, Eigensystem, ModelError};
use crate::kernels::{KernelError, Reconstructor};

/// How point fluxes are split into upwind-biased parts before reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplittingScheme {
    /// `f± = (f ± αu)/2` with `α` the largest wave speed over the domain.
    GlobalLaxFriedrichs,
    /// As above with `α` taken per field over the interface stencil.
    LocalLaxFriedrichs,
    /// Sided characteristic splitting with the eigensystems of the two
    /// neighbouring points.
    DonatMarquina,
}

impl SplittingScheme {
    pub const ALL: [SplittingScheme; 3] =
        [SplittingScheme::GlobalLaxFriedrichs, SplittingScheme::LocalLaxFriedrichs, SplittingScheme::DonatMarquina];

    pub fn short_name(&self) -> &'static str {
        match self {
            SplittingScheme::GlobalLaxFriedrichs => "glf",
            SplittingScheme::LocalLaxFriedrichs => "llf",
            SplittingScheme::DonatMarquina => "dm",
        }
    }
}

impl fmt::Display for SplittingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for SplittingScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "glf" | "global-lf" | "global" => Ok(SplittingScheme::GlobalLaxFriedrichs),
            "llf" | "local-lf" | "local" => Ok(SplittingScheme::LocalLaxFriedrichs),
            "dm" | "donat-marquina" | "marquina" => Ok(SplittingScheme::DonatMarquina),
            _ => Err(format!("unknown splitting '{s}' (expected glf, llf or dm)")),
        }
    }
}

/// Lax-Friedrichs splitting `f± = (f ± αu)/2`.
#[inline]
pub fn lf_split(f: f64, u: f64, alpha: f64) -> (f64, f64) {
    (0.5 * (f + alpha * u), 0.5 * (f - alpha * u))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FluxError {
    #[error("point {point}")]
    Model {
        point: usize,
        #[source]
        source: ModelError,
    },
    #[error("interface {interface}")]
    Kernel {
        interface: usize,
        #[source]
        source: KernelError,
    },
}

/// Computes WENO interface fluxes along one grid line, reusing scratch
/// storage between lines.
///
/// A line holds `n + 2r` states: `r` ghosts, `n` interior points, `r`
/// ghosts. The `n + 1` interfaces returned are `x_{g-1/2} .. x_{g+n-1/2}`.
pub struct InterfaceFluxer<'a, L, const M: usize> {
    law: &'a L,
    rec: &'a Reconstructor,
    scheme: SplittingScheme,
    dir: Direction,
    flux: Vec<[f64; M]>,
    point_eig: Vec<Eigensystem<M>>,
    point_lambda: Vec<[f64; M]>,
    split: Vec<(f64, f64)>,
    reconstructions: u64,
}

impl<'a, L: ConservationLaw<M>, const M: usize> InterfaceFluxer<'a, L, M> {
    pub fn new(law: &'a L, rec: &'a Reconstructor, scheme: SplittingScheme, dir: Direction) -> Self {
        InterfaceFluxer {
            law,
            rec,
            scheme,
            dir,
            flux: Vec::new(),
            point_eig: Vec::new(),
            point_lambda: Vec::new(),
            split: Vec::new(),
            reconstructions: 0,
        }
    }

    pub fn ghosts(&self) -> usize {
        self.rec.r()
    }

    /// Scalar reconstructions performed since construction.
    pub fn reconstructions(&self) -> u64 {
        self.reconstructions
    }

    /// Fills `out` with `states.len() - 2r + 1` interface fluxes. `alpha` is
    /// the global splitting speed; it is ignored by the local schemes.
    pub fn line(&mut self, states: &[[f64; M]], alpha: f64, out: &mut [[f64; M]]) -> Result<(), FluxError> {
        let r = self.rec.r();
        let len = states.len();
        assert!(len > 2 * r, "line shorter than its ghost layers");
        let n_if = len - 2 * r + 1;
        assert_eq!(out.len(), n_if, "interface buffer length");
        let (law, dir) = (self.law, self.dir);

        self.flux.clear();
        self.flux.extend(states.iter().map(|u| law.flux(u, dir)));
        match self.scheme {
            SplittingScheme::GlobalLaxFriedrichs => {}
            SplittingScheme::LocalLaxFriedrichs => {
                self.point_lambda.clear();
                self.point_lambda.extend(states.iter().map(|u| law.eigenvalues(u, dir)));
            }
            SplittingScheme::DonatMarquina => {
                self.point_eig.clear();
                for (point, u) in states.iter().enumerate() {
                    let es = law.eigensystem_at(u, dir).map_err(|source| FluxError::Model { point, source })?;
                    self.point_eig.push(es);
                }
            }
        }

        let w = 2 * r - 1;
        if M == 1 && self.scheme == SplittingScheme::GlobalLaxFriedrichs {
            return self.scalar_global_lf(states, alpha, out);
        }
        let mut plus = [0.0; crate::coeffgen::MAX_WINDOW];
        let mut minus = [0.0; crate::coeffgen::MAX_WINDOW];
        for (k, o) in out.iter_mut().enumerate() {
            // interface between points i and i+1; stencil i-r+1 ..= i+r
            let i = k + r - 1;
            let lo = i + 1 - r;
            let kerr = |source| FluxError::Kernel { interface: k, source };
            let mut acc = [0.0; M];
            match self.scheme {
                SplittingScheme::GlobalLaxFriedrichs | SplittingScheme::LocalLaxFriedrichs => {
                    let es = law
                        .roe_eigensystem(&states[i], &states[i + 1], dir)
                        .map_err(|source| FluxError::Model { point: i, source })?;
                    for s in 0..M {
                        let a = match self.scheme {
                            SplittingScheme::GlobalLaxFriedrichs => alpha,
                            _ => self.point_lambda[lo..=i + r]
                                .iter()
                                .fold(es.lambda[s].abs(), |m, l| m.max(l[s].abs())),
                        };
                        for t in 0..=w {
                            let (fp, fm) =
                                lf_split(es.project(s, &self.flux[lo + t]), es.project(s, &states[lo + t]), a);
                            if t < w {
                                plus[t] = fp;
                            }
                            if t > 0 {
                                minus[t - 1] = fm;
                            }
                        }
                        let g = self.rec.reconstruct(&plus[..w]).map_err(kerr)?
                            + self.rec.reconstruct_mirrored(&minus[..w]).map_err(kerr)?;
                        self.reconstructions += 2;
                        for (c, a) in acc.iter_mut().enumerate() {
                            *a += g * es.right[c][s];
                        }
                    }
                }
                SplittingScheme::DonatMarquina => {
                    let el = &self.point_eig[i];
                    let er = &self.point_eig[i + 1];
                    for s in 0..M {
                        let (ll, lr) = (el.lambda[s], er.lambda[s]);
                        if ll > 0.0 && lr > 0.0 {
                            for t in 0..w {
                                plus[t] = el.project(s, &self.flux[lo + t]);
                            }
                            let g = self.rec.reconstruct(&plus[..w]).map_err(kerr)?;
                            self.reconstructions += 1;
                            for (c, a) in acc.iter_mut().enumerate() {
                                *a += g * el.right[c][s];
                            }
                        } else if ll < 0.0 && lr < 0.0 {
                            for t in 0..w {
                                minus[t] = er.project(s, &self.flux[lo + 1 + t]);
                            }
                            let g = self.rec.reconstruct_mirrored(&minus[..w]).map_err(kerr)?;
                            self.reconstructions += 1;
                            for (c, a) in acc.iter_mut().enumerate() {
                                *a += g * er.right[c][s];
                            }
                        } else {
                            let a = self.point_eig[lo..=i + r].iter().fold(0.0f64, |m, e| m.max(e.lambda[s].abs()));
                            for t in 0..w {
                                plus[t] = lf_split(el.project(s, &self.flux[lo + t]), el.project(s, &states[lo + t]), a).0;
                                minus[t] = lf_split(
                                    er.project(s, &self.flux[lo + 1 + t]),
                                    er.project(s, &states[lo + 1 + t]),
                                    a,
                                )
                                .1;
                            }
                            let gp = self.rec.reconstruct(&plus[..w]).map_err(kerr)?;
                            let gm = self.rec.reconstruct_mirrored(&minus[..w]).map_err(kerr)?;
                            self.reconstructions += 2;
                            for (c, acc_c) in acc.iter_mut().enumerate() {
                                *acc_c += gp * el.right[c][s] + gm * er.right[c][s];
                            }
                        }
                    }
                }
            }
            *o = acc;
        }
        Ok(())
    }

    /// Scalar law with one global speed: the 1×1 projection is the identity,
    /// so each point is split once and the windows are read in place. Same
    /// bits as the general path.
    fn scalar_global_lf(&mut self, states: &[[f64; M]], alpha: f64, out: &mut [[f64; M]]) -> Result<(), FluxError> {
        let r = self.rec.r();
        let w = 2 * r - 1;
        self.split.clear();
        self.split.extend(self.flux.iter().zip(states).map(|(f, u)| lf_split(f[0], u[0], alpha)));
        let mut plus = [0.0; crate::coeffgen::MAX_WINDOW];
        let mut minus = [0.0; crate::coeffgen::MAX_WINDOW];
        for (k, o) in out.iter_mut().enumerate() {
            let lo = k;
            let kerr = |source| FluxError::Kernel { interface: k, source };
            for t in 0..w {
                plus[t] = self.split[lo + t].0;
                // mirrored order: f_{r-1-t} sits at lo + 1 + (w - 1 - t)
                minus[t] = self.split[lo + w - t].1;
            }
            let g = self.rec.reconstruct(&plus[..w]).map_err(kerr)? + self.rec.reconstruct(&minus[..w]).map_err(kerr)?;
            self.reconstructions += 2;
            o[0] = g;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffgen::{cached_table, DiscretizationMode};
    use crate::kernels::WenoVariant;
    use crate::models::{conserved_1d, conserved_2d, Burgers, Euler1d, Euler2d, LinearAdvection};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rec(r: usize, v: WenoVariant) -> Reconstructor {
        Reconstructor::new(cached_table(r, DiscretizationMode::CellAverage).unwrap(), v).unwrap()
    }

    #[test]
    fn lf_split_examples() {
        assert_eq!(lf_split(0.0, 1.0, 2.0), (1.0, -1.0));
        assert_eq!(lf_split(0.5, 1.0, 1.0), (0.75, -0.25));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let (f, u, a) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(0.0..10.0));
            let (p, m) = lf_split(f, u, a);
            assert!((p + m - f).abs() <= 4.0 * f64::EPSILON * (f.abs() + a * u.abs()));
        }
        // dyadic inputs reassemble exactly
        let (p, m) = lf_split(0.375, -1.25, 3.0);
        assert_eq!(p + m, 0.375);
    }

    #[test]
    fn splitting_names_round_trip() {
        for s in SplittingScheme::ALL {
            assert_eq!(s.short_name().parse::<SplittingScheme>().unwrap(), s);
        }
        assert!("upwind".parse::<SplittingScheme>().is_err());
    }

    fn uniform_line<const M: usize, L: ConservationLaw<M>>(law: &L, u: [f64; M], dir: Direction) {
        for r in [2, 3, 5] {
            for v in [WenoVariant::fast(r), WenoVariant::jiang_shu(r), WenoVariant::yamaleev_carpenter(r)] {
                let rc = rec(r, v);
                for scheme in SplittingScheme::ALL {
                    let states = vec![u; 2 * r + 6];
                    let mut out = vec![[0.0; M]; 7];
                    let alpha = law.max_wave_speed(&u, dir);
                    InterfaceFluxer::new(law, &rc, scheme, dir).line(&states, alpha, &mut out).unwrap();
                    let f = law.flux(&u, dir);
                    for o in &out {
                        for c in 0..M {
                            assert!((o[c] - f[c]).abs() < 1e-12 * (1.0 + f[c].abs()), "{scheme} r={r}: {o:?} vs {f:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn uniform_state_gives_exact_flux() {
        uniform_line(&Burgers, [0.7], Direction::X);
        uniform_line(&Burgers, [-0.7], Direction::X);
        uniform_line(&LinearAdvection::default(), [2.0], Direction::X);
        uniform_line(&Euler1d::default(), conserved_1d(1.2, 0.3, 2.0, 1.4), Direction::X);
        let e2 = Euler2d::default();
        uniform_line(&e2, conserved_2d(1.2, 0.3, -0.8, 2.0, 1.4), Direction::X);
        uniform_line(&e2, conserved_2d(1.2, 0.3, -0.8, 2.0, 1.4), Direction::Y);
    }

    #[test]
    fn marquina_burgers_positive_is_upwind() {
        let r = 3;
        let rc = rec(r, WenoVariant::fast(r));
        let states: Vec<[f64; 1]> = (0..20).map(|j| [1.0 + 0.3 * (0.4 * j as f64).sin()]).collect();
        let mut out = vec![[0.0]; 20 - 2 * r + 1];
        InterfaceFluxer::new(&Burgers, &rc, SplittingScheme::DonatMarquina, Direction::X)
            .line(&states, 0.0, &mut out)
            .unwrap();
        for (k, o) in out.iter().enumerate() {
            let window: Vec<f64> = (k..k + 2 * r - 1).map(|j| 0.5 * states[j][0] * states[j][0]).collect();
            let expect = rc.reconstruct(&window).unwrap();
            assert!((o[0] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn marquina_burgers_negative_is_mirrored_upwind() {
        let r = 2;
        let rc = rec(r, WenoVariant::jiang_shu(r));
        let states: Vec<[f64; 1]> = (0..12).map(|j| [-1.0 - 0.1 * j as f64]).collect();
        let mut out = vec![[0.0]; 12 - 2 * r + 1];
        InterfaceFluxer::new(&Burgers, &rc, SplittingScheme::DonatMarquina, Direction::X)
            .line(&states, 0.0, &mut out)
            .unwrap();
        for (k, o) in out.iter().enumerate() {
            let window: Vec<f64> = (k + 1..k + 2 * r).map(|j| 0.5 * states[j][0] * states[j][0]).collect();
            assert!((o[0] - rc.reconstruct_mirrored(&window).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn scalar_global_lf_splits_each_point() {
        let r = 3;
        let rc = rec(r, WenoVariant::yamaleev_carpenter(r));
        let states: Vec<[f64; 1]> = (0..24).map(|j| [0.25 + 0.5 * (0.4 * j as f64).sin()]).collect();
        let alpha = 0.8;
        let mut out = vec![[0.0]; 24 - 2 * r + 1];
        let mut fx = InterfaceFluxer::new(&Burgers, &rc, SplittingScheme::GlobalLaxFriedrichs, Direction::X);
        fx.line(&states, alpha, &mut out).unwrap();
        assert_eq!(fx.reconstructions(), 2 * out.len() as u64);
        let split = |j: usize| lf_split(0.5 * states[j][0] * states[j][0], states[j][0], alpha);
        for (k, o) in out.iter().enumerate() {
            let plus: Vec<f64> = (k..k + 2 * r - 1).map(|j| split(j).0).collect();
            let minus: Vec<f64> = (k + 1..k + 2 * r).map(|j| split(j).1).collect();
            let g = rc.reconstruct(&plus).unwrap() + rc.reconstruct_mirrored(&minus).unwrap();
            assert_eq!(o[0], g);
        }
    }

    #[test]
    fn zero_minus_flux_reduces_to_left_biased_reconstruction() {
        // advection with α equal to the speed: f⁻ vanishes identically
        let r = 4;
        let rc = rec(r, WenoVariant::fast(r));
        let states: Vec<[f64; 1]> = (0..30).map(|j| [(0.3 * j as f64).cos()]).collect();
        let mut out = vec![[0.0]; 30 - 2 * r + 1];
        InterfaceFluxer::new(&LinearAdvection::default(), &rc, SplittingScheme::GlobalLaxFriedrichs, Direction::X)
            .line(&states, 1.0, &mut out)
            .unwrap();
        for (k, o) in out.iter().enumerate() {
            let window: Vec<f64> = (k..k + 2 * r - 1).map(|j| states[j][0]).collect();
            assert!((o[0] - rc.reconstruct(&window).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn sod_interface_is_finite() {
        let e = Euler1d::default();
        let r = 5;
        let rc = rec(r, WenoVariant::fast(r));
        let left = conserved_1d(1.0, 0.0, 1.0, 1.4);
        let right = conserved_1d(0.125, 0.0, 0.1, 1.4);
        let states: Vec<[f64; 3]> = (0..24).map(|j| if j < 12 { left } else { right }).collect();
        let mut out = vec![[0.0; 3]; 24 - 2 * r + 1];
        for scheme in SplittingScheme::ALL {
            let alpha = crate::models::max_wave_speed(&e, &states, Direction::X).unwrap();
            InterfaceFluxer::new(&e, &rc, scheme, Direction::X).line(&states, alpha, &mut out).unwrap();
            assert!(out.iter().flatten().all(|x| x.is_finite()), "{scheme}");
        }
    }

    #[test]
    fn bad_state_is_located() {
        let e = Euler1d::default();
        let rc = rec(2, WenoVariant::fast(2));
        let mut states = vec![[1.0, 0.0, 2.5]; 10];
        states[6] = [-1.0, 0.0, 2.5];
        let mut out = vec![[0.0; 3]; 7];
        let err = InterfaceFluxer::new(&e, &rc, SplittingScheme::DonatMarquina, Direction::X)
            .line(&states, 1.0, &mut out)
            .unwrap_err();
        assert!(matches!(err, FluxError::Model { point: 6, .. }), "{err}");
    }
}
