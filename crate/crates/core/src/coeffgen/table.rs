use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{DiscretizationMode, SumOfSquares, MAX_R, MAX_WINDOW};

/// All coefficients of one `(r, mode)` in exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactTable {
    pub r: usize,
    pub mode: DiscretizationMode,
    /// `r×r`; row `i` multiplies `f_{-r+1+i..=i}`.
    pub substencil: Vec<Vec<BigRational>>,
    pub ideal: Vec<BigRational>,
    /// Length `2r-1`, indexed by window position.
    pub undivided: Vec<BigRational>,
    pub js_forms: Vec<Vec<Vec<BigRational>>>,
    pub js_sos: Vec<SumOfSquares<BigRational>>,
}

/// Fixed-size copies of the lowered coefficients for the kernels.
#[derive(Clone, Debug)]
pub(crate) struct Packed {
    pub d: [[f64; MAX_R]; MAX_R],
    pub c: [f64; MAX_R],
    pub b: [f64; MAX_WINDOW],
    pub perm: [[usize; MAX_R]; MAX_R],
    pub beta: [[f64; MAX_R]; MAX_R],
    /// `lower[i][j][k] = L_i[k][j]`, the coefficient of `y_k` in square `j`.
    pub lower: [[[f64; MAX_R]; MAX_R]; MAX_R],
}

/// Immutable coefficient table for an order-`2r-1` reconstruction.
#[derive(Clone, Debug)]
pub struct ReconstructionTable {
    r: usize,
    mode: DiscretizationMode,
    pub substencil_coeffs: Vec<Vec<f64>>,
    pub ideal_weights: Vec<f64>,
    pub ud_coeffs: Vec<f64>,
    pub js_forms: Vec<Vec<Vec<f64>>>,
    pub js_sos: Vec<SumOfSquares<f64>>,
    exact: ExactTable,
    pub(crate) packed: Box<Packed>,
}

fn lower_rat(q: &BigRational) -> f64 {
    q.to_f64().expect("rational coefficient out of f64 range")
}

impl ReconstructionTable {
    pub(crate) fn lower(exact: ExactTable) -> Self {
        let r = exact.r;
        let substencil_coeffs: Vec<Vec<f64>> = exact
            .substencil
            .iter()
            .map(|row| row.iter().map(lower_rat).collect())
            .collect();
        let ideal_weights: Vec<f64> = exact.ideal.iter().map(lower_rat).collect();
        let ud_coeffs: Vec<f64> = exact.undivided.iter().map(lower_rat).collect();
        let js_forms = exact
            .js_forms
            .iter()
            .map(|a| a.iter().map(|row| row.iter().map(lower_rat).collect()).collect())
            .collect();
        let js_sos: Vec<SumOfSquares<f64>> = exact.js_sos.iter().map(|s| s.map(lower_rat)).collect();

        let mut packed = Box::new(Packed {
            d: [[0.0; MAX_R]; MAX_R],
            c: [0.0; MAX_R],
            b: [0.0; MAX_WINDOW],
            perm: [[0; MAX_R]; MAX_R],
            beta: [[0.0; MAX_R]; MAX_R],
            lower: [[[0.0; MAX_R]; MAX_R]; MAX_R],
        });
        for i in 0..r {
            packed.d[i][..r].copy_from_slice(&substencil_coeffs[i]);
            packed.c[i] = ideal_weights[i];
            packed.perm[i][..r].copy_from_slice(&js_sos[i].perm);
            packed.beta[i][..r - 1].copy_from_slice(&js_sos[i].beta);
            for j in 0..r {
                for k in 0..r {
                    packed.lower[i][j][k] = js_sos[i].lower[k][j];
                }
            }
        }
        packed.b[..2 * r - 1].copy_from_slice(&ud_coeffs);

        ReconstructionTable {
            r,
            mode: exact.mode,
            substencil_coeffs,
            ideal_weights,
            ud_coeffs,
            js_forms,
            js_sos,
            exact,
            packed,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn mode(&self) -> DiscretizationMode {
        self.mode
    }

    /// Scheme order `2r-1`.
    pub fn order(&self) -> usize {
        2 * self.r - 1
    }

    pub fn window_len(&self) -> usize {
        2 * self.r - 1
    }

    pub fn exact(&self) -> &ExactTable {
        &self.exact
    }

    /// Plain-text dump: one line per coefficient group, rationals as `p/q`
    /// followed by the same group lowered to `f64`.
    pub fn dump(&self) -> String {
        fn rats(v: &[BigRational]) -> String {
            v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ")
        }
        fn floats(v: &[f64]) -> String {
            v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
        }
        let e = &self.exact;
        let mut out = String::new();
        let _ = writeln!(out, "# r={} order={} mode={}", self.r, self.order(), self.mode);
        for (i, row) in e.substencil.iter().enumerate() {
            let _ = writeln!(out, "substencil[{i}] {}", rats(row));
            let _ = writeln!(out, "substencil_f64[{i}] {}", floats(&self.substencil_coeffs[i]));
        }
        let _ = writeln!(out, "ideal {}", rats(&e.ideal));
        let _ = writeln!(out, "ideal_f64 {}", floats(&self.ideal_weights));
        let _ = writeln!(out, "undivided {}", rats(&e.undivided));
        let _ = writeln!(out, "undivided_f64 {}", floats(&self.ud_coeffs));
        for (i, a) in e.js_forms.iter().enumerate() {
            let flat: Vec<BigRational> = a.iter().flatten().cloned().collect();
            let _ = writeln!(out, "js_form[{i}] {}", rats(&flat));
        }
        for (i, s) in e.js_sos.iter().enumerate() {
            let perm = s.perm.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
            let _ = writeln!(out, "js_perm[{i}] {perm}");
            let _ = writeln!(out, "js_beta[{i}] {}", rats(&s.beta));
            let _ = writeln!(out, "js_beta_f64[{i}] {}", floats(&self.js_sos[i].beta));
            let flat: Vec<BigRational> = s.lower.iter().flatten().cloned().collect();
            let _ = writeln!(out, "js_lower[{i}] {}", rats(&flat));
        }
        out
    }
}
