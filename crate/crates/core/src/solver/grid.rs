/// One uniformly spaced, cell-centered axis: nodes `min + (i + 1/2) h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Self {
        assert!(max > min && n > 0, "degenerate axis [{min}, {max}] with {n} points");
        Axis { min, max, n }
    }

    pub fn h(&self) -> f64 {
        (self.max - self.min) / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.min + (i as f64 + 0.5) * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }
}

/// A 1D line or a 2D tensor-product grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub x: Axis,
    pub y: Option<Axis>,
}

impl Grid {
    pub fn line(min: f64, max: f64, n: usize) -> Self {
        Grid { x: Axis::new(min, max, n), y: None }
    }

    pub fn rect(x: Axis, y: Axis) -> Self {
        Grid { x, y: Some(y) }
    }

    pub fn dims(&self) -> usize {
        if self.y.is_some() {
            2
        } else {
            1
        }
    }

    pub fn nx(&self) -> usize {
        self.x.n
    }

    pub fn ny(&self) -> usize {
        self.y.map_or(1, |a| a.n)
    }

    pub fn hx(&self) -> f64 {
        self.x.h()
    }

    /// `hy`, or 1 on a line so that cell measures come out as `hx`.
    pub fn hy(&self) -> f64 {
        self.y.map_or(1.0, |a| a.h())
    }

    /// Coordinates of node `(i, j)`; `y = 0` on a line.
    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x.node(i), self.y.map_or(0.0, |a| a.node(j)))
    }

    pub fn len(&self) -> usize {
        self.nx() * self.ny()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Point values of an `M`-component state, row-major (`j * nx + i`).
#[derive(Clone, Debug, PartialEq)]
pub struct Field<const M: usize> {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<[f64; M]>,
}

impl<const M: usize> Field<M> {
    pub fn filled(nx: usize, ny: usize, value: [f64; M]) -> Self {
        Field { nx, ny, data: vec![value; nx * ny] }
    }

    /// Samples `f(x, y)` at every node of `grid`.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> [f64; M]) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let (x, y) = grid.point(i, j);
                data.push(f(x, y));
            }
        }
        Field { nx: grid.nx(), ny: grid.ny(), data }
    }

    pub fn from_line(values: Vec<[f64; M]>) -> Self {
        Field { nx: values.len(), ny: 1, data: values }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &[f64; M] {
        &self.data[j * self.nx + i]
    }

    pub fn component(&self, k: usize) -> Vec<f64> {
        self.data.iter().map(|u| u[k]).collect()
    }

    pub fn fits(&self, grid: &Grid) -> bool {
        self.nx == grid.nx() && self.ny == grid.ny()
    }
}

/// `L1 = h Σ|e|` (`hx hy Σ|e|` in 2D) and `L∞ = max|e|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub linf: f64,
}

impl ErrorNorms {
    /// Errors of component `k` against `exact(x, y)`.
    pub fn against<const M: usize>(field: &Field<M>, grid: &Grid, k: usize, exact: impl Fn(f64, f64) -> f64) -> Self {
        let mut l1 = 0.0;
        let mut linf: f64 = 0.0;
        for j in 0..field.ny {
            for i in 0..field.nx {
                let (x, y) = grid.point(i, j);
                let e = (field.get(i, j)[k] - exact(x, y)).abs();
                l1 += e;
                linf = linf.max(e);
            }
        }
        ErrorNorms { l1: l1 * grid.hx() * grid.hy(), linf }
    }

    /// Errors of component `k` between two fields on the same grid.
    pub fn between<const M: usize>(a: &Field<M>, b: &Field<M>, grid: &Grid, k: usize) -> Self {
        assert!(a.fits(grid) && b.fits(grid), "fields do not match the grid");
        let mut l1 = 0.0;
        let mut linf: f64 = 0.0;
        for (u, v) in a.data.iter().zip(&b.data) {
            let e = (u[k] - v[k]).abs();
            l1 += e;
            linf = linf.max(e);
        }
        ErrorNorms { l1: l1 * grid.hx() * grid.hy(), linf }
    }
}

/// Linear interpolation of a fine 1D field at `x` (exact at coincident
/// nodes; constant beyond the outermost nodes).
pub fn sample_line<const M: usize>(fine: &Field<M>, grid: &Grid, x: f64) -> [f64; M] {
    let s = (x - grid.x.min) / grid.hx() - 0.5;
    let n = fine.nx;
    if s <= 0.0 {
        return fine.data[0];
    }
    if s >= (n - 1) as f64 {
        return fine.data[n - 1];
    }
    let i = s.floor() as usize;
    let w = s - i as f64;
    let (a, b) = (&fine.data[i], &fine.data[i + 1]);
    let mut out = [0.0; M];
    for k in 0..M {
        out[k] = if w == 0.0 { a[k] } else { (1.0 - w) * a[k] + w * b[k] };
    }
    out
}

/// Bilinear interpolation of a fine 2D field at `(x, y)`.
pub fn sample_rect<const M: usize>(fine: &Field<M>, grid: &Grid, x: f64, y: f64) -> [f64; M] {
    let ya = grid.y.expect("2D grid");
    let loc = |s: f64, n: usize| -> (usize, f64) {
        if s <= 0.0 {
            (0, 0.0)
        } else if s >= (n - 1) as f64 {
            (n.saturating_sub(2), if n > 1 { 1.0 } else { 0.0 })
        } else {
            let i = s.floor() as usize;
            (i, s - i as f64)
        }
    };
    let (i, wx) = loc((x - grid.x.min) / grid.hx() - 0.5, fine.nx);
    let (j, wy) = loc((y - ya.min) / ya.h() - 0.5, fine.ny);
    let at = |ii: usize, jj: usize| fine.get(ii.min(fine.nx - 1), jj.min(fine.ny - 1));
    let mut out = [0.0; M];
    for k in 0..M {
        let a = (1.0 - wx) * at(i, j)[k] + wx * at(i + 1, j)[k];
        let b = (1.0 - wx) * at(i, j + 1)[k] + wx * at(i + 1, j + 1)[k];
        out[k] = (1.0 - wy) * a + wy * b;
    }
    out
}
