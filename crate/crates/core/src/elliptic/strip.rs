use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DMatrixView, Dyn, LU};
use num_complex::Complex64;

use super::{chebyshev, gmres};
use crate::error::{Error, Result};
use crate::spectral::{dx, dxx, Grid, RealField};

/// Discretization and solver parameters for the truncated strip.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripOptions {
    /// Truncation depth `L_z`; the strip is `z ∈ [-L_z, 0]`.
    pub depth: f64,
    /// Number of Chebyshev–Gauss–Lobatto levels in `z`.
    pub nz: usize,
    /// Relative residual target of the linear solve.
    pub tol: f64,
    pub max_iter: usize,
    pub restart: usize,
}

impl Default for StripOptions {
    fn default() -> Self {
        Self {
            depth: 20.0,
            nz: 65,
            tol: 1e-12,
            max_iter: 400,
            restart: 60,
        }
    }
}

impl StripOptions {
    pub fn with_nz(mut self, nz: usize) -> Self {
        self.nz = nz;
        self
    }

    pub fn with_depth(mut self, depth: f64) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.nz < 8 {
            return Err(Error::InvalidArgument(format!(
                "need at least 8 vertical levels, got {}",
                self.nz
            )));
        }
        if !(self.depth.is_finite() && self.depth > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "depth must be positive, got {}",
                self.depth
            )));
        }
        if !(self.tol > 0.0) || self.max_iter == 0 || self.restart == 0 {
            return Err(Error::InvalidArgument("solver tolerance and iteration limits must be positive".into()));
        }
        Ok(())
    }
}

/// η-independent part of the strip discretization: Chebyshev operators,
/// quadrature weights and the factorized flat-surface preconditioner.
pub struct StripSolver {
    grid: Grid,
    depth: f64,
    nz: usize,
    z: Vec<f64>,
    weights: Vec<f64>,
    d1: DMatrix<f64>,
    /// Transposes of the derivative matrices restricted to the unknown
    /// levels `1..nz`, shape `(nz-1) × nz`.
    d1t: DMatrix<f64>,
    d2t: DMatrix<f64>,
    /// LU factors of the flat operator `∂_z² − k²` per `|mode|`.
    flat: Vec<LU<f64, Dyn, Dyn>>,
    absk: Vec<f64>,
}

impl fmt::Debug for StripSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StripSolver")
            .field("grid", &self.grid)
            .field("depth", &self.depth)
            .field("nz", &self.nz)
            .finish()
    }
}

type CacheKey = (usize, u64, u64, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<StripSolver>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<StripSolver>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl StripSolver {
    /// Shared solver for `(grid, depth, nz)`, built once per process.
    pub fn shared(grid: &Grid, depth: f64, nz: usize) -> Result<Arc<Self>> {
        let key = (grid.n(), grid.length().to_bits(), depth.to_bits(), nz);
        if let Some(s) = cache().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Ok(Arc::clone(s));
        }
        let built = Arc::new(Self::build(grid, depth, nz)?);
        let mut map = cache().lock().unwrap_or_else(|e| e.into_inner());
        Ok(Arc::clone(map.entry(key).or_insert(built)))
    }

    fn build(grid: &Grid, depth: f64, nz: usize) -> Result<Self> {
        StripOptions {
            depth,
            nz,
            ..StripOptions::default()
        }
        .validate()?;
        let x = chebyshev::nodes(nz);
        let z: Vec<f64> = x.iter().map(|&t| 0.5 * depth * (t - 1.0)).collect();
        let d1 = chebyshev::diff_matrix(nz) * (2.0 / depth);
        let d2 = &d1 * &d1;
        let weights = chebyshev::clenshaw_curtis(nz)
            .into_iter()
            .map(|w| 0.5 * depth * w)
            .collect();
        let m = nz - 1;
        let d1t = d1.columns(1, m).transpose();
        let d2t = d2.columns(1, m).transpose();

        let n = grid.n();
        let nyq = grid.nyquist_index();
        let absk: Vec<f64> = grid
            .wavenumbers()
            .iter()
            .enumerate()
            .map(|(j, k)| if j == nyq { 0.0 } else { k.abs() })
            .collect();
        let mut flat = Vec::with_capacity(n / 2 + 1);
        for &k in absk.iter().take(n / 2 + 1) {
            let mut a = DMatrix::zeros(m, m);
            for r in 0..m {
                let node = r + 1;
                for c in 0..m {
                    a[(r, c)] = if node < nz - 1 { d2[(node, c + 1)] } else { d1[(node, c + 1)] };
                }
                if node < nz - 1 {
                    a[(r, r)] -= k * k;
                }
            }
            flat.push(LU::new(a));
        }
        Ok(Self {
            grid: grid.clone(),
            depth,
            nz,
            z,
            weights,
            d1,
            d1t,
            d2t,
            flat,
            absk,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    /// Levels `z_0 = 0 > z_1 > … > z_{nz-1} = -L_z`.
    pub fn levels(&self) -> &[f64] {
        &self.z
    }

    /// Clenshaw–Curtis weights for `∫_{-L_z}^0 dz`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `d/dz` collocation matrix on [`levels`](Self::levels).
    pub fn d1(&self) -> &DMatrix<f64> {
        &self.d1
    }

    fn ik(&self, j: usize) -> Complex64 {
        if j == self.grid.nyquist_index() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, self.grid.wavenumbers()[j])
        }
    }
}

/// FFT of `a + i b` into `buf`.
fn fft_pair(grid: &Grid, a: &[f64], b: Option<&[f64]>, buf: &mut [Complex64]) {
    match b {
        Some(b) => {
            for ((c, &x), &y) in buf.iter_mut().zip(a).zip(b) {
                *c = Complex64::new(x, y);
            }
        }
        None => {
            for (c, &x) in buf.iter_mut().zip(a) {
                *c = Complex64::new(x, 0.0);
            }
        }
    }
    grid.fft(buf);
}

/// Separates the spectra of two real signals packed by [`fft_pair`].
#[inline]
fn split(buf: &[Complex64], j: usize) -> (Complex64, Complex64) {
    let n = buf.len();
    let cj = buf[j];
    let cm = buf[(n - j) % n].conj();
    let a = (cj + cm) * 0.5;
    let b = (cj - cm) * Complex64::new(0.0, -0.5);
    (a, b)
}

/// Inverse FFT of `buf`, real part to `a`, imaginary part to `b`.
fn ifft_pair(grid: &Grid, buf: &mut [Complex64], a: &mut [f64], b: Option<&mut [f64]>) {
    grid.ifft(buf);
    for (x, c) in a.iter_mut().zip(buf.iter()) {
        *x = c.re;
    }
    if let Some(b) = b {
        for (y, c) in b.iter_mut().zip(buf.iter()) {
            *y = c.im;
        }
    }
}

/// Applies Hermitian symbols `ma` to `a` and `mb` to `b` with one transform pair.
#[allow(clippy::too_many_arguments)]
fn pair_multiply(
    grid: &Grid,
    a: &[f64],
    b: Option<&[f64]>,
    ma: impl Fn(usize) -> Complex64,
    mb: impl Fn(usize) -> Complex64,
    out_a: &mut [f64],
    out_b: Option<&mut [f64]>,
    buf: &mut [Complex64],
    tmp: &mut [Complex64],
) {
    let n = grid.n();
    fft_pair(grid, a, b, buf);
    for j in 0..n {
        let (fa, fb) = split(buf, j);
        tmp[j] = ma(j) * fa + Complex64::new(0.0, 1.0) * mb(j) * fb;
    }
    ifft_pair(grid, tmp, out_a, out_b);
}

/// Coefficients of the flattened Laplacian for one surface `η`.
///
/// In `(x, z)` with `z = y − η(x)` the Laplacian reads
/// `α ∂_z² + β ∂_x∂_z + ∂_x² − γ ∂_z` with `α = 1+η_x²`, `β = −2η_x`,
/// `γ = η_xx`, or in divergence form `div(A∇)` with
/// `A = [[1, −η_x], [−η_x, 1+η_x²]]`.
#[derive(Clone, Debug)]
pub struct Surface {
    eta: RealField,
    eta_x: RealField,
    eta_xx: RealField,
    alpha: RealField,
    beta: RealField,
}

impl Surface {
    pub fn new(eta: &RealField) -> Self {
        let eta_x = dx(eta);
        let eta_xx = dxx(eta);
        let alpha = eta_x.map(|e| 1.0 + e * e);
        let beta = eta_x.scale(-2.0);
        Self {
            eta: eta.clone(),
            eta_x,
            eta_xx,
            alpha,
            beta,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.eta.grid()
    }

    pub fn eta(&self) -> &RealField {
        &self.eta
    }

    pub fn eta_x(&self) -> &RealField {
        &self.eta_x
    }

    pub fn eta_xx(&self) -> &RealField {
        &self.eta_xx
    }

    pub fn alpha(&self) -> &RealField {
        &self.alpha
    }

    pub fn beta(&self) -> &RealField {
        &self.beta
    }

    pub fn gamma(&self) -> &RealField {
        &self.eta_xx
    }

    /// Entries `(A11, A12, A22)` of the symmetric divergence-form matrix.
    pub fn matrix_a(&self) -> (RealField, RealField, RealField) {
        (
            RealField::constant(self.grid(), 1.0),
            -&self.eta_x,
            self.alpha.clone(),
        )
    }
}

/// A surface paired with a strip discretization; solves for any Dirichlet data.
#[derive(Clone, Debug)]
pub struct Strip {
    solver: Arc<StripSolver>,
    surface: Arc<Surface>,
    settings: gmres::Settings,
}

impl Strip {
    pub fn new(eta: &RealField, opts: &StripOptions) -> Result<Self> {
        Self::with_surface(Arc::new(Surface::new(eta)), opts)
    }

    pub fn with_surface(surface: Arc<Surface>, opts: &StripOptions) -> Result<Self> {
        opts.validate()?;
        let solver = StripSolver::shared(surface.grid(), opts.depth, opts.nz)?;
        Ok(Self {
            solver,
            surface,
            settings: gmres::Settings {
                tol: opts.tol,
                restart: opts.restart,
                max_iter: opts.max_iter,
            },
        })
    }

    pub fn surface(&self) -> &Arc<Surface> {
        &self.surface
    }

    pub fn solver(&self) -> &Arc<StripSolver> {
        &self.solver
    }

    /// Solves the flattened Laplace problem with `v(·, 0) = ψ`.
    ///
    /// `v = mean ψ + Ψ + w` where `Ψ = e^{z|D_x|}ψ̃` is exact and harmonic in
    /// the flat metric; the correction `w` vanishes at `z = 0` and has
    /// `∂_z w = 0` at `z = −L_z`.
    pub fn solve(&self, psi: &RealField) -> Result<StripField> {
        self.solve_from(psi, None)
    }

    /// As [`solve`](Self::solve), starting the iteration from the correction
    /// of an earlier solution on the same strip.
    pub fn solve_from(&self, psi: &RealField, guess: Option<&StripField>) -> Result<StripField> {
        let s = &*self.solver;
        let surf = &*self.surface;
        if psi.grid() != &s.grid {
            return Err(Error::GridMismatch);
        }
        if !psi.is_finite() {
            return Err(Error::NonFinite("Dirichlet data"));
        }
        let n = s.grid.n();
        let nz = s.nz;
        let m = nz - 1;
        let mean = psi.mean();
        let psi_hat = psi.minus_mean().spectrum();

        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut psi_zz = vec![0.0; n];
        let mut psi_z = vec![0.0; n];
        let mut psi_xz = vec![0.0; n];
        let mut b = vec![0.0; n * m];
        let ex = surf.eta_x.values();
        let beta = surf.beta.values();
        let gamma = surf.eta_xx.values();
        for level in 1..nz - 1 {
            let zl = s.z[level];
            for j in 0..n {
                let k = s.absk[j];
                let e = (zl * k).exp();
                buf[j] = psi_hat[j] * Complex64::new(e * k * k, e * k);
            }
            ifft_pair(&s.grid, &mut buf, &mut psi_zz, Some(&mut psi_z));
            for j in 0..n {
                let k = s.absk[j];
                buf[j] = psi_hat[j] * s.ik(j) * (zl * k).exp() * k;
            }
            ifft_pair(&s.grid, &mut buf, &mut psi_xz, None);
            let row = &mut b[(level - 1) * n..level * n];
            for i in 0..n {
                row[i] = -(ex[i] * ex[i] * psi_zz[i] + beta[i] * psi_xz[i] - gamma[i] * psi_z[i]);
            }
        }

        let mut x = match guess {
            Some(f) if Arc::ptr_eq(&f.solver, &self.solver) => f.w.as_slice()[n..].to_vec(),
            _ => vec![0.0; n * m],
        };
        let outcome = if b.iter().all(|&v| v == 0.0) {
            x.iter_mut().for_each(|v| *v = 0.0);
            gmres::Outcome {
                iterations: 0,
                residual: 0.0,
            }
        } else {
            let mut op = Workspace::new(s, surf);
            let mut pc = Workspace::new(s, surf);
            gmres::solve(
                |v, out| op.apply(v, out),
                |v, out| pc.precondition(v, out),
                &b,
                &mut x,
                self.settings,
            )?
        };

        let mut w = DMatrix::zeros(n, nz);
        w.as_mut_slice()[n..].copy_from_slice(&x);
        Ok(StripField {
            solver: Arc::clone(&self.solver),
            surface: Arc::clone(&self.surface),
            mean,
            psi_hat,
            w,
            iterations: outcome.iterations,
            residual: outcome.residual,
        })
    }
}

struct Workspace<'a> {
    s: &'a StripSolver,
    surf: &'a Surface,
    wz: DMatrix<f64>,
    wzz: DMatrix<f64>,
    t1: Vec<f64>,
    t2: Vec<f64>,
    buf: Vec<Complex64>,
    tmp: Vec<Complex64>,
    spec: Vec<Complex64>,
    rhs: DMatrix<f64>,
}

impl<'a> Workspace<'a> {
    fn new(s: &'a StripSolver, surf: &'a Surface) -> Self {
        let n = s.grid.n();
        let m = s.nz - 1;
        Self {
            s,
            surf,
            wz: DMatrix::zeros(n, s.nz),
            wzz: DMatrix::zeros(n, s.nz),
            t1: vec![0.0; n],
            t2: vec![0.0; n],
            buf: vec![Complex64::new(0.0, 0.0); n],
            tmp: vec![Complex64::new(0.0, 0.0); n],
            spec: vec![Complex64::new(0.0, 0.0); m * (n / 2 + 1)],
            rhs: DMatrix::zeros(m, 2),
        }
    }

    /// Collocated flattened Laplacian on interior levels, `∂_z` at the bottom.
    fn apply(&mut self, x: &[f64], out: &mut [f64]) {
        let s = self.s;
        let n = s.grid.n();
        let nz = s.nz;
        let w = DMatrixView::from_slice(x, n, nz - 1);
        self.wz.gemm(1.0, &w, &s.d1t, 0.0);
        self.wzz.gemm(1.0, &w, &s.d2t, 0.0);
        let alpha = self.surf.alpha.values();
        let beta = self.surf.beta.values();
        let gamma = self.surf.eta_xx.values();
        let wz = self.wz.as_slice();
        let wzz = self.wzz.as_slice();
        for level in 1..nz - 1 {
            let col = level * n..(level + 1) * n;
            let wl = &x[(level - 1) * n..level * n];
            let ksq = |j: usize| {
                let k = s.absk[j];
                Complex64::new(-k * k, 0.0)
            };
            pair_multiply(
                &s.grid,
                &wz[col.clone()],
                Some(wl),
                |j| s.ik(j),
                ksq,
                &mut self.t1,
                Some(&mut self.t2),
                &mut self.buf,
                &mut self.tmp,
            );
            let o = &mut out[(level - 1) * n..level * n];
            let wz_l = &wz[col.clone()];
            let wzz_l = &wzz[col];
            for i in 0..n {
                o[i] = alpha[i] * wzz_l[i] + beta[i] * self.t1[i] + self.t2[i] - gamma[i] * wz_l[i];
            }
        }
        let bottom = (nz - 1) * n;
        out[(nz - 2) * n..].copy_from_slice(&wz[bottom..bottom + n]);
    }

    /// Inverse of the flat operator, mode by mode.
    fn precondition(&mut self, r: &[f64], out: &mut [f64]) {
        let s = self.s;
        let n = s.grid.n();
        let m = s.nz - 1;
        let half = n / 2 + 1;
        let mut level = 0;
        while level < m {
            let a = &r[level * n..(level + 1) * n];
            let pair = level + 1 < m;
            let b = pair.then(|| &r[(level + 1) * n..(level + 2) * n]);
            fft_pair(&s.grid, a, b, &mut self.buf);
            for j in 0..half {
                let (fa, fb) = split(&self.buf, j);
                self.spec[level * half + j] = fa;
                if pair {
                    self.spec[(level + 1) * half + j] = fb;
                }
            }
            level += 2;
        }
        for j in 0..half {
            for l in 0..m {
                let c = self.spec[l * half + j];
                self.rhs[(l, 0)] = c.re;
                self.rhs[(l, 1)] = c.im;
            }
            s.flat[j].solve_mut(&mut self.rhs);
            for l in 0..m {
                self.spec[l * half + j] = Complex64::new(self.rhs[(l, 0)], self.rhs[(l, 1)]);
            }
        }
        let mut level = 0;
        while level < m {
            let pair = level + 1 < m;
            for j in 0..n {
                let (idx, conj) = if j < half { (j, false) } else { (n - j, true) };
                let take = |l: usize| {
                    let c = self.spec[l * half + idx];
                    if conj {
                        c.conj()
                    } else {
                        c
                    }
                };
                let fa = take(level);
                let fb = if pair { take(level + 1) } else { Complex64::new(0.0, 0.0) };
                self.buf[j] = fa + Complex64::new(0.0, 1.0) * fb;
            }
            let (head, tail) = out.split_at_mut((level + 1) * n);
            let oa = &mut head[level * n..];
            let ob = if pair { Some(&mut tail[..n]) } else { None };
            ifft_pair(&s.grid, &mut self.buf, oa, ob);
            level += 2;
        }
    }
}

/// Solution `v(x_i, z_m)` of a strip problem, kept in split form.
#[derive(Clone, Debug)]
pub struct StripField {
    solver: Arc<StripSolver>,
    surface: Arc<Surface>,
    mean: f64,
    psi_hat: Vec<Complex64>,
    /// Correction `w`, shape `n × nz`, column `m` is level `z_m`.
    w: DMatrix<f64>,
    iterations: usize,
    residual: f64,
}

impl StripField {
    pub fn grid(&self) -> &Grid {
        &self.solver.grid
    }

    pub fn nz(&self) -> usize {
        self.solver.nz
    }

    pub fn depth(&self) -> f64 {
        self.solver.depth
    }

    pub fn levels(&self) -> &[f64] {
        &self.solver.z
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Relative residual of the final linear solve.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn correction(&self) -> &DMatrix<f64> {
        &self.w
    }

    /// `IFFT(m(j, z_l) ψ̂)` at every level, pairing levels per transform.
    fn extension(&self, symbol: impl Fn(usize, f64) -> Complex64) -> DMatrix<f64> {
        let s = &*self.solver;
        let n = s.grid.n();
        let nz = s.nz;
        let mut out = DMatrix::zeros(n, nz);
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let data = out.as_mut_slice();
        let mut level = 0;
        while level < nz {
            let pair = level + 1 < nz;
            for j in 0..n {
                let a = symbol(j, s.z[level]);
                let b = if pair { symbol(j, s.z[level + 1]) } else { Complex64::new(0.0, 0.0) };
                buf[j] = self.psi_hat[j] * (a + Complex64::new(0.0, 1.0) * b);
            }
            let (head, tail) = data.split_at_mut((level + 1) * n);
            let ob = if pair { Some(&mut tail[..n]) } else { None };
            ifft_pair(&s.grid, &mut buf, &mut head[level * n..], ob);
            level += 2;
        }
        out
    }

    /// `v` on the tensor grid, shape `n × nz`.
    pub fn values(&self) -> DMatrix<f64> {
        let s = &*self.solver;
        let mut v = self.extension(|j, z| Complex64::new((z * s.absk[j]).exp(), 0.0));
        v += &self.w;
        v.add_scalar_mut(self.mean);
        v
    }

    /// `(∂_x v, ∂_z v)` on the tensor grid.
    pub fn gradient(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let s = &*self.solver;
        let n = s.grid.n();
        let nz = s.nz;
        let mut vx = self.extension(|j, z| s.ik(j) * (z * s.absk[j]).exp());
        let mut vz = self.extension(|j, z| {
            let k = s.absk[j];
            Complex64::new(k * (z * k).exp(), 0.0)
        });
        let tail = DMatrixView::from_slice(&self.w.as_slice()[n..], n, nz - 1);
        vz.gemm(1.0, &tail, &s.d1t, 1.0);

        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut tmp = vec![Complex64::new(0.0, 0.0); n];
        let mut ta = vec![0.0; n];
        let mut tb = vec![0.0; n];
        let w = self.w.as_slice();
        let mut level = 1;
        while level < nz {
            let pair = level + 1 < nz;
            let a = &w[level * n..(level + 1) * n];
            let b = pair.then(|| &w[(level + 1) * n..(level + 2) * n]);
            pair_multiply(&s.grid, a, b, |j| s.ik(j), |j| s.ik(j), &mut ta, Some(&mut tb), &mut buf, &mut tmp);
            let d = vx.as_mut_slice();
            for i in 0..n {
                d[level * n + i] += ta[i];
                if pair {
                    d[(level + 1) * n + i] += tb[i];
                }
            }
            level += 2;
        }
        (vx, vz)
    }

    /// Physical velocity `(Ψ_x, Ψ_y)` at the flattened nodes:
    /// `Ψ_y = ∂_z v`, `Ψ_x = ∂_x v − η_x ∂_z v`.
    pub fn velocity(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let (mut vx, vz) = self.gradient();
        let n = self.grid().n();
        let ex = self.surface.eta_x.values();
        for (idx, (a, b)) in vx.as_mut_slice().iter_mut().zip(vz.as_slice()).enumerate() {
            *a -= ex[idx % n] * b;
        }
        (vx, vz)
    }

    /// `∫_{-L_z}^0 f(x, z) dz` for a tensor-grid field.
    pub fn integrate_depth(&self, f: &DMatrix<f64>) -> RealField {
        let n = self.grid().n();
        let mut out = vec![0.0; n];
        for (m, wgt) in self.solver.weights.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(f.column(m).iter()) {
                *o += wgt * v;
            }
        }
        RealField::from_raw(self.grid().clone(), out)
    }

    /// `∬ A∇v·∇v dx dz = ∬ (Ψ_x² + Ψ_y²) dx dz` over the truncated strip.
    pub fn dirichlet_energy(&self) -> f64 {
        let (px, py) = self.velocity();
        let sq = px.component_mul(&px) + py.component_mul(&py);
        self.integrate_depth(&sq).values().iter().sum::<f64>() * self.grid().dx()
    }
}

/// Everything needed to pose one strip problem.
#[derive(Clone, Debug)]
pub struct StripProblem {
    strip: Strip,
    psi: RealField,
}

impl StripProblem {
    pub fn new(eta: &RealField, psi: &RealField, opts: &StripOptions) -> Result<Self> {
        if eta.grid() != psi.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            strip: Strip::new(eta, opts)?,
            psi: psi.clone(),
        })
    }

    pub fn surface(&self) -> &Surface {
        &self.strip.surface
    }

    pub fn dirichlet_data(&self) -> &RealField {
        &self.psi
    }
}

pub fn solve_strip(p: &StripProblem) -> Result<StripField> {
    p.strip.solve(&p.psi)
}

/// `(∂_z v, ∂_x v)` at `z = 0`. The vertical derivative combines the exact
/// `|D_x|ψ̃` with the Chebyshev derivative of the correction.
pub fn trace_derivatives(v: &StripField) -> (RealField, RealField) {
    let s = &*v.solver;
    let n = s.grid.n();
    let mut spec = v.psi_hat.clone();
    for (c, &k) in spec.iter_mut().zip(&s.absk) {
        *c *= k;
    }
    let mut vz = RealField::from_spectrum(&s.grid, spec).into_values();
    let w = v.w.as_slice();
    for mlev in 1..s.nz {
        let d = s.d1[(0, mlev)];
        for i in 0..n {
            vz[i] += d * w[mlev * n + i];
        }
    }
    let mut spec = v.psi_hat.clone();
    for (j, c) in spec.iter_mut().enumerate() {
        *c *= s.ik(j);
    }
    let vx = RealField::from_spectrum(&s.grid, spec);
    (RealField::from_raw(s.grid.clone(), vz), vx)
}

/// `g = ∫ Ψ_x Ψ_y dy` and `w̃ = ∫ (Ψ_y² − Ψ_x²)/2 dy` over the fluid column,
/// by Clenshaw–Curtis quadrature on the solve's own levels.
pub fn depth_quadrature_g_w(v: &StripField, eta: &RealField) -> Result<(RealField, RealField)> {
    if eta.grid() != v.grid() {
        return Err(Error::GridMismatch);
    }
    let same = eta
        .values()
        .iter()
        .zip(v.surface.eta.values())
        .all(|(a, b)| (a - b).abs() <= 1e-14 * (1.0 + b.abs()));
    if !same {
        return Err(Error::InvalidArgument(
            "surface differs from the one the strip was solved on".into(),
        ));
    }
    let (px, py) = v.velocity();
    let g = v.integrate_depth(&px.component_mul(&py));
    let half = (py.component_mul(&py) - px.component_mul(&px)) * 0.5;
    let w = v.integrate_depth(&half);
    Ok((g, w))
}
