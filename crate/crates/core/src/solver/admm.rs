//! ADMM for [`SpectrahedronProgram`]s.
//!
//! Each PSD constraint `G_j(X_v) + h_j ⪰ 0` gets a slack `s_j` projected onto
//! the PSD cone. Because every `G_j` is a scaled isometry, the `x`-update is a
//! diagonal solve followed by a projection onto the affine equalities: a dense
//! factorization of the normal operator for small systems, conjugate gradients
//! otherwise. Safeguarded Anderson acceleration extrapolates the `(s, u)` state.

use serde::{Deserialize, Serialize};

use super::program::{Sense, SpectrahedronProgram};
use crate::error::{Error, Result};
use crate::linalg::{eigh, spectral_map, CMatrix};
use crate::scalar::{Real, C};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "R: Real")]
pub struct SolverSettings<R> {
    /// Relative duality gap `|p − d| / (1 + |p| + |d|)`.
    pub gap_tol: R,
    /// Relative primal feasibility residual.
    pub feas_tol: R,
    /// Relative residual of the dual stationarity condition.
    pub dual_tol: R,
    pub max_iter: usize,
    pub rho: R,
    /// Over-relaxation factor in `(0, 2)`.
    pub alpha: R,
    pub check_every: usize,
    /// Anderson acceleration memory; 0 runs plain ADMM.
    #[serde(default)]
    pub anderson_memory: usize,
}

impl<R: Real> Default for SolverSettings<R> {
    fn default() -> Self {
        Self {
            gap_tol: R::tol(1e-7),
            feas_tol: R::tol(1e-8),
            dual_tol: R::tol(1e-7),
            max_iter: 50_000,
            rho: R::one(),
            alpha: R::one(),
            check_every: 10,
            anderson_memory: 15,
        }
    }
}

impl<R: Real> SolverSettings<R> {
    pub fn with_tolerances(gap_tol: R, feas_tol: R) -> Self {
        Self { gap_tol, feas_tol, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    MaxIter,
    Infeasible,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "R: Real")]
pub struct SolveReport<R> {
    pub status: SolveStatus,
    pub primal_value: R,
    pub dual_value: R,
    pub gap: R,
    pub primal_residual: R,
    pub dual_residual: R,
    pub iterations: usize,
    /// One block per program variable.
    pub primal_solution: Vec<CMatrix<R>>,
    /// `Z_j ⪰ 0` for each PSD constraint.
    pub psd_duals: Vec<CMatrix<R>>,
    /// Multiplier for each equality.
    pub eq_duals: Vec<CMatrix<R>>,
}

impl<R: Real> SolveReport<R> {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// Fails unless the solve converged.
    pub fn require_optimal(self) -> Result<Self> {
        match self.status {
            SolveStatus::Optimal => Ok(self),
            s => Err(Error::Solver(format!(
                "{s:?} after {} iterations (gap {:e}, primal residual {:e}, dual residual {:e})",
                self.iterations,
                self.gap.as_f64(),
                self.primal_residual.as_f64(),
                self.dual_residual.as_f64()
            ))),
        }
    }
}

type Blocks<R> = Vec<CMatrix<R>>;

fn dot<R: Real>(a: &[CMatrix<R>], b: &[CMatrix<R>]) -> R {
    a.iter().zip(b).fold(R::zero(), |acc, (x, y)| acc + x.hs_inner(y))
}

fn norm<R: Real>(a: &[CMatrix<R>]) -> R {
    dot(a, a).sqrt()
}

fn axpy<R: Real>(y: &mut [CMatrix<R>], s: R, x: &[CMatrix<R>]) {
    for (a, b) in y.iter_mut().zip(x) {
        a.axpy(s, b);
    }
}

/// Maximization form with the linear maps gathered per constraint.
struct Model<'a, R> {
    prog: &'a SpectrahedronProgram<R>,
    c: Blocks<R>,
    kappa: Vec<R>,
    offset: R,
}

impl<'a, R: Real> Model<'a, R> {
    fn new(prog: &'a SpectrahedronProgram<R>) -> Result<Self> {
        prog.validate()?;
        let sign = match prog.sense {
            Sense::Maximize => R::one(),
            Sense::Minimize => -R::one(),
        };
        let mut c: Blocks<R> = prog.variables.iter().map(|v| CMatrix::zeros(v.dim, v.dim)).collect();
        for (v, coeff) in &prog.objective {
            c[*v].axpy(sign, &coeff.hermitian_part());
        }
        let mut kappa = vec![R::zero(); prog.variables.len()];
        for con in &prog.psd {
            kappa[con.var] += con.map.isometry_scale(prog.dim(con.var))?;
        }
        Ok(Self { prog, c, kappa, offset: sign * prog.offset })
    }

    fn zeros_x(&self) -> Blocks<R> {
        self.prog.variables.iter().map(|v| CMatrix::zeros(v.dim, v.dim)).collect()
    }

    fn zeros_y(&self) -> Blocks<R> {
        self.prog.equalities.iter().map(|e| CMatrix::zeros(e.rhs.rows(), e.rhs.cols())).collect()
    }

    fn rhs(&self) -> Blocks<R> {
        self.prog.equalities.iter().map(|e| e.rhs.clone()).collect()
    }

    fn apply_a(&self, x: &[CMatrix<R>]) -> Blocks<R> {
        self.prog
            .equalities
            .iter()
            .map(|e| {
                let mut acc = CMatrix::zeros(e.rhs.rows(), e.rhs.cols());
                for (v, map) in &e.terms {
                    acc += &map.apply(&x[*v]);
                }
                acc
            })
            .collect()
    }

    fn apply_at(&self, y: &[CMatrix<R>]) -> Blocks<R> {
        let mut out = self.zeros_x();
        for (e, ye) in self.prog.equalities.iter().zip(y) {
            for (v, map) in &e.terms {
                out[*v] += &map.adjoint(ye);
            }
        }
        out
    }

    fn kinv(&self, x: &mut [CMatrix<R>]) {
        for (b, &k) in x.iter_mut().zip(&self.kappa) {
            *b = b.scale(R::one() / k);
        }
    }

    /// `A K⁻¹ A†`.
    fn normal_op(&self, y: &[CMatrix<R>]) -> Blocks<R> {
        let mut t = self.apply_at(y);
        self.kinv(&mut t);
        self.apply_a(&t)
    }

    fn g(&self, j: usize, x: &[CMatrix<R>]) -> CMatrix<R> {
        let con = &self.prog.psd[j];
        &con.map.apply(&x[con.var]) + &con.constant
    }

    /// `Σ_j G_j†(w_j)` gathered per variable.
    fn g_adjoint(&self, w: &[CMatrix<R>]) -> Blocks<R> {
        let mut out = self.zeros_x();
        for (con, wj) in self.prog.psd.iter().zip(w) {
            out[con.var] += &con.map.adjoint(wj);
        }
        out
    }
}

/// Conjugate gradients for the self-adjoint positive operator `op`, warm-started at `y`.
/// Returns the final residual norm.
fn cg<R: Real>(op: impl Fn(&[CMatrix<R>]) -> Blocks<R>, rhs: &[CMatrix<R>], y: &mut Blocks<R>, max_iter: usize) -> R {
    let scale = R::one() + norm(rhs);
    let tol = R::epsilon().sqrt() * R::epsilon().sqrt().sqrt() * scale;
    let mut r: Blocks<R> = rhs.to_vec();
    axpy(&mut r, -R::one(), &op(y));
    let mut rr = dot(&r, &r);
    if rr.sqrt() <= tol {
        return rr.sqrt();
    }
    let mut p = r.clone();
    for _ in 0..max_iter {
        let ap = op(&p);
        let pap = dot(&p, &ap);
        if !(pap > R::epsilon() * R::epsilon() * dot(&p, &p)) {
            break;
        }
        let a = rr / pap;
        axpy(y, a, &p);
        axpy(&mut r, -a, &ap);
        let rr_new = dot(&r, &r);
        if rr_new.sqrt() <= tol {
            rr = rr_new;
            break;
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = &pi.scale(beta) + ri;
        }
    }
    rr.sqrt()
}

/// Pseudo-inverse of `A K⁻¹ A†` in real coordinates, used when the equality
/// space is small enough to factor once per solve.
struct DenseNormal<R> {
    shapes: Vec<(usize, usize)>,
    pinv: Vec<R>,
    n: usize,
}

const DENSE_NORMAL_MAX: usize = 1200;

impl<R: Real> DenseNormal<R> {
    fn build(model: &Model<R>) -> Result<Option<Self>> {
        let shapes: Vec<(usize, usize)> = model.prog.equalities.iter().map(|e| (e.rhs.rows(), e.rhs.cols())).collect();
        let n: usize = shapes.iter().map(|(r, c)| 2 * r * c).sum();
        if n == 0 || n > DENSE_NORMAL_MAX {
            return Ok(None);
        }
        let this = Self { shapes, pinv: Vec::new(), n };
        let mut cols: Vec<Vec<R>> = Vec::with_capacity(n);
        for k in 0..n {
            let mut e = vec![R::zero(); n];
            e[k] = R::one();
            cols.push(this.to_real(&model.normal_op(&this.from_real(&e))));
        }
        let sym = CMatrix::from_fn(n, n, |i, j| C::new((cols[j][i] + cols[i][j]) * R::lit(0.5), R::zero()));
        let (vals, vecs) = eigh(&sym)?;
        let top = vals.iter().fold(R::zero(), |m, &v| m.max(v.abs()));
        let cut = top * R::epsilon().sqrt() * R::epsilon().sqrt().sqrt();
        let mut pinv = vec![R::zero(); n * n];
        for (k, &lam) in vals.iter().enumerate() {
            if lam <= cut {
                continue;
            }
            let inv = R::one() / lam;
            let col: Vec<R> = (0..n).map(|i| vecs[(i, k)].re).collect();
            for i in 0..n {
                let s = col[i] * inv;
                let row = &mut pinv[i * n..(i + 1) * n];
                for (p, &c) in row.iter_mut().zip(&col) {
                    *p += s * c;
                }
            }
        }
        Ok(Some(Self { pinv, ..this }))
    }

    fn to_real(&self, b: &[CMatrix<R>]) -> Vec<R> {
        let mut out = Vec::with_capacity(self.n);
        for m in b {
            for z in m.data() {
                out.push(z.re);
                out.push(z.im);
            }
        }
        out
    }

    fn from_real(&self, v: &[R]) -> Blocks<R> {
        let mut pos = 0;
        self.shapes
            .iter()
            .map(|&(r, c)| {
                let data = (0..r * c).map(|k| C::new(v[pos + 2 * k], v[pos + 2 * k + 1])).collect();
                pos += 2 * r * c;
                CMatrix::from_vec(r, c, data)
            })
            .collect()
    }

    fn solve(&self, rhs: &[CMatrix<R>]) -> Blocks<R> {
        let r = self.to_real(rhs);
        let y: Vec<R> = self
            .pinv
            .chunks(self.n)
            .map(|row| row.iter().zip(&r).fold(R::zero(), |acc, (&a, &b)| acc + a * b))
            .collect();
        self.from_real(&y)
    }
}

fn project_psd<R: Real>(w: &CMatrix<R>) -> Result<CMatrix<R>> {
    let (vals, vecs) = eigh(w)?;
    if vals[0] >= R::zero() {
        return Ok(w.clone());
    }
    Ok(spectral_map(&vals, &vecs, |x| x.max(R::zero())))
}

struct Iterate<R> {
    x: Blocks<R>,
    s: Blocks<R>,
    u: Blocks<R>,
    y: Blocks<R>,
}

struct Metrics<R> {
    primal: R,
    dual: R,
    gap: R,
    primal_res: R,
    dual_res: R,
}

fn metrics<R: Real>(model: &Model<R>, it: &Iterate<R>, rho: R) -> Metrics<R> {
    let z: Blocks<R> = (0..model.prog.psd.len()).map(|j| model.g(j, &it.x)).collect();
    let mut diff = z.clone();
    axpy(&mut diff, -R::one(), &it.s);
    let h: Blocks<R> = model.prog.psd.iter().map(|c| c.constant.clone()).collect();
    let cone_res = norm(&diff) / (R::one() + norm(&z).max(norm(&it.s)).max(norm(&h)));
    let b = model.rhs();
    let mut eq = model.apply_a(&it.x);
    axpy(&mut eq, -R::one(), &b);
    let eq_res = norm(&eq) / (R::one() + norm(&b));

    let zdual: Blocks<R> = it.u.iter().map(|u| u.scale(-rho)).collect();
    let lambda: Blocks<R> = it.y.iter().map(|y| y.scale(rho)).collect();
    let mut station = model.c.clone();
    axpy(&mut station, R::one(), &model.g_adjoint(&zdual));
    axpy(&mut station, -R::one(), &model.apply_at(&lambda));
    let dual_res = norm(&station) / (R::one() + norm(&model.c));

    let primal = dot(&model.c, &it.x) + model.offset;
    let dual = dot(&zdual, &h) + dot(&lambda, &b) + model.offset;
    let gap = (primal - dual).abs() / (R::one() + primal.abs() + dual.abs());
    Metrics { primal, dual, gap, primal_res: cone_res.max(eq_res), dual_res }
}

/// Checks for a Farkas-type certificate of primal infeasibility in the direction `du`.
fn infeasibility_certificate<R: Real>(model: &Model<R>, du: &[CMatrix<R>]) -> bool {
    let nd = norm(du);
    if !(nd > R::zero()) {
        return false;
    }
    let ycert: Blocks<R> = du.iter().map(|d| d.scale(-R::one() / nd)).collect();
    let gty = model.g_adjoint(&ycert);
    let h: Blocks<R> = model.prog.psd.iter().map(|c| c.constant.clone()).collect();
    let mut support = dot(&ycert, &h);
    let mut resid = gty.clone();
    if !model.prog.equalities.is_empty() {
        // Best μ with A†μ ≈ ΣG†Y.
        let mut mu = model.zeros_y();
        let rhs = model.apply_a(&gty);
        cg(|v| model.apply_a(&model.apply_at(v)), &rhs, &mut mu, 500);
        axpy(&mut resid, -R::one(), &model.apply_at(&mu));
        support -= dot(&mu, &model.rhs());
    }
    let tol = R::lit(1e-6);
    norm(&resid) <= tol && support < -tol
}

/// Solves `prog` to the tolerances in `settings`.
pub fn solve<R: Real>(prog: &SpectrahedronProgram<R>, settings: &SolverSettings<R>) -> Result<SolveReport<R>> {
    let model = Model::new(prog)?;
    let alpha = settings.alpha;
    let mut rho = settings.rho;
    let ncon = prog.psd.len();
    let has_eq = !prog.equalities.is_empty();
    let y_dim: usize = prog.equalities.iter().map(|e| e.rhs.rows() * e.rhs.rows()).sum();
    let cg_iters = (2 * y_dim).clamp(20, 2000);
    let dense = if has_eq { DenseNormal::build(&model)? } else { None };

    let mut it = Iterate {
        x: model.zeros_x(),
        s: (0..ncon).map(|j| project_psd(&prog.psd[j].constant)).collect::<Result<_>>()?,
        u: prog.psd.iter().map(|c| CMatrix::zeros(c.constant.rows(), c.constant.cols())).collect(),
        y: model.zeros_y(),
    };

    if has_eq {
        // Affine consistency: the least-norm solution must satisfy Ax = b.
        let b = model.rhs();
        let y = match &dense {
            Some(dn) => dn.solve(&b),
            None => {
                let mut y = model.zeros_y();
                cg(|v| model.normal_op(v), &b, &mut y, cg_iters.max(200));
                y
            }
        };
        let mut x = model.apply_at(&y);
        model.kinv(&mut x);
        let mut r = model.apply_a(&x);
        axpy(&mut r, -R::one(), &b);
        if norm(&r) > R::tol(1e-6) * (R::one() + norm(&b)) {
            return Ok(infeasible_report(x, it.u, it.y, 0));
        }
    }

    let mut u_prev_check = it.u.clone();
    let mut infeasible_streak = 0usize;
    let mut last: Option<Metrics<R>> = None;
    let mut iterations = 0;
    let mut aa = Anderson::new(settings.anderson_memory);
    // Point fed to the next ADMM step; differs from (s, u) after an accelerated step.
    let mut z: Blocks<R> = it.s.iter().chain(&it.u).cloned().collect();
    let mut fallback: Option<(Blocks<R>, R)> = None;
    // Smallest fixed-point residual seen since the last change of rho.
    let mut best_g = R::infinity();
    for k in 1..=settings.max_iter {
        iterations = k;
        let (zs, zu) = z.split_at(ncon);
        let s_old = zs.to_vec();

        // x-update.
        let mut w: Blocks<R> = Vec::with_capacity(ncon);
        for j in 0..ncon {
            let mut t = zs[j].clone();
            t -= &prog.psd[j].constant;
            t -= &zu[j];
            w.push(t);
        }
        let mut x0 = model.g_adjoint(&w);
        axpy(&mut x0, R::one() / rho, &model.c);
        model.kinv(&mut x0);
        if has_eq {
            let mut r = model.apply_a(&x0);
            axpy(&mut r, -R::one(), &model.rhs());
            match &dense {
                Some(dn) => it.y = dn.solve(&r),
                None => {
                    cg(|v| model.normal_op(v), &r, &mut it.y, cg_iters);
                }
            }
            let mut corr = model.apply_at(&it.y);
            model.kinv(&mut corr);
            axpy(&mut x0, -R::one(), &corr);
        }
        it.x = x0;

        // s- and u-updates.
        for j in 0..ncon {
            let z = model.g(j, &it.x);
            let mut zhat = z.scale(alpha);
            zhat.axpy(R::one() - alpha, &zs[j]);
            let mut v = zhat.clone();
            v += &zu[j];
            let s_new = project_psd(&v)?;
            it.u[j] = &v - &s_new;
            it.s[j] = s_new;
        }

        let f: Blocks<R> = it.s.iter().chain(&it.u).cloned().collect();
        let mut g = z.clone();
        axpy(&mut g, -R::one(), &f);
        let gnorm = norm(&g);
        let rejected = match fallback.take() {
            Some((base, _)) if !(gnorm < best_g) => {
                // The extrapolated point made things worse: restart from the plain step.
                aa.reset();
                z = base;
                true
            }
            _ => false,
        };
        if gnorm < best_g {
            best_g = gnorm;
        }
        if !rejected {
            z = match aa.push(&g, &f) {
                Some(next) => {
                    fallback = Some((f, gnorm));
                    next
                }
                None => f,
            };
        }

        // After a rejection `it` holds the discarded point; check on the next plain step instead.
        if rejected && k < settings.max_iter {
            continue;
        }
        if k % settings.check_every == 0 || k == settings.max_iter {
            let m = metrics(&model, &it, rho);
            let done = m.gap <= settings.gap_tol && m.primal_res <= settings.feas_tol && m.dual_res <= settings.dual_tol;
            if done {
                return Ok(report(prog, it, rho, m, k, SolveStatus::Optimal));
            }

            // Residual balancing.
            if k % (5 * settings.check_every) == 0 {
                let mut ds = it.s.clone();
                axpy(&mut ds, -R::one(), &s_old);
                let dual_step = rho * norm(&model.g_adjoint(&ds)) / (R::one() + norm(&model.c));
                let ten = R::lit(10.0);
                let tau = R::lit(2.0);
                let factor = if m.primal_res > ten * dual_step.max(m.dual_res) {
                    Some(tau)
                } else if m.dual_res.max(dual_step) > ten * m.primal_res {
                    Some(R::one() / tau)
                } else {
                    None
                };
                if let Some(f) = factor {
                    rho *= f;
                    for u in &mut it.u {
                        *u = u.scale(R::one() / f);
                    }
                    for y in &mut it.y {
                        *y = y.scale(R::one() / f);
                    }
                    z = it.s.iter().chain(&it.u).cloned().collect();
                    fallback = None;
                    best_g = R::infinity();
                    aa.reset();
                }
            }

            // Divergence of u signals primal infeasibility.
            if k >= 2000 && m.primal_res > settings.feas_tol.sqrt() {
                let mut du = it.u.clone();
                axpy(&mut du, -R::one(), &u_prev_check);
                if infeasibility_certificate(&model, &du) {
                    infeasible_streak += 1;
                } else {
                    infeasible_streak = 0;
                }
                if infeasible_streak >= 20 {
                    return Ok(infeasible_report(it.x, it.u, it.y, k));
                }
            }
            u_prev_check = it.u.clone();
            last = Some(m);
        }
    }
    let m = last.unwrap_or_else(|| metrics(&model, &it, rho));
    Ok(report(prog, it, rho, m, iterations, SolveStatus::MaxIter))
}

/// Type-II Anderson acceleration of the fixed-point map `z ↦ f(z)` with residual `g = z − f`.
struct Anderson<R> {
    memory: usize,
    prev: Option<(Blocks<R>, Blocks<R>)>,
    dg: Vec<Blocks<R>>,
    df: Vec<Blocks<R>>,
    /// Cached inner products of the `dg` columns.
    gram: Vec<Vec<R>>,
}

impl<R: Real> Anderson<R> {
    fn new(memory: usize) -> Self {
        Self { memory, prev: None, dg: Vec::new(), df: Vec::new(), gram: Vec::new() }
    }

    fn reset(&mut self) {
        self.prev = None;
        self.dg.clear();
        self.df.clear();
        self.gram.clear();
    }

    /// Records `(g, f)` and returns the extrapolated point, if any.
    fn push(&mut self, g: &[CMatrix<R>], f: &[CMatrix<R>]) -> Option<Blocks<R>> {
        if self.memory == 0 {
            return None;
        }
        if let Some((gp, fp)) = self.prev.take() {
            let mut dg = g.to_vec();
            axpy(&mut dg, -R::one(), &gp);
            let mut df = f.to_vec();
            axpy(&mut df, -R::one(), &fp);
            if self.dg.len() == self.memory {
                self.dg.remove(0);
                self.df.remove(0);
                self.gram.remove(0);
                for row in &mut self.gram {
                    row.remove(0);
                }
            }
            let mut row: Vec<R> = self.dg.iter().map(|c| dot(c, &dg)).collect();
            row.push(dot(&dg, &dg));
            for (r, &v) in self.gram.iter_mut().zip(&row) {
                r.push(v);
            }
            self.gram.push(row);
            self.dg.push(dg);
            self.df.push(df);
        }
        self.prev = Some((g.to_vec(), f.to_vec()));
        let m = self.dg.len();
        if m == 0 {
            return None;
        }
        let mut gram = vec![R::zero(); m * m];
        let mut rhs = vec![R::zero(); m];
        for i in 0..m {
            rhs[i] = dot(&self.dg[i], g);
            gram[i * m..(i + 1) * m].copy_from_slice(&self.gram[i]);
        }
        let tr = (0..m).fold(R::zero(), |a, i| a + gram[i * m + i]);
        let reg = tr * R::epsilon().sqrt() + R::min_positive_value();
        for i in 0..m {
            gram[i * m + i] += reg;
        }
        let gamma = solve_small(&mut gram, &mut rhs, m)?;
        if gamma.iter().any(|v| !v.is_finite()) {
            self.reset();
            return None;
        }
        let mut out = f.to_vec();
        for (gi, dfi) in gamma.iter().zip(&self.df) {
            axpy(&mut out, -*gi, dfi);
        }
        Some(out)
    }
}

/// Gaussian elimination with partial pivoting on a small dense system.
fn solve_small<R: Real>(a: &mut [R], b: &mut [R], n: usize) -> Option<Vec<R>> {
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i * n + col].abs().partial_cmp(&a[j * n + col].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
        if !(a[piv * n + col].abs() > R::zero()) {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        for row in col + 1..n {
            let f = a[row * n + col] / a[col * n + col];
            for k in col..n {
                let t = a[col * n + k];
                a[row * n + k] -= f * t;
            }
            let t = b[col];
            b[row] -= f * t;
        }
    }
    let mut x = vec![R::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row * n + k] * x[k];
        }
        x[row] = acc / a[row * n + row];
    }
    Some(x)
}

fn report<R: Real>(
    prog: &SpectrahedronProgram<R>,
    it: Iterate<R>,
    rho: R,
    m: Metrics<R>,
    iterations: usize,
    status: SolveStatus,
) -> SolveReport<R> {
    let (primal_value, dual_value) = match prog.sense {
        Sense::Maximize => (m.primal, m.dual),
        Sense::Minimize => (-m.primal, -m.dual),
    };
    SolveReport {
        status,
        primal_value,
        dual_value,
        gap: m.gap,
        primal_residual: m.primal_res,
        dual_residual: m.dual_res,
        iterations,
        primal_solution: it.x,
        psd_duals: it.u.iter().map(|u| u.scale(-rho)).collect(),
        eq_duals: it.y.iter().map(|y| y.scale(rho)).collect(),
    }
}

fn infeasible_report<R: Real>(
    x: Blocks<R>,
    u: Blocks<R>,
    y: Blocks<R>,
    iterations: usize,
) -> SolveReport<R> {
    let nan = R::nan();
    SolveReport {
        status: SolveStatus::Infeasible,
        primal_value: nan,
        dual_value: nan,
        gap: nan,
        primal_residual: nan,
        dual_residual: nan,
        iterations,
        primal_solution: x,
        psd_duals: u,
        eq_duals: y,
    }
}
