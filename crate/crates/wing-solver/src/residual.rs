use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};
use nalgebra::Const;
use num_dual::{Derivative, DualNum, DualSVec64};
use rayon::prelude::*;

use crate::problem::{WingProblem, WingState, FIELDS};
use crate::WingError;

/// Sign of each unknown under `u ↦ −u`; all are even across the axis.
pub(crate) const PARITY_U: [f64; FIELDS] = [1.0, -1.0, 1.0, 1.0, 1.0];

/// 3 × 3 stencil, slot `3(di + 1) + (dj + 1)`.
const SLOTS: usize = 9;
const INPUTS: usize = FIELDS * SLOTS;
type Dual = DualSVec64<INPUTS>;

/// Half-strip node feeding a stencil slot, and whether it is the mirror
/// image across `Σ`. The axis ghost below `j = 0` is the node itself
/// (cell-centred rows, even fields).
#[inline]
fn source(i: usize, j: usize, slot: usize) -> (usize, usize, bool) {
    let (di, dj) = (slot / 3, slot % 3);
    let (ii, flip) = if i + di == 0 { (1, true) } else { (i + di - 1, false) };
    let jj = if j + dj == 0 { 0 } else { j + dj - 1 };
    (ii, jj, flip)
}

#[derive(Clone, Copy)]
struct Jet<T> {
    c: T,
    u: T,
    v: T,
    uu: T,
    uv: T,
    vv: T,
}

fn jet<T: DualNum<f64> + Copy>(s: &[[T; FIELDS]; SLOTS], f: usize, h: f64) -> Jet<T> {
    let c = s[4][f];
    Jet {
        c,
        u: (s[7][f] - s[1][f]) * (0.5 / h),
        v: (s[5][f] - s[3][f]) * (0.5 / h),
        uu: (s[7][f] - c * 2.0 + s[1][f]) * (1.0 / (h * h)),
        vv: (s[5][f] - c * 2.0 + s[3][f]) * (1.0 / (h * h)),
        uv: (s[8][f] - s[6][f] - s[2][f] + s[0][f]) * (0.25 / (h * h)),
    }
}

type M3<T> = [[T; 3]; 3];
type T3<T> = [[[T; 3]; 3]; 3];

/// Metric, inverse and connection at a node, coordinates `(u, v, θ)`.
/// Derivative arrays carry only `∂u, ∂v`.
struct Geometry<T> {
    g: M3<T>,
    dg: [M3<T>; 2],
    gi: M3<T>,
    dgi: [M3<T>; 2],
    gam: T3<T>,
    dgam: [T3<T>; 2],
}

/// Christoffel symbols `Γ^k_ij` and their first derivatives.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Connection {
    gam: T3<f64>,
    dgam: [T3<f64>; 2],
}

fn geometry<T: DualNum<f64> + Copy>(j: &[Jet<T>; FIELDS], v: f64) -> Geometry<T> {
    let z = T::zero();
    let (a, ft, b, c) = (j[0], j[1], j[2], j[3]);
    let mut g = [[z; 3]; 3];
    let mut dg = [[[z; 3]; 3]; 2];
    let mut ddg = [[[[z; 3]; 3]; 2]; 2];
    let mut put = |p: usize, q: usize, val: T, d: [T; 2], dd: [T; 3]| {
        g[p][q] = val;
        g[q][p] = val;
        for m in 0..2 {
            dg[m][p][q] = d[m];
            dg[m][q][p] = d[m];
        }
        let second = [[dd[0], dd[1]], [dd[1], dd[2]]];
        for m in 0..2 {
            for n in 0..2 {
                ddg[m][n][p][q] = second[m][n];
                ddg[m][n][q][p] = second[m][n];
            }
        }
    };
    put(0, 0, a.c, [a.u, a.v], [a.uu, a.uv, a.vv]);
    put(1, 1, b.c, [b.u, b.v], [b.uu, b.uv, b.vv]);
    // g_uv = v F̃
    put(
        0,
        1,
        ft.c * v,
        [ft.u * v, ft.c + ft.v * v],
        [ft.uu * v, ft.u + ft.uv * v, ft.v * 2.0 + ft.vv * v],
    );
    // g_θθ = v² C
    let v2 = v * v;
    put(
        2,
        2,
        c.c * v2,
        [c.u * v2, c.c * (2.0 * v) + c.v * v2],
        [c.uu * v2, c.u * (2.0 * v) + c.uv * v2, c.c * 2.0 + c.v * (4.0 * v) + c.vv * v2],
    );

    let det = g[0][0] * g[1][1] - g[0][1] * g[0][1];
    let mut gi = [[z; 3]; 3];
    gi[0][0] = g[1][1] / det;
    gi[1][1] = g[0][0] / det;
    gi[0][1] = -g[0][1] / det;
    gi[1][0] = gi[0][1];
    gi[2][2] = g[2][2].recip();

    // dg[m][a][b] = ∂_m g_ab, zero for m = θ
    let dgf = |m: usize, p: usize, q: usize| if m < 2 { dg[m][p][q] } else { z };
    let ddgf = |m: usize, n: usize, p: usize, q: usize| if n < 2 { ddg[m][n][p][q] } else { z };
    let mut low = [[[z; 3]; 3]; 3];
    let mut dlow = [[[[z; 3]; 3]; 3]; 2];
    for l in 0..3 {
        for p in 0..3 {
            for q in 0..3 {
                low[l][p][q] = (dgf(p, q, l) + dgf(q, p, l) - dgf(l, p, q)) * 0.5;
                for m in 0..2 {
                    let d = |n: usize, x: usize, y: usize| ddgf(m, n, x, y);
                    dlow[m][l][p][q] = (d(p, q, l) + d(q, p, l) - d(l, p, q)) * 0.5;
                }
            }
        }
    }
    let mut dgi = [[[z; 3]; 3]; 2];
    for m in 0..2 {
        for k in 0..3 {
            for l in 0..3 {
                let mut s = z;
                for p in 0..3 {
                    for q in 0..3 {
                        s += gi[k][p] * dg[m][p][q] * gi[q][l];
                    }
                }
                dgi[m][k][l] = -s;
            }
        }
    }
    let mut gam = [[[z; 3]; 3]; 3];
    let mut dgam = [[[[z; 3]; 3]; 3]; 2];
    for k in 0..3 {
        for p in 0..3 {
            for q in 0..3 {
                let mut s = z;
                for l in 0..3 {
                    s += gi[k][l] * low[l][p][q];
                }
                gam[k][p][q] = s;
                for m in 0..2 {
                    let mut d = z;
                    for l in 0..3 {
                        d += dgi[m][k][l] * low[l][p][q] + gi[k][l] * dlow[m][l][p][q];
                    }
                    dgam[m][k][p][q] = d;
                }
            }
        }
    }
    Geometry { g, dg, gi, dgi, gam, dgam }
}

/// `E = Ric − ∇²f − ½ L_W g` and `E₂ = Δf + |∇f|² − 1`, returned as
/// `(E_uu, E_uv / v, E_vv, E_θθ / v², E₂)`.
fn equations<T: DualNum<f64> + Copy>(j: &[Jet<T>; FIELDS], v: f64, bg: &Connection) -> [T; FIELDS] {
    let z = T::zero();
    let Geometry { g, dg, gi, dgi, gam, dgam } = geometry(j, v);
    let dgam_at = |m: usize, k: usize, p: usize, q: usize| if m < 2 { dgam[m][k][p][q] } else { z };

    let mut ric = [[z; 3]; 3];
    for p in 0..3 {
        for q in p..3 {
            let mut s = z;
            for k in 0..3 {
                s += dgam_at(k, k, p, q) - dgam_at(q, k, p, k);
                for l in 0..3 {
                    s += gam[k][k][l] * gam[l][p][q] - gam[k][q][l] * gam[l][p][k];
                }
            }
            ric[p][q] = s;
        }
    }

    // W^k = g^{pq} (Γ − Γ̄)^k_pq and its derivatives
    let mut w_up = [z; 3];
    let mut dw_up = [[z; 3]; 2];
    for k in 0..3 {
        for p in 0..3 {
            for q in 0..3 {
                let diff = gam[k][p][q] - bg.gam[k][p][q];
                w_up[k] += gi[p][q] * diff;
                for m in 0..2 {
                    dw_up[m][k] += dgi[m][p][q] * diff + gi[p][q] * (dgam[m][k][p][q] - bg.dgam[m][k][p][q]);
                }
            }
        }
    }
    let mut w_lo = [z; 3];
    let mut dw_lo = [[z; 3]; 3];
    for a in 0..3 {
        for k in 0..3 {
            w_lo[a] += g[a][k] * w_up[k];
            for m in 0..2 {
                dw_lo[m][a] += dg[m][a][k] * w_up[k] + g[a][k] * dw_up[m][k];
            }
        }
    }

    let f = j[4];
    let df = [f.u, f.v, z];
    let ddf = [[f.uu, f.uv, z], [f.uv, f.vv, z], [z, z, z]];
    let mut hess = [[z; 3]; 3];
    let mut e = [[z; 3]; 3];
    for p in 0..3 {
        for q in p..3 {
            let mut h = ddf[p][q];
            let mut nabla = dw_lo[p][q] + dw_lo[q][p];
            for k in 0..3 {
                h -= gam[k][p][q] * df[k];
                nabla -= gam[k][p][q] * w_lo[k] * 2.0;
            }
            hess[p][q] = h;
            hess[q][p] = h;
            e[p][q] = ric[p][q] - h - nabla * 0.5;
        }
    }
    let mut e2 = T::from(-1.0);
    for p in 0..3 {
        for q in 0..3 {
            e2 += gi[p][q] * (hess[p][q] + df[p] * df[q]);
        }
    }
    [e[0][0], e[0][1] * (1.0 / v), e[1][1], e[2][2] * (1.0 / (v * v)), e2]
}

fn connection(state: &WingState, i: usize, j: usize, v: f64, h: f64) -> Connection {
    let slots = gather(state, i, j, |x, _| x);
    let jets = std::array::from_fn(|f| jet(&slots, f, h));
    let geo = geometry::<f64>(&jets, v);
    Connection { gam: geo.gam, dgam: geo.dgam }
}

fn gather<T: Copy>(state: &WingState, i: usize, j: usize, lift: impl Fn(f64, usize) -> T) -> [[T; FIELDS]; SLOTS] {
    std::array::from_fn(|s| {
        let (ii, jj, flip) = source(i, j, s);
        std::array::from_fn(|f| {
            let x = state.get(f, ii, jj);
            lift(if flip { PARITY_U[f] * x } else { x }, f * SLOTS + s)
        })
    })
}

/// Fixed data of a discretized problem: the background state and its
/// connection, against which the gauge is measured.
#[derive(Debug, Clone)]
pub struct Discretization {
    problem: WingProblem,
    background: WingState,
    connection: Vec<Connection>,
}

/// Residual and Jacobian at a state.
#[derive(Debug)]
pub struct System {
    pub residual: Vec<f64>,
    pub jacobian: Jacobian,
}

/// Sparse Jacobian of the residual map.
#[derive(Debug)]
pub struct Jacobian {
    matrix: SparseColMat<usize, f64>,
}

impl Jacobian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn nnz(&self) -> usize {
        self.matrix.compute_nnz()
    }

    /// `J δ`.
    pub fn apply(&self, dx: &[f64]) -> Vec<f64> {
        let m = self.matrix.as_ref();
        let (ptr, rows, val) = (m.col_ptr(), m.row_idx(), m.val());
        let mut out = vec![0.0; m.nrows()];
        for (c, x) in dx.iter().enumerate() {
            for k in ptr[c]..ptr[c + 1] {
                out[rows[k]] += val[k] * x;
            }
        }
        out
    }

    /// Solve `J x = b` by sparse LU.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, WingError> {
        let lu = self.matrix.sp_lu().map_err(|e| WingError::Factorization(format!("{e:?}")))?;
        let rhs = faer::Col::from_fn(b.len(), |k| b[k]);
        let x = lu.solve(&rhs);
        let out: Vec<f64> = (0..b.len()).map(|k| x[k]).collect();
        if out.iter().any(|x| !x.is_finite()) {
            return Err(WingError::Factorization("non-finite solution".into()));
        }
        Ok(out)
    }
}

impl Discretization {
    pub fn new(problem: &WingProblem) -> Result<Self, WingError> {
        problem.validate()?;
        let background = problem.background();
        let (nu, nv, h) = (background.nu, background.nv, problem.spacing());
        let connection = (0..nu * nv)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / nv, k % nv);
                if i + 1 < nu && j + 1 < nv {
                    connection(&background, i, j, problem.v(j), h)
                } else {
                    Connection { gam: [[[0.0; 3]; 3]; 3], dgam: [[[[0.0; 3]; 3]; 3]; 2] }
                }
            })
            .collect();
        Ok(Discretization { problem: problem.clone(), background, connection })
    }

    pub fn problem(&self) -> &WingProblem {
        &self.problem
    }

    pub fn background(&self) -> &WingState {
        &self.background
    }

    fn check_shape(&self, state: &WingState) -> Result<(), WingError> {
        if state.data.len() != self.problem.unknowns() || state.nv != self.problem.nodes_v {
            return Err(WingError::ShapeMismatch { got: state.data.len(), expected: self.problem.unknowns() });
        }
        Ok(())
    }

    /// True where the row is a boundary condition rather than an equation.
    #[inline]
    fn is_boundary(&self, f: usize, i: usize, j: usize) -> bool {
        let (nu, nv) = (self.background.nu, self.background.nv);
        i + 1 == nu || j + 1 == nv || (f == 1 && i == 0)
    }

    /// The discrete equations at every node with a full stencil (zero
    /// elsewhere), before boundary rows are substituted.
    pub fn equations(&self, state: &WingState) -> Result<Vec<f64>, WingError> {
        self.check_shape(state)?;
        let (nu, nv, h) = (state.nu, state.nv, self.problem.spacing());
        let mut out = vec![0.0; state.data.len()];
        let rows: Vec<(usize, Vec<[f64; FIELDS]>)> = (0..nu - 1)
            .into_par_iter()
            .map(|i| {
                let vals = (0..nv - 1)
                    .map(|j| {
                        let slots = gather(state, i, j, |x, _| x);
                        let jets = std::array::from_fn(|f| jet(&slots, f, h));
                        equations(&jets, self.problem.v(j), &self.connection[i * nv + j])
                    })
                    .collect();
                (i, vals)
            })
            .collect();
        for (i, vals) in rows {
            for (j, e) in vals.into_iter().enumerate() {
                for f in 0..FIELDS {
                    out[state.index(f, i, j)] = e[f];
                }
            }
        }
        Ok(out)
    }

    /// Equations with boundary rows: `F̃ = 0` on `Σ`, Dirichlet data
    /// `X = X̄` on `u = U` and on the top row.
    pub fn residual(&self, state: &WingState) -> Result<Vec<f64>, WingError> {
        state.check_positive(&self.problem)?;
        let mut r = self.equations(state)?;
        let bg = &self.background;
        for f in 0..FIELDS {
            for i in 0..state.nu {
                for j in 0..state.nv {
                    if self.is_boundary(f, i, j) {
                        let k = state.index(f, i, j);
                        r[k] = state.data[k] - bg.data[k];
                    }
                }
            }
        }
        Ok(r)
    }

    /// Residual and exact Jacobian. Each interior node's five equations
    /// are differentiated in forward mode with respect to the 45 stencil
    /// values, then scattered onto the unknowns with the mirror signs.
    pub fn assemble(&self, state: &WingState) -> Result<System, WingError> {
        let residual = self.residual(state)?;
        let (nu, nv, h) = (state.nu, state.nv, self.problem.spacing());
        let n = state.data.len();
        let blocks: Vec<Vec<Triplet<usize, usize, f64>>> = (0..nu)
            .into_par_iter()
            .map(|i| {
                let mut trip = Vec::with_capacity(nv * FIELDS * FIELDS * SLOTS);
                for j in 0..nv {
                    if i + 1 == nu || j + 1 == nv {
                        for f in 0..FIELDS {
                            let k = state.index(f, i, j);
                            trip.push(Triplet::new(k, k, 1.0));
                        }
                        continue;
                    }
                    let slots = gather(state, i, j, |x, seed| {
                        Dual::new(x, Derivative::derivative_generic(Const::<INPUTS>, Const::<1>, seed))
                    });
                    let jets = std::array::from_fn(|f| jet(&slots, f, h));
                    let e = equations(&jets, self.problem.v(j), &self.connection[i * nv + j]);
                    // distinct source nodes of the stencil
                    let mut nodes: Vec<(usize, usize)> = Vec::with_capacity(SLOTS);
                    let mut slot_node = [(0usize, false); SLOTS];
                    for s in 0..SLOTS {
                        let (ii, jj, flip) = source(i, j, s);
                        let at = nodes.iter().position(|&x| x == (ii, jj)).unwrap_or_else(|| {
                            nodes.push((ii, jj));
                            nodes.len() - 1
                        });
                        slot_node[s] = (at, flip);
                    }
                    for (fo, eq) in e.iter().enumerate() {
                        let row = state.index(fo, i, j);
                        if self.is_boundary(fo, i, j) {
                            trip.push(Triplet::new(row, row, 1.0));
                            continue;
                        }
                        let grad = eq.eps.clone().unwrap_generic(Const::<INPUTS>, Const::<1>);
                        for f in 0..FIELDS {
                            let mut acc = [0.0; SLOTS];
                            for s in 0..SLOTS {
                                let (at, flip) = slot_node[s];
                                let sign = if flip { PARITY_U[f] } else { 1.0 };
                                acc[at] += sign * grad[f * SLOTS + s];
                            }
                            for (at, &(ii, jj)) in nodes.iter().enumerate() {
                                if acc[at] != 0.0 {
                                    trip.push(Triplet::new(row, state.index(f, ii, jj), acc[at]));
                                }
                            }
                        }
                    }
                }
                trip
            })
            .collect();
        let trip: Vec<_> = blocks.into_iter().flatten().collect();
        let matrix = SparseColMat::try_new_from_triplets(n, n, &trip)
            .map_err(|e| WingError::Factorization(format!("{e:?}")))?;
        Ok(System { residual, jacobian: Jacobian { matrix } })
    }
}

impl Discretization {
    /// `‖J d − (r(x + εd) − r(x − εd)) / 2ε‖∞ / ‖J d‖∞`.
    pub fn jacobian_fd_error(
        &self,
        state: &WingState,
        jacobian: &Jacobian,
        dir: &[f64],
        eps: f64,
    ) -> Result<f64, WingError> {
        if dir.len() != state.data.len() {
            return Err(WingError::ShapeMismatch { got: dir.len(), expected: state.data.len() });
        }
        let shifted = |sgn: f64| {
            let mut y = state.clone();
            for (a, d) in y.data.iter_mut().zip(dir) {
                *a += sgn * eps * d;
            }
            self.residual(&y)
        };
        let (rp, rm) = (shifted(1.0)?, shifted(-1.0)?);
        let jd = jacobian.apply(dir);
        let diff: Vec<f64> = (0..jd.len()).map(|k| jd[k] - (rp[k] - rm[k]) / (2.0 * eps)).collect();
        Ok(max_norm(&diff) / max_norm(&jd))
    }
}

/// One-shot [`Discretization::assemble`].
pub fn assemble_system(problem: &WingProblem, state: &WingState) -> Result<System, WingError> {
    Discretization::new(problem)?.assemble(state)
}

pub fn max_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}
