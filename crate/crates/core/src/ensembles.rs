//! Seeded random matrix ensembles and random shield / private-state samplers.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{qr, CMatrix};
use crate::operator::{DensityState, HermitianOp, SystemLayout};
use crate::scalar::{creal, cx, Real, C};
use crate::zoo::{private_state, PrivateState, SHIELD_A, SHIELD_B};

/// Identifies one reproducible random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self { master_seed, trial_index }
    }

    /// ChaCha20 keyed by the master seed, on the stream given by the trial index.
    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.trial_index);
        rng
    }

    /// An independent stream for auxiliary randomness within the same trial.
    pub fn substream(&self, purpose: u64) -> ChaCha20Rng {
        let key = self.master_seed ^ purpose.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let mut rng = ChaCha20Rng::seed_from_u64(key);
        rng.set_stream(self.trial_index);
        rng
    }
}

fn normal<R: Real>(rng: &mut impl Rng) -> R {
    R::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Complex Ginibre matrix with `E|g_ij|² = 1`.
pub fn ginibre<R: Real>(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix<R> {
    let h = R::lit(0.5).sqrt();
    CMatrix::from_fn(rows, cols, |_, _| {
        let re = normal::<R>(rng);
        let im = normal::<R>(rng);
        cx(re * h, im * h)
    })
}

/// Haar unitary from a Ginibre QR with the phases of `diag(r)` divided out.
pub fn haar_unitary<R: Real>(dim: usize, rng: &mut impl Rng) -> CMatrix<R> {
    let (mut q, r) = qr(&ginibre::<R>(dim, dim, rng));
    for j in 0..dim {
        let rjj = r[(j, j)];
        let ph = if rjj.norm() > R::zero() { rjj / creal(rjj.norm()) } else { C::new(R::one(), R::zero()) };
        for i in 0..dim {
            let v = q[(i, j)] * ph;
            q[(i, j)] = v;
        }
    }
    q
}

pub fn sample_haar_unitary<R: Real>(dim: usize, seed: &SeedSpec) -> Result<CMatrix<R>> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    Ok(haar_unitary(dim, &mut seed.rng()))
}

/// Traceless GUE matrix: off-diagonal complex variance 1, diagonal variance 1, then trace removed.
pub fn gue_traceless<R: Real>(layout: SystemLayout, rng: &mut impl Rng) -> Result<HermitianOp<R>> {
    let n = layout.total_dim();
    if n < 2 {
        return Err(Error::InvalidArgument("GUE needs dimension at least 2".into()));
    }
    let h = R::lit(0.5).sqrt();
    let mut m = CMatrix::<R>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = creal(normal::<R>(rng));
        for j in i + 1..n {
            let z = cx(normal::<R>(rng) * h, normal::<R>(rng) * h);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    let shift = m.trace().re / R::from_count(n);
    for i in 0..n {
        m[(i, i)] -= creal(shift);
    }
    HermitianOp::new(layout, m)
}

pub fn sample_gue_traceless<R: Real>(dim: usize, seed: &SeedSpec) -> Result<HermitianOp<R>> {
    gue_traceless(SystemLayout::single("S", dim)?, &mut seed.rng())
}

/// Random mixed state `G G† / Tr(G G†)` with a square Ginibre `G`.
pub fn random_density<R: Real>(layout: SystemLayout, rng: &mut impl Rng) -> Result<DensityState<R>> {
    let n = layout.total_dim();
    let g = ginibre::<R>(n, n, rng);
    DensityState::normalized(HermitianOp::new(layout, g.matmul_adj(&g))?)
}

/// Random pure state with a Gaussian amplitude vector.
pub fn random_pure<R: Real>(layout: SystemLayout, rng: &mut impl Rng) -> Result<DensityState<R>> {
    let n = layout.total_dim();
    let g = ginibre::<R>(n, 1, rng);
    DensityState::pure(layout, g.data())
}

/// Complementary shields `U P U† / (d²/2)` and `U P^⊥ U† / (d²/2)`, `P` on the first `d²/2` basis vectors.
pub fn shield_pair<R: Real>(d: usize, rng: &mut impl Rng) -> Result<(DensityState<R>, DensityState<R>)> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::InvalidArgument(format!("shield dimension {d} must be even and at least 2")));
    }
    let n = d * d;
    let half = n / 2;
    let u = haar_unitary::<R>(n, rng);
    let weight = R::one() / R::from_count(half);
    let project = |range: std::ops::Range<usize>| -> CMatrix<R> {
        let cols = CMatrix::from_fn(n, n, |i, j| if range.contains(&j) { u[(i, j)] * weight } else { C::zero() });
        cols.matmul_adj(&u)
    };
    let layout = SystemLayout::bipartite(SHIELD_A, d, SHIELD_B, d)?;
    let plus = DensityState::new(HermitianOp::new(layout.clone(), project(0..half))?)?;
    let minus = DensityState::new(HermitianOp::new(layout, project(half..n))?)?;
    Ok((plus, minus))
}

pub fn sample_shield_pair<R: Real>(d: usize, seed: &SeedSpec) -> Result<(DensityState<R>, DensityState<R>)> {
    shield_pair(d, &mut seed.rng())
}

/// Random private state built from a complementary shield pair.
pub fn sample_private_state<R: Real>(d: usize, seed: &SeedSpec) -> Result<PrivateState<R>> {
    let (plus, minus) = sample_shield_pair(d, seed)?;
    private_state(plus, minus)
}
