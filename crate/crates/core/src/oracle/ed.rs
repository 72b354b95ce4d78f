use nalgebra::{DMatrix, DVector, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::ModelParams;
use crate::state::TwoQubitState;
use crate::C64;

/// Ground energies closer than this count as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    #[default]
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdSpec {
    pub n_sites: usize,
    pub boundary: Boundary,
}

impl EdSpec {
    pub fn new(n_sites: usize) -> Result<Self> {
        if !(6..=14).contains(&n_sites) {
            return Err(Error::InvalidParameter(format!(
                "ED ring size must be in 6..=14, got {n_sites}"
            )));
        }
        Ok(Self {
            n_sites,
            boundary: Boundary::Periodic,
        })
    }
}

/// Reduced state of sites 0 and 1 after the quench.
#[derive(Debug, Clone, PartialEq)]
pub struct EdResult {
    /// From the lowest eigenvector of the pre-quench Hamiltonian.
    pub lowest: TwoQubitState,
    /// Equal mixture over the (near-)degenerate ground space.
    pub averaged: TwoQubitState,
    pub degenerate: bool,
    /// Gap between the two lowest pre-quench levels.
    pub gap: f64,
}

/// Basis states of one `Π σz` parity sector. Site `i` is bit `n − 1 − i`,
/// bit value 0 is `σz = +1`.
struct Sector {
    states: Vec<usize>,
    index: Vec<usize>,
}

impl Sector {
    fn new(n: usize, parity: u32) -> Self {
        let dim = 1usize << n;
        let states: Vec<usize> = (0..dim)
            .filter(|s| s.count_ones() % 2 == parity)
            .collect();
        let mut index = vec![usize::MAX; dim];
        for (i, &s) in states.iter().enumerate() {
            index[s] = i;
        }
        Self { states, index }
    }

    /// `H_int − (a/2) Σ σz` restricted to the sector.
    fn hamiltonian(&self, n: usize, gamma: f64, a: f64) -> DMatrix<f64> {
        let d = self.states.len();
        let mut h = DMatrix::zeros(d, d);
        for (col, &s) in self.states.iter().enumerate() {
            let ups = n as f64 - 2.0 * s.count_ones() as f64;
            h[(col, col)] -= 0.5 * a * ups;
            for i in 0..n {
                let j = (i + 1) % n;
                let (bi, bj) = (1usize << (n - 1 - i), 1usize << (n - 1 - j));
                let flipped = s ^ bi ^ bj;
                let same = ((s & bi) != 0) == ((s & bj) != 0);
                // XX contributes (1+γ)/4, YY contributes ∓(1−γ)/4.
                let amp = if same { 0.5 * gamma } else { 0.5 };
                h[(self.index[flipped], col)] += amp;
            }
        }
        h
    }
}

/// Post-quench evolution of one ring, with the evolving Hamiltonian
/// diagonalized once and reused across times.
pub struct EdQuench {
    n: usize,
    ground: Vec<(Sector, DVector<f64>, nalgebra::SymmetricEigen<f64, nalgebra::Dyn>)>,
    degenerate: bool,
    gap: f64,
}

impl EdQuench {
    pub fn new(params: &ModelParams, spec: EdSpec) -> Result<Self> {
        let n = spec.n_sites;
        let gamma = params.gamma();
        let a = params.a_tilde();
        let mut levels = Vec::new();
        for parity in [0u32, 1] {
            let sector = Sector::new(n, parity);
            let eig = sector.hamiltonian(n, gamma, a).symmetric_eigen();
            let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
            order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
            for &k in order.iter().take(2) {
                levels.push((eig.eigenvalues[k], parity, eig.eigenvectors.column(k).into_owned()));
            }
        }
        levels.sort_by(|x, y| x.0.total_cmp(&y.0));
        let e0 = levels[0].0;
        let gap = levels[1].0 - e0;
        let ground: Vec<_> = levels
            .into_iter()
            .filter(|l| l.0 - e0 < DEGENERACY_TOL)
            .collect();
        let degenerate = ground.len() > 1;

        let mut prepared = Vec::with_capacity(ground.len());
        let mut evolvers: [Option<nalgebra::SymmetricEigen<f64, nalgebra::Dyn>>; 2] = [None, None];
        for (_, parity, vec) in ground {
            let sector = Sector::new(n, parity);
            let evolver = evolvers[parity as usize]
                .get_or_insert_with(|| sector.hamiltonian(n, gamma, 0.0).symmetric_eigen())
                .clone();
            prepared.push((sector, vec, evolver));
        }
        Ok(Self {
            n,
            ground: prepared,
            degenerate,
            gap,
        })
    }

    fn reduced(&self, t_tilde: f64, which: usize) -> Matrix4<C64> {
        let (sector, psi0, eig) = &self.ground[which];
        let v = &eig.eigenvectors;
        let overlaps = v.transpose() * psi0;
        let phased: DVector<C64> = DVector::from_fn(overlaps.len(), |k, _| {
            C64::from_polar(overlaps[k], -eig.eigenvalues[k] * t_tilde)
        });
        let psi: DVector<C64> = v.map(|x| C64::new(x, 0.0)) * phased;

        let shift = self.n - 2;
        let rest = 1usize << shift;
        let mut full = vec![C64::new(0.0, 0.0); 1usize << self.n];
        for (i, &s) in sector.states.iter().enumerate() {
            full[s] = psi[i];
        }
        Matrix4::from_fn(|r, c| {
            (0..rest)
                .map(|k| full[(r << shift) | k] * full[(c << shift) | k].conj())
                .sum()
        })
    }

    pub fn state_at(&self, t_tilde: f64) -> EdResult {
        let lowest = self.reduced(t_tilde, 0);
        let mut averaged = lowest;
        for k in 1..self.ground.len() {
            averaged += self.reduced(t_tilde, k);
        }
        averaged /= C64::new(self.ground.len() as f64, 0.0);
        EdResult {
            lowest: TwoQubitState::from_matrix_unchecked(lowest),
            averaged: TwoQubitState::from_matrix_unchecked(averaged),
            degenerate: self.degenerate,
            gap: self.gap,
        }
    }
}

/// Nearest-neighbour reduced state of a periodic ring at `t_tilde` after the
/// field is switched from `a` to zero, starting in the ground state.
pub fn ed_quench(t_tilde: f64, params: &ModelParams, spec: EdSpec) -> Result<EdResult> {
    if !(t_tilde.is_finite() && t_tilde >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "time must be finite and >= 0, got {t_tilde}"
        )));
    }
    Ok(EdQuench::new(params, spec)?.state_at(t_tilde))
}
