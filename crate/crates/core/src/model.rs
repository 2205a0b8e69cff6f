//! Physical parameters and the 4x4 Hamiltonian block of one Mn-Cu dimer.
//!
//! A dimer sits between two classical Fe nodal spins `mu_i, mu_{i+1} = +-1/2`.
//! Its Hamiltonian depends on them only through `s = mu_i + mu_{i+1}`, so each
//! cell has three sectors `s = -1, 0, +1`. The basis is always
//! `{|00>, |01>, |10>, |11>}` with `|0>` the `S^z = +1/2` state, Mn first.
//!
//! Units: the Heisenberg coupling sets the energy scale, `k_B = mu_0 = 1`.

use nalgebra::{Matrix2, Matrix4};

use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;

/// Exponents below this would signal an energy shift above the ground level.
const OVERFLOW_EXPONENT: f64 = 700.0;

/// Couplings, g-factors, impurity strength, field and temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Heisenberg XX coupling inside the dimer.
    pub j: f64,
    /// XXZ anisotropy of the dimer exchange.
    pub delta: f64,
    /// Ising coupling between the Fe nodes and the Mn site.
    pub j0: f64,
    /// g-factor of Fe (nodal spins).
    pub g1: f64,
    /// g-factor of Mn.
    pub g2: f64,
    /// g-factor of Cu.
    pub g3: f64,
    /// Impurity parameter; the impurity dimer sees fields `g_k B (1 + gamma)`.
    pub gamma: f64,
    /// External field along z.
    pub b: f64,
    /// Temperature. `f64::INFINITY` is accepted and means `beta = 0`.
    pub t: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::fe_mn_cu()
    }
}

impl ModelParams {
    /// g = (1.2, 5, 1.1), J = J0 = Delta = 1, no impurity, zero field, T = 1.
    pub fn fe_mn_cu() -> Self {
        Self { j: 1.0, delta: 1.0, j0: 1.0, g1: 1.2, g2: 5.0, g3: 1.1, gamma: 0.0, b: 0.0, t: 1.0 }
    }

    pub fn with_field(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    pub fn with_temperature(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_j0(mut self, j0: f64) -> Self {
        self.j0 = j0;
        self
    }

    pub fn with_j(mut self, j: f64) -> Self {
        self.j = j;
        self
    }

    /// Inverse temperature.
    pub fn beta(&self) -> f64 {
        1.0 / self.t
    }

    /// Parameter names accepted by [`ModelParams::set`], in canonical spelling.
    pub const KEYS: [&'static str; 9] = ["J", "Delta", "J0", "g1", "g2", "g3", "gamma", "B", "T"];

    /// Set a parameter by name. Names are matched case-insensitively.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key.to_ascii_lowercase().as_str() {
            "j" => &mut self.j,
            "delta" => &mut self.delta,
            "j0" => &mut self.j0,
            "g1" => &mut self.g1,
            "g2" => &mut self.g2,
            "g3" => &mut self.g3,
            "gamma" => &mut self.gamma,
            "b" => &mut self.b,
            "t" => &mut self.t,
            _ => return Err(Error::InvalidParams(format!("unknown parameter `{key}`"))),
        };
        *slot = value;
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key.to_ascii_lowercase().as_str() {
            "j" => self.j,
            "delta" => self.delta,
            "j0" => self.j0,
            "g1" => self.g1,
            "g2" => self.g2,
            "g3" => self.g3,
            "gamma" => self.gamma,
            "b" => self.b,
            "t" => self.t,
            _ => return None,
        })
    }

    /// Checks the supported domain: finite couplings, `J != 0`, `T > 0`.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("J", self.j),
            ("Delta", self.delta),
            ("J0", self.j0),
            ("g1", self.g1),
            ("g2", self.g2),
            ("g3", self.g3),
            ("gamma", self.gamma),
            ("B", self.b),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {v} is not finite")));
            }
        }
        if self.j == 0.0 {
            return Err(Error::InvalidParams("J = 0 is outside the supported domain".into()));
        }
        if !(self.t > 0.0) {
            return Err(Error::InvalidParams(format!("T = {} must be positive", self.t)));
        }
        Ok(())
    }
}

/// Zeeman fields felt by the three ion species, plus the impurity-dimer fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeemanFields {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub h2: f64,
    pub h3: f64,
}

/// `B_k = g_k B` and `h_k = g_k B (1 + gamma)`.
pub fn zeeman_fields(p: &ModelParams) -> ZeemanFields {
    let scale = 1.0 + p.gamma;
    ZeemanFields { b1: p.g1 * p.b, b2: p.g2 * p.b, b3: p.g3 * p.b, h2: p.g2 * p.b * scale, h3: p.g3 * p.b * scale }
}

/// One classical Fe nodal spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsingSpin {
    Up,
    Down,
}

impl IsingSpin {
    pub fn value(self) -> f64 {
        match self {
            IsingSpin::Up => 0.5,
            IsingSpin::Down => -0.5,
        }
    }
}

/// Sum `s = mu_i + mu_{i+1}` of the two nodal spins flanking a dimer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodalSector {
    /// s = -1, realized by (-, -).
    Down,
    /// s = 0, realized by (+, -) and (-, +).
    Mixed,
    /// s = +1, realized by (+, +).
    Up,
}

impl NodalSector {
    pub const ALL: [NodalSector; 3] = [NodalSector::Down, NodalSector::Mixed, NodalSector::Up];

    pub fn from_spins(a: IsingSpin, b: IsingSpin) -> Self {
        match (a, b) {
            (IsingSpin::Up, IsingSpin::Up) => NodalSector::Up,
            (IsingSpin::Down, IsingSpin::Down) => NodalSector::Down,
            _ => NodalSector::Mixed,
        }
    }

    pub fn s(self) -> f64 {
        match self {
            NodalSector::Down => -1.0,
            NodalSector::Mixed => 0.0,
            NodalSector::Up => 1.0,
        }
    }

    /// Number of nodal pairs realizing this sector.
    pub fn multiplicity(self) -> usize {
        match self {
            NodalSector::Mixed => 2,
            _ => 1,
        }
    }

    /// Position in [`NodalSector::ALL`].
    pub fn index(self) -> usize {
        match self {
            NodalSector::Down => 0,
            NodalSector::Mixed => 1,
            NodalSector::Up => 2,
        }
    }
}

/// Which cell a dimer belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Host,
    Impurity,
}

/// Fields acting on the Mn and Cu sites of a cell of the given kind.
fn dimer_fields(z: &ZeemanFields, kind: CellKind) -> (f64, f64) {
    match kind {
        CellKind::Host => (z.b2, z.b3),
        CellKind::Impurity => (z.h2, z.h3),
    }
}

/// Hamiltonian of one dimer in sector `sec`, basis `{|00>, |01>, |10>, |11>}`.
///
/// The nodal Zeeman term `-B1 s / 2` is included so that cell energies add up to
/// the full chain energy.
pub fn dimer_block(p: &ModelParams, sec: NodalSector, kind: CellKind) -> Matrix4<f64> {
    let z = zeeman_fields(p);
    let (ba, bb) = dimer_fields(&z, kind);
    let s = sec.s();
    let xxz = p.j * p.delta / 4.0;
    let ising = p.j0 * s / 2.0;
    let node = -z.b1 * s / 2.0;
    let mut h = Matrix4::zeros();
    h[(0, 0)] = xxz + ising + node - (ba + bb) / 2.0;
    h[(1, 1)] = -xxz + ising + node - (ba - bb) / 2.0;
    h[(2, 2)] = -xxz - ising + node + (ba - bb) / 2.0;
    h[(3, 3)] = xxz - ising + node + (ba + bb) / 2.0;
    h[(1, 2)] = p.j / 2.0;
    h[(2, 1)] = p.j / 2.0;
    h
}

/// Four dimer levels in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DimerEigensystem {
    pub energies: [f64; 4],
    pub vectors: Matrix4<f64>,
}

impl DimerEigensystem {
    pub fn vector(&self, i: usize) -> [f64; 4] {
        let c = self.vectors.column(i);
        [c[0], c[1], c[2], c[3]]
    }
}

/// Diagonalizes a dimer block with the sparsity of [`dimer_block`].
///
/// `|00>` and `|11>` are exact eigenstates; the `{|01>, |10>}` block is rotated
/// in closed form.
pub fn dimer_spectrum(h: &Matrix4<f64>) -> DimerEigensystem {
    let a = h[(1, 1)];
    let d = h[(2, 2)];
    let c = h[(1, 2)];
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d).hypot(2.0 * c);
    let theta = 0.5 * (2.0 * c).atan2(a - d);
    let (sin, cos) = theta.sin_cos();

    // (energy, vector) pairs before sorting
    let mut levels = [
        (h[(0, 0)], [1.0, 0.0, 0.0, 0.0]),
        (mean - half_gap, [0.0, -sin, cos, 0.0]),
        (mean + half_gap, [0.0, cos, sin, 0.0]),
        (h[(3, 3)], [0.0, 0.0, 0.0, 1.0]),
    ];
    levels.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut vectors = Matrix4::zeros();
    let mut energies = [0.0; 4];
    for (k, (e, v)) in levels.iter().enumerate() {
        energies[k] = *e;
        for (row, x) in v.iter().enumerate() {
            vectors[(row, k)] = *x;
        }
    }
    DimerEigensystem { energies, vectors }
}

/// Sign of the middle-pair square root used by [`closed_form_levels`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelConvention {
    /// `+-(1/2) sqrt(Omega^2 + J^2)`, what diagonalizing the block gives.
    Hamiltonian,
    /// `+-sqrt(Omega^2 + J^2)`, the form printed alongside the model. Kept only
    /// for comparison; it is off by a factor of two.
    Printed,
}

/// Closed-form levels `[eps_1, eps_2, eps_3, eps_4]` (unsorted): the outer states
/// `|00>`, `|11>` and the upper/lower middle pair.
pub fn closed_form_levels(p: &ModelParams, sec: NodalSector, kind: CellKind, convention: LevelConvention) -> [f64; 4] {
    let z = zeeman_fields(p);
    let (ba, bb) = dimer_fields(&z, kind);
    let s = sec.s();
    let omega = mixing_detuning(p, sec, kind);
    let root = omega.hypot(p.j);
    let root = match convention {
        LevelConvention::Hamiltonian => 0.5 * root,
        LevelConvention::Printed => root,
    };
    let base = p.j * p.delta / 4.0;
    let node = -z.b1 * s / 2.0;
    [
        base + p.j0 * s / 2.0 + node - (ba + bb) / 2.0,
        -base + node + root,
        -base + node - root,
        base - p.j0 * s / 2.0 + node + (ba + bb) / 2.0,
    ]
}

/// Detuning of the `{|01>, |10>}` block: `Omega` for the host, `kappa` for the
/// impurity. The middle pair is maximally entangled when it vanishes.
pub fn mixing_detuning(p: &ModelParams, sec: NodalSector, kind: CellKind) -> f64 {
    let z = zeeman_fields(p);
    let (ba, bb) = dimer_fields(&z, kind);
    p.j0 * sec.s() - (ba - bb)
}

/// Amplitudes `(Sigma+, Gamma+, Sigma-, Gamma-)` of the impurity middle
/// eigenvectors `Sigma|01> + Gamma|10>`; `+` is the upper level.
pub fn impurity_mixing_coefficients(kappa: f64, j: f64) -> (f64, f64, f64, f64) {
    let r = kappa.hypot(j);
    let norm_plus = (2.0 * j * j + 2.0 * kappa * kappa - 2.0 * kappa * r).sqrt();
    let norm_minus = (2.0 * j * j + 2.0 * kappa * kappa + 2.0 * kappa * r).sqrt();
    (j / norm_plus, (-kappa + r) / norm_plus, j / norm_minus, (-kappa - r) / norm_minus)
}

/// Field at which the impurity middle pair is unmixed-free (`kappa = 0`) in the
/// `s = +1` sector: `B* = J0 / ((g2 - g3)(1 + gamma))`.
pub fn maximal_entanglement_field(p: &ModelParams) -> f64 {
    p.j0 / ((p.g2 - p.g3) * (1.0 + p.gamma))
}

/// Spectra of all six cell/sector combinations of one parameter point, with the
/// shared energy reference used for every Boltzmann factor.
#[derive(Debug, Clone)]
pub struct CellSpectra {
    pub beta: f64,
    /// Global shift: the lowest of the 24 cell energies.
    pub shift: f64,
    pub host: [DimerEigensystem; 3],
    pub impurity: [DimerEigensystem; 3],
}

impl CellSpectra {
    pub fn new(p: &ModelParams) -> Result<Self> {
        p.validate()?;
        let build = |kind| NodalSector::ALL.map(|sec| dimer_spectrum(&dimer_block(p, sec, kind)));
        let host = build(CellKind::Host);
        let impurity = build(CellKind::Impurity);
        let shift = host.iter().chain(impurity.iter()).map(|e| e.energies[0]).fold(f64::INFINITY, f64::min);
        Ok(Self { beta: p.beta(), shift, host, impurity })
    }

    pub fn cell(&self, kind: CellKind) -> &[DimerEigensystem; 3] {
        match kind {
            CellKind::Host => &self.host,
            CellKind::Impurity => &self.impurity,
        }
    }

    /// Exponents `-beta (eps_j - shift)` of one sector.
    fn exponents(&self, kind: CellKind, sec: NodalSector) -> [f64; 4] {
        let e = &self.cell(kind)[sec.index()].energies;
        if self.beta == 0.0 {
            return [0.0; 4];
        }
        e.map(|eps| -self.beta * (eps - self.shift))
    }

    /// `ln w(s)` relative to the shared shift. Never underflows.
    pub fn log_weight(&self, kind: CellKind, sec: NodalSector) -> f64 {
        log_sum_exp(&self.exponents(kind, sec))
    }

    pub fn log_weights(&self, kind: CellKind) -> [f64; 3] {
        NodalSector::ALL.map(|sec| self.log_weight(kind, sec))
    }

    /// Unnormalized cell operator `sum_j exp(-beta(eps_j - shift)) |phi_j><phi_j|`.
    pub fn cell_operator(&self, kind: CellKind, sec: NodalSector) -> Matrix4<f64> {
        let sys = &self.cell(kind)[sec.index()];
        let x = self.exponents(kind, sec);
        let mut rho = Matrix4::zeros();
        for k in 0..4 {
            let v = sys.vectors.column(k);
            rho += x[k].exp() * v * v.transpose();
        }
        rho
    }

    /// Cell operator divided by its trace: the dimer state given the sector.
    /// Computed relative to the sector's own ground level so it never underflows.
    pub fn sector_state(&self, kind: CellKind, sec: NodalSector) -> Matrix4<f64> {
        let sys = &self.cell(kind)[sec.index()];
        let x = self.exponents(kind, sec);
        let norm = log_sum_exp(&x);
        let mut rho = Matrix4::zeros();
        for k in 0..4 {
            let v = sys.vectors.column(k);
            rho += (x[k] - norm).exp() * v * v.transpose();
        }
        rho
    }
}

/// Host and impurity Boltzmann factors `w(s)`, `w~(s)` indexed like [`NodalSector::ALL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorWeights {
    pub host: [f64; 3],
    pub impurity: [f64; 3],
}

/// `w(s) = sum_j exp(-beta (eps_j(s) - shift))` for both cell kinds.
///
/// Fails with [`Error::OverflowRisk`] when the shift lies far enough above a level
/// that an exponent could overflow; the lowest cell energy is always safe.
pub fn boltzmann_weights(p: &ModelParams, shift: f64) -> Result<SectorWeights> {
    let spectra = CellSpectra::new(p)?;
    let beta = spectra.beta;
    let weights = |kind| -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for sec in NodalSector::ALL {
            let mut w = 0.0;
            for eps in spectra.cell(kind)[sec.index()].energies {
                let x = if beta == 0.0 { 0.0 } else { -beta * (eps - shift) };
                if x > OVERFLOW_EXPONENT {
                    return Err(Error::OverflowRisk { exponent: x });
                }
                w += x.exp();
            }
            out[sec.index()] = w;
        }
        Ok(out)
    };
    Ok(SectorWeights { host: weights(CellKind::Host)?, impurity: weights(CellKind::Impurity)? })
}

/// The middle 2x2 block of a dimer Hamiltonian.
pub fn middle_block(h: &Matrix4<f64>) -> Matrix2<f64> {
    Matrix2::new(h[(1, 1)], h[(1, 2)], h[(2, 1)], h[(2, 2)])
}
