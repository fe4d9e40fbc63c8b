//! Exact two-qubit spin algebra.
//!
//! Singlet state, spin observables along arbitrary directions, the two-point
//! correlation function E(a,b), CHSH values, and a grid-plus-refinement
//! optimizer for the measurement settings.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on |v|^2 - 1 for unit vectors and state norms.
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Slack admitted on |E| <= 1 when constructing [`Correlators`].
pub const CORRELATOR_TOL: f64 = 1e-9;

const GRID_STEP: f64 = PI / 36.0; // 5 degrees
const GRID_POINTS: usize = 72;
const REFINE_MIN_STEP: f64 = 1e-7;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A measurement direction: unit vector in three-dimensional space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    /// Build from components, rejecting vectors whose squared norm deviates
    /// from 1 by more than [`UNIT_NORM_TOL`].
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm_sq = x * x + y * y + z * z;
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NonUnitVector { norm_sq });
        }
        Ok(Self { x, y, z })
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NonUnitVector { norm_sq: norm * norm });
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Spherical parameterization: (sin t cos p, sin t sin p, cos t).
    pub fn from_polar(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    /// Direction in the x-z plane at polar angle `theta` from +z.
    pub fn in_plane(theta: f64) -> Self {
        Self {
            x: theta.sin(),
            y: 0.0,
            z: theta.cos(),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// Normalized two-qubit state in the ordered basis (uu, ud, du, dd).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    amp: Vector4<Complex64>,
}

impl TwoQubitState {
    /// Build from amplitudes, rejecting vectors with sum |a|^2 off 1 by more
    /// than [`UNIT_NORM_TOL`].
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NonNormalizedState { norm_sq });
        }
        Ok(Self {
            amp: Vector4::from_row_slice(&amplitudes),
        })
    }

    /// Normalize an arbitrary nonzero amplitude vector.
    pub fn normalized(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || norm_sq == 0.0 {
            return Err(Error::NonNormalizedState { norm_sq });
        }
        let s = norm_sq.sqrt();
        let amp = Vector4::from_iterator(amplitudes.iter().map(|a| a / s));
        Ok(Self { amp })
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.amp[0], self.amp[1], self.amp[2], self.amp[3]]
    }

    pub(crate) fn vector(&self) -> &Vector4<Complex64> {
        &self.amp
    }
}

/// The four CHSH-setting expectation values.
///
/// Entries are dimensionless and must lie in [-1, 1] up to
/// [`CORRELATOR_TOL`]; quantum producers guarantee this.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlators {
    e_ab: f64,
    e_ab_prime: f64,
    e_a_prime_b: f64,
    e_a_prime_b_prime: f64,
}

impl Correlators {
    pub fn new(
        e_ab: f64,
        e_ab_prime: f64,
        e_a_prime_b: f64,
        e_a_prime_b_prime: f64,
    ) -> Result<Self> {
        for &e in &[e_ab, e_ab_prime, e_a_prime_b, e_a_prime_b_prime] {
            if !e.is_finite() || e.abs() > 1.0 + CORRELATOR_TOL {
                return Err(Error::OutOfRange {
                    name: "correlator",
                    value: e,
                    expected: "[-1, 1]",
                });
            }
        }
        Ok(Self {
            e_ab,
            e_ab_prime,
            e_a_prime_b,
            e_a_prime_b_prime,
        })
    }

    pub fn e_ab(&self) -> f64 {
        self.e_ab
    }

    pub fn e_ab_prime(&self) -> f64 {
        self.e_ab_prime
    }

    pub fn e_a_prime_b(&self) -> f64 {
        self.e_a_prime_b
    }

    pub fn e_a_prime_b_prime(&self) -> f64 {
        self.e_a_prime_b_prime
    }

    /// Entries in CHSH order: (ab, ab', a'b, a'b').
    pub fn as_array(&self) -> [f64; 4] {
        [
            self.e_ab,
            self.e_ab_prime,
            self.e_a_prime_b,
            self.e_a_prime_b_prime,
        ]
    }
}

/// The four measurement directions of a CHSH experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings {
    pub a: UnitVector3,
    pub a_prime: UnitVector3,
    pub b: UnitVector3,
    pub b_prime: UnitVector3,
}

impl ChshSettings {
    /// All four settings in the x-z plane, given as polar angles from +z.
    pub fn coplanar(theta_a: f64, theta_a_prime: f64, theta_b: f64, theta_b_prime: f64) -> Self {
        Self {
            a: UnitVector3::in_plane(theta_a),
            a_prime: UnitVector3::in_plane(theta_a_prime),
            b: UnitVector3::in_plane(theta_b),
            b_prime: UnitVector3::in_plane(theta_b_prime),
        }
    }
}

/// The spin singlet (|ud> - |du>)/sqrt(2).
pub fn singlet_state() -> TwoQubitState {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    TwoQubitState::new([c(0.0, 0.0), c(r, 0.0), c(-r, 0.0), c(0.0, 0.0)])
        .expect("singlet amplitudes are normalized")
}

/// a . sigma without the unit-norm requirement; linear in its argument.
pub(crate) fn pauli_dot(x: f64, y: f64, z: f64) -> Matrix2<Complex64> {
    Matrix2::new(c(z, 0.0), c(x, -y), c(x, y), c(-z, 0.0))
}

/// The spin observable a . sigma for a measurement direction.
///
/// Hermitian, traceless, eigenvalues +/-1. Non-unit directions are rejected
/// at [`UnitVector3`] construction.
pub fn spin_observable(a: UnitVector3) -> Matrix2<Complex64> {
    pauli_dot(a.x, a.y, a.z)
}

/// Quantum correlation E(a,b) = <psi| a.sigma (x) b.sigma |psi>.
///
/// For the singlet this equals -a.b. The result is clamped to [-1, 1] to
/// absorb last-bit rounding; the exact value always lies in that interval.
pub fn correlation_spin(state: &TwoQubitState, a: UnitVector3, b: UnitVector3) -> f64 {
    let m: Matrix4<Complex64> = spin_observable(a).kronecker(&spin_observable(b));
    let v = state.vector();
    let val = (v.adjoint() * m * v)[(0, 0)];
    debug_assert!(val.im.abs() < 1e-10, "observable expectation must be real");
    val.re.clamp(-1.0, 1.0)
}

/// CHSH combination |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.
pub fn chsh_value(e: &Correlators) -> f64 {
    (e.e_ab - e.e_ab_prime + e.e_a_prime_b + e.e_a_prime_b_prime).abs()
}

/// Evaluate all four CHSH correlators for a state and a set of settings.
pub fn correlators_from_state(state: &TwoQubitState, settings: &ChshSettings) -> Correlators {
    Correlators::new(
        correlation_spin(state, settings.a, settings.b),
        correlation_spin(state, settings.a, settings.b_prime),
        correlation_spin(state, settings.a_prime, settings.b),
        correlation_spin(state, settings.a_prime, settings.b_prime),
    )
    .expect("quantum correlators lie in [-1, 1]")
}

fn settings_from_params(p: &[f64; 8]) -> ChshSettings {
    ChshSettings {
        a: UnitVector3::from_polar(p[0], p[1]),
        a_prime: UnitVector3::from_polar(p[2], p[3]),
        b: UnitVector3::from_polar(p[4], p[5]),
        b_prime: UnitVector3::from_polar(p[6], p[7]),
    }
}

/// Maximize the CHSH value over measurement settings.
///
/// Stage one scans a 5-degree grid of in-plane polar angles; the scan
/// separates over the A-side indices, so it is exhaustive over the grid at
/// O(n^3) cost. Stage two runs a compass search over the full 8-parameter
/// spherical parameterization, halving the step until it drops below 1e-7
/// rad. Ties prefer the lowest grid index. The returned value is achieved by
/// the returned settings, hence a lower bound on the true maximum.
pub fn optimize_chsh(state: &TwoQubitState) -> (ChshSettings, f64) {
    let dirs: Vec<UnitVector3> = (0..GRID_POINTS)
        .map(|i| UnitVector3::in_plane(i as f64 * GRID_STEP))
        .collect();

    let mut m = vec![[0.0f64; GRID_POINTS]; GRID_POINTS];
    for (i, &da) in dirs.iter().enumerate() {
        for (j, &db) in dirs.iter().enumerate() {
            m[i][j] = correlation_spin(state, da, db);
        }
    }

    // For fixed (j, j'), the combination M[i][j] - M[i][j'] + M[i'][j] + M[i'][j']
    // splits into independent extrema over i and i'.
    let mut best_s = -1.0;
    let mut best_idx = (0usize, 0usize, 0usize, 0usize);
    for j in 0..GRID_POINTS {
        for j2 in 0..GRID_POINTS {
            let mut max_d = f64::NEG_INFINITY;
            let mut min_d = f64::INFINITY;
            let mut max_s = f64::NEG_INFINITY;
            let mut min_s = f64::INFINITY;
            let (mut i_max_d, mut i_min_d, mut i_max_s, mut i_min_s) = (0, 0, 0, 0);
            for i in 0..GRID_POINTS {
                let d = m[i][j] - m[i][j2];
                let s = m[i][j] + m[i][j2];
                if d > max_d {
                    max_d = d;
                    i_max_d = i;
                }
                if d < min_d {
                    min_d = d;
                    i_min_d = i;
                }
                if s > max_s {
                    max_s = s;
                    i_max_s = i;
                }
                if s < min_s {
                    min_s = s;
                    i_min_s = i;
                }
            }
            let s_plus = max_d + max_s;
            let s_neg = -(min_d + min_s);
            let (val, ia, ia2) = if s_plus >= s_neg {
                (s_plus, i_max_d, i_max_s)
            } else {
                (s_neg, i_min_d, i_min_s)
            };
            if val > best_s {
                best_s = val;
                best_idx = (ia, ia2, j, j2);
            }
        }
    }

    let (ia, ia2, jb, jb2) = best_idx;
    let mut p = [
        ia as f64 * GRID_STEP,
        0.0,
        ia2 as f64 * GRID_STEP,
        0.0,
        jb as f64 * GRID_STEP,
        0.0,
        jb2 as f64 * GRID_STEP,
        0.0,
    ];

    let eval = |p: &[f64; 8]| -> f64 {
        chsh_value(&correlators_from_state(state, &settings_from_params(p)))
    };

    let mut cur = eval(&p);
    let mut h = GRID_STEP;
    let mut guard = 0u32;
    while h >= REFINE_MIN_STEP && guard < 100_000 {
        guard += 1;
        let mut best_probe = p;
        let mut best_val = cur;
        for k in 0..8 {
            for sign in [1.0f64, -1.0] {
                let mut q = p;
                q[k] += sign * h;
                let v = eval(&q);
                if v > best_val {
                    best_val = v;
                    best_probe = q;
                }
            }
        }
        if best_val > cur {
            p = best_probe;
            cur = best_val;
        } else {
            h *= 0.5;
        }
    }

    let settings = settings_from_params(&p);
    let value = chsh_value(&correlators_from_state(state, &settings));
    (settings, value)
}
