//! Radial finite-difference discretization of the transmission plate:
//! an elastic disc r < R0 surrounded by a thermoelastic annulus
//! R0 < r < R, coupled through the interface r = R0.
//!
//! The grid is cell-centered, r_i = (i + 1/2) h, so no node sits on the
//! coordinate singularity r = 0; the conservative flux form
//!
//!   (Lap_h f)_i = ( r_{i+1/2} (f_{i+1} - f_i) - r_{i-1/2} (f_i - f_{i-1}) )
//!                 / (r_i h^2)
//!
//! makes the r = 0 face weight vanish identically, which is the correct
//! regularity closure. Dirichlet faces are closed by ghost elimination
//! (ghost = -first interior value).
//!
//! Interface handling: the displacement pair (v on the disc, u on the
//! annulus) is C^1 through r = R0, and so is the bending moment pair
//! (kappa2 Lap v, kappa1 Lap u + beta vartheta). Each pair is therefore
//! differenced as a single composite field with one shared flux at the
//! interface face; eliminating the cross-interface ghost values this way
//! enforces displacement/slope continuity and the moment/shear balance at
//! second order in the flux sense. The same composite Laplacian L (natural
//! at r = 0, Dirichlet at r = R) then appears in the generator rows
//!
//!   y' = w_glob,   w_glob' = -L (K L y + beta P vartheta),
//!   Theta_j' = Theta_{j+1},
//!   Theta_n' = (1/a_n) [ beta (L w_glob)|annulus + sum_j b_j L_T Theta_j
//!                        - sum_{j<n} a_j Theta_{j+1} ],
//!
//! with K the piecewise stiffness, P the annulus-to-global injection and
//! L_T the annulus Laplacian with Dirichlet faces at R0 and R. Because
//! diag(w) L is symmetric, the discrete energy identity holds exactly.
//!
//! The shear balance is imposed with kappa2 on the elastic side, matching
//! the moment balance dimensionally (the alternative printed form with
//! kappa1 on both sides is not self-consistent; see the toolkit notes).

use crate::linalg::{ComplexMatrix, GramMatrix, LinalgError};
use crate::modal::GeneratorForm;
use crate::model::{validate, DomainSpec, PhaseLagModel};
use crate::operator::{DiscreteOperator, StateLayout};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Elastic,
    Thermoelastic,
}

/// Which nodes a Laplacian acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Span {
    /// All nodes in (0, R).
    Full,
    /// Disc nodes in (0, R0).
    Elastic,
    /// Annulus nodes in (R0, R).
    Thermoelastic,
}

/// Closure of a Laplacian at a span face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    /// Zero flux through the face (automatic at r = 0 where the face weight
    /// vanishes).
    Natural,
    /// Homogeneous Dirichlet via ghost elimination.
    Dirichlet,
}

const FACE_ALIGN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RadialError {
    #[error("mesh width {h} does not align R0 = {r0} and R = {r} with cell faces")]
    Misaligned { h: f64, r0: f64, r: f64 },
    #[error(
        "grid too coarse: need at least {need} cells per side, got disc {disc}, annulus {annulus}"
    )]
    TooCoarse {
        need: usize,
        disc: usize,
        annulus: usize,
    },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Cell-centered radial grid on (0, R) split at R0.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    r0: f64,
    r: f64,
    h: f64,
    cells: usize,
    split: usize,
}

impl RadialGrid {
    pub fn new(r0: f64, r: f64, h: f64) -> Result<Self, RadialError> {
        let misaligned = || RadialError::Misaligned { h, r0, r };
        if !(h > 0.0) || !(r0 > 0.0) || !(r > r0) {
            return Err(misaligned());
        }
        let split_f = r0 / h;
        let cells_f = r / h;
        let split = split_f.round() as usize;
        let cells = cells_f.round() as usize;
        if split == 0
            || cells <= split
            || (split_f - split as f64).abs() > FACE_ALIGN_TOL * (1.0 + split_f)
            || (cells_f - cells as f64).abs() > FACE_ALIGN_TOL * (1.0 + cells_f)
        {
            return Err(misaligned());
        }
        Ok(RadialGrid {
            r0,
            r,
            h,
            cells,
            split,
        })
    }

    pub fn refine(&self) -> RadialGrid {
        RadialGrid {
            r0: self.r0,
            r: self.r,
            h: self.h * 0.5,
            cells: self.cells * 2,
            split: self.split * 2,
        }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn outer_radius(&self) -> f64 {
        self.r
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Number of disc (elastic) cells.
    pub fn disc_cells(&self) -> usize {
        self.split
    }

    pub fn annulus_cells(&self) -> usize {
        self.cells - self.split
    }

    /// Cell-center radius, 0-based.
    pub fn node(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.h
    }

    /// Face radius i*h for i = 0..=cells.
    pub fn face(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    /// Annular quadrature weight 2 pi r_i h.
    pub fn weight(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.node(i) * self.h
    }

    pub fn region(&self, i: usize) -> Region {
        if i < self.split {
            Region::Elastic
        } else {
            Region::Thermoelastic
        }
    }

    fn span_range(&self, span: Span) -> std::ops::Range<usize> {
        match span {
            Span::Full => 0..self.cells,
            Span::Elastic => 0..self.split,
            Span::Thermoelastic => self.split..self.cells,
        }
    }
}

/// Conservative radial Laplacian on a node span, with the given closures at
/// the span's inner and outer faces. Exact on quadratics: Lap_h r^2 = 4.
pub fn radial_laplacian(grid: &RadialGrid, span: Span, bc: (Closure, Closure)) -> ComplexMatrix {
    let range = grid.span_range(span);
    let nodes: Vec<usize> = range.clone().collect();
    let n = nodes.len();
    let h2 = grid.h * grid.h;
    let mut l = ComplexMatrix::zeros(n, n);
    for (row, &i) in nodes.iter().enumerate() {
        let ri = grid.node(i);
        let inner_face = grid.face(i);
        let outer_face = grid.face(i + 1);
        // inner face
        if row > 0 {
            let c = inner_face / (ri * h2);
            l[(row, row - 1)] += Complex64::new(c, 0.0);
            l[(row, row)] -= Complex64::new(c, 0.0);
        } else {
            match bc.0 {
                Closure::Natural => {} // face weight is inner_face; at r=0 it vanishes anyway
                Closure::Dirichlet => {
                    let c = inner_face / (ri * h2);
                    l[(row, row)] -= Complex64::new(2.0 * c, 0.0);
                }
            }
        }
        // outer face
        if row + 1 < n {
            let c = outer_face / (ri * h2);
            l[(row, row + 1)] += Complex64::new(c, 0.0);
            l[(row, row)] -= Complex64::new(c, 0.0);
        } else {
            match bc.1 {
                Closure::Natural => {}
                Closure::Dirichlet => {
                    let c = outer_face / (ri * h2);
                    l[(row, row)] -= Complex64::new(2.0 * c, 0.0);
                }
            }
        }
    }
    l
}

/// Assembled transmission generator with the pieces needed for energy
/// diagnostics.
#[derive(Debug, Clone)]
pub struct TransmissionOperator {
    pub grid: RadialGrid,
    pub op: DiscreteOperator,
    pub model: PhaseLagModel,
    /// SPD Dirichlet form on one annulus Theta slice: -diag(w) L_T.
    theta_form: ComplexMatrix,
}

pub const MIN_CELLS_PER_SIDE: usize = 4;

/// Build A_h and G_h for the transmission system.
pub fn assemble_transmission(
    model: &PhaseLagModel,
    grid: &RadialGrid,
    form: GeneratorForm,
) -> Result<TransmissionOperator, RadialError> {
    let domain = DomainSpec::ConcentricDiscs {
        r0: grid.r0,
        r: grid.r,
    };
    validate(model, &domain).map_err(|diags| {
        RadialError::InvalidModel(
            diags
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        )
    })?;
    let k = grid.disc_cells();
    let na = grid.annulus_cells();
    if k < MIN_CELLS_PER_SIDE || na < MIN_CELLS_PER_SIDE {
        return Err(RadialError::TooCoarse {
            need: MIN_CELLS_PER_SIDE,
            disc: k,
            annulus: na,
        });
    }
    let n = model.n;
    let ncells = grid.cells();
    let kappa2 = model
        .kappa2
        .expect("validated concentric-discs model has kappa2");

    // composite Laplacian: natural at r=0, Dirichlet at r=R
    let l_glob = radial_laplacian(grid, Span::Full, (Closure::Natural, Closure::Dirichlet));
    // annulus Theta Laplacian: Dirichlet at both faces
    let l_theta = radial_laplacian(
        grid,
        Span::Thermoelastic,
        (Closure::Dirichlet, Closure::Dirichlet),
    );

    let re = |x: f64| Complex64::new(x, 0.0);
    // K L: scale rows of L by the piecewise stiffness
    let mut kl = l_glob.clone();
    for i in 0..ncells {
        let kap = match grid.region(i) {
            Region::Elastic => kappa2,
            Region::Thermoelastic => model.kappa1,
        };
        for j in 0..ncells {
            kl[(i, j)] *= re(kap);
        }
    }
    let lkl = l_glob.mul(&kl);
    // L P: columns of L restricted to annulus nodes
    let lp = ComplexMatrix::from_fn(ncells, na, |i, j| l_glob[(i, k + j)]);
    // (L)|annulus rows: R_a L
    let ral = ComplexMatrix::from_fn(na, ncells, |i, j| l_glob[(k + i, j)]);

    // state layout: y (v|u), w_glob (z|w), Theta_0..Theta_n
    let dim = 2 * ncells + (n + 1) * na;
    let ys = 0;
    let ws = ncells;
    let ts = |j: usize| 2 * ncells + j * na;

    let mut a_h = ComplexMatrix::zeros(dim, dim);
    // y' = w_glob
    for i in 0..ncells {
        a_h[(ys + i, ws + i)] = re(1.0);
    }
    // w_glob' = -L K L y - beta sum_j a_j (L P) Theta_j
    for i in 0..ncells {
        for j in 0..ncells {
            a_h[(ws + i, ys + j)] = -lkl[(i, j)];
        }
    }
    for jj in 0..=n {
        let coeff = re(model.beta * model.a[jj]);
        for i in 0..ncells {
            for j in 0..na {
                a_h[(ws + i, ts(jj) + j)] -= coeff * lp[(i, j)];
            }
        }
    }
    // Theta_j' = Theta_{j+1}
    for jj in 0..n {
        for i in 0..na {
            a_h[(ts(jj) + i, ts(jj + 1) + i)] = re(1.0);
        }
    }
    // Theta_n row
    let an = model.a[n];
    let last = ts(n);
    for i in 0..na {
        for j in 0..ncells {
            a_h[(last + i, ws + j)] += re(model.beta / an) * ral[(i, j)];
        }
    }
    for jj in 0..=n {
        let coeff = re(model.b[jj] / an);
        for i in 0..na {
            for j in 0..na {
                a_h[(last + i, ts(jj) + j)] += coeff * l_theta[(i, j)];
            }
        }
    }
    for jj in 0..n {
        let coeff = re(model.a[jj] / an);
        let col = match form {
            GeneratorForm::Equivalent => ts(jj + 1),
            GeneratorForm::Literal => ts(jj),
        };
        for i in 0..na {
            a_h[(last + i, col + i)] -= coeff;
        }
    }

    // Gram matrix: (L y)^H W K (L y) + w^H W w + Theta gradient + vartheta mass
    let mut g_h = ComplexMatrix::zeros(dim, dim);
    let mut wkl = kl.clone(); // W K L
    for i in 0..ncells {
        let wi = grid.weight(i);
        for j in 0..ncells {
            wkl[(i, j)] *= re(wi);
        }
    }
    let lwkl = l_glob.adjoint().mul(&wkl);
    for i in 0..ncells {
        for j in 0..ncells {
            g_h[(ys + i, ys + j)] = lwkl[(i, j)];
        }
        g_h[(ws + i, ws + i)] = re(grid.weight(i));
    }
    // theta_form = -W_a L_T (symmetric positive definite)
    let mut theta_form = l_theta.scale(re(-1.0));
    for i in 0..na {
        let wi = grid.weight(k + i);
        for j in 0..na {
            theta_form[(i, j)] *= re(wi);
        }
    }
    // symmetrize exactly against roundoff asymmetry in r_i * (r_f / r_i)
    let theta_form = ComplexMatrix::from_fn(na, na, |i, j| {
        (theta_form[(i, j)] + theta_form[(j, i)].conj()) * 0.5
    });
    for jj in 0..=n {
        if jj < n {
            for i in 0..na {
                for j in 0..na {
                    g_h[(ts(jj) + i, ts(jj) + j)] += theta_form[(i, j)];
                }
            }
        }
        for kk in 0..=n {
            let coeff = re(model.a[jj] * model.a[kk]);
            for i in 0..na {
                g_h[(ts(jj) + i, ts(kk) + i)] += coeff * re(grid.weight(k + i));
            }
        }
    }
    // exact Hermitian symmetrization of the y block (roundoff only)
    let g_h = ComplexMatrix::from_fn(dim, dim, |i, j| (g_h[(i, j)] + g_h[(j, i)].conj()) * 0.5);

    let mut entries = vec![
        ("v".to_string(), 0..k),
        ("u".to_string(), k..ncells),
        ("z".to_string(), ncells..ncells + k),
        ("w".to_string(), ncells + k..2 * ncells),
    ];
    for jj in 0..=n {
        entries.push((format!("theta{jj}"), ts(jj)..ts(jj) + na));
    }
    let layout = StateLayout::new(entries);

    Ok(TransmissionOperator {
        grid: grid.clone(),
        op: DiscreteOperator {
            a_h,
            g_h: GramMatrix::new(g_h)?,
            layout,
        },
        model: model.clone(),
        theta_form,
    })
}

impl TransmissionOperator {
    pub fn dim(&self) -> usize {
        self.op.a_h.rows()
    }

    pub fn theta_slice(&self, j: usize) -> std::ops::Range<usize> {
        let ncells = self.grid.cells();
        let na = self.grid.annulus_cells();
        let base = 2 * ncells + j * na;
        base..base + na
    }

    /// Re(g^H D f) with D the Theta Dirichlet form.
    pub(crate) fn theta_dirichlet(&self, f: &[Complex64], g: &[Complex64]) -> f64 {
        let df = self.theta_form.mul_vec(f);
        crate::linalg::dot(g, &df).re
    }

    pub(crate) fn theta_component<'a>(&self, state: &'a [Complex64], j: usize) -> &'a [Complex64] {
        &state[self.theta_slice(j)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues, IterationConfig};
    use crate::operator::PhaseSpaceOperator;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn preset() -> PhaseLagModel {
        PhaseLagModel::new(1, vec![1.0, 0.5], vec![1.0, 0.25], 1.0, Some(2.0), 0.5)
    }

    fn grid64() -> RadialGrid {
        RadialGrid::new(0.5, 1.0, 1.0 / 64.0).unwrap()
    }

    #[test]
    fn grid_alignment_checked() {
        assert!(RadialGrid::new(0.5, 1.0, 1.0 / 64.0).is_ok());
        assert!(matches!(
            RadialGrid::new(0.53, 1.0, 1.0 / 64.0),
            Err(RadialError::Misaligned { .. })
        ));
    }

    #[test]
    fn refine_halves_h_and_doubles_cells() {
        let g = grid64();
        let f = g.refine();
        assert_eq!(f.cells(), 2 * g.cells());
        assert_eq!(f.disc_cells(), 2 * g.disc_cells());
        assert!((f.h() - g.h() / 2.0).abs() < 1e-16);
    }

    #[test]
    fn quadrature_telescopes_to_disc_area() {
        for g in [grid64(), grid64().refine()] {
            let total: f64 = (0..g.cells()).map(|i| g.weight(i)).sum();
            let area = std::f64::consts::PI * g.outer_radius().powi(2);
            assert!((total - area).abs() < 1e-12 * area);
            let annulus: f64 = (g.disc_cells()..g.cells()).map(|i| g.weight(i)).sum();
            let ring = std::f64::consts::PI * (g.outer_radius().powi(2) - g.r0().powi(2));
            assert!((annulus - ring).abs() < 1e-12 * ring);
        }
    }

    #[test]
    fn laplacian_exact_on_r_squared() {
        let g = grid64();
        let l = radial_laplacian(&g, Span::Full, (Closure::Natural, Closure::Natural));
        let f: Vec<Complex64> = (0..g.cells()).map(|i| c(g.node(i).powi(2), 0.0)).collect();
        let lf = l.mul_vec(&f);
        // interior rows (the last row misses its outer flux under Natural closure)
        for i in 0..g.cells() - 1 {
            assert!((lf[i] - c(4.0, 0.0)).norm() < 1e-10, "row {i}: {:?}", lf[i]);
        }
    }

    #[test]
    fn constant_annihilated_interior_dirichlet_boundary_row() {
        let g = grid64();
        let l = radial_laplacian(&g, Span::Full, (Closure::Natural, Closure::Dirichlet));
        let f = vec![c(1.0, 0.0); g.cells()];
        let lf = l.mul_vec(&f);
        for i in 0..g.cells() - 1 {
            assert!(lf[i].norm() < 1e-10);
        }
        // ghost row: -2 r_face / (r h^2) survives
        let i = g.cells() - 1;
        let expect = -2.0 * g.face(i + 1) / (g.node(i) * g.h() * g.h());
        assert!((lf[i] - c(expect, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn smooth_test_function_second_order_convergence() {
        // f(r) = cos(alpha r): Lap f = -alpha^2 cos(alpha r) - alpha sin(alpha r)/r
        let alpha = 2.3;
        let mut errs = Vec::new();
        let mut g = RadialGrid::new(0.5, 1.0, 1.0 / 32.0).unwrap();
        for _ in 0..3 {
            let l = radial_laplacian(&g, Span::Full, (Closure::Natural, Closure::Natural));
            let f: Vec<Complex64> = (0..g.cells())
                .map(|i| c((alpha * g.node(i)).cos(), 0.0))
                .collect();
            let lf = l.mul_vec(&f);
            let mut err = 0.0f64;
            for i in 1..g.cells() - 1 {
                let r = g.node(i);
                let exact = -alpha * alpha * (alpha * r).cos() - alpha * (alpha * r).sin() / r;
                err = err.max((lf[i].re - exact).abs());
            }
            errs.push(err);
            g = g.refine();
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(
                (1.9..=2.1).contains(&order),
                "observed order {order}, errors {errs:?}"
            );
        }
    }

    #[test]
    fn theta_form_is_w_symmetric() {
        // diag(w) L_T symmetric to 1e-12 (relative)
        let g = grid64();
        let lt = radial_laplacian(
            &g,
            Span::Thermoelastic,
            (Closure::Dirichlet, Closure::Dirichlet),
        );
        let na = g.annulus_cells();
        let mut wl = lt.clone();
        for i in 0..na {
            let wi = g.weight(g.disc_cells() + i);
            for j in 0..na {
                wl[(i, j)] *= c(wi, 0.0);
            }
        }
        let asym = wl.sub(&wl.adjoint()).max_abs();
        assert!(asym <= 1e-12 * wl.max_abs());
    }

    #[test]
    fn too_coarse_grid_rejected() {
        let g = RadialGrid::new(0.5, 1.0, 0.25).unwrap(); // 2 cells per side
        assert!(matches!(
            assemble_transmission(&preset(), &g, GeneratorForm::Equivalent),
            Err(RadialError::TooCoarse { .. })
        ));
    }

    #[test]
    fn gram_is_positive_definite() {
        let op = assemble_transmission(&preset(), &grid64(), GeneratorForm::Equivalent).unwrap();
        assert!(op.op.g_h.cholesky().is_ok());
    }

    /// Exact discrete energy identity on random complex states.
    #[test]
    fn energy_identity_exact_on_random_states() {
        let t = assemble_transmission(&preset(), &grid64(), GeneratorForm::Equivalent).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let dim = t.dim();
        for _ in 0..5 {
            let x: Vec<Complex64> = (0..dim)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let lhs = t.op.g_h.inner(&t.op.a_h.mul_vec(&x), &x).re;
            let n = t.model.n;
            let na = t.grid.annulus_cells();
            let mut vartheta = vec![c(0.0, 0.0); na];
            for j in 0..=n {
                let tj = t.theta_component(&x, j);
                for i in 0..na {
                    vartheta[i] += tj[i] * t.model.a[j];
                }
            }
            let mut rhs = 0.0;
            for j in 0..=n {
                rhs -= t.model.b[j] * t.theta_dirichlet(t.theta_component(&x, j), &vartheta);
            }
            for j in 0..n {
                rhs += t.theta_dirichlet(t.theta_component(&x, j + 1), t.theta_component(&x, j));
            }
            assert!(
                (lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0),
                "lhs {lhs} vs rhs {rhs}"
            );
        }
    }

    #[test]
    fn decoupled_equal_stiffness_spectrum_on_axis_or_negative_reals() {
        // beta = 0, n = 0, kappa1 = kappa2: conservative plate + pure heat
        let model = PhaseLagModel::new(0, vec![1.0], vec![1.0], 1.0, Some(1.0), 0.0);
        let g = RadialGrid::new(0.5, 1.0, 1.0 / 16.0).unwrap();
        let t = assemble_transmission(&model, &g, GeneratorForm::Equivalent).unwrap();
        let ev = eigenvalues(&t.op.a_h).unwrap();
        let scale = t.op.a_h.max_abs();
        for e in ev {
            let on_axis = e.re.abs() <= 1e-8 * scale;
            let negative_real = e.im.abs() <= 1e-8 * scale && e.re <= 1e-8 * scale;
            assert!(
                on_axis || negative_real,
                "eigenvalue {e} off the imaginary axis and negative reals (scale {scale:.3e})"
            );
        }
    }

    #[test]
    fn shifted_operator_nonpositive_abscissa() {
        let t = assemble_transmission(&preset(), &grid64(), GeneratorForm::Equivalent).unwrap();
        let absc = t.op.numerical_abscissa().unwrap();
        let c0 = absc.max(0.0);
        let shifted = t.op.shifted(c0);
        let after = shifted.numerical_abscissa().unwrap();
        let scale = t.op.a_h.max_abs();
        assert!(after <= 1e-9 * scale);
    }

    /// beta = 0 plate sub-flow is G-skew: states supported away from the
    /// Theta slices see a vanishing real Rayleigh quotient.
    #[test]
    fn decoupled_plate_subflow_is_skew() {
        let mut model = preset();
        model.beta = 0.0;
        let t = assemble_transmission(&model, &grid64(), GeneratorForm::Equivalent).unwrap();
        let ncells = t.grid.cells();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..1000 {
            let mut x = vec![c(0.0, 0.0); t.dim()];
            for i in 0..2 * ncells {
                x[i] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            let ax = t.op.a_h.mul_vec(&x);
            let num = t.op.g_h.inner(&ax, &x).re;
            // scale-invariant roundoff budget: the two canceling terms are
            // each bounded by ||Ax||_G ||x||_G
            let scale = t.op.g_h.norm(&ax) * t.op.g_h.norm(&x);
            assert!(num.abs() <= 1e-10 * scale, "num {num}, scale {scale}");
        }
    }

    #[test]
    fn eigenvalue_nearest_zero_stable_under_refinement() {
        let t1 = assemble_transmission(&preset(), &grid64(), GeneratorForm::Equivalent).unwrap();
        let t2 = assemble_transmission(&preset(), &grid64().refine(), GeneratorForm::Equivalent)
            .unwrap();
        let nearest = |t: &TransmissionOperator| {
            eigenvalues(&t.op.a_h)
                .unwrap()
                .into_iter()
                .min_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap()
        };
        let e1 = nearest(&t1);
        let e2 = nearest(&t2);
        // two significant digits
        assert!(
            (e1 - e2).norm() <= 0.05 * e2.norm(),
            "nearest-zero eigenvalue drifted: {e1} vs {e2}"
        );
    }

    #[test]
    fn resolvent_norm_finite_on_axis() {
        let t = assemble_transmission(&preset(), &grid64(), GeneratorForm::Equivalent).unwrap();
        let cfg = IterationConfig::default();
        let v = t.op.resolvent_norm(c(0.0, 10.0), &cfg).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn literal_variant_differs_and_breaks_identity() {
        let g = RadialGrid::new(0.5, 1.0, 1.0 / 16.0).unwrap();
        let eq = assemble_transmission(&preset(), &g, GeneratorForm::Equivalent).unwrap();
        let lit = assemble_transmission(&preset(), &g, GeneratorForm::Literal).unwrap();
        assert!(eq.op.a_h.sub(&lit.op.a_h).max_abs() > 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x: Vec<Complex64> = (0..lit.dim())
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let lhs = lit.op.g_h.inner(&lit.op.a_h.mul_vec(&x), &x).re;
        let na = lit.grid.annulus_cells();
        let mut vartheta = vec![c(0.0, 0.0); na];
        for j in 0..=lit.model.n {
            let tj = lit.theta_component(&x, j);
            for i in 0..na {
                vartheta[i] += tj[i] * lit.model.a[j];
            }
        }
        let mut rhs = 0.0;
        for j in 0..=lit.model.n {
            rhs -= lit.model.b[j] * lit.theta_dirichlet(lit.theta_component(&x, j), &vartheta);
        }
        for j in 0..lit.model.n {
            rhs += lit.theta_dirichlet(lit.theta_component(&x, j + 1), lit.theta_component(&x, j));
        }
        assert!((lhs - rhs).abs() > 1e-6 * lhs.abs().max(1.0));
    }

    #[test]
    fn layout_names_every_state_component() {
        let t = assemble_transmission(&preset(), &grid64(), GeneratorForm::Equivalent).unwrap();
        let k = t.grid.disc_cells();
        let ncells = t.grid.cells();
        let na = t.grid.annulus_cells();
        assert_eq!(t.op.layout.range("v"), Some(0..k));
        assert_eq!(t.op.layout.range("u"), Some(k..ncells));
        assert_eq!(t.op.layout.range("z"), Some(ncells..ncells + k));
        assert_eq!(t.op.layout.range("w"), Some(ncells + k..2 * ncells));
        for j in 0..=t.model.n {
            assert_eq!(
                t.op.layout.range(&format!("theta{j}")),
                Some(t.theta_slice(j))
            );
        }
        let covered: usize = t.op.layout.entries().iter().map(|(_, r)| r.len()).sum();
        assert_eq!(covered, t.dim());
        let _ = na;
    }
}
