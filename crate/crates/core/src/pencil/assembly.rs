//! Galerkin realization of the pencil on the colatitude interval for one
//! azimuthal mode.
//!
//! A field r^l (u_r, u_omega, p) of mode m is written as u_r = a(θ) Y,
//! u_omega = b(θ) Y e_θ + c(θ) ∇Y / sqrt(kappa), where Y is a degree-m spherical
//! harmonic on S^{n-2} with kappa = m(m+n-3). With w = sin^{n-2}θ, s = sinθ:
//!
//! ```text
//!   div u_omega  = Dv = w^{-1}(w b)' - sqrt(kappa) c / s
//!   curl part    = F  = (c s)' / sqrt(kappa) - b
//!   mu           = (l - 1)(l + n - 1)
//! ```
//!
//! Rows of the mixed system (after multiplying the momentum equations by r^{2-l}):
//!
//! ```text
//!   -Δa - mu a + 2 Dv + (l-1) p                       (radial)
//!   (dδ + δd) u - (2(n-2) + mu) u - 2∇a + ∇p          (tangential)
//!   (l+n-1) a + Dv + (1-2nu) p                        (divergence)
//! ```
//!
//! The displacement form eliminates p = -((l+n-1)a + Dv)/(1-2nu). Velocity is
//! continuous piecewise linear, pressure piecewise constant. The divergence row
//! is negated so that the matrix is Hermitian on Re l = -(n-2)/2.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};
use crate::linalg::BandMatrix;
use crate::pencil::phi::MaterialParams;
use crate::quadrature::GaussLegendre;
use crate::sphere_spectra::{CapDomain, DiscretizationConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PencilForm {
    /// Unknowns (a, b, c); requires nu < 1/2.
    Displacement,
    /// Unknowns (a, b, c, p); valid for every nu <= 1/2.
    Mixed,
}

impl PencilForm {
    pub fn for_material(mat: &MaterialParams) -> Self {
        if mat.is_stokes() {
            PencilForm::Mixed
        } else {
            PencilForm::Displacement
        }
    }
}

/// Degree-of-freedom map. Each nodal component is either fixed to zero or a
/// multiple of one unknown; at the pole mode 1 ties c to sqrt(kappa) b.
#[derive(Debug, Clone, PartialEq)]
pub struct DofLayout {
    pub cells: usize,
    /// Per node: (a, b, c) entries as (dof, coefficient).
    pub velocity: Vec<[Option<(usize, f64)>; 3]>,
    /// Per cell, when the form carries pressure.
    pub pressure: Vec<usize>,
    pub dim: usize,
}

impl DofLayout {
    fn new(mode: usize, kappa: f64, cells: usize, form: PencilForm) -> Self {
        let mut next = 0usize;
        let mut take = || {
            next += 1;
            next - 1
        };
        let mut velocity = Vec::with_capacity(cells + 1);
        let mut pressure = Vec::new();
        for node in 0..=cells {
            let entry = if node == cells {
                [None, None, None]
            } else if node == 0 {
                match mode {
                    0 => [Some((take(), 1.0)), None, None],
                    1 => {
                        let beta = take();
                        [None, Some((beta, 1.0)), Some((beta, kappa.sqrt()))]
                    }
                    _ => [None, None, None],
                }
            } else if mode == 0 {
                [Some((take(), 1.0)), Some((take(), 1.0)), None]
            } else {
                [Some((take(), 1.0)), Some((take(), 1.0)), Some((take(), 1.0))]
            };
            velocity.push(entry);
            if form == PencilForm::Mixed && node < cells {
                pressure.push(take());
            }
        }
        DofLayout { cells, velocity, pressure, dim: next }
    }

    fn cell_dofs(&self, cell: usize) -> Vec<usize> {
        let mut d: Vec<usize> =
            self.velocity[cell].iter().chain(self.velocity[cell + 1].iter()).flatten().map(|e| e.0).collect();
        if let Some(&p) = self.pressure.get(cell) {
            d.push(p);
        }
        d
    }

    fn bandwidth(&self) -> usize {
        (0..self.cells)
            .map(|c| {
                let d = self.cell_dofs(c);
                let lo = d.iter().min().copied().unwrap_or(0);
                let hi = d.iter().max().copied().unwrap_or(0);
                hi - lo
            })
            .max()
            .unwrap_or(0)
    }
}

/// The λ-independent bilinear forms whose polynomial combination is the pencil.
#[derive(Debug, Clone)]
struct Forms {
    stiff_a: BandMatrix,
    mass_a: BandMatrix,
    mass_t: BandMatrix,
    div_a: BandMatrix,
    a_div: BandMatrix,
    div_div: BandMatrix,
    curl_curl: BandMatrix,
    p_a: BandMatrix,
    a_p: BandMatrix,
    p_div: BandMatrix,
    div_p: BandMatrix,
    p_p: BandMatrix,
}

/// Values of one local basis function at a quadrature point.
#[derive(Debug, Clone, Copy, Default)]
struct Local {
    val: f64,
    dval: f64,
    a: f64,
    da: f64,
    b: f64,
    c: f64,
    dv: f64,
    f: f64,
    p: f64,
}

/// Precomputed pencil for a cap, mode and grid; evaluate at any λ with [`PencilOperator::at`].
#[derive(Debug, Clone)]
pub struct PencilOperator {
    pub cap: CapDomain,
    pub mode: usize,
    pub form: PencilForm,
    pub nu: f64,
    pub cells: usize,
    pub layout: DofLayout,
    pub gram: BandMatrix,
    forms: Forms,
}

/// The pencil matrix at one λ together with the energy Gram matrix of the trial space.
#[derive(Debug, Clone)]
pub struct PencilAssembly {
    pub lambda: Complex64,
    pub mode: usize,
    pub form: PencilForm,
    pub matrix: BandMatrix,
    pub gram: BandMatrix,
    pub layout: Option<DofLayout>,
    pub cap: Option<CapDomain>,
}

impl PencilAssembly {
    /// Wraps raw matrices, e.g. for testing the singular-value routine.
    pub fn from_matrices(lambda: Complex64, matrix: BandMatrix, gram: BandMatrix) -> Result<Self> {
        if matrix.dim() != gram.dim() {
            return Err(ConeError::Precondition("matrix and Gram dimensions differ".into()));
        }
        Ok(PencilAssembly { lambda, mode: 0, form: PencilForm::Mixed, matrix, gram, layout: None, cap: None })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn dense_matrix(&self) -> nalgebra::DMatrix<Complex64> {
        self.matrix.to_dense()
    }

    /// ‖A - A*‖_F / ‖A‖_F.
    pub fn hermitian_defect(&self) -> f64 {
        let a = self.matrix.to_dense();
        (&a - a.adjoint()).norm() / a.norm()
    }
}

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl PencilOperator {
    pub fn new(cap: &CapDomain, mat: &MaterialParams, mode: usize, form: PencilForm, cells: usize) -> Result<Self> {
        cap.validate()?;
        if cells < 2 {
            return Err(ConeError::Precondition("the pencil grid needs at least two cells".into()));
        }
        if form == PencilForm::Displacement && mat.is_stokes() {
            return Err(ConeError::Precondition(
                "nu = 1/2 has no displacement form; use the mixed (velocity, pressure) form".into(),
            ));
        }
        let n = cap.n;
        let nf = n as f64;
        let kappa = (mode * (mode + n - 3)) as f64;
        let sk = kappa.sqrt();
        let layout = DofLayout::new(mode, kappa, cells, form);
        let bw = layout.bandwidth();
        let dim = layout.dim;
        let zero = || BandMatrix::zeros(dim, bw, bw);
        let mut forms = Forms {
            stiff_a: zero(),
            mass_a: zero(),
            mass_t: zero(),
            div_a: zero(),
            a_div: zero(),
            div_div: zero(),
            curl_curl: zero(),
            p_a: zero(),
            a_p: zero(),
            p_div: zero(),
            div_p: zero(),
            p_p: zero(),
        };
        let mut gram = zero();
        let h = cap.theta0 / cells as f64;
        let rule = GaussLegendre::new(5);

        for cell in 0..cells {
            let t0 = cell as f64 * h;
            let t1 = t0 + h;
            // local basis: (component, side) for velocity, then pressure
            let mut basis: Vec<(usize, usize, (usize, f64))> = Vec::new();
            for side in 0..2 {
                for comp in 0..3 {
                    if let Some(e) = layout.velocity[cell + side][comp] {
                        basis.push((comp, side, e));
                    }
                }
            }
            if let Some(&p) = layout.pressure.get(cell) {
                basis.push((3, 0, (p, 1.0)));
            }
            let k = basis.len();
            let mut local = vec![[0.0f64; 13]; k * k];
            for (theta, wq) in rule.on_interval(t0, t1) {
                let s = theta.sin();
                let co = theta.cos();
                let w = s.powi(n as i32 - 2);
                let curl_weight = s.powi(n as i32 - 4);
                let vals: Vec<Local> = basis
                    .iter()
                    .map(|&(comp, side, _)| {
                        let (phi, dphi) =
                            if side == 0 { ((t1 - theta) / h, -1.0 / h) } else { ((theta - t0) / h, 1.0 / h) };
                        let mut v = Local { val: phi, dval: dphi, ..Local::default() };
                        match comp {
                            0 => {
                                v.a = phi;
                                v.da = dphi;
                            }
                            1 => {
                                v.b = phi;
                                v.dv = dphi + (nf - 2.0) * co / s * phi;
                                v.f = -phi;
                            }
                            2 => {
                                v.c = phi;
                                v.dv = -sk * phi / s;
                                v.f = (dphi * s + phi * co) / sk;
                            }
                            _ => {
                                v.val = 1.0;
                                v.dval = 0.0;
                                v.p = 1.0;
                            }
                        }
                        v
                    })
                    .collect();
                for (i, v) in vals.iter().enumerate() {
                    for (j, u) in vals.iter().enumerate() {
                        // row i is the test function, column j the trial function
                        let e = &mut local[i * k + j];
                        let ww = wq * w;
                        e[0] += ww * (v.da * u.da + kappa * v.a * u.a / (s * s));
                        e[1] += ww * v.a * u.a;
                        e[2] += ww * (v.b * u.b + v.c * u.c);
                        e[3] += ww * v.a * u.dv;
                        e[4] += ww * v.dv * u.a;
                        e[5] += ww * v.dv * u.dv;
                        e[6] += wq * kappa * curl_weight * v.f * u.f;
                        e[7] += ww * v.a * u.p;
                        e[8] += ww * v.p * u.a;
                        e[9] += ww * v.dv * u.p;
                        e[10] += ww * v.p * u.dv;
                        e[11] += ww * v.p * u.p;
                        if basis[i].0 == basis[j].0 {
                            e[12] += ww * (v.dval * u.dval + v.val * u.val);
                        }
                    }
                }
            }
            for i in 0..k {
                let (di, ci) = basis[i].2;
                for j in 0..k {
                    let (dj, cj) = basis[j].2;
                    let e = &local[i * k + j];
                    let cc = ci * cj;
                    let targets: [&mut BandMatrix; 12] = [
                        &mut forms.stiff_a,
                        &mut forms.mass_a,
                        &mut forms.mass_t,
                        &mut forms.div_a,
                        &mut forms.a_div,
                        &mut forms.div_div,
                        &mut forms.curl_curl,
                        &mut forms.p_a,
                        &mut forms.a_p,
                        &mut forms.p_div,
                        &mut forms.div_p,
                        &mut forms.p_p,
                    ];
                    for (t, m) in targets.into_iter().enumerate() {
                        if e[t] != 0.0 {
                            m.add(di, dj, c64(cc * e[t]));
                        }
                    }
                    if e[12] != 0.0 {
                        gram.add(di, dj, c64(cc * e[12]));
                    }
                }
            }
        }
        Ok(PencilOperator { cap: *cap, mode, form, nu: mat.nu, cells, layout, gram, forms })
    }

    pub fn from_config(cap: &CapDomain, mat: &MaterialParams, mode: usize, cfg: &DiscretizationConfig) -> Result<Self> {
        PencilOperator::new(cap, mat, mode, PencilForm::for_material(mat), cfg.grid_points)
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    /// The pencil matrix at λ; every coefficient is polynomial in λ.
    pub fn matrix_at(&self, lambda: Complex64) -> BandMatrix {
        let nf = self.cap.n as f64;
        let one = c64(1.0);
        let mu = (lambda - 1.0) * (lambda + nf - 1.0);
        let f = &self.forms;
        let mut a = f.stiff_a.clone();
        a.axpy(-mu, &f.mass_a);
        a.axpy(-(c64(2.0 * (nf - 2.0)) + mu), &f.mass_t);
        a.axpy(one, &f.div_div);
        a.axpy(one, &f.curl_curl);
        match self.form {
            PencilForm::Mixed => {
                a.axpy(c64(2.0), &f.div_a);
                a.axpy(c64(2.0), &f.a_div);
                a.axpy(lambda - 1.0, &f.p_a);
                a.axpy(-one, &f.p_div);
                a.axpy(-(lambda + nf - 1.0), &f.a_p);
                a.axpy(-one, &f.div_p);
                a.axpy(c64(-(1.0 - 2.0 * self.nu)), &f.p_p);
            }
            PencilForm::Displacement => {
                let g = 1.0 / (1.0 - 2.0 * self.nu);
                a.axpy(-(lambda - 1.0) * (lambda + nf - 1.0) * g, &f.mass_a);
                a.axpy(c64(2.0) - (lambda - 1.0) * g, &f.div_a);
                a.axpy(c64(2.0) + (lambda + nf - 1.0) * g, &f.a_div);
                a.axpy(c64(g), &f.div_div);
            }
        }
        a
    }

    pub fn at(&self, lambda: Complex64) -> PencilAssembly {
        PencilAssembly {
            lambda,
            mode: self.mode,
            form: self.form,
            matrix: self.matrix_at(lambda),
            gram: self.gram.clone(),
            layout: Some(self.layout.clone()),
            cap: Some(self.cap),
        }
    }

    /// Nodal interpolant of a field given by its profiles (a, b, c) and pressure p.
    pub fn interpolate<V, P>(&self, velocity: V, pressure: P) -> Vec<Complex64>
    where
        V: Fn(f64) -> [Complex64; 3],
        P: Fn(f64) -> Complex64,
    {
        let h = self.cap.theta0 / self.cells as f64;
        let mut x = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (node, entry) in self.layout.velocity.iter().enumerate() {
            let vals = velocity(node as f64 * h);
            for comp in 0..3 {
                if let Some((dof, coef)) = entry[comp] {
                    // tied pole unknown: take it from the first component that owns it
                    if comp == 2 && entry[1].map(|e| e.0) == Some(dof) {
                        continue;
                    }
                    x[dof] = vals[comp] / coef;
                }
            }
        }
        for (cell, &dof) in self.layout.pressure.iter().enumerate() {
            x[dof] = pressure((cell as f64 + 0.5) * h);
        }
        x
    }
}

/// Assembles the pencil at λ in the form selected by the material (mixed for nu = 1/2).
pub fn assemble_pencil(
    cap: &CapDomain,
    mat: &MaterialParams,
    lambda: Complex64,
    mode: usize,
    cfg: &DiscretizationConfig,
) -> Result<PencilAssembly> {
    Ok(PencilOperator::from_config(cap, mat, mode, cfg)?.at(lambda))
}

/// Assembles the pencil at λ in an explicitly chosen form.
pub fn assemble_pencil_form(
    cap: &CapDomain,
    mat: &MaterialParams,
    lambda: Complex64,
    mode: usize,
    form: PencilForm,
    cfg: &DiscretizationConfig,
) -> Result<PencilAssembly> {
    Ok(PencilOperator::new(cap, mat, mode, form, cfg.grid_points)?.at(lambda))
}
