//! Physical field reconstruction from a scalar wall profile, first-order
//! and second-order residuals, and the pointwise energy identity.
//!
//! The magnetic field stored in `f12` is the finite-difference derivative
//! of the gauge profile rather than the first-order model expression
//! `s (1 - f^2) / (2 sqrt(1 - (beta/4)(f^2-1)^2))`. The two only agree on
//! an actual solution, so keeping them separate makes the agreement a
//! falsifiable check instead of an algebraic identity; the model value is
//! carried alongside as `f12_model`.

use crate::error::{Result, SolverError};
use crate::model::ModelParams;
use crate::numdiff;
use crate::profile::WallProfile;

/// A residual maximum together with the grid position attaining it.
#[derive(Debug, Clone, Copy)]
pub struct ResidualMax {
    pub value: f64,
    pub at_x: f64,
}

fn max_over(grid: &[f64], values: impl Iterator<Item = f64>) -> ResidualMax {
    let mut best = ResidualMax {
        value: 0.0,
        at_x: grid.first().copied().unwrap_or(0.0),
    };
    for (i, v) in values.enumerate() {
        if v > best.value || !v.is_finite() {
            best = ResidualMax {
                value: v,
                at_x: grid[i],
            };
            if !v.is_finite() {
                break;
            }
        }
    }
    best
}

/// Born-Infeld magnetic energy density
/// `(1/beta)(sqrt(1 + beta F^2) - 1)`, in the form that stays finite as
/// `beta -> 0`.
pub fn magnetic_energy(f12: f64, beta: f64) -> f64 {
    let sq = beta * f12 * f12;
    f12 * f12 / (1.0 + (1.0 + sq).sqrt())
}

fn potential_of_w(w: f64, beta: f64) -> f64 {
    let radicand = 1.0 - 0.25 * beta * w * w;
    if radicand <= 0.0 {
        return f64::INFINITY;
    }
    w * w / (4.0 * (1.0 + radicand.sqrt()))
}

fn model_field(w: f64, beta: f64, s: f64) -> f64 {
    let radicand = 1.0 - 0.25 * beta * w * w;
    if radicand <= 0.0 {
        return f64::INFINITY * s.signum();
    }
    s * (-w) / (2.0 * radicand.sqrt())
}

/// Gauge-field, Higgs-field, and energy profiles over a wall grid.
#[derive(Debug, Clone)]
pub struct FieldProfile {
    pub params: ModelParams,
    pub grid: Vec<f64>,
    pub spacing: f64,
    /// Higgs field modulus `f = e^{u/2}`.
    pub f: Vec<f64>,
    /// Gauge profile `a = -s u'/2`.
    pub a: Vec<f64>,
    /// Finite-difference derivative of `f`.
    pub df: Vec<f64>,
    /// Magnetic field `F12 = a'` by finite differences.
    pub f12: Vec<f64>,
    /// First-order model field `s (1 - f^2) / (2 R)`.
    pub f12_model: Vec<f64>,
    /// Energy density `(df)^2/2 + a^2 f^2/2 + BI(F12) + V(f^2)`.
    pub energy_density: Vec<f64>,
    /// Net gauge-field change `a(end) - a(start)` across the window.
    pub flux_window: f64,
}

impl FieldProfile {
    /// Builds a field profile from externally supplied columns, as read
    /// back from an emitted table. The model field is recomputed from `f`;
    /// everything else is taken as given so that column corruption stays
    /// visible to the residual checks.
    pub fn from_arrays(
        grid: Vec<f64>,
        f: Vec<f64>,
        a: Vec<f64>,
        f12: Vec<f64>,
        energy_density: Vec<f64>,
        params: &ModelParams,
    ) -> Result<FieldProfile> {
        let n = grid.len();
        if n < 5 {
            return Err(SolverError::ParamError(format!(
                "need at least 5 grid nodes (got {n})"
            )));
        }
        if [f.len(), a.len(), f12.len(), energy_density.len()]
            .iter()
            .any(|&l| l != n)
        {
            return Err(SolverError::ParamError(
                "field columns must all have the grid's length".into(),
            ));
        }
        let spacing = grid[1] - grid[0];
        if !(spacing > 0.0) {
            return Err(SolverError::ParamError(format!(
                "grid must be increasing (first step {spacing})"
            )));
        }
        for (i, pair) in grid.windows(2).enumerate() {
            if ((pair[1] - pair[0]) - spacing).abs() > 1e-9 {
                return Err(SolverError::ParamError(format!(
                    "grid must be uniform: step at index {i} deviates from {spacing}"
                )));
            }
        }
        let s = params.sign_branch.signum();
        let beta = params.beta;
        let f12_model = f
            .iter()
            .map(|&fi| model_field(fi * fi - 1.0, beta, s))
            .collect();
        let df = numdiff::d1(&f, spacing);
        let flux_window = a[n - 1] - a[0];
        Ok(FieldProfile {
            params: *params,
            grid,
            spacing,
            f,
            a,
            df,
            f12,
            f12_model,
            energy_density,
            flux_window,
        })
    }

    /// Maximum disagreement between the differentiated and the model
    /// magnetic field.
    pub fn f12_agreement(&self) -> ResidualMax {
        max_over(
            &self.grid,
            self.f12
                .iter()
                .zip(&self.f12_model)
                .map(|(&x, &m)| (x - m).abs()),
        )
    }
}

/// Reconstructs the physical fields from a scalar profile:
/// `f = e^{u/2}`, `a = -s u'/2`, `F12` by differentiating `a`, and the
/// energy density assembled from those finite-difference pieces.
pub fn reconstruct(profile: &WallProfile) -> Result<FieldProfile> {
    let n = profile.len();
    if n < 5 {
        return Err(SolverError::ParamError(format!(
            "need at least 5 grid nodes to differentiate (got {n})"
        )));
    }
    let params = profile.params;
    let s = params.sign_branch.signum();
    let beta = params.beta;
    let h = profile.spacing;

    let f: Vec<f64> = profile.u.iter().map(|&u| (0.5 * u).exp()).collect();
    let a: Vec<f64> = profile.du.iter().map(|&du| -s * du / 2.0).collect();
    let df = numdiff::d1(&f, h);
    let f12 = numdiff::d1(&a, h);
    let f12_model: Vec<f64> = profile
        .u
        .iter()
        .map(|&u| model_field(u.exp_m1(), beta, s))
        .collect();
    let energy_density: Vec<f64> = (0..n)
        .map(|i| {
            0.5 * df[i] * df[i]
                + 0.5 * a[i] * a[i] * f[i] * f[i]
                + magnetic_energy(f12[i], beta)
                + potential_of_w(profile.u[i].exp_m1(), beta)
        })
        .collect();
    let flux_window = a[n - 1] - a[0];

    Ok(FieldProfile {
        params,
        grid: profile.grid.clone(),
        spacing: h,
        f,
        a,
        df,
        f12,
        f12_model,
        energy_density,
        flux_window,
    })
}

/// First-order residuals: `r1 = |f' + s a f|` and
/// `r2 = |F12 - f12_model|`. Both vanish on a wall solution and stay
/// zero under the branch flip.
pub fn bps_residual(fields: &FieldProfile) -> (ResidualMax, ResidualMax) {
    let s = fields.params.sign_branch.signum();
    let r1 = max_over(
        &fields.grid,
        (0..fields.grid.len()).map(|i| (fields.df[i] + s * fields.a[i] * fields.f[i]).abs()),
    );
    let r2 = fields.f12_agreement();
    (r1, r2)
}

/// Second-order residuals: the scalar field equation
/// `r3 = |f'' - a^2 f - (f^2 - 1) f / (2 R)|` and the gauge field equation
/// `r4 = |(F12 / sqrt(1 + beta F12^2))' - a f^2|`.
pub fn el_residual(fields: &FieldProfile) -> (ResidualMax, ResidualMax) {
    let beta = fields.params.beta;
    let n = fields.grid.len();
    let d2f = numdiff::d2(&fields.f, fields.spacing);
    let r3 = max_over(
        &fields.grid,
        (0..n).map(|i| {
            let fi = fields.f[i];
            let w = fi * fi - 1.0;
            let radicand = 1.0 - 0.25 * beta * w * w;
            if radicand <= 0.0 {
                return f64::INFINITY;
            }
            (d2f[i] - fields.a[i] * fields.a[i] * fi - w * fi / (2.0 * radicand.sqrt())).abs()
        }),
    );
    let m: Vec<f64> = fields
        .f12
        .iter()
        .map(|&x| x / (1.0 + beta * x * x).sqrt())
        .collect();
    let dm = numdiff::d1(&m, fields.spacing);
    let r4 = max_over(
        &fields.grid,
        (0..n).map(|i| (dm[i] - fields.a[i] * fields.f[i] * fields.f[i]).abs()),
    );
    (r3, r4)
}

/// Pointwise energy identity residual
/// `|H - (s F12 (1 - f^2)/2 + a^2 f^2)|`. The right-hand side is what the
/// energy density collapses to on a wall solution; off a solution the gap
/// is order one, which is what makes this a meaningful check.
pub fn energy_identity(fields: &FieldProfile) -> ResidualMax {
    let s = fields.params.sign_branch.signum();
    max_over(
        &fields.grid,
        (0..fields.grid.len()).map(|i| {
            let fi = fields.f[i];
            let collapsed =
                0.5 * s * fields.f12[i] * (1.0 - fi * fi) + fields.a[i] * fields.a[i] * fi * fi;
            (fields.energy_density[i] - collapsed).abs()
        }),
    )
}

/// Energy density carried by the magnetic phase `u -> -inf`: the field
/// saturates at `|F12| = 1/sqrt(4 - beta)` and the condensate dies, leaving
/// `BI(F12) + V(0)`.
pub fn far_field_energy_density(params: &ModelParams) -> f64 {
    let f12 = 1.0 / (4.0 - params.beta).sqrt();
    magnetic_energy(f12, params.beta) + potential_of_w(-1.0, params.beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SignBranch;
    use crate::profile::{self, BoundaryCondition};

    fn params(beta: f64) -> ModelParams {
        ModelParams::new(beta).unwrap()
    }

    fn synthetic(u: Vec<f64>, du: Vec<f64>, p: ModelParams) -> WallProfile {
        let n = u.len();
        WallProfile {
            bc: BoundaryCondition::HiggsToMagnetic,
            params: p,
            anchor: -1.0,
            b_star: None,
            shooting: None,
            grid: (0..n).map(|i| (i as f64 - (n / 2) as f64) * 0.01).collect(),
            u,
            du,
            spacing: 0.01,
            truncated: false,
            stats: crate::integrate::StepStats::default(),
        }
    }

    #[test]
    fn vacuum_reconstruction_is_trivial() {
        let prof = synthetic(vec![0.0; 101], vec![0.0; 101], params(2.0));
        let fields = reconstruct(&prof).unwrap();
        assert!(fields.f.iter().all(|&v| v == 1.0));
        assert!(fields.a.iter().all(|&v| v == 0.0));
        assert!(fields.f12.iter().all(|&v| v == 0.0));
        assert!(fields.energy_density.iter().all(|&v| v == 0.0));
        let (r1, r2) = bps_residual(&fields);
        let e = energy_identity(&fields);
        assert_eq!(r1.value, 0.0);
        assert_eq!(r2.value, 0.0);
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn center_values_match_closed_forms() {
        let p = params(0.0);
        let prof = profile::solve_higgs_to_magnetic(1.0, &p, (-20.0, 8.0)).unwrap();
        let fields = reconstruct(&prof).unwrap();
        let c = prof.center_index();
        assert!((fields.f[c] - 0.6065306597126334).abs() < 1e-14);
        let b_star = prof.b_star.unwrap();
        assert!((fields.a[c] - b_star / 2.0).abs() < 1e-14);
        assert!(fields.flux_window > 0.0);
        assert!((fields.flux_window - (-prof.du.last().unwrap() / 2.0)).abs() < 1e-8);
    }

    #[test]
    fn residuals_are_small_on_solutions() {
        for beta in [0.0, 2.0] {
            let prof = profile::solve_higgs_to_magnetic(1.0, &params(beta), (-20.0, 12.0)).unwrap();
            let fields = reconstruct(&prof).unwrap();
            let (r1, r2) = bps_residual(&fields);
            let (r3, r4) = el_residual(&fields);
            let e = energy_identity(&fields);
            assert!(
                r1.value < 1e-6,
                "beta {beta}: r1 = {} at {}",
                r1.value,
                r1.at_x
            );
            assert!(
                r2.value < 1e-6,
                "beta {beta}: r2 = {} at {}",
                r2.value,
                r2.at_x
            );
            assert!(
                r3.value < 1e-4,
                "beta {beta}: r3 = {} at {}",
                r3.value,
                r3.at_x
            );
            assert!(
                r4.value < 1e-4,
                "beta {beta}: r4 = {} at {}",
                r4.value,
                r4.at_x
            );
            assert!(
                e.value < 1e-6,
                "beta {beta}: energy gap {} at {}",
                e.value,
                e.at_x
            );
        }
    }

    #[test]
    fn magnetic_wall_residuals_are_small() {
        let prof = profile::solve_magnetic_to_magnetic(-1.0, &params(2.0), 12.0).unwrap();
        let fields = reconstruct(&prof).unwrap();
        let (r1, r2) = bps_residual(&fields);
        let e = energy_identity(&fields);
        assert!(r1.value < 1e-6, "r1 = {}", r1.value);
        assert!(r2.value < 1e-6, "r2 = {}", r2.value);
        assert!(e.value < 1e-6, "energy gap {}", e.value);
    }

    #[test]
    fn branch_flip_negates_gauge_fields_and_keeps_residuals() {
        let mut upper = params(2.0);
        upper.sign_branch = SignBranch::Upper;
        let mut lower = upper;
        lower.sign_branch = SignBranch::Lower;
        let prof_u = profile::solve_higgs_to_magnetic(1.0, &upper, (-20.0, 8.0)).unwrap();
        let prof_l = profile::solve_higgs_to_magnetic(1.0, &lower, (-20.0, 8.0)).unwrap();
        let fu = reconstruct(&prof_u).unwrap();
        let fl = reconstruct(&prof_l).unwrap();
        for i in 0..fu.grid.len() {
            assert_eq!(fu.f[i], fl.f[i]);
            assert_eq!(fu.a[i], -fl.a[i]);
            assert!((fu.energy_density[i] - fl.energy_density[i]).abs() < 1e-14);
        }
        let (r1u, r2u) = bps_residual(&fu);
        let (r1l, r2l) = bps_residual(&fl);
        assert!((r1u.value - r1l.value).abs() < 1e-12);
        assert!((r2u.value - r2l.value).abs() < 1e-12);
        let eu = energy_identity(&fu);
        let el = energy_identity(&fl);
        assert!((eu.value - el.value).abs() < 1e-12);
    }

    #[test]
    fn constant_profile_breaks_the_energy_identity() {
        let prof = synthetic(vec![-1.0; 201], vec![0.0; 201], params(2.0));
        let fields = reconstruct(&prof).unwrap();
        let gap = energy_identity(&fields);
        assert!(
            (0.04..0.07).contains(&gap.value),
            "expected an order 0.05 violation, got {}",
            gap.value
        );
    }

    #[test]
    fn single_node_corruption_is_flagged_at_its_position() {
        let p = params(2.0);
        let prof = profile::solve_higgs_to_magnetic(1.0, &p, (-20.0, 8.0)).unwrap();
        let mut bad = prof.clone();
        let k = bad.center_index() + 150;
        bad.u[k] += 1e-2;
        let fields = reconstruct(&bad).unwrap();
        let (_, r2) = bps_residual(&fields);
        assert!(r2.value > 1e-4, "r2 = {}", r2.value);
        assert!(
            (r2.at_x - bad.grid[k]).abs() < 0.03,
            "flagged at {} instead of {}",
            r2.at_x,
            bad.grid[k]
        );
    }

    #[test]
    fn far_field_density_matches_closed_form() {
        for beta in [0.0, 1.0, 2.0, 3.0, 3.9] {
            let p = params(beta);
            let expected = 1.0 / (2.0 * (4.0 - beta).sqrt());
            let got = far_field_energy_density(&p);
            assert!(
                (got - expected).abs() < 1e-14,
                "beta {beta}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn far_right_magnetic_field_saturates() {
        let p = params(2.0);
        let prof = profile::solve_higgs_to_magnetic(1.0, &p, (-20.0, 12.0)).unwrap();
        let fields = reconstruct(&prof).unwrap();
        let limit = 1.0 / (4.0 - p.beta).sqrt();
        let i = fields.grid.len() - 3;
        assert!(
            (fields.f12[i] - limit).abs() < 1e-6,
            "F12 = {} vs {limit}",
            fields.f12[i]
        );
        let h_tail = fields.energy_density[i];
        assert!((h_tail - far_field_energy_density(&p)).abs() < 1e-6);
    }

    #[test]
    fn from_arrays_round_trips_reconstruction() {
        let p = params(2.0);
        let prof = profile::solve_higgs_to_magnetic(1.0, &p, (-10.0, 6.0)).unwrap();
        let fields = reconstruct(&prof).unwrap();
        let rebuilt = FieldProfile::from_arrays(
            fields.grid.clone(),
            fields.f.clone(),
            fields.a.clone(),
            fields.f12.clone(),
            fields.energy_density.clone(),
            &p,
        )
        .unwrap();
        let (r1a, r2a) = bps_residual(&fields);
        let (r1b, r2b) = bps_residual(&rebuilt);
        assert!((r1a.value - r1b.value).abs() < 1e-12);
        assert!(
            (r2a.value - r2b.value).abs() < 5e-9,
            "{} vs {}",
            r2a.value,
            r2b.value
        );
    }

    #[test]
    fn from_arrays_rejects_ragged_or_nonuniform_input() {
        let p = params(1.0);
        let grid: Vec<f64> = (0..10).map(|i| i as f64 * 0.01).collect();
        let col = vec![0.0; 10];
        assert!(matches!(
            FieldProfile::from_arrays(
                grid.clone(),
                vec![0.0; 9],
                col.clone(),
                col.clone(),
                col.clone(),
                &p
            ),
            Err(SolverError::ParamError(_))
        ));
        let mut bent = grid.clone();
        bent[5] += 5e-3;
        assert!(matches!(
            FieldProfile::from_arrays(bent, col.clone(), col.clone(), col.clone(), col.clone(), &p),
            Err(SolverError::ParamError(_))
        ));
    }
}
