//! Kernel product vectors over the full log-spaced grid of canonical states.

use qutrit_ppt::builders::{omega, CanonicalParams};
use qutrit_ppt::finder::{find_product_vectors, in_general_position, PvStatus, SubspaceSpec};
use qutrit_ppt::ToleranceProfile;

fn log_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

#[test]
fn every_grid_kernel_has_six_vectors_in_general_position() {
    let tol = ToleranceProfile::default();
    let g = log_grid(10, 0.2, 5.0);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for &a in &g {
        for &b in &g {
            for &c in &g {
                for &d in &g {
                    let rho = omega(&CanonicalParams::new(a, b, c, d).unwrap()).unwrap();
                    let norm = rho.matrix().spectral_norm();
                    let s = SubspaceSpec::kernel_of(rho.matrix(), &tol).unwrap();
                    let r = find_product_vectors(&s);
                    let ok = r.status == PvStatus::Finite
                        && r.vectors.len() == 6
                        && in_general_position(&r.vectors, &tol);
                    for v in &r.vectors {
                        let ann = (rho.matrix().inner() * v.unit_tensor()).norm() / norm;
                        worst = worst.max(ann);
                    }
                    if !ok {
                        failures.push(((a, b, c, d), r.status, r.vectors.len(), r.note));
                    }
                }
            }
        }
    }
    assert!(failures.is_empty(), "{} failures, first: {:?}", failures.len(), failures.first());
    assert!(worst < 1e-9, "worst annihilation {worst:.3e}");
}
