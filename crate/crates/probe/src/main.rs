use ellint_core::operators::*;
use ellint_core::special_fn::EllipticModuli;
use ellint_core::contour::PoleList;
use num_complex::Complex64;
fn c(re: f64, im: f64) -> Complex64 { Complex64::new(re, im) }
fn main() {
    let md = EllipticModuli::from_bases(c(0.2, 0.0), c(0.25, 0.0)).unwrap();
    let q = md.q;
    let fy: YFn = { let b = theta_plus_basis(0.5, md.q).unwrap(); b[0].clone() };
    let w = Complex64::from_polar(1.0, 0.73);
    let b_val = b_discrete_apply(0.5, -0.5, 1, &md, &fy, w).unwrap();
    let sv = |d: Complex64| -> Complex64 {
        let t = (c(1.0, 0.0) + d).sqrt() / q;
        let params = OperatorParams::from_t(Role::S1, t, md).unwrap();
        s1_apply_corrected(&params, &fy, &PoleList::default(), w, 512).unwrap()
    };
    for dir in [c(0.0, 1.0), c(1.0, 0.0), c(0.7, 0.7)] {
        let deltas: Vec<f64> = (0..5).map(|j| 0.08 / 2f64.powi(j)).collect();
        let mut tab: Vec<Complex64> = deltas.iter().map(|&d| sv(dir * d)).collect();
        // Neville to delta -> 0
        let mut ds = deltas.clone();
        for lev in 1..tab.len() {
            for i in 0..tab.len() - lev {
                let (d0, d1) = (ds[i], ds[i + lev]);
                tab[i] = (tab[i + 1] * d0 - tab[i] * d1) / (d0 - d1);
            }
            let _ = &mut ds;
        }
        let rel = (tab[0] - b_val).norm() / b_val.norm();
        println!("dir {:+.1}{:+.1}i: extrap rel err {:.3e}", dir.re, dir.im, rel);
    }
}
