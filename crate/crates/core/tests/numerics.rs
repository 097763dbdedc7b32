mod common;

use num_complex::Complex64;
use rand::Rng;

use uniton_core::factor::*;
use uniton_core::loops::{ExactLoop, LoopMat, NumLoop};
use uniton_core::matrix::Mat;
use uniton_core::scalar::{GaussianRational, RatFun, Scalar};
use uniton_core::verify::{control_map, harmonicity_residual, square_grid};
use uniton_core::weierstrass::*;

fn opts() -> UnitarizeOptions {
    UnitarizeOptions::default()
}

fn numeric(spec: &ExtendedSolutionSpec, z: Complex64) -> NumLoop {
    spec.assemble_loop().eval_z(Some(z)).unwrap()
}

#[test]
fn unitarize_agrees_with_grassmannian_oracle() {
    let mut rng = common::rng(11);
    for _ in 0..20 {
        let n = rng.gen_range(2..=4);
        let spec = common::random_spec(&mut rng, n, 2);
        let psi = numeric(&spec, common::random_z(&mut rng));
        let split = unitarize(&psi, &opts()).unwrap();
        assert!(split.residual_unitarity <= 1e-9, "{}", split.residual_unitarity);
        assert!(split.residual_split <= 1e-9, "{}", split.residual_split);
        let oracle = common::grassmannian_oracle(&psi);
        let err = split.unitary_part.dist(&oracle);
        assert!(err <= 1e-8, "oracle distance {err:.3e} for {spec}");
        // Φ_+ has no negative powers and Ψ = Φ_u Φ_+.
        assert!(split.plus_part.lo() >= 0);
    }
}

#[test]
fn unitarize_is_idempotent() {
    let mut rng = common::rng(12);
    for _ in 0..10 {
        let n = rng.gen_range(2..=4);
        let spec = common::random_spec(&mut rng, n, 2);
        let psi = numeric(&spec, common::random_z(&mut rng));
        let u = unitarize(&psi, &opts()).unwrap().unitary_part;
        let again = unitarize(&u, &opts()).unwrap();
        assert!(again.unitary_part.dist(&u) <= 1e-7);
        assert!(again.plus_part.dist(&LoopMat::identity(n)) <= 1e-7);
    }
}

#[test]
fn precise_options_tighten_the_residuals() {
    let spec = veronese_solution(3).unwrap();
    let psi = numeric(&spec, Complex64::new(0.3, -0.2));
    let split = unitarize(&psi, &UnitarizeOptions::precise()).unwrap();
    assert!(split.residual_unitarity <= 1e-12);
    assert!(split.residual_split <= 1e-12);
}

fn ratfun(rng: &mut impl Rng, with_z: bool) -> RatFun {
    let c = RatFun::from(GaussianRational::from_fracs(rng.gen_range(-2..=2), 1, rng.gen_range(-1..=1), 1));
    if with_z && rng.gen_bool(0.3) {
        c + RatFun::z()
    } else {
        c
    }
}

/// Unit upper (or lower) triangular polynomial loop of degree ≤ `deg`.
fn unitriangular(rng: &mut impl Rng, n: usize, deg: usize, upper: bool, with_z: bool) -> ExactLoop {
    let coeffs = (0..=deg)
        .map(|p| {
            Mat::from_fn(n, n, |i, j| {
                if i == j {
                    if p == 0 { RatFun::one() } else { RatFun::zero() }
                } else if (i < j) == upper {
                    ratfun(rng, with_z)
                } else {
                    RatFun::zero()
                }
            })
        })
        .collect();
    LoopMat::new(n, 0, coeffs).unwrap()
}

fn random_unimodular(rng: &mut impl Rng, n: usize, with_z: bool) -> ExactLoop {
    let a = unitriangular(rng, n, 2, true, with_z);
    let b = unitriangular(rng, n, 1, false, with_z);
    a.multiply(&b).unwrap()
}

/// `min` λ-adic valuation over the `k × k` minors of `l`.
fn determinantal_valuation(l: &ExactLoop, k: usize) -> i32 {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (k - 1..n).flat_map(|last| subsets(last, k - 1).into_iter().map(move |mut s| { s.push(last); s })).collect()
    }
    let n = l.n();
    let mut best = i32::MAX;
    for rows in subsets(n, k) {
        for cols in subsets(n, k) {
            let coeffs = l.coeffs().iter().map(|c| c.submatrix(&rows, &cols)).collect();
            let minor = LoopMat::new(k, l.lo(), coeffs).unwrap();
            let (shift, p) = minor.det();
            if let Some(v) = p.valuation() {
                best = best.min(shift + v as i32);
            }
        }
    }
    best
}

#[test]
fn bruhat_cells_of_random_products() {
    let mut rng = common::rng(13);
    for trial in 0..100 {
        let n = rng.gen_range(2..=4);
        let mut xi = common::random_exponents(&mut rng, n, 3);
        if rng.gen_bool(0.3) {
            xi.iter_mut().for_each(|e| *e -= 1);
        }
        let with_z = trial % 4 == 0;
        let u = random_unimodular(&mut rng, n, with_z);
        let v = random_unimodular(&mut rng, n, with_z);
        let l = u.multiply(&LoopMat::gamma(&xi)).unwrap().multiply(&v).unwrap();
        let cell = bruhat_cell(&l).unwrap();
        assert_eq!(cell.exponents, xi, "trial {trial}");
        // d_k = λ^{sum of the k smallest exponents}.
        if n <= 3 {
            for k in 1..=n {
                let expected: i32 = xi[n - k..].iter().sum();
                assert_eq!(determinantal_valuation(&l, k), expected, "trial {trial}, k = {k}");
            }
        }
    }
}

#[test]
fn su2_two_uniton_has_ad_width_two() {
    let half = RatFun::from(GaussianRational::from_ratio(1, 2));
    let (o, one) = (RatFun::zero(), RatFun::one());
    let p = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 0 { one.clone() } else { o.clone() });
    let pi = Mat::from_fn(2, 2, |_, _| half.clone());
    let id = Mat::<RatFun>::identity(2);
    let first = LoopMat::new(2, -1, vec![&id - &p, p]).unwrap();
    let second = LoopMat::new(2, 0, vec![pi.clone(), &id - &pi]).unwrap();
    let l = first.multiply(&second).unwrap();
    assert_eq!(l.ad_width().unwrap(), 2);
}

#[test]
fn energy_grows_along_the_flow() {
    let mut rng = common::rng(14);
    for _ in 0..6 {
        let n = rng.gen_range(2..=3);
        let spec = common::random_spec(&mut rng, n, 2);
        let z = common::random_z(&mut rng);
        let l = spec.assemble_loop();
        let energies: Vec<f64> = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&t| cstar_flow(&l, t, z, &opts()).unwrap().energy())
            .collect();
        for w in energies.windows(2) {
            assert!(w[1] >= w[0] - 1e-9 * w[0].max(1.0), "{energies:?}");
        }
    }
}

#[test]
fn flow_tends_to_the_s1_part() {
    let mut rng = common::rng(15);
    for _ in 0..4 {
        let spec = common::random_spec(&mut rng, 3, 1);
        let z = common::random_z(&mut rng);
        let limit = unitarize(&numeric(&flow_limit(&spec), z), &opts()).unwrap().unitary_part;
        let l = spec.assemble_loop();
        let far = cstar_flow(&l, 10.0, z, &opts()).unwrap().dist(&limit);
        let near = cstar_flow(&l, 2.0, z, &opts()).unwrap().dist(&limit);
        assert!(far <= 1e-3 && far <= near + 1e-12, "{near:.3e} {far:.3e}");
    }
}

#[test]
fn veronese_flow_is_stationary() {
    let spec = veronese_solution(3).unwrap();
    let l = spec.assemble_loop();
    let z = Complex64::new(0.2, 0.1);
    let start = cstar_flow(&l, 0.0, z, &opts()).unwrap();
    let end = cstar_flow(&l, 8.0, z, &opts()).unwrap();
    assert!(end.dist(&start) <= 1e-8);
    assert!((start.energy() - end.energy()).abs() <= 1e-8);
}

#[test]
fn uniton_factors_of_full_flag_loops() {
    let mut rng = common::rng(16);
    let mut specs = vec![veronese_solution(4).unwrap()];
    let free = common::random_free(&mut rng, &[3, 2, 1, 0], false, 2);
    specs.push(build_from_free_functions(&[3, 2, 1, 0], &free).unwrap());
    for spec in specs {
        let z = common::random_z(&mut rng);
        let factors = uniton_factorize(&spec, z, &opts()).unwrap();
        assert_eq!(factors.len(), 3);
        for f in &factors {
            assert!(projector_form_defect(f) <= 1e-8, "{}", projector_form_defect(f));
        }
        let product = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.multiply(f).unwrap());
        let direct = unitarize(&numeric(&spec, z), &opts()).unwrap().unitary_part;
        assert!(product.dist(&direct) <= 1e-8);
    }
}

#[test]
fn harmonicity_of_small_maps() {
    let grid = square_grid(5, 0.7);
    let mut rng = common::rng(17);
    let free = common::random_free(&mut rng, &[1, 0], false, 2);
    let spec = build_from_free_functions(&[1, 0], &free).unwrap();
    let precise = UnitarizeOptions::precise();
    let r = harmonicity_residual(|z| harmonic_map_of(&spec, z, &precise), &grid, 1e-3).unwrap();
    assert!(r <= 1e-5, "{r:.3e}");
    let control = harmonicity_residual(|z| Ok::<_, ()>(control_map(2, z)), &grid, 1e-3).unwrap();
    assert!(control >= 1e-2);
}

#[test]
fn harmonicity_residual_is_truncation_error() {
    // Halving h should divide the residual by about four.
    let spec = veronese_solution(3).unwrap();
    let precise = UnitarizeOptions::precise();
    let grid = [Complex64::new(0.0, 0.0), Complex64::new(0.3, -0.2)];
    let coarse = harmonicity_residual(|z| harmonic_map_of(&spec, z, &precise), &grid, 2e-3).unwrap();
    let fine = harmonicity_residual(|z| harmonic_map_of(&spec, z, &precise), &grid, 1e-3).unwrap();
    let ratio = coarse / fine;
    assert!((3.5..4.5).contains(&ratio), "{coarse:.3e} {fine:.3e}");
}
