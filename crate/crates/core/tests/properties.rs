use std::f64::consts::TAU;

use proptest::prelude::*;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symdisc::polydisc::{
    associated_polynomial, beta_reduce, kernel_criterion, on_distinguished_boundary, reconstruct, symmetrize,
    PreimagePoint,
};
use symdisc::schur::{gn_matrix, schur_cohn_matrix, zeros_in_open_disc, DiscLocation};
use symdisc::{
    classify_oracle, definiteness, elementary_symmetric, find_roots, in_gamma_recursive, in_gn_recursive, in_gn_schur,
    max_root_modulus, Complex64, Definiteness, HermitianMatrix, MonicPoly, Region, SymPoint, ToleranceConfig,
};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

struct Rng(ChaCha8Rng);

impl Rng {
    fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn disc(&mut self, r: f64) -> Complex64 {
        let rad = r * self.unit().sqrt();
        Complex64::from_polar(rad, TAU * self.unit())
    }

    fn index(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }

    fn perm(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, self.index(i + 1));
        }
        p
    }
}

fn disc_point(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..TAU).prop_map(move |(u, t)| Complex64::from_polar(radius * u.sqrt(), t))
}

fn preimage(n: std::ops::RangeInclusive<usize>, radius: f64) -> impl Strategy<Value = Vec<Complex64>> {
    n.prop_flat_map(move |n| prop::collection::vec(disc_point(radius), n))
}

fn sym(z: &[Complex64]) -> SymPoint {
    symmetrize(&PreimagePoint::new(z.to_vec()).unwrap()).unwrap()
}

fn rel_close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1.0)
}

#[test]
fn definiteness_is_permutation_invariant() {
    let mut rng = Rng::new(1);
    for _ in 0..1000 {
        let n = 1 + rng.index(8);
        let coeffs = (0..n).map(|_| rng.disc(1.5)).collect();
        let h = schur_cohn_matrix(&MonicPoly::new(coeffs).unwrap()).unwrap();
        let base = definiteness(&h, 1e-10).unwrap();
        if base.min_pivot_or_eig.abs() < 1e-6 {
            continue;
        }
        let perm = rng.perm(n);
        assert_eq!(definiteness(&h.permuted(&perm), 1e-10).unwrap().kind, base.kind);
    }
}

#[test]
fn positive_definite_forms_are_positive() {
    let mut rng = Rng::new(2);
    let mut tested = 0;
    while tested < 50 {
        let n = 1 + rng.index(8);
        let z: Vec<Complex64> = (0..n).map(|_| rng.disc(0.95)).collect();
        let h = gn_matrix(&sym(&z)).unwrap();
        if definiteness(&h, 1e-10).unwrap().kind != Definiteness::PositiveDefinite {
            continue;
        }
        tested += 1;
        for _ in 0..1000 {
            let x: Vec<Complex64> = (0..n).map(|_| rng.disc(1.0)).collect();
            let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            let x: Vec<Complex64> = x.iter().map(|v| v / norm).collect();
            assert!(h.quadratic_form(&x) > 0.0);
        }
    }
}

#[test]
fn gn_matrix_corner_entries_match_closed_forms() {
    let mut rng = Rng::new(3);
    for _ in 0..1000 {
        let n = 2 + rng.index(7);
        let coords: Vec<Complex64> = (0..n).map(|_| rng.disc(3.0)).collect();
        let pt = SymPoint::new(coords).unwrap();
        let (s, p) = (pt.s(), pt.p());
        let h = gn_matrix(&pt).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(rel_close(h.get(0, 0), one * (1.0 - p.norm_sqr()), 1e-13));
        assert!(rel_close(h.get(n - 1, n - 1), one * (1.0 - p.norm_sqr()), 1e-13));
        let d22 = if n == 2 {
            1.0 - p.norm_sqr()
        } else {
            1.0 + s[0].norm_sqr() - s[n - 2].norm_sqr() - p.norm_sqr()
        };
        assert!(rel_close(h.get(1, 1), one * d22, 1e-13));
        // Off-diagonal first-row entries are the conjugates of the displayed ones.
        let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
        let corner = sign * s[n - 2] - sign * s[0].conj() * p;
        assert!(rel_close(h.get(0, n - 1), corner.conj(), 1e-13));
        let second = -s[0] + s[n - 2].conj() * p;
        if n > 2 {
            assert!(rel_close(h.get(0, 1), second.conj(), 1e-13));
        }
    }
}

#[test]
fn schur_matches_root_oracle() {
    let mut rng = Rng::new(4);
    for _ in 0..2000 {
        let d = 1 + rng.index(8);
        let poly = MonicPoly::new((0..d).map(|_| rng.disc(2.0)).collect()).unwrap();
        let m = max_root_modulus(&poly, 1e-12).unwrap();
        if (m - 1.0).abs() <= 1e-6 {
            continue;
        }
        let (loc, _) = zeros_in_open_disc(&poly, 1e-10).unwrap();
        let expected = if m < 1.0 {
            DiscLocation::Inside
        } else {
            DiscLocation::NotInside
        };
        assert_eq!(loc, expected, "{poly:?}, max modulus {m}");
    }
}

fn count_strictly_inside(roots: &[Complex64], band: f64) -> Option<usize> {
    if roots.iter().any(|r| (r.norm() - 1.0).abs() <= band) {
        return None;
    }
    Some(roots.iter().filter(|r| r.norm() < 1.0).count())
}

#[test]
fn zero_counts_of_f_and_zg() {
    let mut rng = Rng::new(5);
    let mut checked = 0;
    for _ in 0..1000 {
        let n = 2 + rng.index(7);
        let w: Vec<Complex64> = (0..n - 1).map(|_| rng.disc(1.5)).collect();
        let b = sym(&w);
        let an = rng.disc(1.0);
        let f = associated_polynomial(&reconstruct(&b, an).unwrap());
        let g = associated_polynomial(&b);
        let rf = find_roots(&f, 1e-12, 500).unwrap();
        let rg = find_roots(&g, 1e-12, 500).unwrap();
        if let (Some(cf), Some(cg)) = (
            count_strictly_inside(&rf.roots, 1e-9),
            count_strictly_inside(&rg.roots, 1e-9),
        ) {
            assert_eq!(cf, cg + 1);
            checked += 1;
        }
    }
    assert!(checked > 900);
}

#[test]
fn circle_zeros_of_f_and_g_coincide() {
    let mut rng = Rng::new(6);
    for _ in 0..1000 {
        let n = 2 + rng.index(7);
        let mut w: Vec<Complex64> = (0..n - 1).map(|_| rng.disc(1.5)).collect();
        let k = rng.index(n - 1);
        w[k] = Complex64::from_polar(1.0, TAU * rng.unit());
        let b = sym(&w);
        let an = rng.disc(0.95);
        let f = associated_polynomial(&reconstruct(&b, an).unwrap());
        let rf = find_roots(&f, 1e-12, 500).unwrap().roots;
        let rg = find_roots(&associated_polynomial(&b), 1e-12, 500).unwrap().roots;
        let near = |r: &Complex64, set: &[Complex64]| set.iter().any(|q| (r - q).norm() <= 1e-6);
        let on_circle = |r: &&Complex64| (r.norm() - 1.0).abs() <= 1e-9;
        let f_circle: Vec<_> = rf.iter().filter(on_circle).collect();
        assert!(!f_circle.is_empty(), "the planted unimodular zero of g is a zero of f");
        for r in f_circle {
            assert!(near(r, &rg));
        }
        for r in rg.iter().filter(on_circle) {
            assert!(near(r, &rf));
        }
    }
}

#[test]
fn torus_images_and_their_perturbations() {
    let mut rng = Rng::new(7);
    for _ in 0..500 {
        let n = 2 + rng.index(5);
        let mut z: Vec<Complex64> = (0..n).map(|_| Complex64::from_polar(1.0, TAU * rng.unit())).collect();
        let v = on_distinguished_boundary(&sym(&z), &tol()).unwrap();
        assert!(v.on_boundary);
        let chk = v.beta_check.unwrap();
        assert!(chk.least_squares_residual < 1e-9, "{n} {chk:?}");
        assert_eq!(
            in_gamma_recursive(&sym(&z), &tol()).unwrap().region,
            Region::DistinguishedBoundary
        );
        let k = rng.index(n);
        z[k] *= 0.9;
        assert!(!on_distinguished_boundary(&sym(&z), &tol()).unwrap().on_boundary);
    }
}

#[test]
fn kernel_criterion_matches_oracle() {
    let mut rng = Rng::new(8);
    let mut checked = 0;
    while checked < 500 {
        let n = 2 + rng.index(5);
        let z = PreimagePoint::new((0..n).map(|_| rng.disc(1.25)).collect()).unwrap();
        let Ok(k) = kernel_criterion(&z, &tol()) else {
            continue;
        };
        let pt = symmetrize(&z).unwrap();
        let m = max_root_modulus(&associated_polynomial(&pt), 1e-12).unwrap();
        if k.in_band || (m - 1.0).abs() <= 1e-6 {
            continue;
        }
        let oracle = classify_oracle(&pt, &tol()).unwrap().region;
        assert_eq!(k.holds(), oracle == Region::InteriorGn, "{z:?}");
        checked += 1;
    }
}

#[test]
fn kernel_criterion_rejects_violated_hypotheses() {
    let z = PreimagePoint::new(vec![Complex64::new(1.2, 0.0), Complex64::new(1.1, 0.0)]).unwrap();
    assert!(kernel_criterion(&z, &tol()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn elementary_symmetric_is_permutation_invariant(z in preimage(1..=16, 2.0), seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let perm = rng.perm(z.len());
        let shuffled: Vec<Complex64> = perm.iter().map(|&i| z[i]).collect();
        let a = elementary_symmetric(&z).unwrap();
        let b = elementary_symmetric(&shuffled).unwrap();
        let scale: Vec<f64> = {
            let abs: Vec<Complex64> = z.iter().map(|v| Complex64::new(v.norm(), 0.0)).collect();
            elementary_symmetric(&abs).unwrap().iter().map(|e| e.re.max(1.0)).collect()
        };
        for ((x, y), s) in a.iter().zip(&b).zip(&scale) {
            prop_assert!((x - y).norm() <= 1e-13 * s, "{x} vs {y}");
        }
    }

    #[test]
    fn vieta_round_trip(z in preimage(1..=8, 1.0)) {
        let separated = (0..z.len()).all(|a| (a + 1..z.len()).all(|b| (z[a] - z[b]).norm() >= 1e-2));
        prop_assume!(separated);
        let roots = find_roots(&MonicPoly::from_roots(&z).unwrap(), 1e-12, 500).unwrap();
        prop_assert!(roots.converged);
        let mut unused = roots.roots.clone();
        for target in &z {
            let (i, d) = unused
                .iter()
                .enumerate()
                .map(|(i, r)| (i, (r - target).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            prop_assert!(d <= 1e-8, "root {target} matched at distance {d}");
            unused.swap_remove(i);
        }
    }

    #[test]
    fn reduction_round_trip(coords in preimage(2..=8, 4.0), p in disc_point(0.99)) {
        let mut coords = coords;
        *coords.last_mut().unwrap() = p;
        let pt = SymPoint::new(coords).unwrap();
        let beta = beta_reduce(&pt, &tol()).unwrap();
        let back = reconstruct(&beta, p).unwrap();
        for (a, b) in pt.coords().iter().zip(back.coords()) {
            prop_assert!(rel_close(*a, *b, 1e-12), "{a} vs {b}");
        }
    }

    #[test]
    fn n2_closed_form(s in disc_point(2.5), p in disc_point(1.0)) {
        let pt = SymPoint::from_parts(&[s], p).unwrap();
        let d = 1.0 - p.norm_sqr();
        let min_eig = d - (s - s.conj() * p).norm();
        prop_assume!(min_eig.abs() > 1e-10 && d > 1e-9);
        let beta = (s - s.conj() * p) / d;
        prop_assert!(rel_close(beta + p * beta.conj(), s, 1e-12));
        let schur = in_gn_schur(&pt, &tol()).unwrap().region == Region::InteriorGn;
        prop_assert_eq!(schur, min_eig > 0.0);
        prop_assert_eq!(schur, beta.norm() < 1.0);
    }

    #[test]
    fn open_set_methods_agree(z in preimage(2..=6, 1.3)) {
        let pt = sym(&z);
        prop_assume!(pt.p().norm() <= 0.99);
        let m = max_root_modulus(&associated_polynomial(&pt), 1e-12).unwrap();
        prop_assume!((m - 1.0).abs() > 1e-6);
        let expected = if m < 1.0 { Region::InteriorGn } else { Region::Outside };
        prop_assert_eq!(in_gn_recursive(&pt, &tol()).unwrap().region, expected);
        prop_assert_eq!(in_gn_schur(&pt, &tol()).unwrap().region, expected);
        prop_assert_eq!(classify_oracle(&pt, &tol()).unwrap().region, expected);
    }

    #[test]
    fn scaling_an_interior_preimage_stays_interior(z in preimage(1..=8, 0.99), r in 0.01..0.999f64) {
        prop_assert_eq!(classify_oracle(&sym(&z), &tol()).unwrap().region, Region::InteriorGn);
        let scaled: Vec<Complex64> = z.iter().map(|v| v * r).collect();
        prop_assert_eq!(classify_oracle(&sym(&scaled), &tol()).unwrap().region, Region::InteriorGn);
        prop_assert_eq!(in_gamma_recursive(&sym(&scaled), &tol()).unwrap().region, Region::InteriorGn);
    }

    #[test]
    fn hermitian_by_construction(coeffs in preimage(1..=10, 3.0)) {
        let h = schur_cohn_matrix(&MonicPoly::new(coeffs).unwrap()).unwrap();
        let n = h.dim();
        for j in 0..n {
            for k in 0..n {
                prop_assert_eq!(h.get(j, k), h.get(k, j).conj());
            }
        }
        prop_assert!(HermitianMatrix::from_rows(&h.rows()).is_ok());
    }
}
