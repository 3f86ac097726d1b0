// temporary timing probe
use std::time::Instant;
use qtc_core::generator::depolarizing_generator;
use qtc_core::rng::{random_density, rng_from};
use qtc_core::wasserstein::{w2_upper, w2_upper_fixed, W2Options};

#[test]
#[ignore]
fn time_w2() {
    for &d in &[2usize, 3] {
        let mut rng = rng_from(60_001);
        let sigma = random_density(d, &mut rng);
        let gen = depolarizing_generator(&sigma).unwrap();
        let rho = random_density(d, &mut rng);
        let sig2 = random_density(d, &mut rng);
        for &k in &[4usize, 8, 16] {
            let t0 = Instant::now();
            let r = w2_upper_fixed(&gen, &rho, &sig2, k, &W2Options::default()).unwrap();
            println!(
                "d={d} K={k}: value {:.6} iters {} conv {} in {:.2}s",
                r.value, r.iterations, r.converged, t0.elapsed().as_secs_f64()
            );
        }
        let t0 = Instant::now();
        let r = w2_upper(&gen, &rho, &sig2, &W2Options::default()).unwrap();
        println!(
            "d={d} adaptive: value {:.6} in {:.2}s",
            r.value, t0.elapsed().as_secs_f64()
        );
    }
}
