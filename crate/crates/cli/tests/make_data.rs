// regenerates the shipped example inputs under crates/cli/data; run with
//   cargo test -p qtc-cli --test make_data -- --ignored
use qtc_core::generator::depolarizing_generator;
use qtc_core::io::{write_json, GeneratorJson, MatrixJson};
use qtc_core::linalg::DensityMatrix;
use qtc_core::rng::{random_density, rng_from};

#[test]
#[ignore]
fn regenerate_shipped_data() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    std::fs::create_dir_all(&dir).unwrap();

    let sigma = DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap();
    let gen = depolarizing_generator(&sigma).unwrap();
    write_json(
        &dir.join("depolarizing_qubit.json"),
        &GeneratorJson::from_generator(&gen),
    )
    .unwrap();

    let mut rng = rng_from(2024);
    let rho = random_density(2, &mut rng);
    write_json(&dir.join("state_a.json"), &MatrixJson::from_cmat(rho.matrix())).unwrap();
    let rho_b = random_density(2, &mut rng);
    write_json(&dir.join("state_b.json"), &MatrixJson::from_cmat(rho_b.matrix())).unwrap();

    // a simple non-scalar observable
    let z = qtc_core::linalg::HermitianOperator::from_real_diagonal(&[1.0, -1.0]);
    write_json(&dir.join("observable_z.json"), &MatrixJson::from_cmat(z.matrix())).unwrap();
}
