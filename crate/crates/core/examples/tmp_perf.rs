use rand::SeedableRng;
use ulrich_core::field::PrimeField;
use ulrich_core::presentation::UlrichPresentation;
use ulrich_core::cohomology::{Cohomology, mu_matrix};
fn main() {
    let d: i64 = std::env::args().nth(1).unwrap().parse().unwrap();
    let r: i64 = std::env::args().nth(2).unwrap().parse().unwrap();
    let p = UlrichPresentation::random(PrimeField::default(), d, r, &mut rand_chacha::ChaCha8Rng::seed_from_u64(0)).unwrap();
    let c = Cohomology::new(&p);
    for t in 2..=p.shape().alpha as i64 {
        let m = mu_matrix(&p, -t*d);
        let tt = std::time::Instant::now();
        println!("t={t} {}x{} nnz {} h1={} in {:?}", m.rows(), m.cols(), m.nnz(), c.h1(-t*d), tt.elapsed());
        let tt = std::time::Instant::now();
        println!("  transposed rank {} in {:?}", m.transpose().rank(), tt.elapsed());
    }
}
