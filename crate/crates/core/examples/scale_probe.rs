use chromlab_core::chromatic::{find_k4, packing_chi_from_complement, structural_chi};
use chromlab_core::triangles::DEFAULT_BRANCH_BUDGET;
use chromlab_core::{count_x, count_y, max_triangle_matching, sample_gnq, RandomSource};
use std::time::Instant;

fn main() {
    // chi-verify regime
    let (n, q) = (5_000usize, 2.5e-3f64);
    let t0 = Instant::now();
    let mut agree = 0;
    let trials = 10u64;
    for trial in 0..trials {
        let mut rng = RandomSource::new(7, trial).rng();
        let comp = sample_gnq(n, q, &mut rng).unwrap();
        assert!(find_k4(&comp).is_none(), "K4 at trial {trial}");
        let s = max_triangle_matching(&comp).unwrap().size();
        let chi_s = structural_chi(n, s).unwrap();
        let chi_e = match packing_chi_from_complement(&comp, DEFAULT_BRANCH_BUDGET) { Ok(r) => r.chi, Err(e) => { println!("trial {trial}: error {e}"); continue } };
        agree += (chi_s == chi_e) as u64;
    }
    println!("chi-verify: {agree}/{trials} agree, {:?} total", t0.elapsed());

    // clt regime
    let (n, q) = (20_000usize, 4e-4f64);
    let t0 = Instant::now();
    let trials = 20u64;
    let mut s_sum = 0usize;
    for trial in 0..trials {
        let mut rng = RandomSource::new(9, trial).rng();
        let g = sample_gnq(n, q, &mut rng).unwrap();
        let s = max_triangle_matching(&g).unwrap().size();
        let x = count_x(&g);
        let y = count_y(&g);
        assert!(s <= x && x <= s + y);
        s_sum += s;
    }
    println!("clt: mean s = {}, {:?} for {trials} trials", s_sum as f64 / trials as f64, t0.elapsed());
}
