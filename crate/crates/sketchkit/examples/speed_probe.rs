use nalgebra::DMatrix;
use std::time::Instant;

fn bench_svd(n: usize, d: usize) {
    let a = DMatrix::<f64>::from_fn(n, d, |i, j| ((i * 7 + j * 13) % 17) as f64 / 17.0 - 0.5);
    let t = Instant::now();
    let svd = a.clone().svd(true, true);
    println!("svd {}x{}: {:?} (s1={:.3})", n, d, t.elapsed(), svd.singular_values[0]);
}

fn bench_cpqr(n: usize) {
    let a = DMatrix::<f64>::from_fn(n, n, |i, j| ((i * 11 + j * 3) % 23) as f64 / 23.0 - 0.4);
    let t = Instant::now();
    let qr = a.col_piv_qr();
    println!("cpqr {0}x{0}: {1:?} (r00={2:.3})", n, t.elapsed(), qr.r()[(0, 0)]);
}

fn bench_symeig(n: usize) {
    let b = DMatrix::<f64>::from_fn(n, n, |i, j| ((i * 5 + j * 7) % 13) as f64);
    let a = &b * b.transpose();
    let t = Instant::now();
    let e = a.symmetric_eigen();
    println!("symeig {0}x{0}: {1:?} (l0={2:.3})", n, t.elapsed(), e.eigenvalues[0]);
}

fn main() {
    bench_svd(300, 300);
    bench_svd(500, 500);
    bench_svd(1000, 1000);
    bench_svd(2000, 32);
    bench_svd(5000, 32);
    bench_svd(1500, 330);
    bench_cpqr(330);
    bench_cpqr(700);
    bench_symeig(500);
}
