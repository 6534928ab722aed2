use kex_core::textproc::porter_stem;

#[test]
fn reference_vocabulary() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/porter");
    let voc = std::fs::read_to_string(format!("{dir}/voc.txt")).unwrap();
    let out = std::fs::read_to_string(format!("{dir}/output.txt")).unwrap();
    let pairs: Vec<(&str, &str)> = voc.lines().zip(out.lines()).collect();
    assert!(pairs.len() > 20_000);
    let wrong: Vec<_> = pairs.iter().filter(|(w, s)| porter_stem(w) != *s).take(20).collect();
    let misses = pairs.iter().filter(|(w, s)| porter_stem(w) != *s).count();
    let rate = 1.0 - misses as f64 / pairs.len() as f64;
    println!("porter agreement {rate:.6} over {} words", pairs.len());
    assert!(rate >= 0.999, "agreement {rate}, e.g. {wrong:?}");
}
