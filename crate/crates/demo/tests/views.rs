use orthosplines_demo::{decay, maximal};

#[test]
fn decay_offsets_start_at_the_diagonal() {
    let v = decay(3, 40, 1, true).unwrap();
    assert_eq!(v.offsets.len(), 42);
    assert!(v.offsets[0] >= v.offsets[5]);
    assert!(v.gamma > 0.0 && v.gamma < 1.0);
}

#[test]
fn maximal_functions_dominate_the_function() {
    let v = maximal(2, 30, 7, false, 256).unwrap();
    for i in 0..v.xs.len() {
        assert!(v.maximal[i] + 1e-12 >= v.f[i].abs());
        assert!(v.hardy_littlewood[i] + 1e-12 >= v.f[i].abs());
        assert!(v.square[i] >= 0.0);
    }
}

#[test]
fn views_serialize() {
    let s = serde_json::to_string(&decay(2, 12, 0, false).unwrap()).unwrap();
    assert!(s.contains("\"gamma\""));
}
