mod common;

use common::{gradient_check_archs, gradient_rel_error};

#[test]
fn analytic_gradients_match_central_differences() {
    let archs = gradient_check_archs();
    assert!(archs.len() >= 20);
    for (i, arch) in archs.iter().enumerate() {
        for seed in [i as u64, 1000 + i as u64] {
            let err = gradient_rel_error(arch, seed, 3, 1e-5);
            assert!(err < 1e-4, "arch {i} ({arch:?}) seed {seed}: relative error {err:e}");
        }
    }
}
