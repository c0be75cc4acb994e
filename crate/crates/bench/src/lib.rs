//! Fixed workloads shared by the criterion benchmarks.

use dirac_core::realforms::{get_form, is_valid_ktype, Group};

/// Valid K-types of `group` with every coefficient below `max`, in lexicographic order.
pub fn ktype_grid(group: Group, max: i64) -> Vec<Vec<i64>> {
    let f = get_form(group);
    let n = f.k_rank();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        if is_valid_ktype(&cur, f) {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            cur[i] += 1;
            if cur[i] < max {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}
