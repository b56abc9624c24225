//! The c_mn table against the series-division oracle in `common`.

mod common;

use common::{oracle, q};
use fock_whittaker::vertex::cmn_table;

#[test]
fn frozen_low_order_values() {
    let o = oracle(3);
    assert_eq!(o[0][0], q(0, 1));
    assert_eq!(o[1][0], q(-1, 4));
    assert_eq!(o[1][1], q(1, 16));
    assert_eq!(o[2][0], q(3, 32));
    assert_eq!(o[2][1], q(-1, 32));
}

#[test]
fn table_matches_oracle() {
    for order in [1, 4, 6, 8] {
        let table = cmn_table(order);
        let o = oracle(order);
        for m in 0..=order {
            for n in 0..=order {
                assert_eq!(*table.get(m, n), o[m][n], "c_{m}{n} at order {order}");
            }
        }
    }
}

#[test]
fn table_is_symmetric() {
    let t = cmn_table(6);
    for m in 0..=6 {
        for n in 0..=6 {
            assert_eq!(t.get(m, n), t.get(n, m));
        }
    }
}
