//! Worked examples with exact expected output.

use fbcodes::gf2::{canonical_hg, Gf2Vec, HgMatrix, RequestBatch};
use fbcodes::graph::{
    apply_reordering, build_xtype_graph, cycle_partition, good_path_between_pair,
};
use fbcodes::oracle::verify_sets;
use fbcodes::solvers::{b_solution, solve, Strategy};

fn v(s: &str) -> Gf2Vec {
    s.parse().unwrap()
}

#[test]
fn all_e_batch_is_served_by_the_plain_pairs() {
    let g = canonical_hg(3).unwrap();
    let m = RequestBatch::parse_text("001\n001\n001\n001\n", 3).unwrap();
    let sets = vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]];
    verify_sets(&g.columns(), &m, &sets).unwrap();
    let text: Vec<String> = g.columns().iter().map(|c| c.to_string()).collect();
    assert_eq!(
        text,
        ["000", "001", "100", "101", "010", "011", "110", "111"]
    );

    // Dropping the zero column leaves the 7-server code.
    let sol = b_solution(&m).unwrap();
    assert_eq!(sol.n_servers(), 7);
    verify_sets(&sol.servers, &m, &sol.recovery_sets).unwrap();
    assert_eq!(
        sol.recovery_sets,
        vec![vec![0], vec![1, 2], vec![3, 4], vec![5, 6]]
    );
}

#[test]
fn reordering_example() {
    let g = HgMatrix::from_raw_columns(3, (0..8).collect()).unwrap();
    let x = v("101");
    let part = cycle_partition(&build_xtype_graph(&g, x).unwrap());
    assert_eq!(part.dump(), "0 2\n1 3\n");
    let path = good_path_between_pair(&g, x, 0).unwrap();
    assert_eq!(path.nodes, [0, 5, 4, 1]);
    let g2 = apply_reordering(g, &path).unwrap();
    assert_eq!(g2.col(0), v("101"));
    assert_eq!(g2.col(1), v("001"));
    assert_eq!(g2.col(4), v("100"));
    assert_eq!(g2.col(5), v("000"));
    let text: Vec<String> = g2.columns().iter().map(|c| c.to_string()).collect();
    assert_eq!(
        text,
        ["101", "001", "010", "110", "100", "000", "011", "111"]
    );
}

#[test]
fn two_requests_at_s3() {
    let m = RequestBatch::parse_text("110\n011\n", 3).unwrap();
    let sol = solve(&m, None, None).unwrap();
    assert_eq!(sol.strategy, Strategy::Fb23);
    assert_eq!(sol.n_servers(), 7);
    verify_sets(&sol.servers, &m, &sol.recovery_sets).unwrap();
}
