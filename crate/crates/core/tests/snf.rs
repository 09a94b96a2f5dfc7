mod common;

use catxi::algebra::rational::rat;
use catxi::algebra::snf::smith_normal_form;
use catxi::algebra::{Matrix, QPoly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_smith_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for index in 0..200 {
        let a = common::random_matrix(&mut rng, index);
        common::check_smith(&a, &mut rng, 5).unwrap_or_else(|e| panic!("matrix {index}: {e}"));
    }
}

#[test]
fn rank_drops_exactly_at_roots() {
    // Row reduction gives diag(t - 1, (t - 1)(t - 2)).
    let a = Matrix::from_rows(vec![
        vec![QPoly::from_i64(&[-1, 1]), QPoly::from_i64(&[-1, 1])],
        vec![QPoly::from_i64(&[-1, 1]), QPoly::from_i64(&[1, -2, 1])],
    ]);
    let s = smith_normal_form(&a);
    assert_eq!(
        s.diagonal(),
        vec![QPoly::from_i64(&[-1, 1]), QPoly::from_i64(&[2, -3, 1])]
    );
    for (x, rank) in [
        (rat(1, 1), 0),
        (rat(2, 1), 1),
        (rat(3, 1), 2),
        (rat(1, 2), 2),
    ] {
        let rows = (0..2)
            .map(|i| (0..2).map(|j| a.get(i, j).eval(&x)).collect())
            .collect();
        assert_eq!(common::rank_q(rows), rank, "at {x}");
    }
}
