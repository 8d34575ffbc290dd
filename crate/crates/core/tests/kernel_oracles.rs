//! Independent volume oracle cross-checking the triangulation path.

use orbiforms::affine::AffineMap;
use orbiforms::linalg::rvec_dot;
use orbiforms::polytope::{Halfspace, Polytope};
use orbiforms::rat::Rat;
use orbiforms::simplex::triangulate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Recursive-descent volume: divergence theorem over facets, with the facet
/// measures rewritten so every quantity stays rational. Never triangulates.
fn descent_volume(p: &Polytope) -> Rat {
    if p.is_empty() || !p.is_full_dim() {
        return Rat::zero();
    }
    let d = p.ambient_dim;
    if d == 0 {
        return Rat::one();
    }
    if d == 1 {
        let vs = p.vertices();
        let (lo, hi) = (&vs[0][0], &vs[vs.len() - 1][0]);
        return hi - lo;
    }
    let mut acc = Rat::zero();
    for (i, h) in p.halfspaces.iter().enumerate() {
        let (facet, param) = p.facet(i).unwrap();
        if facet.is_empty() || !facet.is_full_dim() {
            continue;
        }
        // |det [B | a]| / ||a||^2 converts parameter volume to Euclidean
        // facet measure divided by the normal length.
        let mut cols: Vec<Vec<Rat>> = (0..param.matrix.cols).map(|j| param.matrix.col(j)).collect();
        cols.push(h.normal.clone());
        let det = orbiforms::linalg::Mat::from_cols(cols).det().abs();
        let nn = rvec_dot(&h.normal, &h.normal);
        // base point z = origin: height factor is just the offset b_i.
        let height = h.offset.clone();
        acc += &(&height * &det) / &nn * descent_volume(&facet);
    }
    &acc / &Rat::from_int(d as i64)
}

fn triangulated_volume(p: &Polytope) -> Rat {
    triangulate(p).unwrap().iter().fold(Rat::zero(), |a, s| a + s.volume())
}

fn random_polytope(rng: &mut ChaCha8Rng, dim: usize) -> Option<Polytope> {
    let bound = Rat::from_int(2);
    let lo: Vec<Rat> = (0..dim).map(|_| -bound.clone()).collect();
    let hi: Vec<Rat> = (0..dim).map(|_| bound.clone()).collect();
    let mut hs = Polytope::box_(&lo, &hi).unwrap().halfspaces.clone();
    for _ in 0..dim + 2 {
        let normal: Vec<Rat> =
            (0..dim).map(|_| Rat::new(rng.gen_range(-3i64..=3), rng.gen_range(1i64..=2))).collect();
        let offset = Rat::new(rng.gen_range(-1i64..=4), rng.gen_range(1i64..=3));
        hs.push(Halfspace::new(normal, offset));
    }
    let p = Polytope::new(dim, hs).ok()?;
    p.is_full_dim().then_some(p)
}

#[test]
fn triangulation_volume_matches_descent_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240811);
    let mut checked = 0;
    for dim in 1..=3 {
        let mut found = 0;
        while found < 4 {
            let Some(p) = random_polytope(&mut rng, dim) else {
                continue;
            };
            assert_eq!(
                triangulated_volume(&p),
                descent_volume(&p),
                "volume mismatch in dim {dim} on {:?}",
                p.halfspaces
            );
            found += 1;
            checked += 1;
        }
    }
    assert!(checked >= 10);
}

#[test]
fn descent_oracle_on_known_shapes() {
    let cube = Polytope::box_(
        &vec![Rat::from_int(0); 3],
        &[Rat::from_int(2), Rat::from_int(3), Rat::from_int(1)],
    )
    .unwrap();
    assert_eq!(descent_volume(&cube), Rat::from_int(6));
    let simplex = Polytope::standard_simplex(3);
    assert_eq!(descent_volume(&simplex), Rat::new(1, 6));
    // Shifted simplex exercises the z = origin height factor with negative
    // offsets.
    let shift = AffineMap::translation(vec![Rat::from_int(-1); 3]);
    let moved = simplex.image_invertible(&shift).unwrap();
    assert_eq!(descent_volume(&moved), Rat::new(1, 6));
    assert_eq!(triangulated_volume(&moved), Rat::new(1, 6));
}
