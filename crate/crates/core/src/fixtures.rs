//! Named points and automorphisms used by the reproduction commands and tests.

use crate::freegroup::{AutomorphismPair, Word};
use crate::graph::{GraphBuilder, MarkedMetricGraph};
use crate::rational::{int, one, q, Rational};

fn generator_name(i: usize, rank: usize) -> String {
    if rank <= 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{}", i + 1)
    }
}

fn word(rank: usize, signed: &[i32]) -> Word {
    Word::from_letters(rank, signed.iter().copied().map(crate::freegroup::Letter::new)).expect("fixture word")
}

/// Rose with one petal per generator, petal `i` reading `a_i`.
pub fn rose(lengths: &[Rational]) -> MarkedMetricGraph {
    let n = lengths.len();
    let mut b = GraphBuilder::new(n).vertex("v").basepoint("v");
    for (i, l) in lengths.iter().enumerate() {
        let name = generator_name(i, n);
        b = b.edge(&name, "v", "v", l.clone(), Some(Word::generator(n, i + 1))).petal(&name);
    }
    b.build().expect("rose fixture")
}

pub fn unit_rose(rank: usize) -> MarkedMetricGraph {
    rose(&vec![one(); rank])
}

/// Theta graph `X` with edges `A, B, C` of lengths `1/6, 1/3, 1/2`.
pub fn wiest_coulbois_x() -> MarkedMetricGraph {
    GraphBuilder::new(2)
        .vertex("p")
        .vertex("q")
        .edge("A", "p", "q", q(1, 6), Some(word(2, &[1])))
        .edge("B", "p", "q", q(1, 3), Some(word(2, &[])))
        .edge("C", "p", "q", q(1, 2), Some(word(2, &[2])))
        .basepoint("p")
        .petal("A -B")
        .petal("C -B")
        .build()
        .expect("X fixture")
}

/// Theta graph `Y` with edges `E, F, G` of lengths `1/2, 1/3, 1/6`.
pub fn wiest_coulbois_y() -> MarkedMetricGraph {
    GraphBuilder::new(2)
        .vertex("p")
        .vertex("q")
        .edge("E", "p", "q", q(1, 2), Some(word(2, &[1])))
        .edge("F", "p", "q", q(1, 3), Some(word(2, &[])))
        .edge("G", "p", "q", q(1, 6), Some(word(2, &[-2])))
        .basepoint("p")
        .petal("E -F")
        .petal("F -G")
        .build()
        .expect("Y fixture")
}

/// The rose `T_α` on the edge shared by the simplices of `X` and `Y`.
pub fn wiest_coulbois_t(alpha: &Rational) -> MarkedMetricGraph {
    assert!(*alpha > int(0) && *alpha < one(), "α must lie in (0, 1)");
    rose(&[alpha.clone(), one() - alpha])
}

/// `a ↦ a, b ↦ ba`, of linear growth.
pub fn polynomial_automorphism() -> AutomorphismPair {
    AutomorphismPair::new(vec![word(2, &[1]), word(2, &[2, 1])], vec![word(2, &[1]), word(2, &[2, -1])])
}

/// `a ↦ ab, b ↦ a`, of exponential growth.
pub fn exponential_automorphism() -> AutomorphismPair {
    AutomorphismPair::new(vec![word(2, &[1, 2]), word(2, &[1])], vec![word(2, &[2]), word(2, &[-2, 1])])
}

/// Unit rose and its image under the `k`-th power of the polynomial automorphism.
///
/// The folding path between them, with the target kept at its own scale, has
/// an event at each integer time `1..=k`.
pub fn polygrowth_pair(k: u32) -> (MarkedMetricGraph, MarkedMetricGraph) {
    let r = unit_rose(2);
    let rk = r.apply_automorphism(&polynomial_automorphism().power(k as i32)).expect("polygrowth fixture");
    (r, rk)
}

/// Volume-one rose of rank `n` with the first petal shrunk by `1/k`.
pub fn incompleteness_rose(n: usize, k: u64) -> MarkedMetricGraph {
    let mut lengths = vec![one(); n];
    lengths[0] = q(1, k as i64);
    rose(&lengths).normalized()
}

/// `Λ_R(A_k, A_{k+m})` as computed from the construction.
pub fn incompleteness_lambda(n: u64, k: u64, m: u64) -> Rational {
    let (n, k, m) = (n as i64, k as i64, m as i64);
    q((k + m) * (k * n - k + 1), k * ((k + m) * n - k - m + 1))
}

/// The closed form `((k+m)n − 1)k / ((k+m)(kn − 1))` found in the literature.
pub fn incompleteness_lambda_published(n: u64, k: u64, m: u64) -> Rational {
    let (n, k, m) = (n as i64, k as i64, m as i64);
    q(((k + m) * n - 1) * k, (k + m) * (k * n - 1))
}

/// Systole of `A_k`: `1 / (k(n−1) + 1)`.
pub fn incompleteness_systole(n: u64, k: u64) -> Rational {
    q(1, (k * (n - 1) + 1) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::syntax::parse_word;
    use crate::folding::systole_and_thin_test;
    use crate::stretch::lambda_r;

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn ratio(a: &MarkedMetricGraph, b: &MarkedMetricGraph, s: &str) -> Rational {
        b.translation_length(&w(s)).unwrap() / a.translation_length(&w(s)).unwrap()
    }

    #[test]
    fn x_to_y_table() {
        let (x, y) = (wiest_coulbois_x(), wiest_coulbois_y());
        assert_eq!(x.volume(), one());
        assert_eq!(y.volume(), one());
        assert_eq!(ratio(&x, &y, "a"), q(5, 3));
        assert_eq!(ratio(&x, &y, "b"), q(3, 5));
        assert_eq!(ratio(&x, &y, "aB"), int(2));
        let (lam, wit) = lambda_r(&x, &y).unwrap();
        assert_eq!(lam, int(2));
        let mut edges: Vec<&str> = wit.candidate.darts().iter().map(|d| x.edge(d.edge()).name.as_str()).collect();
        edges.sort();
        assert_eq!(edges, ["A", "C"]);
    }

    #[test]
    fn tables_through_t_alpha() {
        let (x, y) = (wiest_coulbois_x(), wiest_coulbois_y());
        for a in [q(3, 8), q(1, 2), q(5, 8), q(3, 4)] {
            let t = wiest_coulbois_t(&a);
            assert_eq!(ratio(&x, &t, "a"), int(2) * &a);
            assert_eq!(ratio(&x, &t, "b"), int(6) * (one() - &a) / int(5));
            assert_eq!(ratio(&x, &t, "aB"), q(3, 2));
            assert_eq!(ratio(&t, &y, "a"), q(5, 6) / &a);
            assert_eq!(ratio(&t, &y, "b"), one() / (int(2) * (one() - &a)));
            assert_eq!(ratio(&t, &y, "ab"), q(2, 3));
            assert_eq!(ratio(&t, &y, "aB"), q(4, 3));
        }
    }

    #[test]
    fn exponential_and_polynomial_pairs_are_inverse() {
        for phi in [exponential_automorphism(), polynomial_automorphism()] {
            phi.validate().unwrap();
        }
    }

    #[test]
    fn incompleteness_closed_form_matches_computation() {
        for k in 1..=6 {
            for m in 1..=3 {
                let (lam, _) = lambda_r(&incompleteness_rose(3, k), &incompleteness_rose(3, k + m)).unwrap();
                assert_eq!(lam, incompleteness_lambda(3, k, m));
            }
            let s = systole_and_thin_test(&incompleteness_rose(3, k), &int(0)).unwrap();
            assert_eq!(s.systole, incompleteness_systole(3, k));
        }
        assert_eq!(incompleteness_lambda_published(3, 1, 1), q(5, 4));
        assert_eq!(incompleteness_lambda(3, 1, 1), q(6, 5));
    }

    #[test]
    fn roses_of_higher_rank_validate() {
        let r = unit_rose(30);
        assert_eq!(r.num_edges(), 30);
        assert_eq!(r.edge(29).name, "x30");
    }
}
