use hypertree::exact::identities::jensen_closed_sum;
use hypertree::exact::{
    brute_moments, exact_expected_y, exact_second_moment, jensen_tree_sides, num_partitions,
    BruteStatistic, MomentMode,
};
use hypertree::params::{admissible_ladder, validate_params};
use hypertree::{ExactQ, Execution, ModelParams, DEFAULT_BUDGET};
use num_bigint::BigInt;

/// Per-matching statistics of an `r`-regular multigraph built from a perfect
/// matching of `r n` points, computed without the library.
struct GraphStats {
    trees: i128,
    loops: i128,
    doubles: i128,
    triangles: i128,
}

fn matchings(
    points: &mut Vec<usize>,
    cur: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if points.is_empty() {
        out.push(cur.clone());
        return;
    }
    let a = points.remove(0);
    for i in 0..points.len() {
        let b = points.remove(i);
        cur.push((a, b));
        matchings(points, cur, out);
        cur.pop();
        points.insert(i, b);
    }
    points.insert(0, a);
}

/// Determinant of an integer matrix by fraction-free elimination.
fn bareiss(mut m: Vec<Vec<i128>>) -> i128 {
    let k = m.len();
    if k == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for i in 0..k {
        if m[i][i] == 0 {
            match (i + 1..k).find(|&j| m[j][i] != 0) {
                Some(j) => {
                    m.swap(i, j);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for j in i + 1..k {
            for c in i + 1..k {
                m[j][c] = (m[j][c] * m[i][i] - m[j][i] * m[i][c]) / prev;
            }
        }
        prev = m[i][i];
    }
    sign * m[k - 1][k - 1]
}

fn graph_stats(n: usize, edges: &[(usize, usize)]) -> GraphStats {
    let mut lap = vec![vec![0i128; n]; n];
    let mut loops = 0;
    for &(a, b) in edges {
        if a == b {
            loops += 1;
        } else {
            lap[a][a] += 1;
            lap[b][b] += 1;
            lap[a][b] -= 1;
            lap[b][a] -= 1;
        }
    }
    let reduced: Vec<Vec<i128>> = lap[1..].iter().map(|row| row[1..].to_vec()).collect();
    let plain: Vec<(usize, usize)> = edges
        .iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    let mut doubles = 0;
    let mut triangles = 0;
    for i in 0..plain.len() {
        for j in i + 1..plain.len() {
            if plain[i] == plain[j] {
                doubles += 1;
            }
            for k in j + 1..plain.len() {
                let mut vs = [
                    plain[i].0, plain[i].1, plain[j].0, plain[j].1, plain[k].0, plain[k].1,
                ];
                vs.sort();
                let distinct = vs.windows(2).filter(|w| w[0] != w[1]).count() + 1;
                // Three edges on exactly three vertices, each vertex of degree two, with no repeated pair.
                let pairwise_distinct =
                    plain[i] != plain[j] && plain[j] != plain[k] && plain[i] != plain[k];
                if distinct == 3
                    && pairwise_distinct
                    && vs[0] == vs[1]
                    && vs[2] == vs[3]
                    && vs[4] == vs[5]
                {
                    triangles += 1;
                }
            }
        }
    }
    GraphStats {
        trees: bareiss(reduced),
        loops,
        doubles,
        triangles,
    }
}

fn graph_oracle(r: usize, n: usize) -> Vec<GraphStats> {
    let mut points: Vec<usize> = (0..r * n).collect();
    let mut all = Vec::new();
    matchings(&mut points, &mut Vec::new(), &mut all);
    all.iter()
        .map(|m| {
            let edges: Vec<(usize, usize)> = m.iter().map(|&(a, b)| (a / r, b / r)).collect();
            graph_stats(n, &edges)
        })
        .collect()
}

fn mean(stats: &[GraphStats], f: impl Fn(&GraphStats) -> i128) -> ExactQ {
    let total: i128 = stats.iter().map(f).sum();
    ExactQ::new(BigInt::from(total), BigInt::from(stats.len()))
}

#[test]
fn graph_moments_match_kirchhoff_oracle() {
    for (r, n) in [(3, 4), (4, 3), (3, 2), (2, 5)] {
        let p = validate_params(r, 2, n).unwrap();
        let stats = graph_oracle(r, n);
        let exec = Execution::Sequential;
        let brute = |x: &[usize], stat| brute_moments(p, x, stat, DEFAULT_BUDGET, exec).unwrap();
        assert_eq!(
            brute(&[], BruteStatistic::Y),
            mean(&stats, |g| g.trees),
            "E Y at ({r},2,{n})"
        );
        assert_eq!(
            brute(&[], BruteStatistic::YSquared),
            mean(&stats, |g| g.trees * g.trees)
        );
        assert_eq!(
            brute(&[1], BruteStatistic::Y),
            mean(&stats, |g| g.trees * g.loops)
        );
        assert_eq!(
            brute(&[0, 1], BruteStatistic::Y),
            mean(&stats, |g| g.trees * g.doubles)
        );
        assert_eq!(
            brute(&[2], BruteStatistic::Y),
            mean(&stats, |g| g.trees * g.loops * (g.loops - 1))
        );
        assert_eq!(
            brute(&[1, 0, 1], BruteStatistic::Y),
            mean(&stats, |g| g.trees * g.loops * g.triangles),
            "E Y X1 X3 at ({r},2,{n})"
        );
        assert_eq!(exact_expected_y(p).unwrap(), mean(&stats, |g| g.trees));
        let second = exact_second_moment(p, MomentMode::Exact).unwrap();
        assert_eq!(
            second.exact().unwrap(),
            &mean(&stats, |g| g.trees * g.trees),
            "E Y^2 at ({r},2,{n})"
        );
    }
}

#[test]
fn three_uniform_moments_at_three_three_five() {
    // 1 401 400 configurations; values frozen from the enumeration.
    let p = validate_params(3, 3, 5).unwrap();
    let exec = Execution::default();
    let ey = brute_moments(p, &[], BruteStatistic::Y, DEFAULT_BUDGET, exec).unwrap();
    let ey2 = brute_moments(p, &[], BruteStatistic::YSquared, DEFAULT_BUDGET, exec).unwrap();
    assert_eq!(ey, ExactQ::new(1458, 1001));
    assert_eq!(ey2, ExactQ::new(158_922, 35_035));
    assert_eq!(exact_expected_y(p).unwrap(), ey);
    assert_eq!(
        exact_second_moment(p, MomentMode::Exact)
            .unwrap()
            .exact()
            .unwrap(),
        &ey2
    );
}

#[test]
fn moments_times_configuration_count_are_integers() {
    for (r, s) in [(3, 2), (2, 3), (4, 3), (3, 4), (5, 5), (6, 3)] {
        for n in admissible_ladder(r, s, 4) {
            let p = validate_params(r, s, n).unwrap();
            let omega = ExactQ::from(num_partitions(r * n, s).unwrap());
            let ey = exact_expected_y(p).unwrap() * &omega;
            assert!(ey.is_integer(), "({r},{s},{n}): {ey}");
            let ey2 = exact_second_moment(p, MomentMode::Exact)
                .unwrap()
                .exact()
                .cloned()
                .unwrap()
                * &omega;
            assert!(ey2.is_integer(), "({r},{s},{n}): {ey2}");
        }
    }
}

#[test]
fn modes_agree_along_ladders() {
    for (r, s) in [(3, 2), (2, 3), (4, 5)] {
        for n in admissible_ladder(r, s, 5) {
            let p = validate_params(r, s, n).unwrap();
            let exact = exact_second_moment(p, MomentMode::Exact).unwrap();
            let log = exact_second_moment(p, MomentMode::LogFloat).unwrap();
            assert!(
                (exact.ln() - log.ln()).abs() < 1e-10 * exact.ln().abs().max(1.0),
                "({r},{s},{n})"
            );
        }
    }
}

fn jensen(p: ModelParams, b: usize) -> (ExactQ, ExactQ) {
    jensen_tree_sides(p, b, DEFAULT_BUDGET).unwrap()
}

#[test]
fn tree_sum_closed_form() {
    for (r, s, n) in [(2, 3, 5), (3, 2, 4), (3, 3, 9), (4, 4, 13), (2, 5, 9)] {
        let p = validate_params(r, s, n).unwrap();
        for b in (2..=n).filter(|b| (b - 1) % (s - 1) == 0) {
            let (lhs, rhs) = jensen(p, b);
            assert_eq!(lhs, rhs, "({r},{s},{n}) b={b}");
        }
    }
}

// With ratio r - 1 per step instead of (r - 1)(s - 1) the closed form only
// holds for graphs.
#[test]
fn tree_sum_needs_the_uniformity_factor() {
    let p = validate_params(3, 2, 6).unwrap();
    assert_eq!(
        jensen(p, 3).0,
        jensen_closed_sum(p, 3, &ExactQ::int(2)).unwrap()
    );
    for (r, s, n, b) in [(2, 3, 5, 3), (3, 3, 7, 3), (2, 4, 7, 4)] {
        let p = validate_params(r, s, n).unwrap();
        let (lhs, _) = jensen(p, b);
        let short = jensen_closed_sum(p, b, &ExactQ::int(r as i64 - 1)).unwrap();
        assert_ne!(lhs, short, "({r},{s},{n}) b={b}");
    }
}

#[test]
fn forced_composition() {
    // b = n: every component is a single vertex.
    let p = validate_params(3, 3, 5).unwrap();
    let (lhs, rhs) = jensen(p, 5);
    assert_eq!((lhs, rhs), (ExactQ::one(), ExactQ::one()));
}
