//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toricfano::families::{
    d_orthogonal_to_eval, hirzebruch, so4n, so4n_model_to_classical, so4n_standard, BundleInstance,
};
use toricfano::linalg::dot;
use toricfano::numcheck::{fixed_point_delta, run_oracle};
use toricfano::rational::{frac, int};
use toricfano::rootsys::permute;
use toricfano::{
    fano_check, pullback_point, Fan, FlagManifold, Painting, QMatrix, Rational, RootSystem,
    SimpleType, TauMap, VectorH,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(label: &str, start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    if took >= limit {
        return Err(format!("{label} took {took:?}, limit {limit:?}"));
    }
    Ok(took)
}

fn hirzebruch_family() -> Outcome {
    let start = Instant::now();
    for n in 0..=6 {
        let v = hirzebruch(int(n)).check().map_err(|e| e.to_string())?;
        ensure!(v.is_fano == (n < 2), "n = {n}: is_fano = {}", v.is_fano);
    }
    let v = hirzebruch(int(2)).check().map_err(|e| e.to_string())?;
    let min = v.min_margin().cloned().ok_or("no margins for n = 2")?;
    ensure!(min == int(0), "n = 2: minimum margin {min}, expected 0");
    let took = within("Hirzebruch family", start, Duration::from_secs(1))?;
    Ok(format!(
        "n=0,1 Fano; n=2..6 not; n=2 min margin 0 ({took:.2?})"
    ))
}

fn classical_label(n: usize, root: &[i64]) -> Vec<i64> {
    let coeffs: Vec<Rational> = root.iter().map(|&c| int(c)).collect();
    // Orthonormal coordinates of the root via its evaluation on h = e_k.
    let r = 2 * n;
    let mut out = vec![0i64; r];
    for k in 0..r {
        let mut t = vec![int(0); r];
        t[k] = int(1);
        let h = d_orthogonal_to_eval(&t);
        let value = dot(&coeffs, h.coords());
        out[so4n_model_to_classical(n, k)] = value.to_integer().try_into().unwrap();
    }
    out
}

fn so4n_family() -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in 1..=8usize {
        let start = Instant::now();
        let inst = so4n_standard(n);
        let v = inst.check().map_err(|e| e.to_string())?;
        let took = within(&format!("n = {n}"), start, Duration::from_secs(1))?;
        slowest = slowest.max(took);
        ensure!(v.is_fano == (n >= 5), "n = {n}: is_fano = {}", v.is_fano);
        if n == 4 {
            // Vertex 0 is Q_o. Every ω_i + ω_j with i < j ≤ n has margin exactly 0 there.
            let mut zero_roots = 0;
            for m in v.margins.iter().filter(|m| m.vertex == 0) {
                let label = classical_label(n, inst.flag.root(m.root));
                let first_block = label[..n].iter().filter(|&&x| x == 1).count() == 2
                    && label[n..].iter().all(|&x| x == 0)
                    && label.iter().all(|&x| x >= 0);
                if first_block {
                    ensure!(
                        m.value == int(0),
                        "n = 4: margin {} on {label:?} at Q_o",
                        m.value
                    );
                    zero_roots += 1;
                }
            }
            ensure!(
                zero_roots == n * (n - 1) / 2,
                "n = 4: found {zero_roots} roots ω_i+ω_j at Q_o"
            );
        }
    }
    Ok(format!(
        "n=1..4 not Fano (n=4 zero on ω_i+ω_j at Q_o); n=5..8 Fano; slowest {slowest:.2?}"
    ))
}

fn projective_polytopes() -> Outcome {
    for m in 1..=4usize {
        let fan = Fan::projective_space(m).map_err(|e| e.to_string())?;
        let poly = fan.canonical_polytope().map_err(|e| e.to_string())?;
        ensure!(poly.len() == m + 1, "m = {m}: {} vertices", poly.len());
        let q_o = vec![int(-1); m];
        let mut expected = vec![q_o.clone()];
        for r in 0..m {
            let mut q = q_o.clone();
            q[r] += int(m as i64 + 1);
            expected.push(q);
        }
        for (idx, (vertex, want)) in poly.vertices().iter().zip(&expected).enumerate() {
            ensure!(
                &vertex.coords == want,
                "m = {m}: vertex {idx} is {:?}",
                vertex.coords
            );
            let fixed = fixed_point_delta(m, idx).map_err(|e| e.to_string())?;
            ensure!(
                &fixed == want,
                "m = {m}: fixed-point value at {idx} is {fixed:?}"
            );
        }
    }
    Ok("Q_r = Q_o + (m+1)e_r for m=1..4, vertex method and fixed-point trace agree".into())
}

fn h_v_chamber() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    let types = (1..=5)
        .map(|r| format!("A{r}"))
        .chain((2..=5).map(|r| format!("B{r}")))
        .chain((2..=5).map(|r| format!("C{r}")))
        .chain((3..=5).map(|r| format!("D{r}")));
    for name in types {
        let ty: SimpleType = name.parse().map_err(|e| format!("{name}: {e}"))?;
        let rs = RootSystem::build(&[ty]).map_err(|e| e.to_string())?;
        let r = rs.rank();
        for mask in 1u32..(1 << r) {
            let crossed: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            let flag = FlagManifold::build(rs.clone(), Painting::new(crossed.clone()))
                .map_err(|e| e.to_string())?;
            for (root, value) in flag
                .chamber_margins(flag.h_v())
                .map_err(|e| e.to_string())?
            {
                ensure!(
                    value > int(0),
                    "{name} crossed {crossed:?}: margin {value} on {:?}",
                    flag.root(root)
                );
            }
            count += 1;
        }
    }
    let took = within("painting sweep", start, Duration::from_secs(30))?;
    Ok(format!(
        "{count} paintings, all h_V margins positive ({took:.2?})"
    ))
}

fn polytope_duality() -> Outcome {
    for (name, fan) in common::fano_library() {
        ensure!(
            fan.is_fano().map_err(|e| e.to_string())?,
            "{name} is not Fano"
        );
        let list = common::vertex_list(&fan);
        let hull = common::halfspace_vertices(&fan);
        ensure!(
            list == hull,
            "{name}: vertex method {list:?} vs halfspaces {hull:?}"
        );
    }
    let f2 = Fan::hirzebruch(2);
    ensure!(
        !f2.is_fano().map_err(|e| e.to_string())?,
        "F_2 reported Fano"
    );
    let list = common::vertex_list(&f2);
    let hull = common::halfspace_vertices(&f2);
    ensure!(list != hull, "F_2: the two methods agree");
    Ok(format!(
        "6 Fano fans agree exactly; F_2 gives {} cone vertices vs {} halfspace vertices, not Fano",
        list.len(),
        hull.len()
    ))
}

fn numerical_oracle() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (m, quadrature, bound) in [(1usize, 10_000usize, 1e-4), (2, 100_000, 1e-3)] {
        let rep = run_oracle(m, 200, quadrature, 7).map_err(|e| e.to_string())?;
        ensure!(
            rep.fixed_point_error.total_cmp(&1e-8).is_lt(),
            "CP{m}: fixed-point error {:e}",
            rep.fixed_point_error
        );
        ensure!(
            rep.exact_vertices_match,
            "CP{m}: exact fixed-point values differ from vertices"
        );
        ensure!(
            rep.halfspace_violation.total_cmp(&1e-6).is_le(),
            "CP{m}: halfspace violation {:e}",
            rep.halfspace_violation
        );
        ensure!(
            rep.barycenter_norm.total_cmp(&bound).is_lt(),
            "CP{m}: barycenter norm {:e}",
            rep.barycenter_norm
        );
        parts.push(format!(
            "CP{m}: fixed {:.1e}, slack {:.1e}, barycenter {:.1e}",
            rep.fixed_point_error, rep.halfspace_violation, rep.barycenter_norm
        ));
    }
    let took = within("numerical oracle", start, Duration::from_secs(10))?;
    Ok(format!("{} ({took:.2?})", parts.join("; ")))
}

fn random_invertible(rng: &mut ChaCha8Rng) -> QMatrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..2)
            .map(|_| {
                (0..2)
                    .map(|_| frac(rng.random_range(-9..=9), rng.random_range(1..=7)))
                    .collect()
            })
            .collect();
        let s = QMatrix::from_rows(2, rows);
        if s.rank() == 2 {
            return s;
        }
    }
}

fn is_prefix(flags: &[bool]) -> bool {
    flags.windows(2).all(|w| w[0] || !w[1])
}

fn invariance() -> Outcome {
    let start = Instant::now();

    let so20 = so4n_standard(5);
    let base = so20.check().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for trial in 0..100 {
        let s = random_invertible(&mut rng);
        let tau = so20
            .tau
            .change_basis(&so20.flag, &s)
            .map_err(|e| e.to_string())?;
        let after = fano_check(&so20.flag, &so20.fan, &tau).map_err(|e| e.to_string())?;
        ensure!(after == base, "basis change {trial} altered the verdict");
    }

    let hirz: Vec<bool> = (0..=10)
        .map(|k| hirzebruch(int(k)).check().map(|v| v.is_fano))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure!(is_prefix(&hirz), "Hirzebruch scales: {hirz:?}");
    for n in 1..=8usize {
        let flags: Vec<bool> = (0..=10)
            .map(|k| so4n(n, int(k)).check().map(|v| v.is_fano))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure!(is_prefix(&flags), "SO({}) scales: {flags:?}", 4 * n);
    }

    let mut swaps = 0;
    for n in 2..=5usize {
        let inst = so4n_standard(n);
        let r = 2 * n;
        let mut perm: Vec<usize> = (0..r).collect();
        perm.swap(r - 2, r - 1);
        let swapped = common::permuted_instance(&inst, &perm);
        let a = inst.check().map_err(|e| e.to_string())?;
        let b = swapped.check().map_err(|e| e.to_string())?;
        ensure!(a.is_fano == b.is_fano, "D{r} swap changed the verdict");
        ensure!(
            common::sorted_values(&a) == common::sorted_values(&b),
            "D{r} swap changed the margins"
        );
        // Pulled-back points correspond under the swap.
        for q in a.polytope.points() {
            let h = pullback_point(&inst.flag, &inst.tau, q).map_err(|e| e.to_string())?;
            let h2 = pullback_point(&swapped.flag, &swapped.tau, q).map_err(|e| e.to_string())?;
            ensure!(
                VectorH(permute(h.coords(), &perm)) == h2,
                "D{r}: swapped pullback differs"
            );
        }
        swaps += 1;
    }
    // The swap also exchanges the two spinor-node flags of D5.
    let rs = RootSystem::build(&["D5".parse().map_err(|e| format!("{e}"))?])
        .map_err(|e| e.to_string())?;
    let flag = FlagManifold::build(rs, Painting::new([3])).map_err(|e| e.to_string())?;
    let tau = TauMap::new(&flag, QMatrix::identity(1), None).map_err(|e| e.to_string())?;
    let inst = BundleInstance {
        flag,
        fan: Fan::projective_space(1).unwrap(),
        tau,
    };
    let swapped = common::permuted_instance(&inst, &[0, 1, 2, 4, 3]);
    let a = inst.check().map_err(|e| e.to_string())?;
    let b = swapped.check().map_err(|e| e.to_string())?;
    ensure!(
        common::sorted_values(&a) == common::sorted_values(&b),
        "D5 spinor swap changed the margins"
    );
    ensure!(a.is_fano == b.is_fano, "D5 spinor swap changed the verdict");

    let took = within("invariance", start, Duration::from_secs(30))?;
    Ok(format!(
        "100 basis changes, scale prefixes k=0..10, {} node swaps ({took:.2?})",
        swaps + 1
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("hirzebruch family", hirzebruch_family),
        ("SO(4n)/U(n)xU(n) family", so4n_family),
        ("CP^m canonical polytope", projective_polytopes),
        ("h_V chamber membership", h_v_chamber),
        ("polytope duality", polytope_duality),
        ("numerical oracle", numerical_oracle),
        ("invariance properties", invariance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
