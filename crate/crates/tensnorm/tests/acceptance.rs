//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Some published reference values are contradicted by rigorous bounds
//! computed here (a lower-bound witness, or a verified decomposition that
//! certifies an upper bound). Such a criterion still prints FAIL. The process
//! exits nonzero if any other check fails, or if a contradiction is claimed
//! without its proof holding.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use tensnorm::experiment::{run_experiment, ExperimentConfig, Objective};
use tensnorm_core::nuclear::{nuclear_upper, sym_nuclear_upper, term_budget, AltOptions, AltStatus, NuclearResult};
use tensnorm_core::quantum::{
    horodecki_density, m4_state, ppt_check, qubit_bounds, separability_check, sym_qubit, t_state, w_state,
    werner_density, BoundKind, SeparabilityOptions, SeparabilityStatus,
};
use tensnorm_core::random::{gaussian, random_separable_density, random_state, stream_rng};
use tensnorm_core::spectral::{rank_one_inner, spectral_lower, sym_spectral_lower, SpectralOptions};
use tensnorm_core::sym::sym_from_dense;
use tensnorm_core::{Field, Shape, Tensor, C64};

const RESTARTS: usize = 30;

struct Ctx {
    max_residual: f64,
    histories_monotone: bool,
}

impl Ctx {
    fn nuclear(&mut self, t: &Tensor, field: Field, restarts: usize) -> NuclearResult {
        let r = nuclear_upper(t, field, &AltOptions { restarts, ..AltOptions::default() }).expect("nuclear run");
        self.max_residual = self.max_residual.max(r.decomposition.residual(t).expect("same shape"));
        self.histories_monotone &= monotone(&r.history);
        r
    }
}

fn monotone(h: &[f64]) -> bool {
    h.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12))
}

fn spectral(t: &Tensor, field: Field, restarts: usize) -> f64 {
    spectral_lower(t, field, &SpectralOptions { restarts, ..SpectralOptions::default() }).expect("spectral run").value
}

/// Checks within one criterion; `conflicts` are failures whose published
/// value is ruled out by a bound that was verified here.
#[derive(Default)]
struct Criterion {
    failures: Vec<String>,
    conflicts: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn check(&mut self, ok: bool, what: String) {
        if !ok {
            self.failures.push(what);
        }
    }

    fn near(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        self.check((got - want).abs() <= tol, format!("{label}: {got:.6} vs {want} ± {tol:e}"));
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    /// A published value missed because a proven bound excludes it.
    fn conflict(&mut self, label: &str, got: f64, want: f64, tol: f64, proven: bool, proof: String) {
        if (got - want).abs() <= tol {
            return;
        }
        if proven {
            self.conflicts.push(format!("{label}: {got:.6} vs published {want} ± {tol:e}; {proof}"));
        } else {
            self.failures.push(format!("{label}: {got:.6} vs {want} ± {tol:e} (claimed bound did not hold: {proof})"));
        }
    }
}

fn c1(ctx: &mut Ctx) -> Criterion {
    let mut c = Criterion::default();
    let t0 = Instant::now();
    let w = w_state();
    let s = spectral(&w, Field::Complex, RESTARTS);
    let n = ctx.nuclear(&w, Field::Complex, RESTARTS).value;
    let dt = t0.elapsed();
    c.near("spectral_C", s, 0.6667, 1e-4);
    c.near("nuclear_C", n, 1.5, 1e-3);
    c.near("P_C", n * s, 1.0, 2e-3);
    c.check(dt < Duration::from_secs(30), format!("runtime {dt:?} ≥ 30 s"));
    c.note(format!("spectral {s:.6} nuclear {n:.6} P {:.6} in {dt:.2?}", n * s));
    c
}

fn c2(ctx: &mut Ctx) -> Criterion {
    let mut c = Criterion::default();
    for n in 3..=5 {
        for (tag, lambda) in [("1", C64::new(1.0, 0.0)), ("-i", C64::new(0.0, -1.0))] {
            let t = t_state(n, lambda).expect("valid T");
            let sc = spectral(&t, Field::Complex, RESTARTS);
            let nc = ctx.nuclear(&t, Field::Complex, RESTARTS).value;
            let sr = spectral(&t, Field::Real, RESTARTS);
            let nr = ctx.nuclear(&t, Field::Real, RESTARTS).value;
            let k = format!("T_{{{n},{tag}}}");
            c.near(&format!("{k} spectral_C"), sc, 0.7071, 1e-4);
            c.near(&format!("{k} nuclear_C"), nc, 1.4142, 1e-3);
            c.near(&format!("{k} spectral_R"), sr, 2f64.powf((1.0 - n as f64) / 2.0), 1e-5);
            c.near(&format!("{k} nuclear_R"), nr, 2f64.powf((n as f64 - 1.0) / 2.0), 2e-3);
            c.note(format!("{k}: {sc:.5} {nc:.5} {sr:.6} {nr:.5}"));
        }
    }
    c
}

fn c3(ctx: &mut Ctx) -> Criterion {
    let mut c = Criterion::default();
    let m4 = m4_state();
    let s = spectral(&m4, Field::Complex, RESTARTS);
    let n = ctx.nuclear(&m4, Field::Complex, RESTARTS).value;
    c.near("spectral_C", s, 0.47140, 2e-4);
    c.check((2.1200..=2.1230).contains(&n), format!("nuclear_C {n:.6} outside [2.1200, 2.1230]"));
    c.near("P_C", n * s, 1.0, 2e-3);
    c.note(format!("spectral {s:.6} nuclear {n:.6}"));
    c
}

fn c4(ctx: &mut Ctx) -> Criterion {
    let mut c = Criterion::default();
    let t0 = Instant::now();
    let rho1 = werner_density(1.0).expect("state");
    // Product tensors stay rank one under any grouping of modes, so the top
    // singular value of the (1,3)|(2,4) matricization bounds ‖ρ₁‖_∞ above.
    let grouped = rho1.tensor().permute(&[0, 2, 1, 3]).expect("perm");
    let s1_upper = DMatrix::from_row_slice(4, 4, grouped.entries()).singular_values().max();
    let entangled = [(1.0, 2.0), (0.75, 1.5), (2.0 / 3.0, 1.3333), (0.6, 1.2), (0.55, 1.1), (0.52, 1.04)];
    for (b, printed) in entangled {
        let rho = werner_density(b).expect("state");
        let n = ctx.nuclear(rho.tensor(), Field::Complex, RESTARTS).value;
        // ‖ρ_b‖₁ ≥ ⟨ρ_b, ρ₁⟩ / ‖ρ₁‖_∞ ≥ ⟨ρ_b, ρ₁⟩ / s1_upper
        let witness = rho.tensor().inner(rho1.tensor()).expect("same shape").re / s1_upper;
        let proven = printed + 5e-3 < witness - 1e-9 && n >= witness - 1e-9;
        c.conflict(
            &format!("b={b:.4}"),
            n,
            printed,
            5e-3,
            proven,
            format!("lower bound <rho_b,rho_1>/||rho_1||_inf = (1+3b)/2 = {witness:.4}"),
        );
        let ppt = ppt_check(&rho, &[0]).expect("ppt");
        c.check(!ppt.passed, format!("b={b:.4}: PPT should fail"));
        c.note(format!("b={b:.4} {n:.5} (witness {witness:.4})"));
    }
    for b in [1.0 / 3.0, 0.25, 0.2, 0.0] {
        let rho = werner_density(b).expect("state");
        let n = ctx.nuclear(rho.tensor(), Field::Complex, RESTARTS).value;
        c.near(&format!("b={b:.4}"), n, 1.0, 2e-3);
        let ppt = ppt_check(&rho, &[0]).expect("ppt");
        c.check(ppt.passed, format!("b={b:.4}: PPT should pass (min eig {:e})", ppt.min_eigenvalue));
        c.note(format!("b={b:.4} {n:.5}"));
    }
    let dt = t0.elapsed();
    c.check(dt < Duration::from_secs(300), format!("runtime {dt:?} ≥ 5 min"));
    c.note(format!("{dt:.1?}"));
    c
}

fn c5(ctx: &mut Ctx) -> Criterion {
    let mut c = Criterion::default();
    // the 2x4 system converges slowly; 4 restarts keep the run at desk scale
    let restarts = 4;
    let rho = horodecki_density(1.0).expect("state");
    let r = ctx.nuclear(rho.tensor(), Field::Complex, restarts);
    let residual = r.decomposition.residual(rho.tensor()).expect("same shape");
    let proven = residual <= 1e-12 && r.value < 1.0106 - 5e-3;
    c.conflict(
        "b=1",
        r.value,
        1.0106,
        5e-3,
        proven,
        format!("a decomposition with {} terms and residual {residual:.1e} certifies nuclear <= {:.5}", r.decomposition.terms.len(), r.value),
    );
    let rho0 = horodecki_density(0.0).expect("state");
    let n0 = ctx.nuclear(rho0.tensor(), Field::Complex, restarts).value;
    c.near("b=0", n0, 1.0, 2e-3);
    c.note(format!("b=1 {:.5} b=0 {n0:.5} ({restarts} restarts)", r.value));
    c
}

fn c6(ctx: &mut Ctx) -> Criterion {
    let mut c = Criterion::default();
    // (row, nuclear R, nuclear C, spectral R, spectral C)
    let rows = [
        (1, 1.4149, 1.4141, 0.7071, 0.7071),
        (2, 1.7321, 1.5000, 0.6667, 0.6667),
        (5, 2.0000, 1.4142, 0.5000, 0.7071),
        (6, 2.0000, 1.5398, 0.6495, 0.6495),
        (8, 2.2359, 1.5629, 0.4472, 0.6400),
        (10, 3.4641, 2.1219, 0.4714, 0.4714),
    ];
    let opts = AltOptions { restarts: RESTARTS, ..AltOptions::default() };
    let sopts = SpectralOptions { restarts: RESTARTS, ..SpectralOptions::default() };
    for (row, nr, nc, sr, sc) in rows {
        let t = sym_qubit(row).expect("catalog row");
        let s = sym_from_dense(&t).expect("symmetric");
        let mut line = format!("row {row}:");
        for (field, n_want, s_want) in [(Field::Real, nr, sr), (Field::Complex, nc, sc)] {
            let n = sym_nuclear_upper(&s, field, &opts).expect("nuclear");
            let dense = n.decomposition.to_rank_one().expect("expand");
            ctx.max_residual = ctx.max_residual.max(dense.residual(&t).expect("same shape"));
            ctx.histories_monotone &= monotone(&n.history);
            let sp = sym_spectral_lower(&s, field, &sopts).expect("spectral").value;
            let tag = field.tag();
            c.near(&format!("row {row} nuclear_{tag}"), n.value, n_want, 5e-3);
            if row == 8 && field == Field::Real {
                // x = (2, 1)/√5 gives ⟨𝒯, x⊗⁵⟩ = √5·(16/25)·(1/√5) = 0.64
                let x = vec![C64::new(2.0 / 5f64.sqrt(), 0.0), C64::new(1.0 / 5f64.sqrt(), 0.0)];
                let at_x = rank_one_inner(&t, &vec![x; 5]).norm();
                let proven = (at_x - 0.64).abs() < 1e-12 && s_want + 2e-3 < at_x && sp >= at_x - 1e-9;
                c.conflict(
                    "row 8 spectral_R",
                    sp,
                    s_want,
                    2e-3,
                    proven,
                    format!("the real unit vector (2,1)/sqrt5 attains {at_x:.4}, so spectral_R >= 0.64"),
                );
            } else {
                c.near(&format!("row {row} spectral_{tag}"), sp, s_want, 2e-3);
            }
            line += &format!(" {tag}: {:.4}/{sp:.4}", n.value);
        }
        c.note(line);
    }
    c
}

fn c7(ctx: &mut Ctx) -> Criterion {
    let mut c = Criterion::default();
    let sizes = [(1, 1), (1, 4), (2, 2), (2, 5), (3, 3), (3, 6), (4, 2), (4, 5), (5, 3), (5, 6)];
    let mut worst: f64 = 0.0;
    for (k, field) in [Field::Real, Field::Complex].into_iter().enumerate() {
        for (i, &(r, cols)) in sizes.iter().enumerate() {
            let mut rng = stream_rng(700 + k as u64, i as u64);
            let data: Vec<C64> = (0..r * cols).map(|_| gaussian(&mut rng, field)).collect();
            let t = Tensor::from_dims(&[r, cols], field, data.clone()).expect("shape");
            let m = DMatrix::from_row_slice(r, cols, &data);
            let sv = m.singular_values();
            let nuc: f64 = sv.iter().sum();
            let top = sv.max();
            let n = ctx.nuclear(&t, field, 5).value;
            let s = spectral(&t, field, 5);
            worst = worst.max((n - nuc).abs() / nuc);
            c.check((n - nuc).abs() <= 1e-3 * nuc, format!("{r}x{cols} {field:?}: nuclear {n} vs svd {nuc}"));
            c.check((s - top).abs() <= 1e-8, format!("{r}x{cols} {field:?}: spectral {s} vs svd {top}"));
        }
    }
    for m in 1..=5 {
        let cols = m + 1;
        let data: Vec<f64> =
            (0..m * cols).map(|k| if k / cols == k % cols { 1.0 / (m as f64).sqrt() } else { 0.0 }).collect();
        let t = Tensor::from_real(&[m, cols], &data).expect("shape");
        let n = ctx.nuclear(&t, Field::Real, 3).value;
        c.near(&format!("(1/sqrt{m})[I|0]"), n, (m as f64).sqrt(), 1e-6);
    }
    c.note(format!("20 matrices, worst relative nuclear error {worst:.1e}"));
    c
}

fn c8(ctx: &mut Ctx) -> Criterion {
    let mut c = Criterion::default();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for i in 0..20 {
        let dims = if i < 10 { vec![2, 2] } else { vec![2, 2, 2] };
        let base = Shape::new(dims.clone()).expect("shape");
        let rho = random_separable_density(&base, Field::Complex, &mut stream_rng(800, i)).expect("density");
        let budget = 2 * term_budget(rho.tensor().shape(), Field::Complex).expect("budget");
        let alt = AltOptions { restarts: 1, seed: i, term_budget_override: Some(budget), ..AltOptions::default() };
        let opts = SeparabilityOptions { margin: 2e-3, alt, ..SeparabilityOptions::default() };
        let v = separability_check(&rho, &opts).expect("check");
        ctx.max_residual = ctx.max_residual.max(v.nuclear.decomposition.residual(rho.tensor()).expect("shape"));
        ctx.histories_monotone &= monotone(&v.nuclear.history);
        let n = v.nuclear_value;
        lo = lo.min(n);
        hi = hi.max(n);
        c.check((1.0 - 1e-6..=1.0 + 2e-3).contains(&n), format!("instance {i} {dims:?}: nuclear {n}"));
        c.check(v.ppt_passed() == Some(true), format!("instance {i}: PPT failed"));
        c.check(v.status == SeparabilityStatus::Separable, format!("instance {i}: verdict {:?}", v.status));
    }
    c.note(format!("nuclear in [{lo:.7}, {hi:.7}]"));
    c
}

fn c9(ctx: &mut Ctx) -> Criterion {
    let mut c = Criterion::default();
    let shape = Shape::new(vec![2, 2, 2]).expect("shape");
    let mut min_gap = f64::INFINITY;
    let mut converged = 0;
    for i in 0..50 {
        let t = random_state(&shape, Field::Complex, &mut stream_rng(900, i));
        let r = ctx.nuclear(&t, Field::Complex, 10);
        let s = spectral(&t, Field::Complex, 10);
        if r.status == AltStatus::Converged {
            converged += 1;
            let p = r.value * s;
            min_gap = min_gap.min(p - 1.0);
            c.check(p >= 1.0 - 1e-4, format!("state {i}: nuclear*spectral {p} < hs^2"));
        }
    }
    c.check(converged > 0, "no converged runs".into());
    for i in 0..30 {
        let dims = vec![2 + (i % 2) as usize, 3, 1 + (i % 3) as usize];
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let a = random_state(&Shape::new(dims).expect("shape"), field, &mut stream_rng(901, i));
        let b = random_state(a.shape(), field, &mut stream_rng(902, i));
        let (ra, rb) = (a.realify().expect("realify"), b.realify().expect("realify"));
        let ip = a.inner(&b).expect("shape").re;
        c.check((ra.inner(&rb).expect("shape").re - ip).abs() < 1e-14, format!("realify inner product, case {i}"));
        c.check((ra.hs_norm() - a.hs_norm()).abs() < 1e-14, format!("realify norm, case {i}"));
        for mode in 0..a.order() {
            let back = Tensor::fold(&a.unfold(mode).expect("mode"), mode, a.shape().clone(), field).expect("fold");
            c.check(back == a, format!("unfold/fold mode {mode}, case {i}"));
        }
    }
    let mut pairs = 0;
    let mut shapes: Vec<Vec<usize>> = (1..=8).map(|d| vec![2; d]).collect();
    shapes.extend([vec![3, 5], vec![4, 4], vec![2, 7], vec![3, 3, 3]]);
    for dims in shapes {
        for field in [Field::Real, Field::Complex] {
            let b = qubit_bounds(&Shape::new(dims.clone()).expect("shape"), field);
            if b.alpha.kind == BoundKind::Exact && b.beta.kind == BoundKind::Exact {
                pairs += 1;
                c.check((b.alpha.value * b.beta.value - 1.0).abs() < 1e-12, format!("alpha*beta != 1 for {dims:?}"));
            }
        }
    }
    let residual = ctx.max_residual;
    c.check(residual <= 1e-7, format!("max reconstruction residual {residual:e}"));
    c.check(ctx.histories_monotone, "a nuclear history increased".into());
    c.note(format!(
        "{converged}/50 converged, min P-1 {min_gap:.2e}; max residual over all runs {residual:.1e}; {pairs} exact alpha/beta pairs"
    ));
    c
}

fn c10() -> Criterion {
    let mut c = Criterion::default();
    c.note("timing tables and the printed random states are replaced by harness invariants".into());
    for (field, samples) in [(Field::Real, 50), (Field::Complex, 50)] {
        let cfg = ExperimentConfig::new(vec![2, 2, 2], field, samples, 5, 2024, Objective::MaxNuclear);
        let rep = run_experiment(&cfg).expect("experiment");
        let d = 3.0;
        for r in &rep.rows {
            c.check(r.error.is_none(), format!("sample {} failed: {:?}", r.index, r.error));
            let (Some(n), Some(s), Some(p)) = (r.nuclear, r.spectral, r.product) else { continue };
            c.check(n >= 1.0 - 1e-8, format!("sample {} nuclear {n}", r.index));
            c.check(s <= 1.0 + 1e-10, format!("sample {} spectral {s}", r.index));
            c.check(p >= 1.0 - 1e-4, format!("sample {} P {p}", r.index));
            if field == Field::Real {
                c.check(n <= 2f64.powf((d - 1.0) / 2.0) + 1e-3, format!("sample {} real nuclear {n}", r.index));
                c.check(s >= 2f64.powf((1.0 - d) / 2.0) - 1e-6, format!("sample {} real spectral {s}", r.index));
            }
        }
        let replay = run_experiment(&cfg).expect("experiment");
        c.check(replay.rows == rep.rows, format!("{field:?}: replay differs"));
        let best = rep.best_values.as_ref().map(|b| b.nuclear).unwrap_or(f64::NAN);
        c.note(format!("{field:?}: {samples} samples, best nuclear {best:.4}, replay identical"));
    }
    c
}

fn main() {
    let start = Instant::now();
    let mut ctx = Ctx { max_residual: 0.0, histories_monotone: true };
    let titles = [
        "W state",
        "T_{n,lambda} family",
        "M4",
        "Werner table",
        "2x4 bound-entangled table",
        "symmetric qubit tables",
        "matrix oracle",
        "separable random densities",
        "property suites",
        "documented substitutions",
    ];
    let mut unexpected = 0;
    let mut known = 0;
    for (i, title) in titles.iter().enumerate() {
        let t0 = Instant::now();
        let c = match i + 1 {
            1 => c1(&mut ctx),
            2 => c2(&mut ctx),
            3 => c3(&mut ctx),
            4 => c4(&mut ctx),
            5 => c5(&mut ctx),
            6 => c6(&mut ctx),
            7 => c7(&mut ctx),
            8 => c8(&mut ctx),
            9 => c9(&mut ctx),
            _ => c10(),
        };
        let pass = c.failures.is_empty() && c.conflicts.is_empty();
        println!("criterion {:>2}: {} {title} ({:.1?})", i + 1, if pass { "PASS" } else { "FAIL" }, t0.elapsed());
        for n in &c.notes {
            println!("    {n}");
        }
        for f in &c.failures {
            println!("    failed: {f}");
        }
        for f in &c.conflicts {
            println!("    published value excluded: {f}");
        }
        if !c.failures.is_empty() {
            unexpected += 1;
        } else if !c.conflicts.is_empty() {
            known += 1;
        }
    }
    println!(
        "acceptance: {} pass, {known} fail against published values excluded by verified bounds, {unexpected} unexpected failure(s); {:.1?}",
        10 - known - unexpected,
        start.elapsed()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
