//! Seeded random verification of the crate's closed forms against the
//! brute-force matrix routes, plus the fixed operator-algebra checks.
//!
//! Each property reports the maximum deviation observed over the draws and
//! passes if that stays within its tolerance. Results are deterministic for
//! a given seed. An injectable fault flips one sign in the ⟨Jy²⟩ oracle
//! polynomial so the harness itself can be shown to catch a planted bug.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::frame::{self, mean_spin};
use crate::linalg::{eig_hermitian, kron, partial_trace, C64, Subsystem};
use crate::metrics::{
    composite_uncertainties_closed, composite_uncertainties_numeric, entropy_from_djy,
    entropy_from_xi_r, entropy_from_xi_s, entropy_report, mean_spin_norm_closed,
    squeezing_report, subsystem_uncertainties_numeric, von_neumann_entropy,
};
use crate::spin::{collective_ops, two_atom_ops, EnsembleSpec};
use crate::state::BipartiteParams;
use crate::sweep::{run_sweep, BasisConstants, SweepConfig};

/// Deliberate defect planted into one oracle, for self-testing the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InjectedFault {
    None,
    /// Use ½(1 - 2AD - 2BC) instead of ½(1 - 2AD + 2BC) as the ⟨Jy²⟩ oracle.
    NegateDjyCrossTerm,
}

/// Outcome of one verified property.
#[derive(Clone, Debug)]
pub struct PropertyResult {
    pub name: &'static str,
    pub draws: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl PropertyResult {
    fn evaluate(name: &'static str, draws: usize, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            name,
            draws,
            max_deviation,
            tolerance,
            pass: max_deviation <= tolerance,
        }
    }
}

/// Full verification summary: one line per property.
#[derive(Clone, Debug)]
pub struct VerifySummary {
    pub seed: u64,
    pub requested_draws: usize,
    pub results: Vec<PropertyResult>,
}

impl VerifySummary {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

/// Random valid parameter set with a non-degenerate composite mean spin.
///
/// The Schmidt pair comes from an angle in (0.01, π/2 - 0.01) so both c1 and
/// c2 stay strictly inside (0, 1); the basis pairs come from full-circle
/// angles, so signed constants are exercised. Draws with |⟨J⟩| ≤ 1e-6 are
/// rejected and redrawn.
fn draw_params(rng: &mut ChaCha8Rng) -> BipartiteParams {
    loop {
        let gamma: f64 = rng.gen_range(0.01..(std::f64::consts::FRAC_PI_2 - 0.01));
        let alpha: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let beta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let p = BipartiteParams::new(
            gamma.cos(),
            gamma.sin(),
            alpha.cos(),
            alpha.sin(),
            beta.cos(),
            beta.sin(),
        )
        .expect("angle parametrization is exactly normalized");
        if mean_spin_norm_closed(&p) > 1e-6 {
            return p;
        }
    }
}

struct Worst(f64);

impl Worst {
    fn new() -> Self {
        Self(0.0)
    }

    fn record(&mut self, deviation: f64) {
        if deviation.is_nan() {
            self.0 = f64::INFINITY;
        } else {
            self.0 = self.0.max(deviation.abs());
        }
    }
}

/// Run the verification suite with the default (fault-free) oracles.
pub fn verify(seed: u64, draws: usize) -> VerifySummary {
    verify_with(seed, draws, InjectedFault::None)
}

pub fn verify_with(seed: u64, draws: usize, fault: InjectedFault) -> VerifySummary {
    let draws = draws.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<BipartiteParams> = (0..draws).map(|_| draw_params(&mut rng)).collect();
    let ops = two_atom_ops();

    let mut closed_vs_numeric = Worst::new();
    let mut moment_jx2 = Worst::new();
    let mut moment_jz2 = Worst::new();
    let mut moment_cross = Worst::new();
    let mut moment_jy2 = Worst::new();
    let mut mean_closed = Worst::new();
    let mut rotated_means = Worst::new();
    let mut rotation_j2 = Worst::new();
    let mut subsystem_flat = Worst::new();
    let mut schmidt_symmetry = Worst::new();
    let mut schmidt_squares = Worst::new();
    let mut reduced_vs_trace = Worst::new();
    let mut trace_preserved = Worst::new();
    let mut product_factor = Worst::new();
    let mut pure_entropy = Worst::new();
    let mut round_trip_djy = Worst::new();
    let mut round_trip_xi_s = Worst::new();
    let mut round_trip_xi_r = Worst::new();
    let mut branch_swap = Worst::new();
    let mut robertson = Worst::new();
    let mut threshold_mismatches = 0usize;
    let mut squeezing_recompute = Worst::new();
    let mut eig_trace = Worst::new();
    let mut subsystem_used = 0usize;

    for (idx, p) in params.iter().enumerate() {
        let psi = p.state_vector();
        let amps = p.amplitudes();
        let (a, b, c, d) = (amps.a, amps.b, amps.c, amps.d);

        // Closed forms vs the brute-force rotated-frame route.
        let closed = composite_uncertainties_closed(p);
        let numeric = composite_uncertainties_numeric(p)
            .expect("draws are filtered to non-degenerate frames");
        closed_vs_numeric.record(closed.djx - numeric.djx);
        closed_vs_numeric.record(closed.djy - numeric.djy);

        // Second-moment polynomials in the amplitudes.
        let jx2 = psi.expectation(&ops.jx.matmul(&ops.jx));
        moment_jx2.record(jx2 - 0.5 * (1.0 + 2.0 * a * d + 2.0 * b * c));
        let jz2 = psi.expectation(&ops.jz.matmul(&ops.jz));
        moment_jz2.record(jz2 - (a * a + d * d));
        let cross = psi.expectation(&ops.jx.anticommutator(&ops.jz));
        moment_cross.record(cross - (a - d) * (b + c));
        let jy2 = psi.expectation(&ops.jy.matmul(&ops.jy));
        let jy2_oracle = match fault {
            InjectedFault::None => 0.5 * (1.0 - 2.0 * a * d + 2.0 * b * c),
            InjectedFault::NegateDjyCrossTerm => 0.5 * (1.0 - 2.0 * a * d - 2.0 * b * c),
        };
        moment_jy2.record(jy2 - jy2_oracle);

        // First moments and the aligning rotation.
        let frame = mean_spin(&psi, &ops).expect("in-plane by construction");
        mean_closed.record(frame.jx_mean - (a + d) * (b + c));
        mean_closed.record(frame.jz_mean - (a * a - d * d));
        let norm_sq_closed = ((a + d) * (b + c)).powi(2) + (a * a - d * d).powi(2);
        mean_closed.record(frame.norm * frame.norm - norm_sq_closed);

        let rotated = frame::rotated_ops(&frame, &ops).expect("non-degenerate");
        rotated_means.record(psi.expectation(&rotated.jx));
        rotated_means.record(psi.expectation(&rotated.jy));
        rotated_means.record(psi.expectation(&rotated.jz) - frame.norm);
        if idx % 97 == 0 {
            // Entrywise operator identity; costly, so spot-checked.
            rotation_j2.record(rotated.j_squared().max_abs_diff(&ops.j_squared()));
        }

        // Subsystem flatness through the reduced-density route.
        for which in [Subsystem::A, Subsystem::B] {
            if let Ok(u) = subsystem_uncertainties_numeric(p, which) {
                subsystem_flat.record(u.djx - 0.5);
                subsystem_flat.record(u.djy - 0.5);
                subsystem_used += 1;
            }
        }

        // Schmidt structure of the reduced states.
        let rho_a = p.reduced_density(Subsystem::A);
        let rho_b = p.reduced_density(Subsystem::B);
        let eigs_a = eig_hermitian(&rho_a).expect("reduced density is Hermitian");
        let eigs_b = eig_hermitian(&rho_b).expect("reduced density is Hermitian");
        schmidt_symmetry.record(eigs_a[0] - eigs_b[0]);
        schmidt_symmetry.record(eigs_a[1] - eigs_b[1]);
        let lo = p.c1().powi(2).min(p.c2().powi(2));
        let hi = p.c1().powi(2).max(p.c2().powi(2));
        schmidt_squares.record(eigs_a[0] - lo);
        schmidt_squares.record(eigs_a[1] - hi);
        eig_trace.record(eigs_a.iter().sum::<f64>() - rho_a.trace().re);

        let rho_full = psi.projector();
        for (keep, closed_rho) in [(Subsystem::A, &rho_a), (Subsystem::B, &rho_b)] {
            let traced = partial_trace(&rho_full, keep).expect("valid density matrix");
            reduced_vs_trace.record(traced.max_abs_diff(closed_rho));
            trace_preserved.record((traced.trace() - rho_full.trace()).norm());
        }

        // Product factorization: tracing atom b out of ρ_a ⊗ ρ_b returns ρ_a.
        let product = kron(&rho_a, &rho_b);
        let back = partial_trace(&product, Subsystem::A).expect("product of densities");
        product_factor.record(back.max_abs_diff(&rho_a));

        // Entropies.
        let entropies = entropy_report(p).expect("pure state is a valid density");
        pure_entropy.record(entropies.s_composite);
        pure_entropy.record(entropies.s_a - entropies.s_b);
        // subsystem entropy must sit in [0, 1] bits
        pure_entropy.record((-entropies.s_a).max(entropies.s_a - 1.0).max(0.0));

        let inversion = entropy_from_djy(closed.djy).expect("ΔJy′ ∈ [0,1]");
        let s_direct = von_neumann_entropy(&rho_a).expect("valid density");
        round_trip_djy.record(inversion.entropy - s_direct);
        let s0 = schmidt_entropy(inversion.roots[0]);
        let s1 = schmidt_entropy(inversion.roots[1]);
        branch_swap.record(s0 - s1);

        let squeezing = squeezing_report(p);
        round_trip_xi_s
            .record(entropy_from_xi_s(squeezing.xi_s_y, 1.0).expect("in domain") - s_direct);
        if !squeezing.divergent {
            let norm = mean_spin_norm_closed(p);
            round_trip_xi_r
                .record(entropy_from_xi_r(squeezing.xi_r_y, norm).expect("in domain") - s_direct);
        }

        // Robertson bound in the rotated frame: ΔJx′·ΔJy′ ≥ ½⟨Jz′⟩.
        robertson.record((0.5 * frame.norm - closed.djx * closed.djy).max(0.0));

        // ΔJy′ > ½ exactly when c1·c2 < ¼.
        if (closed.djy > 0.5) != (p.c1() * p.c2() < 0.25) {
            threshold_mismatches += 1;
        }

        // Squeezing parameters are fixed rescalings of the uncertainties.
        let sqrt2 = std::f64::consts::SQRT_2;
        squeezing_recompute.record(squeezing.xi_s_x - sqrt2 * closed.djx);
        squeezing_recompute.record(squeezing.xi_s_y - sqrt2 * closed.djy);
        if !squeezing.divergent {
            let norm = mean_spin_norm_closed(p);
            squeezing_recompute.record(squeezing.xi_r_x * norm - sqrt2 * closed.djx);
            squeezing_recompute.record(squeezing.xi_r_y * norm - sqrt2 * closed.djy);
        }
    }

    // Fixed (draw-independent) checks.
    let mut commutators = Worst::new();
    let mut j2_commutes = Worst::new();
    for n in 1..=6 {
        let set = collective_ops(EnsembleSpec::new(n).expect("n ≤ MAX_ATOMS"));
        let i = C64::new(0.0, 1.0);
        let cycles = [
            (&set.jx, &set.jy, &set.jz),
            (&set.jy, &set.jz, &set.jx),
            (&set.jz, &set.jx, &set.jy),
        ];
        for (x, y, z) in cycles {
            commutators.record(x.commutator(y).sub(&z.scale(i)).max_abs_entry());
        }
        let j2 = set.j_squared();
        for component in [&set.jx, &set.jy, &set.jz] {
            j2_commutes.record(j2.commutator(component).max_abs_entry());
        }
    }

    let monotone = entropy_squeezing_monotone_defect();
    let sweep_determinism = sweep_determinism_defect();

    let results = vec![
        PropertyResult::evaluate("closed_vs_numeric_uncertainties", draws, closed_vs_numeric.0, 1e-10),
        PropertyResult::evaluate("moment_identity_jx_squared", draws, moment_jx2.0, 1e-12),
        PropertyResult::evaluate("moment_identity_jz_squared", draws, moment_jz2.0, 1e-12),
        PropertyResult::evaluate("moment_identity_xz_anticommutator", draws, moment_cross.0, 1e-12),
        PropertyResult::evaluate("moment_identity_jy_squared", draws, moment_jy2.0, 1e-12),
        PropertyResult::evaluate("mean_spin_closed_forms", draws, mean_closed.0, 1e-12),
        PropertyResult::evaluate("rotated_first_moments_vanish", draws, rotated_means.0, 1e-12),
        PropertyResult::evaluate("rotation_preserves_total_j_squared", draws.div_ceil(97), rotation_j2.0, 1e-13),
        PropertyResult::evaluate("subsystem_uncertainties_flat", subsystem_used, subsystem_flat.0, 1e-10),
        PropertyResult::evaluate("schmidt_eigenvalue_symmetry", draws, schmidt_symmetry.0, 1e-10),
        PropertyResult::evaluate("reduced_eigenvalues_are_schmidt_squares", draws, schmidt_squares.0, 1e-10),
        PropertyResult::evaluate("reduced_density_matches_partial_trace", draws, reduced_vs_trace.0, 1e-12),
        PropertyResult::evaluate("partial_trace_preserves_trace", draws, trace_preserved.0, 1e-12),
        PropertyResult::evaluate("partial_trace_of_product_factors", draws, product_factor.0, 1e-12),
        PropertyResult::evaluate("eigenvalues_sum_to_trace", draws, eig_trace.0, 1e-12),
        PropertyResult::evaluate("pure_state_entropy_zero_and_symmetric", draws, pure_entropy.0, 1e-10),
        PropertyResult::evaluate("entropy_round_trip_djy", draws, round_trip_djy.0, 1e-10),
        PropertyResult::evaluate("entropy_round_trip_xi_s", draws, round_trip_xi_s.0, 1e-10),
        PropertyResult::evaluate("entropy_round_trip_xi_r", draws, round_trip_xi_r.0, 1e-10),
        PropertyResult::evaluate("entropy_branch_invariance", draws, branch_swap.0, 1e-14),
        PropertyResult::evaluate("robertson_bound", draws, robertson.0, 1e-10),
        PropertyResult::evaluate("uncertainty_threshold_is_quarter_c1c2", draws, threshold_mismatches as f64, 0.0),
        PropertyResult::evaluate("squeezing_parameter_recomputation", draws, squeezing_recompute.0, 1e-12),
        PropertyResult::evaluate("collective_commutators_n1_to_n6", 6, commutators.0, 1e-13),
        PropertyResult::evaluate("j_squared_commutes_n1_to_n6", 6, j2_commutes.0, 1e-13),
        PropertyResult::evaluate("entropy_vs_squeezing_monotone", 141, monotone, 1e-12),
        PropertyResult::evaluate("sweep_thread_count_determinism", 2, sweep_determinism, 0.0),
    ];

    VerifySummary {
        seed,
        requested_draws: draws,
        results,
    }
}

fn schmidt_entropy(root: (f64, f64)) -> f64 {
    let mut s = 0.0;
    for lambda in [root.0, root.1] {
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    s
}

/// On c1 ∈ (0, 1/√2], entropy rises while ξ_sy falls: check both sequences
/// are monotone along the grid, returning the worst violation.
fn entropy_squeezing_monotone_defect() -> f64 {
    let step = 0.005;
    let points: Vec<f64> = (1..=141).map(|i| i as f64 * step).collect();
    let mut worst = 0.0f64;
    let mut prev: Option<(f64, f64)> = None;
    for &c1 in &points {
        if c1 > std::f64::consts::FRAC_1_SQRT_2 {
            break;
        }
        let p = BipartiteParams::from_schmidt_basis(
            c1,
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        )
        .expect("valid grid point");
        let xi = squeezing_report(&p).xi_s_y;
        let s = entropy_report(&p).expect("valid density").s_a;
        if let Some((prev_xi, prev_s)) = prev {
            worst = worst.max(xi - prev_xi); // ξ must not increase
            worst = worst.max(prev_s - s); // S must not decrease
        }
        prev = Some((xi, s));
    }
    worst
}

/// Byte-compare a small sweep run with one and with four worker threads.
fn sweep_determinism_defect() -> f64 {
    let mut config = SweepConfig::new(0.05, 0.95, 0.01, BasisConstants::symmetric());
    config.threads = 1;
    let one = run_sweep(&config).expect("valid config");
    config.threads = 4;
    let four = run_sweep(&config).expect("valid config");
    let same = crate::sweep::csv_string(&one, None) == crate::sweep::csv_string(&four, None);
    if same {
        0.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes_every_property() {
        let summary = verify(42, 200);
        for r in &summary.results {
            assert!(
                r.pass,
                "{} failed: max deviation {:.3e} > tol {:.3e}",
                r.name, r.max_deviation, r.tolerance
            );
        }
        assert!(summary.all_pass());
    }

    #[test]
    fn single_draw_run_completes() {
        let summary = verify(7, 1);
        assert_eq!(summary.requested_draws, 1);
        assert!(summary.all_pass());
    }

    #[test]
    fn runs_are_deterministic_for_a_seed() {
        let a = verify(21, 50);
        let b = verify(21, 50);
        for (x, y) in a.results.iter().zip(&b.results) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.max_deviation.to_bits(), y.max_deviation.to_bits());
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let summary = verify_with(42, 100, InjectedFault::NegateDjyCrossTerm);
        assert!(!summary.all_pass());
        let mutated = summary
            .results
            .iter()
            .find(|r| r.name == "moment_identity_jy_squared")
            .unwrap();
        assert!(!mutated.pass);
    }
}
