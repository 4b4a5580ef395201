"""Tests for criterion evaluation and entanglement quantification."""

import numpy as np
import pytest

from entscan import (
    DensityMatrix,
    InvalidInputError,
    Verdict,
    bell_state,
    bipartite_cuts,
    evaluate_subset,
    format_label_set,
    ghz_state,
    gpt_scan,
    max_mixed,
    measure_e,
    mix,
    negativity,
    ppt_criterion,
    random_density,
    random_local_unitary,
    realignment_criterion,
    separable_mixture,
    werner_state,
)
from entscan.reshape import mask_of_labels

from reference import naive_realign, naive_trace_norm


def werner_pt_norm(p):
    # partial-transpose eigenvalues of the Werner state: (1+p)/4 x3, (1-3p)/4
    return 3 * (1 + p) / 4 + abs(1 - 3 * p) / 4


class TestPptCriterion:
    def test_bell_singlet(self):
        results = ppt_criterion(bell_state("psi-"))
        assert len(results) == 1
        res = results[0]
        assert format_label_set(res.labels) == "rA,cA"
        assert abs(res.trace_norm - 2.0) < 1e-9
        assert abs(res.min_eigenvalue + 0.5) < 1e-9
        assert res.violating

    @pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3])
    def test_werner_below_threshold(self, p):
        for res in ppt_criterion(werner_state(p)):
            assert abs(res.trace_norm - 1.0) < 1e-10
            assert res.min_eigenvalue > -1e-10
            assert not res.violating

    @pytest.mark.parametrize("p", [0.4, 0.7, 1.0])
    def test_werner_above_threshold(self, p):
        (res,) = ppt_criterion(werner_state(p))
        assert abs(res.trace_norm - werner_pt_norm(p)) < 1e-10
        assert abs(res.min_eigenvalue - (1 - 3 * p) / 4) < 1e-10
        assert res.violating

    def test_product_states_pass(self):
        for seed in range(5):
            for res in ppt_criterion(separable_mixture((2, 2, 2), 1, seed=seed)):
                assert not res.violating
                assert abs(res.trace_norm - 1.0) < 1e-10

    def test_subset_count_dedupes_complements(self):
        assert len(ppt_criterion(ghz_state(3))) == 3
        assert len(ppt_criterion(max_mixed((2,)))) == 0


class TestRealignmentCriterion:
    def test_bell(self):
        (res,) = realignment_criterion(bell_state("psi-"))
        assert abs(res.trace_norm - 2.0) < 1e-9
        assert res.violating
        assert format_label_set(res.labels) == "cA,rB"

    def test_maximally_mixed_two_qubits(self):
        (res,) = realignment_criterion(max_mixed((2, 2)))
        assert abs(res.trace_norm - 0.5) < 1e-12
        assert not res.violating

    def test_requires_two_subsystems(self):
        with pytest.raises(InvalidInputError, match="at least 2"):
            realignment_criterion(max_mixed((4,)))

    def test_cut_count(self):
        assert len(realignment_criterion(ghz_state(3))) == 3

    def test_werner_threshold_bisection_against_naive(self):
        # locate the realignment threshold with the naive-block oracle only
        def naive_norm(p):
            return naive_trace_norm(naive_realign(werner_state(p).mat, (2, 2)))

        lo, hi = 0.0, 1.0
        while hi - lo > 1e-9:
            mid = 0.5 * (lo + hi)
            if naive_norm(mid) > 1.0:
                hi = mid
            else:
                lo = mid
        assert abs(0.5 * (lo + hi) - 1 / 3) < 1e-6
        # and the package agrees on a point either side
        assert not realignment_criterion(werner_state(1 / 3 - 0.01))[0].violating
        assert realignment_criterion(werner_state(1 / 3 + 0.01))[0].violating


class TestGptScan:
    def test_bell_report(self):
        report = gpt_scan(bell_state("psi-"))
        assert report.verdict is Verdict.ENTANGLED_CERTIFIED
        assert abs(report.max_norm - 2.0) < 1e-9
        assert abs(report.measure_e - 0.5) < 1e-9
        violation_masks = {mask_of_labels(v) for v in report.violations}
        assert 3 in violation_masks  # {rA,cA}
        assert 6 in violation_masks  # {cA,rB}
        assert mask_of_labels(report.argmax_labels) == 3  # canonical tie-break
        assert len(report.results) == 8

    def test_no_dedupe_doubles_subsets(self):
        report = gpt_scan(bell_state("psi-"), dedupe=False)
        assert len(report.results) == 16
        assert abs(report.max_norm - 2.0) < 1e-9

    def test_separable_mixtures_undetected(self):
        for dims in [(2, 2), (2, 3), (2, 2, 2)]:
            for seed in range(10):
                report = gpt_scan(separable_mixture(dims, 6, seed=seed))
                assert report.verdict is Verdict.UNDETECTED
                assert report.max_norm <= 1.0 + 1e-9

    def test_bound_entangled_2x4_undetected(self):
        from entscan import horodecki_2x4

        report = gpt_scan(horodecki_2x4(0.5), dedupe=False)
        assert report.verdict is Verdict.UNDETECTED
        assert report.max_norm <= 1.0 + 1e-9

    def test_mix_of_two_product_states_undetected(self):
        blend = mix(
            [separable_mixture((2, 2), 1, seed=41), separable_mixture((2, 2), 1, seed=42)],
            [0.3, 0.7],
        )
        assert gpt_scan(blend).verdict is Verdict.UNDETECTED

    def test_results_in_canonical_order(self):
        report = gpt_scan(bell_state("phi+"), dedupe=False)
        masks = [mask_of_labels(res.labels) for res in report.results]
        assert masks == sorted(masks)

    def test_parallel_scan_is_deterministic(self):
        rho = random_density((2, 3), seed=21)
        serial = gpt_scan(rho)
        threaded = gpt_scan(rho, workers=4)
        assert serial.max_norm == threaded.max_norm
        assert serial.argmax_labels == threaded.argmax_labels
        for a, b in zip(serial.results, threaded.results):
            assert a.labels == b.labels
            assert a.trace_norm == b.trace_norm  # bitwise identical

    def test_size_limit(self):
        rho = max_mixed((2,) * 7)
        with pytest.raises(InvalidInputError, match="scan limit"):
            gpt_scan(rho)

    def test_hermitian_cases_carry_min_eigenvalue(self):
        report = gpt_scan(bell_state("psi-"), dedupe=False)
        for res in report.results:
            if res.is_hermitian_case:
                assert res.min_eigenvalue is not None
                assert res.shape[0] == res.shape[1]
            else:
                assert res.min_eigenvalue is None

    def test_ppt_subset_norm_is_one_when_psd(self):
        for seed in range(10):
            rho = random_density((2, 2), seed=seed)
            report = gpt_scan(rho, dedupe=False)
            for res in report.results:
                if res.is_hermitian_case and res.min_eigenvalue >= -1e-12:
                    assert abs(res.trace_norm - 1.0) < 1e-10


class TestNegativity:
    def test_bell(self):
        assert abs(negativity(bell_state("psi-"), 0) - 0.5) < 1e-9

    def test_product_state(self):
        rho = separable_mixture((2, 2), 1, seed=1)
        assert negativity(rho, 0) == 0.0
        assert negativity(rho, 1) == 0.0

    def test_werner_half(self):
        assert abs(negativity(werner_state(0.5), 0) - 1 / 8) < 1e-9

    def test_werner_analytic_formula(self):
        for p in np.linspace(0, 1, 11):
            expected = max(0.0, (3 * p - 1) / 4)
            assert abs(negativity(werner_state(p), 0) - expected) < 1e-10


class TestMeasureE:
    def test_separable_states_are_exactly_zero(self):
        for seed in range(8):
            assert measure_e(separable_mixture((2, 2), 5, seed=seed)) == 0.0
        assert measure_e(max_mixed((2, 2))) == 0.0

    def test_bell(self):
        assert abs(measure_e(bell_state("psi-")) - 0.5) < 1e-9

    def test_upper_bounds_negativity(self):
        for seed in range(20):
            rho = random_density((2, 2), seed=seed)
            e_val = measure_e(rho)
            for k in (0, 1):
                assert e_val >= negativity(rho, k) - 1e-10

    def test_convexity(self):
        rng = np.random.default_rng(30)
        for seed in range(10):
            rho1 = random_density((2, 2), seed=seed)
            rho2 = random_density((2, 2), seed=seed + 100)
            lam = float(rng.random())
            blend = mix([rho1, rho2], [lam, 1 - lam])
            assert measure_e(blend) <= lam * measure_e(rho1) + (1 - lam) * measure_e(
                rho2
            ) + 1e-9

    def test_local_unitary_invariance(self):
        for seed in range(10):
            rho = random_density((2, 2), seed=seed)
            u = random_local_unitary((2, 2), seed=seed + 500)
            rotated = DensityMatrix(u @ rho.mat @ u.conj().T, (2, 2))
            base = gpt_scan(rho)
            moved = gpt_scan(rotated)
            assert abs(base.measure_e - moved.measure_e) < 1e-8
            for a, b in zip(base.results, moved.results):
                assert abs(a.trace_norm - b.trace_norm) < 1e-8


class TestEvaluateSubset:
    def test_single_subset_matches_scan(self):
        rho = bell_state("psi-")
        report = gpt_scan(rho, dedupe=False)
        for res in report.results:
            single = evaluate_subset(rho, res.labels)
            assert single.trace_norm == res.trace_norm
            assert single.shape == res.shape

    def test_complement_recorded(self):
        rho = bell_state("psi-")
        res = evaluate_subset(rho, frozenset())
        assert mask_of_labels(res.complement) == 15


def test_bipartite_cuts_enumeration():
    assert bipartite_cuts(2) == [((0,), (1,))]
    assert bipartite_cuts(3) == [
        ((0,), (1, 2)),
        ((0, 1), (2,)),
        ((0, 2), (1,)),
    ]
