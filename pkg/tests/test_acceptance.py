"""Acceptance gate: every canonical scenario at its stated tolerance.

Each test prints one [PASS]/[FAIL] line (visible with `pytest -s`) and
then asserts every check row of its scenario.  Tolerances come from the
central table untouched — a red row here means the stated budget is not
met, and the assertion message says what was measured.

Known red: the harmonic level budget (1e-4 at dx = 0.01, levels up to
n = 4) sits below the second-order stencil defect of this discretization
— see the assertion message in criterion 02 for the arithmetic.  The
row is kept at its stated tolerance rather than widened.
"""
import json
import time

import pytest

from qclab.cli import main
from qclab.verification import CRITERIA, make_context

CRITERION_ORDER = [
    "inertial-equivalence",
    "harmonic-spectrum",
    "oscillator-identity",
    "quantum-potential-gap",
    "madelung-residuals",
    "amplitude-relation",
    "unitarity-stationarity",
    "ehrenfest-correspondence",
    "superposition-statistics",
    "characteristics-solver",
    "rerun-determinism",
]


@pytest.fixture(scope="module")
def criterion_results():
    """One shared context (cached eigensolves/evolutions), all scenarios."""
    ctx = make_context()
    builders = dict(CRITERIA)
    results = {}
    for scenario_id in CRITERION_ORDER:
        started = time.perf_counter()
        checks = builders[scenario_id](ctx)
        results[scenario_id] = (checks, time.perf_counter() - started)
    return results


def _gate(results, number: int, scenario_id: str) -> None:
    checks, _ = results[scenario_id]
    ok = all(c.passed for c in checks)
    verdict = "PASS" if ok else "FAIL"
    print(
        f"[{verdict}] criterion-{number:02d} {scenario_id}: "
        f"{sum(c.passed for c in checks)}/{len(checks)} checks"
    )
    for c in checks:
        assert c.passed, (
            f"{c.name}: measured {c.measured!r} {c.comparator} {c.tolerance!r} "
            f"({c.identity}){'; ' + c.detail if c.detail else ''}"
        )


def test_criterion_01_inertial_correspondence(criterion_results):
    # plane wave E=0.5: |Phi - S| <= 1e-10 aligned, |V_q| <= 1e-8
    _gate(criterion_results, 1, "inertial-equivalence")


def test_criterion_02_harmonic_spectrum(criterion_results):
    # |E_n - (n+1/2)| <= 1e-4 for n = 0..4 at dx = 0.01, and halving the
    # spacing improves the ground level by >= 3.5.
    #
    # The level rows cannot pass as stated: the symmetric three-point
    # stencil carries an irreducible defect of -dx^2 (2n^2+2n+1)/32 per
    # level, which at n = 4 and dx = 0.01 is -1.28125e-4 — already over
    # the 1e-4 budget before any solver error.  Meeting the budget needs
    # dx <= 0.0088 or a higher-order stencil; the row is left red at its
    # stated tolerance instead of being quietly widened.
    _gate(criterion_results, 2, "harmonic-spectrum")


def test_criterion_02_runtime_budget(criterion_results):
    _, elapsed = criterion_results["harmonic-spectrum"]
    assert elapsed <= 10.0


def test_criterion_03_oscillator_identity(criterion_results):
    # multiplied-form residual <= 1e-3 for n = 0..4, nodes included
    _gate(criterion_results, 3, "oscillator-identity")


def test_criterion_04_quantum_potential_gap(criterion_results):
    # V_t deviates from E_n by <= 1e-3; HJ residual of Phi = -V_q to 2e-3
    _gate(criterion_results, 4, "quantum-potential-gap")


def test_criterion_05_madelung_residuals(criterion_results):
    # both residuals <= 1e-3 at unmasked points over one period;
    # refinement order >= 1.7
    _gate(criterion_results, 5, "madelung-residuals")


def test_criterion_06_amplitude_relation(criterion_results):
    # lambda^2 grad Phi constant to 1e-2 relative; current cross-check 1e-3
    _gate(criterion_results, 6, "amplitude-relation")


def test_criterion_07_unitarity_stationarity(criterion_results):
    # norm drift <= 1e-10 over 1e4 steps; period-return overlap >= 1-1e-6
    _gate(criterion_results, 7, "unitarity-stationarity")


def test_criterion_08_ehrenfest_correspondence(criterion_results):
    # <x>(t) vs Verlet orbit within 1e-3 over one period
    _gate(criterion_results, 8, "ehrenfest-correspondence")


def test_criterion_09_superposition_statistics(criterion_results):
    # |c_n| invariant to 1e-8; matched ensemble TV <= 0.01 at 1e5 samples;
    # mismatched TV >= 0.1
    _gate(criterion_results, 9, "superposition-statistics")


def test_criterion_09_runtime_budget(criterion_results):
    _, elapsed = criterion_results["superposition-statistics"]
    assert elapsed <= 60.0


def test_criterion_10_characteristics_solver(criterion_results):
    # free reconstruction <= 1e-6; rest-release caustic within one step
    _gate(criterion_results, 10, "characteristics-solver")


def test_criterion_11_rerun_determinism(criterion_results):
    # same seed, same draws — bit for bit
    _gate(criterion_results, 11, "rerun-determinism")


def test_criterion_11_reports_are_byte_identical(tmp_path):
    # the whole canonical run, twice, through the real entry point:
    # identical reports once the timestamp/runtime block is dropped
    texts = []
    for name in ("first", "second"):
        out = tmp_path / name
        status = main(["verify-all", "--out", str(out)])
        assert status in (0, 1)  # red rows are analyzed, not masked
        payload = json.loads((out / "report.json").read_text())
        payload.pop("generated_at")
        payload.pop("timing")
        texts.append(json.dumps(payload, indent=2, sort_keys=True))
    assert texts[0] == texts[1]
