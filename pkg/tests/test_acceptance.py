"""Acceptance criteria 1-10, each at its stated bounds and tolerances.

Every test records one PASS/FAIL line; they are printed in the terminal summary.
"""

import time

from tightgroupoid import operator_model as om
from tightgroupoid import representations as rp
from tightgroupoid import suites


def _detail(rep, limit=None):
    s = f"cases={rep.cases} failures={rep.failure_count} time={rep.wall_time:.1f}s"
    return s + (f" (limit {limit}s)" if limit else "")


def test_01_semigroup_axioms(record_criterion):
    rep = suites.semigroup_axioms(bound=4, rbound=4)
    ok = rep.passed and rep.wall_time < 60
    record_criterion(1, "semigroup axioms, indices <= 4, |r| <= 4", ok, _detail(rep, 60))
    assert rep.passed, rep.failures
    # class 1: 5*5, class 4: 5**4 * 9, classes 2 and 3: 15*15 each
    assert rep.parts["words"] == 25 + 5**4 * 9 + 2 * 15 * 15
    assert rep.wall_time < 60


def test_02_oracle_products(record_criterion):
    rep = suites.oracle_products(bound=3, cfg=om.TruncConfig(12, 8, 0.0))
    ok = rep.passed and rep.wall_time < 120
    record_criterion(2, "symbolic products = realized products, N=12 R=8", ok, _detail(rep, 120))
    assert rep.passed, rep.failures
    assert rep.wall_time < 120


def test_03_projection_table(record_criterion):
    rep = suites.projection_table(bound=4)
    record_criterion(3, "closed-form projection product = word product", rep.passed, _detail(rep))
    assert rep.passed, rep.failures


def test_04_ultrafilter_witnesses(record_criterion):
    rep = suites.ultrafilters(coord_bound=4, bound=6)
    record_criterion(4, "ultrafilter witnesses, coordinates in {0..4, inf}", rep.passed, _detail(rep))
    assert rep.passed, rep.failures
    assert rep.parts["points"] == 36


def test_05_equivalence_oracle(record_criterion):
    rep = suites.equivalence_oracle(bound=3, witness_bound=6)
    record_criterion(5, "canonical forms = witness-search equivalence", rep.passed, _detail(rep))
    assert rep.passed, rep.failures


def test_06_groupoid_axioms(record_criterion):
    rep = suites.groupoid_axioms(bound=3)
    record_criterion(6, "groupoid axioms on composable triples, data <= 3", rep.passed, _detail(rep))
    assert rep.passed, rep.failures
    assert rep.parts["composable triples"] > 0


def test_07_isotropy_is_z(record_criterion):
    rep = suites.isotropy_checks(suites.SuiteReport("isotropy"), window=4)
    record_criterion(7, "isotropy labels add and negate on {-4..4}", rep.passed, _detail(rep))
    assert rep.passed, rep.failures


def test_08_orbit_space(record_criterion):
    rep = suites.orbit_space_checks(suites.SuiteReport("orbit-space"))
    ok = rep.passed and len(rep.parts["open sets"]) == 6
    record_criterion(8, "4 orbits, 6 open sets, T0", ok, _detail(rep))
    assert rep.passed, rep.failures
    assert len(rep.parts["open sets"]) == 6


def test_09_psi(record_criterion):
    rep = suites.psi(om.TruncConfig(12, 8))
    ok = rep.passed and rep.parts["controls_failed_as_designed"]
    record_criterion(9, "basis actions = realized generators, controls fail", ok, _detail(rep))
    assert rep.passed, rep.failures
    assert rep.parts["controls_failed_as_designed"]


def test_10_representations(record_criterion):
    t = time.perf_counter()
    rep = suites.reps(t0_turns=rp.T0_SAMPLES, bound=6)
    elapsed = time.perf_counter() - t
    pairing = rep.parts["pairing"]
    reported = all(len(pairing[c]) == 1 for c in (2, 3)) and \
        any("case 2" in n for n in rep.notes) and any("case 3" in n for n in rep.notes)
    ok = rep.passed and reported and elapsed < 60
    notes = "; ".join(n for n in rep.notes if n.startswith(("case 2", "case 3")))
    record_criterion(10, "induced representations match Soibelman families", ok,
                     f"{_detail(rep, 60)} [{notes}]")
    assert rep.passed, rep.failures
    assert pairing[1] == [["1", "identity"]]
    assert pairing[4][0][0] == "w1w2"
    assert reported
    assert elapsed < 60
