from tightgroupoid import suites


def test_report_plumbing():
    rep = suites.SuiteReport("demo")
    for i in range(suites.MAX_LISTED_FAILURES + 5):
        rep.check(False, f"case {i:03d}", "x", "y")
    rep.check(True, "fine", 1, 1)
    doc = rep.to_json()
    assert not rep.passed and doc["failure_count"] == suites.MAX_LISTED_FAILURES + 5
    assert len(doc["failures"]) == suites.MAX_LISTED_FAILURES
    assert [f["input"] for f in doc["failures"]] == sorted(f["input"] for f in doc["failures"])
    assert doc["schema"] == 1 and set(doc["conventions"]) == {"winding", "operators", "action", "psi_basis"}


def test_small_runs_pass():
    assert suites.semigroup_axioms(bound=2).passed
    assert suites.oracle_products(bound=1, cfg=suites.om.TruncConfig(6, 3)).passed
    assert suites.groupoid_axioms(bound=1, oracle_bound=4).passed
    assert suites.equivalence_oracle(bound=1, witness_bound=3).passed
    assert suites.ultrafilters(coord_bound=2, bound=3).passed


def test_suite_names():
    assert set(suites.SUITES) == {"semigroup-axioms", "oracle-products", "ultrafilters", "groupoid-axioms",
                                  "equivalence-oracle", "psi", "reps", "orbit-topology"}
