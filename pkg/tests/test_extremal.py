import json
import math

import pytest

from abslab.enumeration import EnumSpec, enumerate_trees
from abslab.extremal import (
    PLUS4_OFFSET,
    BudgetError,
    GammaStarSpec,
    brute_force_min,
    brute_force_min_gamma_p,
    construct_gamma_star,
    degree_bookkeeping_counterexamples,
    dumps17,
    gamma_np_lower_bound,
    gamma_p_lower_bound,
    gamma_star_edge_counts,
    is_gamma_star_member,
    max_order,
    plus4_np_bound,
    verify_minimizer_properties,
)
from abslab.indices import abs_index
from abslab.tree import canonical_code, edge_type_counts, pendent_count, spider, star_tree

# brute-force minima (also the edge-count inner products), evaluated with mpmath at 50 digits
NP_MIN = {(7, 3): 4.0558408152933274, (10, 4): 6.2242843346521626, (8, 3): 4.7629475964798749}


# -- bounds --------------------------------------------------------------------------


def test_gamma_p_bound_examples():
    assert gamma_p_lower_bound(2) == pytest.approx(2 * math.sqrt(1 / 3), abs=1e-15)
    assert gamma_p_lower_bound(2) == pytest.approx(abs_index(star_tree(3)), abs=1e-15)
    assert gamma_p_lower_bound(3) == pytest.approx(abs_index(star_tree(4)), abs=1e-15)
    assert gamma_p_lower_bound(5) == pytest.approx(4.0824829, abs=1e-7)
    with pytest.raises(ValueError):
        gamma_p_lower_bound(1)


@pytest.mark.parametrize("key", list(NP_MIN))
def test_gamma_np_bound_examples(key):
    assert gamma_np_lower_bound(*key) == pytest.approx(NP_MIN[key], abs=1e-14)


def test_gamma_np_bound_near_quoted_decimals():
    assert gamma_np_lower_bound(7, 3) == pytest.approx(4.0558411, abs=1e-6)
    assert gamma_np_lower_bound(10, 4) == pytest.approx(6.2242846, abs=1e-6)
    assert gamma_np_lower_bound(8, 3) == pytest.approx(4.7629479, abs=1e-6)


def test_gamma_np_bound_closed_form():
    for p in range(3, 8):
        for t in range(0, 6):
            n = 3 * p - 2 + t
            closed = p * (1 / math.sqrt(3) + math.sqrt(3 / 5) + 2 / math.sqrt(6)) + t * math.sqrt(2) / 2 - math.sqrt(6)
            assert gamma_np_lower_bound(n, p) == pytest.approx(closed, abs=1e-12)
            assert plus4_np_bound(n, p) - gamma_np_lower_bound(n, p) == pytest.approx(PLUS4_OFFSET, abs=1e-12)
    assert PLUS4_OFFSET == pytest.approx(4.0824829, abs=1e-7)


@pytest.mark.parametrize("n, p", [(6, 3), (9, 4), (10, 2)])
def test_gamma_np_bound_rejects(n, p):
    with pytest.raises(ValueError):
        gamma_np_lower_bound(n, p)


# -- the extremal family -------------------------------------------------------------


def codes(trees):
    return {canonical_code(t) for t in trees}


def test_construct_p3_t0_is_the_spider():
    (t,) = construct_gamma_star(GammaStarSpec(3, 0))
    assert canonical_code(t) == canonical_code(spider([2, 2, 2]))


def test_construct_p4_t0_single_tree():
    (t,) = construct_gamma_star(GammaStarSpec(4, 0))
    assert t.order == 10 and sorted(t.degrees).count(3) == 2


def test_construct_p3_t2_two_trees():
    got = codes(construct_gamma_star(GammaStarSpec(3, 2)))
    assert got == codes([spider([4, 2, 2]), spider([3, 3, 2])])


def test_gamma_star_spec():
    assert GammaStarSpec(4, 2).n == 12
    assert GammaStarSpec.from_order(12, 4) == GammaStarSpec(4, 2)
    for p, t in [(2, 0), (3, -1)]:
        with pytest.raises(ValueError):
            GammaStarSpec(p, t)


@pytest.mark.parametrize("p", [3, 4, 5, 6])
@pytest.mark.parametrize("t", [0, 1, 2, 3])
def test_members_have_family_shape_and_bound_value(p, t):
    spec = GammaStarSpec(p, t)
    members = list(construct_gamma_star(spec))
    assert members
    assert len(codes(members)) == len(members)
    for m in members:
        assert m.order == spec.n and pendent_count(m) == p and m.max_degree == 3
        assert edge_type_counts(m) == gamma_star_edge_counts(spec.n, p)
        assert is_gamma_star_member(m)
        assert abs_index(m) == pytest.approx(gamma_np_lower_bound(spec.n, p), abs=1e-12)


def test_membership_examples():
    assert is_gamma_star_member(spider([2, 2, 2]))
    assert not is_gamma_star_member(star_tree(4))
    assert is_gamma_star_member(spider([2, 2, 3]))
    assert canonical_code(spider([2, 2, 3])) in codes(construct_gamma_star(GammaStarSpec(3, 1)))
    assert not is_gamma_star_member(spider([1, 2, 3]))


def test_membership_predicate_equals_construction():
    for n in range(7, 17):
        for p in range(3, (n + 2) // 3 + 1):
            by_pred = codes(t for t in enumerate_trees(EnumSpec(n, pendent=p)) if is_gamma_star_member(t))
            by_cons = codes(construct_gamma_star(GammaStarSpec.from_order(n, p)))
            assert by_pred == by_cons, (n, p)


# -- searches --------------------------------------------------------------------------


def test_search_7_3():
    cert = brute_force_min(7, 3)
    assert cert.minimum == pytest.approx(NP_MIN[(7, 3)], abs=1e-12)
    assert cert.minimizer_codes == {canonical_code(spider([2, 2, 2]))}
    assert cert.bound_matches and not cert.plus4_matches
    assert cert.minimum <= min(abs_index(t) for t in enumerate_trees(EnumSpec(7, pendent=3))) + 1e-9


def test_search_10_4():
    cert = brute_force_min(10, 4)
    assert cert.minimum == pytest.approx(NP_MIN[(10, 4)], abs=1e-12)
    assert cert.minimizer_codes == codes(construct_gamma_star(GammaStarSpec(4, 0)))
    assert len(cert.minimizers) == 1


def test_search_9_3():
    cert = brute_force_min(9, 3)
    assert len(cert.minimizers) == 2
    assert cert.minimizer_codes == codes(construct_gamma_star(GammaStarSpec(3, 2)))


def test_search_below_bound_range_has_no_bound():
    cert = brute_force_min(8, 4)
    assert cert.bound_value is None and cert.bound_matches is None
    assert cert.notes and "3p - 2" in cert.notes[0]
    assert cert.property_report["in_bound_range"] is False


def test_search_errors(monkeypatch):
    with pytest.raises(ValueError):
        brute_force_min(7, 2)
    with pytest.raises(ValueError):
        brute_force_min(7, 7)
    with pytest.raises(BudgetError):
        brute_force_min(19, 5)
    with pytest.raises(BudgetError):
        max_order(21)
    monkeypatch.setenv("ABSLAB_BUDGET", "9")
    assert max_order() == 9
    with pytest.raises(BudgetError):
        brute_force_min(10, 4)


def test_parallel_search_matches_serial():
    a = brute_force_min(12, 4, workers=1)
    b = brute_force_min(12, 4, workers=3)
    assert a.to_json() == b.to_json()


def test_gamma_p_examples():
    cert = brute_force_min_gamma_p(3)
    assert cert.minimum == pytest.approx(2.1213203435596426, abs=1e-12)
    assert cert.minimizer_codes == {canonical_code(star_tree(4))}
    cert = brute_force_min_gamma_p(2)
    assert cert.minimum == pytest.approx(1.1547005383792515, abs=1e-12)
    assert cert.minimizer_codes == {canonical_code(star_tree(3))}
    cert = brute_force_min_gamma_p(6)
    assert cert.minimum == pytest.approx(6 * math.sqrt(5 / 7), abs=1e-12)
    assert cert.minimum == pytest.approx(5.0709255, abs=1e-7)
    assert cert.minimizer_codes == {canonical_code(star_tree(7))}
    assert cert.parameters["orders"] == [7, 10]


def test_gamma_p_errors():
    with pytest.raises(ValueError):
        brute_force_min_gamma_p(1)
    with pytest.raises(BudgetError):
        brute_force_min_gamma_p(9)


# -- audits -------------------------------------------------------------------------


def test_audit_spider():
    report = verify_minimizer_properties(brute_force_min(7, 3))
    assert report["all_passed"] and report["in_bound_range"]
    (row,) = report["minimizers"]
    assert set(row["checks"]) == {
        "internal_paths_length_one",
        "w2_degrees_two",
        "w2_w3_degree_order",
        "w3_degree_sum",
        "max_degree_three",
    }


def test_audit_w3_degree_sum_for_10_4():
    cert = brute_force_min(10, 4)
    (tree,) = cert.minimizers
    hubs = [v for v in range(tree.order) if tree.degree(v) == 3]
    assert len(hubs) == 2 and sum(tree.degree(v) for v in hubs) == 3 * 4 - 6
    assert cert.property_report["all_passed"]


def test_audit_gamma_p_star():
    report = brute_force_min_gamma_p(5).property_report
    assert report["all_passed"]
    assert report["minimizers"][0]["checks"]["no_degree_two"]["passed"]


def test_audit_reports_witnesses():
    # run the audit on a deliberately non-minimal tree
    from abslab.extremal import ExtremalCertificate

    bad = spider([1, 1, 5])
    cert = ExtremalCertificate("GAMMA_NP", {"n": 8, "p": 3}, abs_index(bad), (bad,), 1)
    report = verify_minimizer_properties(cert)
    checks = report["minimizers"][0]["checks"]
    assert not report["all_passed"]
    assert checks["w2_degrees_two"]["witness"] == {0: 3}
    assert checks["w3_degree_sum"]["witness"] == {"sum": 6, "expected": 5}


def test_degree_bookkeeping_fails_on_non_minimal_trees():
    found = degree_bookkeeping_counterexamples(10)
    assert found["trees_checked"] > 0
    assert found["counterexamples"] > 0
    assert found["examples"][0]["failed"]


# -- serialization ------------------------------------------------------------------


def test_certificate_json_schema():
    cert = brute_force_min(8, 3)
    doc = json.loads(cert.to_json())
    assert {"family", "params", "minimum", "minimizers", "bound", "audits", "tie_tolerance_hits"} <= set(doc)
    assert doc["family"] == "GAMMA_NP" and doc["params"] == {"n": 8, "p": 3}
    assert set(doc["bound"]) == {"value", "formula", "printed_formula_value", "matches", "printed_matches"}
    assert doc["bound"]["formula"] == "edge-count"
    m = doc["minimizers"][0]
    assert bytes.fromhex(m["code"]) == canonical_code(cert.minimizers[0])
    assert len(m["edges"]) == m["order"] - 1
    assert doc["minimum"] == cert.minimum  # 17 significant digits round-trip exactly


def test_dumps17_round_trips_floats():
    vals = [0.1, 1 / 3, math.pi * 1e-12, 4.0558408152933274, -2.5e300, 1216.0, 0.0]
    doc = json.loads(dumps17({"v": vals, "nested": {"x": vals[1]}}))
    assert doc["v"] == vals and doc["nested"]["x"] == vals[1]
    assert all(isinstance(v, float) for v in doc["v"])


def test_csv_row():
    row = brute_force_min(7, 3).csv_row()
    assert row["n"] == 7 and row["p"] == 3 and row["matches"] is True
    cert = brute_force_min(7, 3)
    assert float(row["minimum"]) == cert.minimum == pytest.approx(NP_MIN[(7, 3)], abs=1e-14)
