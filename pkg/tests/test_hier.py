"""Hierarchy solver: y-assignment, sweep ordering, x-feasibility."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crown.errors import HierInfeasibleError, XInfeasibleError, YConflictError
from crown.geometry import BoxSpec, detect_contacts, rat
from crown.hier import (
    EmbeddedDag,
    assign_y,
    default_delta,
    solve_hier,
    solve_x,
    sweep_order,
    validate_embedding,
)

from oracles import hier_feasible, rand_embedded_dag


def dag_of(edges, rotation):
    vs = tuple(sorted({v for e in edges for v in e}))
    return EmbeddedDag(vs, tuple(edges), rotation)


def boxes_of(dims):
    return {v: BoxSpec(v, rat(w), rat(h)) for v, (w, h) in dims.items()}


def test_assign_y_single_edge():
    dag = dag_of([("c", "s")], {"s": ("c",), "c": ("s",)})
    y = assign_y(dag, {"s": Fraction(1), "c": Fraction(2)})
    assert y["s"] == (0, -1)
    assert y["c"] == (-1, -3)


def test_assign_y_chain():
    dag = dag_of([("b", "a"), ("c", "b")], {"a": ("b",), "b": ("a", "c"), "c": ("b",)})
    y = assign_y(dag, {"a": Fraction(1), "b": Fraction(1), "c": Fraction(1)})
    assert [y[v][0] for v in "abc"] == [0, -1, -2]


def test_assign_y_diamond_conflict():
    # two parents at different depths force incompatible tops for d
    edges = [("b", "a"), ("c", "a"), ("d", "b"), ("d", "c")]
    rotation = {
        "a": ("b", "c"),
        "b": ("a", "d"),
        "c": ("a", "d"),
        "d": ("b", "c"),
    }
    dag = dag_of(edges, rotation)
    heights = {"a": Fraction(1), "b": Fraction(1), "c": Fraction(2), "d": Fraction(1)}
    with pytest.raises(YConflictError):
        assign_y(dag, heights)


def test_sweep_single_edge_no_pairs():
    dag = dag_of([("c", "s")], {"s": ("c",), "c": ("s",)})
    y = assign_y(dag, {"s": Fraction(1), "c": Fraction(1)})
    assert sweep_order(dag, y) == []


def test_sweep_orders_predecessors_left_to_right():
    edges = [("p", "s"), ("q", "s")]
    rotation = {"s": ("p", "q"), "p": ("s",), "q": ("s",)}
    dag = dag_of(edges, rotation)
    y = assign_y(dag, {v: Fraction(1) for v in "pqs"})
    assert ("p", "q") in sweep_order(dag, y)


def test_solve_x_single_edge_feasible():
    x = solve_x(
        {"s": Fraction(1), "c": Fraction(1)},
        [("c", "s")],
        [],
        Fraction(1, 4),
        "s",
    )
    assert x["s"] == 0
    # overlap of at least delta
    lo = max(x["s"], x["c"])
    hi = min(x["s"] + 1, x["c"] + 1)
    assert hi - lo >= Fraction(1, 4)


def test_solve_x_two_preds_too_wide():
    # two unit preds under a unit sink cannot both overlap by 3/4
    with pytest.raises(XInfeasibleError):
        solve_x(
            {"s": Fraction(1), "p": Fraction(1), "q": Fraction(1)},
            [("p", "s"), ("q", "s")],
            [("p", "q")],
            Fraction(3, 4),
            "s",
        )


def test_validate_embedding_catches_unknown_vertex():
    dag = EmbeddedDag(("a", "b"), (("b", "a"),), {"a": ("b",), "b": ("a", "zz")})
    v = validate_embedding(dag)
    assert v is not None and v.kind == "rotation"


def test_validate_embedding_ok():
    dag = dag_of([("c", "s"), ("d", "c")], {"s": ("c",), "c": ("s", "d"), "d": ("c",)})
    assert validate_embedding(dag) is None


def test_solve_hier_single_edge():
    dag = dag_of([("c", "s")], {"s": ("c",), "c": ("s",)})
    lay = solve_hier(dag, boxes_of({"s": (1, 1), "c": (1, 1)}), Fraction(1, 4))
    pairs = {(ct.a, ct.b, ct.orientation) for ct in detect_contacts(lay)}
    assert ("c", "s", "v") in pairs


def test_solve_hier_infeasible_two_wide_preds():
    edges = [("p", "s"), ("q", "s")]
    rotation = {"s": ("p", "q"), "p": ("s",), "q": ("s",)}
    dag = dag_of(edges, rotation)
    boxes = boxes_of({"s": (1, 1), "p": (1, 1), "q": (1, 1)})
    with pytest.raises(HierInfeasibleError):
        solve_hier(dag, boxes, Fraction(3, 4))


def test_solve_hier_contact_slack():
    # every edge must end up a vertical contact with overlap >= delta
    edges = [("p", "s"), ("q", "s"), ("r", "p")]
    rotation = {"s": ("p", "q"), "p": ("s", "r"), "q": ("s",), "r": ("p",)}
    dag = dag_of(edges, rotation)
    boxes = boxes_of({"s": (4, 1), "p": (2, 2), "q": (2, 1), "r": (3, 1)})
    delta = Fraction(1, 2)
    lay = solve_hier(dag, boxes, delta)
    by_pair = {}
    for ct in detect_contacts(lay):
        by_pair[(ct.a, ct.b)] = ct
    for child, parent in edges:
        ct = by_pair[tuple(sorted((child, parent)))]
        assert ct.orientation == "v"
        assert ct.hi - ct.lo >= delta


def test_default_delta_positive():
    boxes = boxes_of({"a": (3, 1), "b": ("1/2", 2)})
    assert default_delta(boxes) > 0


def test_feasibility_monotone_in_delta():
    edges = [("p", "s"), ("q", "s")]
    rotation = {"s": ("p", "q"), "p": ("s",), "q": ("s",)}
    dag = dag_of(edges, rotation)
    boxes = boxes_of({"s": (3, 1), "p": (2, 1), "q": (2, 1)})

    def feasible(d):
        try:
            solve_hier(dag, boxes, d)
            return True
        except HierInfeasibleError:
            return False

    results = [feasible(Fraction(k, 4)) for k in range(1, 9)]
    # once infeasible, stays infeasible as delta grows
    assert results == sorted(results, reverse=True)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_solve_hier_matches_grid_oracle(seed):
    rng = random.Random(seed)
    dag, boxes = rand_embedded_dag(rng, rng.randrange(2, 6))
    want = hier_feasible(dag, boxes, 1)
    try:
        lay = solve_hier(dag, boxes, Fraction(1))
        got = True
    except HierInfeasibleError:
        got = False
    assert got == want
    if got:
        detect_contacts(lay)  # no overlaps


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_solve_hier_output_slack(seed):
    rng = random.Random(seed)
    dag, boxes = rand_embedded_dag(rng, rng.randrange(2, 7))
    try:
        lay = solve_hier(dag, boxes, Fraction(1))
    except HierInfeasibleError:
        return
    contacts = {(c.a, c.b): c for c in detect_contacts(lay)}
    for child, parent in dag.edges:
        c = contacts[tuple(sorted((child, parent)))]
        assert c.orientation == "v" and c.hi - c.lo >= 1
