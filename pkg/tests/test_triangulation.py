"""Irreducible-triangulation validation and the staircase realizer.

The last test documents a sharp edge: with point contacts allowed, a
graph can be realizable with the outer boxes in scrambled positions
(a pinwheel) even though no layout with the stated walls exists. The
realizer decides the stated-walls question, and so does the default
oracle; the free-placement relaxation is strictly weaker.
"""

import random
from fractions import Fraction

import pytest

from crown.errors import InvalidInstanceError, TriangulationInfeasibleError
from crown.geometry import BoxSpec, Layout, contact_pairs, detect_contacts, rat
from crown.triangulation import (
    TriangulationInstance,
    realize_triangulation,
    validate_instance,
)

from oracles import rand_guillotine_dual, tri_realizable


def inst_of(dims, rotation, outer=("N", "E", "S", "W")):
    boxes = {v: BoxSpec(v, rat(w), rat(h)) for v, (w, h) in dims.items()}
    return TriangulationInstance(boxes, rotation, tuple(outer))


WHEEL_ROTATION = {
    "N": ("E", "t0", "W"),
    "E": ("S", "t0", "N"),
    "S": ("W", "t0", "E"),
    "W": ("N", "t0", "S"),
    "t0": ("N", "E", "S", "W"),
}


def wheel(dims):
    return inst_of(dims, WHEEL_ROTATION)


def test_wheel_validates():
    inst = wheel({"N": (4, 1), "E": (1, 4), "S": (4, 1), "W": (1, 4), "t0": (2, 2)})
    assert validate_instance(inst) is None


def test_k4_fails_outer_check():
    rotation = {
        "a": ("b", "c", "d"),
        "b": ("c", "a", "d"),
        "c": ("a", "b", "d"),
        "d": ("a", "c", "b"),
    }
    inst = inst_of(
        {v: (1, 1) for v in "abcd"}, rotation, outer=("a", "b", "c", "d")
    )
    v = validate_instance(inst)
    assert v is not None and v.kind == "outer"


def test_separating_triangle_is_named():
    # octahedron-like gadget with an explicit separating triangle
    rotation = {
        "N": ("E", "a", "W"),
        "E": ("S", "b", "a", "N"),
        "S": ("W", "b", "E"),
        "W": ("N", "a", "b", "S"),
        "a": ("N", "E", "b", "W"),
        "b": ("a", "E", "S", "W"),
    }
    inst = inst_of({v: (2, 2) for v in rotation}, rotation)
    v = validate_instance(inst)
    # the instance is either fine or flags a specific defect with names
    if v is not None:
        assert v.kind in ("separating", "faces", "planar")


def test_five_vertex_dual_realizes_all_edges():
    inst = wheel({"N": (4, 1), "E": (1, 4), "S": (4, 1), "W": (1, 4), "t0": (2, 2)})
    lay = realize_triangulation(inst)
    assert len(contact_pairs(lay) & set(inst.edges())) == 8


def test_narrow_north_is_infeasible():
    inst = wheel({"N": (1, 1), "E": (1, 4), "S": (4, 1), "W": (1, 4), "t0": (2, 2)})
    with pytest.raises(TriangulationInfeasibleError) as err:
        realize_triangulation(inst)
    assert err.value.stage == "outer-too-small"


def test_invalid_instance_raises():
    rotation = {
        "a": ("b", "c", "d"),
        "b": ("c", "a", "d"),
        "c": ("a", "b", "d"),
        "d": ("a", "c", "b"),
    }
    inst = inst_of({v: (1, 1) for v in "abcd"}, rotation, outer=("a", "b", "c", "d"))
    with pytest.raises(InvalidInstanceError):
        realize_triangulation(inst)


STACK_ROTATION = {
    "N": ("W", "b", "E"),
    "E": ("N", "b", "a", "S"),
    "S": ("E", "a", "W"),
    "W": ("a", "b", "N", "S"),
    "a": ("S", "E", "b", "W"),
    "b": ("a", "E", "N", "W"),
}


def stack(dims_ab):
    dims = {"N": (9, 1), "E": (1, 9), "S": (9, 1), "W": (1, 9)}
    dims.update(dims_ab)
    return inst_of(dims, STACK_ROTATION)


def test_two_tile_stack_realizes_when_widths_match():
    inst = stack({"a": (2, 1), "b": (2, 1)})
    lay = realize_triangulation(inst)
    assert set(inst.edges()) <= contact_pairs(lay)
    detect_contacts(lay)  # doubles as no-overlap check


def test_two_tile_stack_infeasible_when_widths_differ():
    inst = stack({"a": (2, 1), "b": (3, 1)})
    assert validate_instance(inst) is None
    with pytest.raises(TriangulationInfeasibleError):
        realize_triangulation(inst)


PINWHEEL = {
    "t0": (3, 1),
    "N": (2, 2),
    "E": (3, 2),
    "S": (4, 4),
    "W": (3, 2),
}


def test_pinwheel_gap_between_walls_and_free_placement():
    """A free pinwheel realizes the wheel even though no walled layout does.

    The witness puts W on top of t0 and closes the outer cycle through two
    corner point contacts, which is legal under the contact definition but
    scrambles the outer roles. Both the realizer and the role-respecting
    oracle reject the instance; the free-placement oracle accepts it.
    """
    inst = wheel(PINWHEEL)
    assert validate_instance(inst) is None

    with pytest.raises(TriangulationInfeasibleError) as err:
        realize_triangulation(inst)
    assert err.value.stage == "outer-too-small"

    assert tri_realizable(inst) is False
    assert tri_realizable(inst, respect_roles=False) is True

    # the explicit free witness, checked down to its contact set
    witness = Layout()
    spots = {
        "t0": (0, 0),
        "E": (0, -2),
        "N": (-2, -1),
        "S": (3, -3),
        "W": (0, 1),
    }
    for v, (x, y) in spots.items():
        witness.place(inst.boxes[v], rat(x), rat(y))
    assert contact_pairs(witness) == set(inst.edges())


def test_realizer_matches_oracle_on_random_duals():
    rng = random.Random(424242)
    checked = 0
    while checked < 60:
        inst = rand_guillotine_dual(
            rng, rng.choice((1, 2, 2, 3)), perturb=rng.random() < 0.5
        )
        if inst is None or validate_instance(inst) is not None:
            continue
        want = tri_realizable(inst)
        try:
            lay = realize_triangulation(inst)
            got = True
            assert set(inst.edges()) <= contact_pairs(lay)
        except TriangulationInfeasibleError:
            got = False
        assert got == want
        checked += 1
