"""JSON documents for instances, layouts, DAGs and plane triangulations.

Rationals travel as exact ``"p/q"`` strings with an explicit denominator.
Every emitter writes fields in a fixed order, so a document we produced
parses and re-serializes to the same bytes.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import FormatError
from .geometry import (
    BoxSpec,
    Layout,
    ProfitGraph,
    detect_contacts,
    realized_profit,
)
from .hier import EmbeddedDag
from .triangulation import TriangulationInstance


def frac_str(value: Fraction) -> str:
    q = Fraction(value)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise FormatError(f"{where}: expected a \"p/q\" string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"{where}: bad rational {value!r}")
    raise FormatError(f"{where}: expected a \"p/q\" string, got {value!r}")


def _require(doc, key: str, kind, where: str):
    if not isinstance(doc, dict):
        raise FormatError(f"{where}: expected an object")
    if key not in doc:
        raise FormatError(f"{where}: missing field {key!r}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise FormatError(f"{where}: field {key!r} has wrong type")
    return value


def _box_spec(entry, where: str) -> BoxSpec:
    bid = _require(entry, "id", str, where)
    w = parse_frac(_require(entry, "w", None, where), f"{where}.w")
    h = parse_frac(_require(entry, "h", None, where), f"{where}.h")
    try:
        return BoxSpec(bid, w, h)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}")


# ---------------------------------------------------------------------------
# layouts


def layout_to_doc(lay: Layout, graph: ProfitGraph) -> dict:
    """Canonical layout document: boxes sorted by id, contacts recomputed."""
    boxes = []
    for bid in lay.ids():
        b = lay.boxes[bid]
        x, y = lay.pos[bid]
        boxes.append(
            {
                "id": bid,
                "w": frac_str(b.w),
                "h": frac_str(b.h),
                "x": frac_str(x),
                "y": frac_str(y),
            }
        )
    contacts = [
        {
            "a": c.a,
            "b": c.b,
            "orientation": c.orientation,
            "degenerate": c.degenerate,
        }
        for c in detect_contacts(lay)
    ]
    return {
        "boxes": boxes,
        "contacts": contacts,
        "realized_profit": frac_str(realized_profit(lay, graph)),
        "total_profit": frac_str(graph.total_profit()),
    }


def parse_layout(doc) -> Layout:
    """Rebuild the Layout; stored contact/profit fields are not trusted."""
    entries = _require(doc, "boxes", list, "layout")
    lay = Layout()
    for i, entry in enumerate(entries):
        where = f"layout.boxes[{i}]"
        spec = _box_spec(entry, where)
        x = parse_frac(_require(entry, "x", None, where), f"{where}.x")
        y = parse_frac(_require(entry, "y", None, where), f"{where}.y")
        if spec.id in lay.boxes:
            raise FormatError(f"{where}: duplicate id {spec.id!r}")
        lay.place(spec, x, y)
    detect_contacts(lay)  # raises OverlapError on an invalid layout
    return lay


# ---------------------------------------------------------------------------
# instances (boxes + profit graph, optional labels and witness)


@dataclass(frozen=True)
class InstanceDoc:
    boxes: Tuple[BoxSpec, ...]
    graph: ProfitGraph
    labels: Dict[str, str]
    witness: Optional[Layout]

    def box_map(self) -> Dict[str, BoxSpec]:
        return {b.id: b for b in self.boxes}


def instance_to_doc(
    boxes: Sequence[BoxSpec],
    graph: ProfitGraph,
    labels: Optional[Mapping[str, str]] = None,
    witness: Optional[Layout] = None,
) -> dict:
    doc = {
        "boxes": [
            {"id": b.id, "w": frac_str(b.w), "h": frac_str(b.h)} for b in boxes
        ],
        "profits": [
            {"a": a, "b": b, "p": frac_str(p)} for a, b, p in graph.edges()
        ],
    }
    if labels:
        doc["labels"] = {bid: labels[bid] for bid in sorted(labels)}
    if witness is not None:
        doc["witness"] = layout_to_doc(witness, graph)
    return doc


def parse_instance(doc) -> InstanceDoc:
    entries = _require(doc, "boxes", list, "instance")
    boxes: List[BoxSpec] = []
    ids = set()
    for i, entry in enumerate(entries):
        spec = _box_spec(entry, f"instance.boxes[{i}]")
        if spec.id in ids:
            raise FormatError(f"instance.boxes[{i}]: duplicate id {spec.id!r}")
        ids.add(spec.id)
        boxes.append(spec)
    graph = ProfitGraph(vertices=ids)
    seen_pairs = set()
    for i, entry in enumerate(_require(doc, "profits", list, "instance")):
        where = f"instance.profits[{i}]"
        a = _require(entry, "a", str, where)
        b = _require(entry, "b", str, where)
        p = parse_frac(_require(entry, "p", None, where), f"{where}.p")
        if a not in ids or b not in ids:
            raise FormatError(f"{where}: unknown box id")
        if a == b:
            raise FormatError(f"{where}: self-loop on {a!r}")
        key = ProfitGraph.key(a, b)
        if key in seen_pairs:
            raise FormatError(f"{where}: duplicate edge {key}")
        seen_pairs.add(key)
        if p < 0:
            raise FormatError(f"{where}: negative profit")
        graph.add_edge(a, b, p)
    labels: Dict[str, str] = {}
    if "labels" in doc:
        raw = _require(doc, "labels", dict, "instance")
        for bid, label in raw.items():
            if bid not in ids:
                raise FormatError(f"instance.labels: unknown box id {bid!r}")
            if not isinstance(label, str):
                raise FormatError(f"instance.labels[{bid!r}]: not a string")
            labels[bid] = label
    witness = None
    if "witness" in doc:
        witness = parse_layout(_require(doc, "witness", dict, "instance"))
        if set(witness.boxes) != ids:
            raise FormatError("instance.witness: box ids differ from instance")
    return InstanceDoc(tuple(boxes), graph, labels, witness)


# ---------------------------------------------------------------------------
# embedded DAGs (edges directed child -> parent, toward the sink)


def dag_to_doc(dag: EmbeddedDag, boxes: Mapping[str, BoxSpec]) -> dict:
    return {
        "boxes": [
            {"id": v, "w": frac_str(boxes[v].w), "h": frac_str(boxes[v].h)}
            for v in dag.vertices
        ],
        "edges": [[u, v] for u, v in dag.edges],
        "rotation": {v: list(dag.rotation.get(v, ())) for v in dag.vertices},
    }


def parse_dag(doc) -> Tuple[EmbeddedDag, Dict[str, BoxSpec]]:
    entries = _require(doc, "boxes", list, "dag")
    boxes: Dict[str, BoxSpec] = {}
    order: List[str] = []
    for i, entry in enumerate(entries):
        spec = _box_spec(entry, f"dag.boxes[{i}]")
        if spec.id in boxes:
            raise FormatError(f"dag.boxes[{i}]: duplicate id {spec.id!r}")
        boxes[spec.id] = spec
        order.append(spec.id)
    edges: List[Tuple[str, str]] = []
    for i, entry in enumerate(_require(doc, "edges", list, "dag")):
        where = f"dag.edges[{i}]"
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(e, str) for e in entry)
        ):
            raise FormatError(f"{where}: expected [child, parent]")
        u, v = entry
        if u not in boxes or v not in boxes:
            raise FormatError(f"{where}: unknown vertex")
        edges.append((u, v))
    rotation: Dict[str, Tuple[str, ...]] = {}
    for v, row in _require(doc, "rotation", dict, "dag").items():
        if v not in boxes:
            raise FormatError(f"dag.rotation: unknown vertex {v!r}")
        if not isinstance(row, list) or not all(
            isinstance(u, str) and u in boxes for u in row
        ):
            raise FormatError(f"dag.rotation[{v!r}]: bad neighbor list")
        rotation[v] = tuple(row)
    return EmbeddedDag(tuple(order), tuple(edges), rotation), boxes


# ---------------------------------------------------------------------------
# plane triangulations with a labeled outer 4-cycle


def triangulation_to_doc(inst: TriangulationInstance) -> dict:
    order = sorted(inst.boxes)
    return {
        "boxes": [
            {
                "id": v,
                "w": frac_str(inst.boxes[v].w),
                "h": frac_str(inst.boxes[v].h),
            }
            for v in order
        ],
        "rotation": {v: list(inst.rotation.get(v, ())) for v in order},
        "outer": {
            "N": inst.outer[0],
            "E": inst.outer[1],
            "S": inst.outer[2],
            "W": inst.outer[3],
        },
    }


def parse_triangulation(doc) -> TriangulationInstance:
    entries = _require(doc, "boxes", list, "triangulation")
    boxes: Dict[str, BoxSpec] = {}
    for i, entry in enumerate(entries):
        spec = _box_spec(entry, f"triangulation.boxes[{i}]")
        if spec.id in boxes:
            raise FormatError(
                f"triangulation.boxes[{i}]: duplicate id {spec.id!r}"
            )
        boxes[spec.id] = spec
    rotation: Dict[str, Tuple[str, ...]] = {}
    for v, row in _require(doc, "rotation", dict, "triangulation").items():
        if v not in boxes:
            raise FormatError(f"triangulation.rotation: unknown vertex {v!r}")
        if not isinstance(row, list) or not all(
            isinstance(u, str) and u in boxes for u in row
        ):
            raise FormatError(f"triangulation.rotation[{v!r}]: bad list")
        rotation[v] = tuple(row)
    outer_doc = _require(doc, "outer", dict, "triangulation")
    sides = []
    for side in ("N", "E", "S", "W"):
        vid = _require(outer_doc, side, str, "triangulation.outer")
        if vid not in boxes:
            raise FormatError(f"triangulation.outer.{side}: unknown id {vid!r}")
        sides.append(vid)
    return TriangulationInstance(boxes, rotation, tuple(sides))


# ---------------------------------------------------------------------------
# document <-> text


def dumps_doc(doc: dict) -> str:
    """Fixed rendering (2-space indent, trailing newline) for byte-stable
    output files."""
    return json.dumps(doc, indent=2, ensure_ascii=True) + "\n"


def loads_doc(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise FormatError("top-level JSON value must be an object")
    return doc
