"""Open ZX multigraphs with an explicit global scalar.

Vertices are Z/X spiders carrying a :class:`LinearPhase`, or boundary vertices
(``"in"``/``"out"``) with exactly one incident edge.  Edges form a multiset;
self-loops are allowed.  A wire running straight from one boundary to another
is stored with a phase-0, degree-2 Z spider in the middle.

The mutating methods (``add_vertex``, ``add_edge`` ...) are for builders and
the rewrite engine, which always work on a private copy.  The module-level
operations ``compose``, ``tensor`` and ``adjoint`` return new diagrams.
"""
from __future__ import annotations

import json
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import ArityMismatch, BoundaryDegreeViolation, DanglingWire, SchemaViolation
from .scalar import ONE, LinearPhase, ScalarExpr

Z = "Z"
X = "X"
IN = "in"
OUT = "out"
SPIDER_KINDS = (Z, X)
KINDS = (Z, X, IN, OUT)

ZERO_PHASE = LinearPhase()


def opposite(kind: str) -> str:
    return X if kind == Z else Z


class Diagram:
    __slots__ = ("_kind", "_phase", "_adj", "inputs", "outputs", "scalar", "_next")

    def __init__(self):
        self._kind: Dict[int, str] = {}
        self._phase: Dict[int, LinearPhase] = {}
        self._adj: Dict[int, Dict[int, int]] = {}
        self.inputs: List[int] = []
        self.outputs: List[int] = []
        self.scalar: ScalarExpr = ONE
        self._next = 0

    # -- construction -------------------------------------------------------

    def add_vertex(self, kind: str, phase: Optional[LinearPhase] = None, vid: Optional[int] = None) -> int:
        if kind not in KINDS:
            raise ValueError(f"unknown vertex kind {kind!r}")
        if vid is None:
            vid = self._next
        elif vid in self._kind:
            raise ValueError(f"duplicate vertex id {vid}")
        self._next = max(self._next, vid + 1)
        self._kind[vid] = kind
        if kind in SPIDER_KINDS:
            self._phase[vid] = phase if phase is not None else ZERO_PHASE
        elif phase is not None and not phase.is_zero:
            raise ValueError("boundary vertices carry no phase")
        self._adj[vid] = {}
        return vid

    def add_spider(self, kind: str, phase: Optional[LinearPhase] = None) -> int:
        return self.add_vertex(kind, phase)

    def add_input(self) -> int:
        v = self.add_vertex(IN)
        self.inputs.append(v)
        return v

    def add_output(self) -> int:
        v = self.add_vertex(OUT)
        self.outputs.append(v)
        return v

    def add_edge(self, u: int, v: int, count: int = 1) -> None:
        if u not in self._kind or v not in self._kind:
            raise DanglingWire(f"edge ({u}, {v}) references a missing vertex")
        if count <= 0:
            return
        self._adj[u][v] = self._adj[u].get(v, 0) + count
        if u != v:
            self._adj[v][u] = self._adj[v].get(u, 0) + count

    def remove_edge(self, u: int, v: int, count: int = 1) -> None:
        have = self._adj[u].get(v, 0)
        if have < count:
            raise ValueError(f"edge ({u}, {v}) has multiplicity {have} < {count}")
        if have == count:
            del self._adj[u][v]
            if u != v:
                del self._adj[v][u]
        else:
            self._adj[u][v] = have - count
            if u != v:
                self._adj[v][u] = have - count

    def remove_vertex(self, v: int) -> None:
        for w in list(self._adj[v]):
            if w != v:
                del self._adj[w][v]
        del self._adj[v]
        del self._kind[v]
        self._phase.pop(v, None)

    def set_phase(self, v: int, phase: LinearPhase) -> None:
        if self._kind[v] not in SPIDER_KINDS:
            raise ValueError("boundary vertices carry no phase")
        self._phase[v] = phase

    def multiply_scalar(self, s: ScalarExpr) -> None:
        self.scalar = self.scalar * s

    def copy(self) -> "Diagram":
        d = Diagram.__new__(Diagram)
        d._kind = dict(self._kind)
        d._phase = dict(self._phase)
        d._adj = {v: dict(nb) for v, nb in self._adj.items()}
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d.scalar = self.scalar
        d._next = self._next
        return d

    # -- queries ------------------------------------------------------------

    def vertices(self) -> List[int]:
        return sorted(self._kind)

    def spiders(self) -> List[int]:
        return sorted(v for v, k in self._kind.items() if k in SPIDER_KINDS)

    def __contains__(self, v: int) -> bool:
        return v in self._kind

    def kind(self, v: int) -> str:
        return self._kind[v]

    def phase(self, v: int) -> LinearPhase:
        return self._phase.get(v, ZERO_PHASE)

    def is_spider(self, v: int) -> bool:
        return self._kind.get(v) in SPIDER_KINDS

    def is_boundary(self, v: int) -> bool:
        return self._kind.get(v) in (IN, OUT)

    def neighbors(self, v: int) -> List[int]:
        """Distinct neighbours other than ``v`` itself, sorted."""
        return sorted(w for w in self._adj[v] if w != v)

    def incident(self, v: int) -> Dict[int, int]:
        """Neighbour -> edge multiplicity (``v`` maps to its self-loop count)."""
        return self._adj[v]

    def edge_count(self, u: int, v: int) -> int:
        return self._adj[u].get(v, 0)

    def self_loops(self, v: int) -> int:
        return self._adj[v].get(v, 0)

    def degree(self, v: int) -> int:
        nb = self._adj[v]
        return sum(nb.values()) + nb.get(v, 0)

    def edges(self) -> List[Tuple[int, int]]:
        """Sorted edge list with multiplicity, each pair as (min, max)."""
        out = []
        for u, nb in self._adj.items():
            for v, c in nb.items():
                if u <= v:
                    out.extend([(u, v)] * c)
        out.sort()
        return out

    def num_edges(self) -> int:
        return len(self.edges())

    def num_vertices(self) -> int:
        return len(self._kind)

    @property
    def arity(self) -> Tuple[int, int]:
        return (len(self.inputs), len(self.outputs))

    @property
    def is_closed(self) -> bool:
        return not self.inputs and not self.outputs

    def params(self) -> set:
        out = set(self.scalar.params())
        for ph in self._phase.values():
            out |= ph.params()
        return out

    def boundary_neighbor(self, b: int) -> int:
        (w,) = self._adj[b].keys()
        return w

    # -- invariants ---------------------------------------------------------

    def validate(self) -> None:
        seen = set()
        for v in self.inputs:
            if self._kind.get(v) != IN:
                raise DanglingWire(f"input {v} is not an input boundary vertex")
            seen.add(v)
        for v in self.outputs:
            if self._kind.get(v) != OUT:
                raise DanglingWire(f"output {v} is not an output boundary vertex")
            if v in seen:
                raise DanglingWire(f"vertex {v} is both input and output")
            seen.add(v)
        if len(seen) != len(self.inputs) + len(self.outputs):
            raise DanglingWire("repeated boundary id")
        for v, k in self._kind.items():
            if k in (IN, OUT):
                if v not in seen:
                    raise DanglingWire(f"boundary vertex {v} is not listed as input/output")
                if self.degree(v) != 1 or self.self_loops(v):
                    raise BoundaryDegreeViolation(f"boundary vertex {v} has degree {self.degree(v)}")
        for u, nb in self._adj.items():
            for v, c in nb.items():
                if v not in self._kind or c <= 0 or self._adj[v].get(u) != c:
                    raise DanglingWire(f"inconsistent edge ({u}, {v})")

    def normalize_bare_wires(self) -> None:
        """Insert a phase-0 Z spider into every boundary-to-boundary edge."""
        for b in list(self._kind):
            if self._kind.get(b) not in (IN, OUT):
                continue
            for w in list(self._adj[b]):
                if self.is_boundary(w) and w > b:
                    for _ in range(self._adj[b][w]):
                        self.remove_edge(b, w)
                        s = self.add_vertex(Z)
                        self.add_edge(b, s)
                        self.add_edge(s, w)

    # -- equality / display -------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return (self._kind == other._kind and self._phase == other._phase
                and self.edges() == other.edges() and self.inputs == other.inputs
                and self.outputs == other.outputs and self.scalar == other.scalar)

    __hash__ = None

    def __repr__(self) -> str:
        nz = sum(1 for k in self._kind.values() if k == Z)
        nx = sum(1 for k in self._kind.values() if k == X)
        return (f"Diagram(Z={nz}, X={nx}, edges={self.num_edges()}, "
                f"arity={self.arity}, scalar={self.scalar})")

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        verts = []
        for v in self.vertices():
            entry = {"id": v, "kind": self._kind[v]}
            if self._kind[v] in SPIDER_KINDS:
                entry["phase"] = self._phase[v].to_json()
            verts.append(entry)
        return {
            "vertices": verts,
            "edges": [[u, v] for u, v in self.edges()],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "scalar": self.scalar.to_json(),
            "params": sorted(self.params()),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc, path: str = "$") -> "Diagram":
        if not isinstance(doc, dict):
            raise SchemaViolation(path, "diagram must be an object")
        for key in ("vertices", "edges", "inputs", "outputs"):
            if key not in doc:
                raise SchemaViolation(path, f"missing key {key!r}")
        unknown = set(doc) - {"vertices", "edges", "inputs", "outputs", "scalar", "params"}
        if unknown:
            raise SchemaViolation(path, f"unknown keys {sorted(unknown)}")
        d = cls()
        if not isinstance(doc["vertices"], list):
            raise SchemaViolation(path + ".vertices", "must be a list")
        for i, entry in enumerate(doc["vertices"]):
            p = f"{path}.vertices[{i}]"
            if not isinstance(entry, dict):
                raise SchemaViolation(p, "vertex must be an object")
            vid = entry.get("id")
            if not isinstance(vid, int) or isinstance(vid, bool) or vid < 0:
                raise SchemaViolation(p + ".id", "must be a non-negative integer")
            kind = entry.get("kind")
            if kind not in KINDS:
                raise SchemaViolation(p + ".kind", f"unknown kind {kind!r}")
            if vid in d._kind:
                raise SchemaViolation(p + ".id", f"duplicate id {vid}")
            phase = None
            if "phase" in entry:
                if kind not in SPIDER_KINDS:
                    raise SchemaViolation(p + ".phase", "boundary vertices carry no phase")
                phase = LinearPhase.from_json(entry["phase"], p + ".phase")
            d.add_vertex(kind, phase, vid)
        edges = doc["edges"]
        if not isinstance(edges, list):
            raise SchemaViolation(path + ".edges", "must be a list")
        for i, e in enumerate(edges):
            p = f"{path}.edges[{i}]"
            if (not isinstance(e, list) or len(e) != 2
                    or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
                raise SchemaViolation(p, "edge must be a pair of integers")
            if e[0] not in d._kind or e[1] not in d._kind:
                raise SchemaViolation(p, f"edge references missing vertex {e}")
            d.add_edge(e[0], e[1])
        for key in ("inputs", "outputs"):
            ids = doc[key]
            if not isinstance(ids, list) or not all(isinstance(x, int) for x in ids):
                raise SchemaViolation(f"{path}.{key}", "must be a list of integers")
            setattr(d, key, list(ids))
        if "scalar" in doc:
            d.scalar = ScalarExpr.from_json(doc["scalar"], path + ".scalar")
        try:
            d.validate()
        except (DanglingWire, BoundaryDegreeViolation) as exc:
            raise SchemaViolation(path, str(exc)) from None
        d.normalize_bare_wires()
        return d

    @classmethod
    def loads(cls, text: str) -> "Diagram":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaViolation("$", f"invalid JSON: {exc}") from None
        return cls.from_json(doc)


# -- functional API ------------------------------------------------------------

def build(spiders: Mapping[int, Tuple[str, Optional[LinearPhase]]],
          wires: Iterable[Tuple[int, int]],
          inputs: Sequence[int] = (),
          outputs: Sequence[int] = (),
          scalar: ScalarExpr = ONE) -> Diagram:
    """Assemble a diagram from explicit ids.

    ``spiders`` maps id -> (kind, phase); boundary ids appear only in
    ``inputs``/``outputs``.  Wire endpoints must be declared.
    """
    d = Diagram()
    for vid in sorted(spiders):
        kind, phase = spiders[vid]
        if kind not in SPIDER_KINDS:
            raise ValueError(f"spider {vid} has kind {kind!r}")
        d.add_vertex(kind, phase, vid)
    for vid in inputs:
        d.add_vertex(IN, None, vid)
    for vid in outputs:
        d.add_vertex(OUT, None, vid)
    d.inputs = list(inputs)
    d.outputs = list(outputs)
    for u, v in wires:
        if u not in d or v not in d:
            raise DanglingWire(f"wire ({u}, {v}) references an undeclared vertex")
        d.add_edge(u, v)
    for b in list(inputs) + list(outputs):
        if d.degree(b) != 1 or d.self_loops(b):
            raise BoundaryDegreeViolation(f"boundary vertex {b} has degree {d.degree(b)}")
    d.scalar = scalar
    d.validate()
    d.normalize_bare_wires()
    return d


def empty() -> Diagram:
    return Diagram()


def identity(n: int = 1) -> Diagram:
    d = Diagram()
    ins = [d.add_input() for _ in range(n)]
    for i in ins:
        s = d.add_vertex(Z)
        o = d.add_output()
        d.add_edge(i, s)
        d.add_edge(s, o)
    return d


def spider_wire(kind: str, phase: LinearPhase) -> Diagram:
    """Single-qubit diagram: input -- spider(phase) -- output."""
    d = Diagram()
    i = d.add_input()
    s = d.add_vertex(kind, phase)
    o = d.add_output()
    d.add_edge(i, s)
    d.add_edge(s, o)
    return d


def _embed(target: Diagram, src: Diagram) -> Dict[int, int]:
    """Copy ``src`` into ``target`` with fresh ids; returns the id map."""
    mapping = {}
    for v in src.vertices():
        mapping[v] = target.add_vertex(src.kind(v), src._phase.get(v))
    for u, v in src.edges():
        target.add_edge(mapping[u], mapping[v])
    return mapping


def tensor(a: Diagram, b: Diagram) -> Diagram:
    d = a.copy()
    m = _embed(d, b)
    d.inputs = list(a.inputs) + [m[v] for v in b.inputs]
    d.outputs = list(a.outputs) + [m[v] for v in b.outputs]
    d.scalar = a.scalar * b.scalar
    return d


def compose(a: Diagram, b: Diagram) -> Diagram:
    """``b`` after ``a``: outputs of ``a`` are plugged into inputs of ``b``."""
    if len(a.outputs) != len(b.inputs):
        raise ArityMismatch(f"cannot plug {len(a.outputs)} outputs into {len(b.inputs)} inputs")
    d = a.copy()
    m = _embed(d, b)
    for oa, ib in zip(a.outputs, b.inputs):
        ib = m[ib]
        x = d.boundary_neighbor(oa)
        y = d.boundary_neighbor(ib)
        d.remove_vertex(oa)
        d.remove_vertex(ib)
        d.add_edge(x, y)
    d.inputs = list(a.inputs)
    d.outputs = [m[v] for v in b.outputs]
    d.scalar = a.scalar * b.scalar
    return d


def adjoint(d: Diagram) -> Diagram:
    out = Diagram()
    mapping = {}
    for v in d.vertices():
        k = d.kind(v)
        if k == IN:
            k = OUT
        elif k == OUT:
            k = IN
        mapping[v] = out.add_vertex(k, -d.phase(v) if k in SPIDER_KINDS else None, v)
    for u, v in d.edges():
        out.add_edge(u, v)
    out.inputs = list(d.outputs)
    out.outputs = list(d.inputs)
    out.scalar = d.scalar.conjugate()
    out._next = d._next
    return out


def relabel(d: Diagram) -> Diagram:
    """Copy with vertex ids renumbered 0..n-1 in sorted order."""
    out = Diagram()
    m = _embed(out, d)
    out.inputs = [m[v] for v in d.inputs]
    out.outputs = [m[v] for v in d.outputs]
    out.scalar = d.scalar
    return out
