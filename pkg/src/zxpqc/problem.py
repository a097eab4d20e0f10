"""MaxCut instances and ansatz descriptions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .errors import EdgeNotInGraph, GraphFormatError, SpecMismatch

Edge = Tuple[int, int]


@dataclass(frozen=True)
class ProblemGraph:
    """Undirected simple graph on vertices ``0..n-1``.

    Edges are stored as ``(min, max)`` pairs in insertion order, which fixes
    the output order of per-edge results.
    """

    n: int
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 0:
            raise GraphFormatError("vertex count must be non-negative")
        seen = set()
        norm = []
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphFormatError(f"self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={self.n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "ProblemGraph":
        return cls(n, tuple(tuple(e) for e in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in set(self.edges)

    def check_edge(self, u: int, v: int) -> Edge:
        key = (min(u, v), max(u, v))
        if u == v or key not in set(self.edges):
            raise EdgeNotInGraph(f"({u}, {v}) is not an edge of the graph")
        return key

    def neighbors(self, v: int) -> set:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def adjacency(self) -> Dict[int, set]:
        adj = {v: set() for v in range(self.n)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def cut_value(self, bits: Sequence[int]) -> int:
        return sum(1 for a, b in self.edges if bits[a] != bits[b])

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"] + [f"{a} {b}" for a, b in self.edges]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


def parse_graph(text: str) -> ProblemGraph:
    """Parse ``n m`` followed by ``m`` lines ``u v``; ``#`` starts a comment."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            rows.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {raw!r}") from None
    if not rows:
        raise GraphFormatError("missing header line 'n m'")
    (n, m), body = rows[0], rows[1:]
    if n < 0 or m < 0:
        raise GraphFormatError("negative counts in header")
    if len(body) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}")
    return ProblemGraph.from_edges(n, body)


def load_graph(path: str) -> ProblemGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def ring(n: int) -> ProblemGraph:
    return ProblemGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> ProblemGraph:
    return ProblemGraph.from_edges(n, itertools.combinations(range(n), 2))


def path(n: int) -> ProblemGraph:
    return ProblemGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def example_graph() -> ProblemGraph:
    """Four vertices: a triangle 1-2-3 with a pendant vertex 0 on vertex 1."""
    return ProblemGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (1, 3)])


def random_graph(n: int, p: float, rng: np.random.Generator, connected: bool = False,
                 min_edges: int = 1) -> ProblemGraph:
    while True:
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
        g = ProblemGraph.from_edges(n, edges)
        if len(edges) < min_edges:
            continue
        if connected and not g.is_connected():
            continue
        return g


def all_graphs(n: int) -> Iterable[ProblemGraph]:
    """Every labelled simple graph on ``n`` vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield ProblemGraph.from_edges(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


# -- ansatz descriptions -------------------------------------------------------

@dataclass(frozen=True)
class RyProduct:
    """Product state of single-qubit Y rotations, ``R_Y(alpha_i)|0>``."""

    n: int
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"alpha_{i}" for i in range(self.n)))
        if len(self.names) != self.n:
            raise SpecMismatch(f"RyProduct needs {self.n} parameter names, got {len(self.names)}")

    def params(self) -> List[str]:
        return list(self.names)


@dataclass(frozen=True)
class QAOA:
    """Depth-``p`` QAOA with phase operator exp(-i gamma C) and mixer exp(i beta X / 2) per qubit.

    With ``beta = -2 * beta_tilde`` the mixer equals exp(-i beta_tilde sum X).
    """

    p: int = 1
    gammas: Tuple[str, ...] = ()
    betas: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.p < 1:
            raise SpecMismatch("QAOA needs p >= 1")
        if not self.gammas:
            object.__setattr__(self, "gammas", default_qaoa_names(self.p)[0])
        if not self.betas:
            object.__setattr__(self, "betas", default_qaoa_names(self.p)[1])
        if len(self.gammas) != self.p or len(self.betas) != self.p:
            raise SpecMismatch("QAOA needs one gamma and one beta per layer")

    def params(self) -> List[str]:
        return [x for pair in zip(self.gammas, self.betas) for x in pair]


def default_qaoa_names(p: int) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    if p == 1:
        return ("gamma",), ("beta",)
    return (tuple(f"gamma_{k}" for k in range(1, p + 1)),
            tuple(f"beta_{k}" for k in range(1, p + 1)))


HWEFF_PARAMS = ("gamma_11", "gamma_21", "gamma_31", "beta_11", "beta_21", "beta_31",
                "gamma_12", "gamma_22", "gamma_32", "beta_12", "beta_22", "beta_32")


@dataclass(frozen=True)
class HwEffSU2:
    """Three-qubit hardware-efficient ansatz; see :mod:`zxpqc.hweff` for the layout."""

    n: int = 3

    def __post_init__(self):
        if self.n != 3:
            raise SpecMismatch("the hardware-efficient ansatz is defined for 3 qubits")

    def params(self) -> List[str]:
        return list(HWEFF_PARAMS)


AnsatzSpec = object  # RyProduct | QAOA | HwEffSU2


def check_arity(g: ProblemGraph, a) -> None:
    if isinstance(a, RyProduct) and a.n != g.n:
        raise SpecMismatch(f"RyProduct on {a.n} qubits does not fit a graph with {g.n} vertices")
    if isinstance(a, HwEffSU2) and g.n != 3:
        raise SpecMismatch("the hardware-efficient ansatz needs a 3-vertex graph")
    if not isinstance(a, (RyProduct, QAOA, HwEffSU2)):
        raise SpecMismatch(f"unknown ansatz {a!r}")
