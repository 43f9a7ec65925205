"""Undirected simple graphs: parsing, validation, classification, generation."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from nbwalk.errors import (
    DuplicateEdgeError,
    GenerationExhausted,
    InfeasibleProfile,
    MalformedLineError,
    MinDegreeViolation,
    SelfLoopError,
    TooFewVerticesError,
)
from nbwalk.rng import CounterRNG

VERTEX_PRAGMA = "# vertices:"


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph with minimum degree at least 2.

    Vertices are dense ids ``0..n-1``; ``labels[i]`` is the external name of
    vertex ``i``. ``adjacency[i]`` is the sorted tuple of neighbours of ``i``.
    """

    n: int
    m: int
    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | int | None = None,
    ) -> "Graph":
        edges = list(edges)
        if labels is None:
            n = 1 + max((max(e) for e in edges), default=-1)
            labels = [str(i) for i in range(n)]
        elif isinstance(labels, int):
            labels = [str(i) for i in range(labels)]
        labels = tuple(str(x) for x in labels)
        n = len(labels)
        if n < 2:
            raise TooFewVerticesError(f"graph needs at least 2 vertices, got {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for lineno, (u, v) in enumerate(edges, start=1):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
            if u == v:
                raise SelfLoopError("self-loop", line=lineno, vertex=labels[u])
            if v in nbrs[u]:
                raise DuplicateEdgeError(
                    f"duplicate edge {labels[u]}-{labels[v]}", line=lineno
                )
            nbrs[u].add(v)
            nbrs[v].add(u)
        for x in range(n):
            if len(nbrs[x]) < 2:
                raise MinDegreeViolation(
                    f"degree {len(nbrs[x])} is below the minimum of 2", vertex=labels[x]
                )
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        m = sum(len(a) for a in adjacency) // 2
        return cls(n=n, m=m, adjacency=adjacency, labels=labels)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    @property
    def volume(self) -> int:
        return int(self.degrees.sum())

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges as ``(u, v)`` with ``u < v``, sorted."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no vertex labelled {label!r}") from None

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def two_coloring(self) -> list[int] | None:
        """Proper 2-colouring (per component, lowest id coloured 0) or None."""
        color = [-1] * self.n
        for root in range(self.n):
            if color[root] >= 0:
                continue
            color[root] = 0
            stack = [root]
            while stack:
                x = stack.pop()
                for y in self.adjacency[x]:
                    if color[y] < 0:
                        color[y] = 1 - color[x]
                        stack.append(y)
                    elif color[y] == color[x]:
                        return None
        return color


# -- parsing and serialization ---------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse ``<label> <label>`` lines into a validated :class:`Graph`.

    Blank lines and ``#`` comments are ignored. Labels get dense ids in order
    of first appearance, unless a leading ``# vertices: a b c`` line (written
    by :func:`serialize_edge_list`) fixes the order explicitly.
    """
    ids: dict[str, int] = {}
    labels: list[str] = []
    edges: list[tuple[int, int]] = []
    lines: list[int] = []

    def intern(label: str) -> int:
        if label not in ids:
            ids[label] = len(labels)
            labels.append(label)
        return ids[label]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith(VERTEX_PRAGMA) and not edges:
            for label in stripped[len(VERTEX_PRAGMA):].split():
                intern(label)
            continue
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise MalformedLineError(
                f"expected two vertex labels, found {len(parts)} fields", line=lineno
            )
        a, b = parts
        if a == b:
            raise SelfLoopError("self-loop", line=lineno, vertex=a)
        edges.append((intern(a), intern(b)))
        lines.append(lineno)

    if len(labels) < 2:
        raise TooFewVerticesError(f"graph needs at least 2 vertices, got {len(labels)}")
    seen: set[tuple[int, int]] = set()
    for (u, v), lineno in zip(edges, lines):
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge {labels[u]}-{labels[v]}", line=lineno)
        seen.add(key)
    return Graph.from_edges(edges, labels)


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))


def serialize_edge_list(g: Graph) -> str:
    """Canonical text form: vertex-order pragma, then edges sorted by ids."""
    out = [f"{VERTEX_PRAGMA} {' '.join(g.labels)}"]
    out.extend(f"{g.labels[u]} {g.labels[v]}" for u, v in g.edges())
    return "\n".join(out) + "\n"


def load_fixture(name: str) -> Graph:
    """Load one of the bundled fixture graphs (``diamond``, ``bowtie``, ...)."""
    ref = resources.files("nbwalk").joinpath("data", f"{name}.edges")
    return parse_edge_list(ref.read_text(encoding="utf-8"))


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("nbwalk").joinpath("data", f"{name}.edges")))


FIXTURES = (
    "diamond", "bowtie", "triangle_pendant", "triangle", "k4", "petersen", "c4", "k23", "k34",
)


# -- matrices ----------------------------------------------------------------

def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1.0
    return a


def degree_matrix(g: Graph) -> np.ndarray:
    return np.diag(g.degrees.astype(float))


# -- classification ----------------------------------------------------------

@dataclass(frozen=True)
class DegreeProfile:
    """Degree structure of a graph.

    ``kind`` is ``"regular"`` (degree ``d``), ``"biregular"`` (``r`` vertices
    of degree ``c`` and ``s`` of degree ``d`` with ``r >= s``) or ``"general"``.
    """

    kind: str
    d: int | None = None
    c: int | None = None
    r: int | None = None
    s: int | None = None
    bipartite: bool = False
    part_sizes: tuple[int, int] | None = None

    def __str__(self) -> str:
        if self.kind == "regular":
            return f"Regular(d={self.d})"
        if self.kind == "biregular":
            return f"Biregular(c={self.c}, d={self.d}, r={self.r}, s={self.s})"
        return "General"


def classify(g: Graph) -> DegreeProfile:
    coloring = g.two_coloring()
    bipartite = coloring is not None
    sizes = None
    if bipartite:
        ones = sum(coloring)
        sizes = tuple(sorted((g.n - ones, ones), reverse=True))
    distinct = sorted(set(int(x) for x in g.degrees))
    if len(distinct) == 1:
        return DegreeProfile("regular", d=distinct[0], bipartite=bipartite, part_sizes=sizes)
    if bipartite and len(distinct) == 2:
        deg = g.degrees
        # Degree classes form the bipartition exactly when no edge stays inside one.
        if all(deg[u] != deg[v] for u, v in g.edges()):
            lo, hi = distinct
            count = {x: int((deg == x).sum()) for x in distinct}
            # Orientation: larger part first; r == s cannot happen with lo != hi.
            if count[lo] >= count[hi]:
                c, d = lo, hi
            else:
                c, d = hi, lo
            r, s = count[c], count[d]
            return DegreeProfile(
                "biregular", d=d, c=c, r=r, s=s, bipartite=True, part_sizes=(r, s)
            )
    return DegreeProfile("general", bipartite=bipartite, part_sizes=sizes)


# -- generation --------------------------------------------------------------

@dataclass(frozen=True)
class Regular:
    d: int
    n: int


@dataclass(frozen=True)
class Biregular:
    c: int
    d: int
    r: int
    s: int


@dataclass(frozen=True)
class GnpLike:
    n: int
    p: float


Profile = Union[Regular, Biregular, GnpLike]


def _check_feasible(profile: Profile) -> None:
    if isinstance(profile, Regular):
        d, n = profile.d, profile.n
        if d < 2 or n <= d:
            raise InfeasibleProfile(f"need 2 <= d < n, got d={d}, n={n}")
        if (n * d) % 2:
            raise InfeasibleProfile(f"n*d must be even, got n={n}, d={d}")
    elif isinstance(profile, Biregular):
        c, d, r, s = profile.c, profile.d, profile.r, profile.s
        if min(c, d) < 2:
            raise InfeasibleProfile("both degrees must be at least 2")
        if r * c != s * d:
            raise InfeasibleProfile(f"r*c must equal s*d, got {r}*{c} != {s}*{d}")
        if c > s or d > r:
            raise InfeasibleProfile("degree exceeds the size of the opposite part")
    elif isinstance(profile, GnpLike):
        if profile.n < 3 or not 0.0 < profile.p <= 1.0:
            raise InfeasibleProfile(f"need n >= 3 and 0 < p <= 1, got {profile}")
    else:
        raise TypeError(f"unknown profile {profile!r}")


def _pair_incrementally(
    left: list[int], right: list[int] | None, rng: CounterRNG, max_rounds: int = 100
) -> set[tuple[int, int]] | None:
    """Random stub matching that keeps valid pairs and reshuffles the rest.

    With ``right=None`` the stubs in ``left`` are matched among themselves
    (regular case); otherwise ``left`` stubs are matched to ``right`` stubs
    (bipartite case). Returns None when the leftover stubs admit no new
    simple edge.
    """
    edges: set[tuple[int, int]] = set()
    for _ in range(max_rounds):
        if right is None:
            rng.shuffle(left)
            pairs = list(zip(left[0::2], left[1::2]))
        else:
            rng.shuffle(right)
            pairs = list(zip(left, right))
        rest_a: list[int] = []
        rest_b: list[int] = []
        for a, b in pairs:
            key = (min(a, b), max(a, b))
            if a != b and key not in edges:
                edges.add(key)
            else:
                rest_a.append(a)
                rest_b.append(b)
        if not rest_a:
            return edges
        if right is None:
            pool = sorted(set(rest_a + rest_b))
            ok = any(
                (x, y) not in edges for i, x in enumerate(pool) for y in pool[i + 1:]
            )
            left = rest_a + rest_b
        else:
            ok = any((min(x, y), max(x, y)) not in edges for x in set(rest_a) for y in set(rest_b))
            left, right = rest_a, rest_b
        if not ok:
            return None
    return None


def _attempt(profile: Profile, rng: CounterRNG) -> list[tuple[int, int]] | None:
    if isinstance(profile, Regular):
        stubs = [v for v in range(profile.n) for _ in range(profile.d)]
        edges = _pair_incrementally(stubs, None, rng)
    elif isinstance(profile, Biregular):
        left = [v for v in range(profile.r) for _ in range(profile.c)]
        right = [profile.r + v for v in range(profile.s) for _ in range(profile.d)]
        edges = _pair_incrementally(left, right, rng)
    else:
        n, p = profile.n, profile.p
        edges = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p}
        deg = [0] * n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        if min(deg) < 2:
            return None
    return None if edges is None else sorted(edges)


def generate_test_graph(
    profile: Profile,
    seed: int,
    *,
    connected: bool = False,
    max_attempts: int = 2000,
) -> Graph:
    """Sample a simple graph for ``profile`` by configuration-model pairing.

    Stub pairings that would create loops or repeated edges are redrawn from
    the same seeded stream, and a whole attempt restarts when no valid pairing
    remains, so the result is a deterministic function of
    ``(profile, seed)``. Vertex ids of a biregular profile list the ``r``
    degree-``c`` vertices first.
    """
    _check_feasible(profile)
    rng = CounterRNG(seed)
    if isinstance(profile, Biregular):
        n = profile.r + profile.s
    else:
        n = profile.n
    for _ in range(max_attempts):
        edges = _attempt(profile, rng)
        if edges is None:
            continue
        g = Graph.from_edges(edges, n)
        if connected and not g.is_connected():
            continue
        return g
    raise GenerationExhausted(f"no valid graph for {profile} after {max_attempts} attempts")
