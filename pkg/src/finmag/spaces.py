"""Finite extended metric spaces and the constructions used on them."""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DiameterExceedsTwo,
    EmptySpace,
    InfiniteDistanceUnsupported,
    NegativeOrZeroOffDiagonal,
    NonpositiveScale,
    NonzeroDiagonal,
    NotHomogeneous,
    NotSymmetric,
    SizeCapExceeded,
    TriangleViolation,
    ValidationError,
)
from .genfun import GenPoly, as_rational

INF = math.inf

HOMOGENEITY_CAP = 10
EIGEN_TOL = 1e-9


def as_distance(x):
    """Exact distance: a Fraction, or ``math.inf``."""
    if isinstance(x, float):
        if math.isinf(x) and x > 0:
            return INF
        raise TypeError("finite distances must be exact, not float")
    if isinstance(x, str) and x.strip().lower() in ("inf", "+inf", "∞"):
        return INF
    return as_rational(x)


def _check_axioms(d: Sequence[Sequence]) -> None:
    n = len(d)
    if n == 0:
        raise EmptySpace("a metric space needs at least one point")
    for row in d:
        if len(row) != n:
            raise ValidationError("distance matrix is not square")
    for i in range(n):
        if d[i][i] != 0:
            raise NonzeroDiagonal(i)
    for i in range(n):
        for j in range(n):
            if i != j and not d[i][j] > 0:
                raise NegativeOrZeroOffDiagonal(i, j)
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                raise NotSymmetric(i, j)
    for i in range(n):
        di = d[i]
        for k in range(i + 1, n):
            dik = di[k]
            for j in range(n):
                if j != i and j != k and di[j] + d[j][k] < dik:
                    raise TriangleViolation(i, k, j)


@dataclass(frozen=True, eq=True)
class FiniteMetricSpace:
    """Labelled point set with an exact distance matrix (``math.inf`` allowed).

    Construction validates the metric axioms.
    """

    labels: tuple
    dist: tuple

    def __post_init__(self):
        dist = tuple(tuple(as_distance(x) for x in row) for row in self.dist)
        labels = tuple(str(l) for l in self.labels)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "labels", labels)
        _check_axioms(dist)
        if len(labels) != len(dist):
            raise ValidationError("one label per point is required")
        if len(set(labels)) != len(labels):
            raise ValidationError("labels must be distinct")

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def has_infinite_distance(self) -> bool:
        return any(math.isinf(x) for row in self.dist for x in row)

    def finite_distances(self) -> list:
        return [x for row in self.dist for x in row if not math.isinf(x)]

    def diameter(self):
        return max(x for row in self.dist for x in row)

    def distance_values(self) -> list:
        """Sorted distinct distances, 0 included."""
        return sorted({x for row in self.dist for x in row})

    def as_float_matrix(self, inf_value: float = math.inf) -> np.ndarray:
        return np.array([[inf_value if math.isinf(x) else float(x) for x in row]
                         for row in self.dist], dtype=float)

    def relabel(self, labels: Iterable[str]) -> "FiniteMetricSpace":
        return FiniteMetricSpace(tuple(labels), self.dist)


def validate_metric(matrix, labels=None) -> FiniteMetricSpace:
    """Return the space if ``matrix`` satisfies the (extended) metric axioms."""
    rows = [list(r) for r in matrix]
    if labels is None:
        labels = [str(i) for i in range(len(rows))]
    return FiniteMetricSpace(tuple(labels), tuple(tuple(r) for r in rows))


def one_point() -> FiniteMetricSpace:
    return validate_metric([[0]])


def scale(x: FiniteMetricSpace, t) -> FiniteMetricSpace:
    t = as_rational(t)
    if t <= 0:
        raise NonpositiveScale(f"scale factor must be positive, got {t}")
    return FiniteMetricSpace(x.labels, tuple(tuple(d * t for d in row) for row in x.dist))


def uniform_space(n: int, r) -> FiniteMetricSpace:
    """``n`` points, all pairwise distances ``r``."""
    if n < 1:
        raise EmptySpace("n must be at least 1")
    r = as_rational(r)
    if r <= 0:
        raise ValidationError("r must be positive")
    return validate_metric([[0 if i == j else r for j in range(n)] for i in range(n)])


def _disjoint_labels(a: Sequence[str], b: Sequence[str]):
    if set(a).isdisjoint(b):
        return list(a), list(b)
    return [f"a:{l}" for l in a], [f"b:{l}" for l in b]


def join(x: FiniteMetricSpace, y: FiniteMetricSpace) -> FiniteMetricSpace:
    """Disjoint union with every cross distance equal to 1."""
    for name, s in (("first", x), ("second", y)):
        if s.diameter() > 2:
            raise DiameterExceedsTwo(f"{name} space has diameter {s.diameter()}")
    la, lb = _disjoint_labels(x.labels, y.labels)
    n, m = x.n, y.n
    one = Fraction(1)
    rows = [list(x.dist[i]) + [one] * m for i in range(n)]
    rows += [[one] * n + list(y.dist[j]) for j in range(m)]
    return validate_metric(rows, la + lb)


def l1_product(x: FiniteMetricSpace, y: FiniteMetricSpace) -> FiniteMetricSpace:
    """Cartesian product with ``d((a,b),(a',b')) = d(a,a') + d(b,b')``."""
    if x.has_infinite_distance() or y.has_infinite_distance():
        raise InfiniteDistanceUnsupported("l1 product needs finite distances")
    pts = list(itertools.product(range(x.n), range(y.n)))
    rows = [[x.dist[a][c] + y.dist[b][e] for (c, e) in pts] for (a, b) in pts]
    labels = [f"({x.labels[a]},{y.labels[b]})" for a, b in pts]
    return validate_metric(rows, labels)


def l1_power(x: FiniteMetricSpace, k: int) -> FiniteMetricSpace:
    if k < 1:
        raise ValueError("power must be at least 1")
    out = x
    for _ in range(k - 1):
        out = l1_product(out, x)
    return out


# -- graphs -------------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError("vertex count must be nonnegative")
        seen = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValidationError(f"self-loop at {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValidationError(f"edge {e} out of range")
            seen.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(seen))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        edges = [tuple(e) for e in edges]
        keys = [(min(i, j), max(i, j)) for i, j in edges]
        if len(set(keys)) != len(keys):
            raise ValidationError("duplicate edge")
        return cls(n, frozenset(keys))

    def neighbours(self) -> list:
        adj = [[] for _ in range(self.n)]
        for i, j in sorted(self.edges):
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def components(self) -> int:
        adj, seen, c = self.neighbours(), set(), 0
        for s in range(self.n):
            if s in seen:
                continue
            c += 1
            stack = [s]
            seen.add(s)
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return c

    def is_forest(self) -> bool:
        return len(self.edges) == self.n - self.components()


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValidationError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def complete_bipartite_graph(m: int, n: int) -> Graph:
    return Graph.from_edges(m + n, [(i, m + j) for i in range(m) for j in range(n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def graph_join(g: Graph, h: Graph) -> Graph:
    """Disjoint union plus every edge between the two vertex sets."""
    edges = set(g.edges)
    edges |= {(i + g.n, j + g.n) for i, j in h.edges}
    edges |= {(i, g.n + j) for i in range(g.n) for j in range(h.n)}
    return Graph(g.n + h.n, frozenset(edges))


def from_graph(g: Graph) -> FiniteMetricSpace:
    """Shortest-path metric with unit edges; unreachable pairs are at ``inf``."""
    adj = g.neighbours()
    rows = []
    for s in range(g.n):
        dist = [INF] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if math.isinf(dist[w]):
                    dist[w] = dist[v] + 1
                    queue.append(w)
        rows.append([x if math.isinf(x) else Fraction(x) for x in dist])
    return validate_metric(rows)


def willerton_graph() -> Graph:
    """Three isolated vertices joined to a triangle."""
    return graph_join(Graph(3, frozenset()), complete_graph(3))


def willerton_space() -> FiniteMetricSpace:
    return from_graph(willerton_graph())


def five_point_space() -> FiniteMetricSpace:
    """Two points at distance 4/3 joined to three points pairwise 2 apart."""
    return join(uniform_space(2, Fraction(4, 3)), uniform_space(3, 2))


def three_point_space() -> FiniteMetricSpace:
    """A close pair of points and a far third point."""
    return validate_metric([[0, Fraction(1, 100), 1],
                            [Fraction(1, 100), 0, 1],
                            [1, 1, 0]], ["a", "b", "c"])


# -- homogeneity --------------------------------------------------------------

def _row_key(row) -> tuple:
    return tuple(sorted(Counter(row).items(), key=lambda kv: (kv[0], kv[1])))


def _isometry_from(d, start: int, target: int) -> list | None:
    """Backtracking search for a distance-preserving permutation with
    ``start -> target``; returns the permutation or None."""
    n = len(d)
    keys = [_row_key(r) for r in d]
    if keys[start] != keys[target]:
        return None
    order = [start] + [i for i in range(n) if i != start]
    sigma = [-1] * n
    used = [False] * n

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        i = order[pos]
        candidates = [target] if pos == 0 else range(n)
        for c in candidates:
            if used[c] or keys[c] != keys[i]:
                continue
            if all(d[c][sigma[j]] == d[i][j] for j in order[:pos]):
                sigma[i] = c
                used[c] = True
                if extend(pos + 1):
                    return True
                used[c] = False
                sigma[i] = -1
        return False

    return list(sigma) if extend(0) else None


def is_homogeneous(x: FiniteMetricSpace, cap: int = HOMOGENEITY_CAP) -> bool:
    """True iff the isometry group acts transitively on the points."""
    if x.n > cap:
        raise SizeCapExceeded(f"homogeneity search is capped at {cap} points, got {x.n}")
    d = x.dist
    reached = {0}
    for p in range(1, x.n):
        if p in reached:
            continue
        sigma = _isometry_from(d, 0, p)
        if sigma is None:
            return False
        # everything on the sigma-cycle through 0 is in the orbit as well
        j = sigma[0]
        while j not in reached:
            reached.add(j)
            j = sigma[j]
    return True


def is_isometric(x: FiniteMetricSpace, y: FiniteMetricSpace) -> bool:
    if x.n != y.n:
        return False
    if sorted(_row_key(r) for r in x.dist) != sorted(_row_key(r) for r in y.dist):
        return False
    n = x.n
    dx, dy = x.dist, y.dist
    sigma = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for c in range(n):
            if used[c] or _row_key(dy[c]) != _row_key(dx[i]):
                continue
            if all(dy[c][sigma[j]] == dx[i][j] for j in range(i)):
                sigma[i], used[c] = c, True
                if extend(i + 1):
                    return True
                sigma[i], used[c] = -1, False
        return False

    return extend(0)


def n_profile(x: FiniteMetricSpace, *, assume_homogeneous: bool = False,
              cap: int = HOMOGENEITY_CAP) -> GenPoly:
    """``N_X(q) = (1/#X) sum_x' q^d(x0, x')`` taken from the first point."""
    if not assume_homogeneous and not is_homogeneous(x, cap):
        raise NotHomogeneous("N_X is only defined for homogeneous spaces")
    w = Fraction(1, x.n)
    return GenPoly((d, w) for d in x.dist[0])


# -- positivity evidence ------------------------------------------------------

@dataclass(frozen=True)
class NegativeTypeSample:
    t: float
    min_eigenvalue: float
    passed: bool


def negative_type_check(x: FiniteMetricSpace, t_samples: Iterable[float],
                        tol: float = EIGEN_TOL) -> list:
    """Smallest eigenvalue of ``exp(-t d)`` per sample.

    Passing every sample is evidence of negative type, not a proof.
    """
    if x.has_infinite_distance():
        raise InfiniteDistanceUnsupported("negative type check needs finite distances")
    d = x.as_float_matrix()
    out = []
    for t in t_samples:
        lam = float(np.linalg.eigvalsh(np.exp(-float(t) * d))[0])
        out.append(NegativeTypeSample(float(t), lam, lam > tol))
    return out


def schoenberg_check(x: FiniteMetricSpace, tol: float = EIGEN_TOL) -> bool:
    """Euclidean embeddability: squared distances conditionally negative semidefinite."""
    if x.has_infinite_distance():
        raise InfiniteDistanceUnsupported("Schoenberg check needs finite distances")
    n = x.n
    if n == 1:
        return True
    d2 = x.as_float_matrix() ** 2
    p = np.eye(n) - np.full((n, n), 1.0 / n)
    lam = np.linalg.eigvalsh(p @ d2 @ p)
    return bool(lam[-1] <= tol * max(1.0, float(d2.max())))


# -- sampling -----------------------------------------------------------------

def sample_random_metric(n: int, seed: int, grid: int = 1000) -> FiniteMetricSpace:
    """Distances drawn uniformly from ``{1 + k/grid : 0 <= k <= grid}``.

    Any such matrix satisfies the triangle inequality since ``1 + 1 >= 2``.
    """
    if n < 1:
        raise EmptySpace("n must be at least 1")
    rng = np.random.default_rng(seed)
    ks = rng.integers(0, grid + 1, size=n * (n - 1) // 2)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), k in zip(itertools.combinations(range(n), 2), ks):
        rows[i][j] = rows[j][i] = 1 + Fraction(int(k), grid)
    return validate_metric(rows)
