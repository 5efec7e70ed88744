"""Undirected feedback graphs and exact maximum-independent-set search.

Vertices are arms 0..num_arms-1. Every vertex carries a self-loop: pulling
an arm always reveals its own reward, and the neighborhood of an arm is the
set of arms whose rewards become visible when it is pulled. Self-loops are
ignored by all independence computations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, InputError

DEFAULT_EXACT_LIMIT = 30

__all__ = [
    "DEFAULT_EXACT_LIMIT",
    "FeedbackGraph",
    "IndependentSetResult",
    "complete",
    "cycle",
    "disjoint_cliques",
    "edgeless",
    "erdos_renyi",
    "independence_number",
    "max_independent_set",
    "parse_graph_spec",
    "star",
]


class FeedbackGraph:
    """Immutable undirected graph with mandatory self-loops."""

    __slots__ = ("num_arms", "_neighbors", "_matrix")

    def __init__(self, num_arms: int, edges=()):
        if num_arms < 0:
            raise InputError(f"num_arms must be nonnegative, got {num_arms}")
        sets = [{a} for a in range(num_arms)]
        for a, b in edges:
            a, b = int(a), int(b)
            if not (0 <= a < num_arms and 0 <= b < num_arms):
                raise InputError(
                    f"edge ({a}, {b}) is outside the vertex range 0..{num_arms - 1}"
                )
            sets[a].add(b)
            sets[b].add(a)
        object.__setattr__(self, "num_arms", num_arms)
        object.__setattr__(self, "_neighbors", tuple(frozenset(s) for s in sets))
        object.__setattr__(self, "_matrix", None)

    def __setattr__(self, name, value):
        raise AttributeError("FeedbackGraph is immutable")

    def neighborhood(self, a: int) -> frozenset:
        """Arms observed when pulling arm ``a``, including ``a`` itself."""
        self._check_vertex(a)
        return self._neighbors[a]

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges as (a, b) pairs with a < b; self-loops omitted."""
        return [
            (a, b)
            for a in range(self.num_arms)
            for b in sorted(self._neighbors[a])
            if a < b
        ]

    def induced_subgraph(self, subset) -> tuple["FeedbackGraph", tuple[int, ...]]:
        """Subgraph on ``subset``.

        Returns the relabeled graph together with the tuple mapping new
        vertex ids back to the original ones (sorted order).
        """
        keep = sorted(set(int(v) for v in subset))
        for v in keep:
            self._check_vertex(v)
        pos = {v: i for i, v in enumerate(keep)}
        sub_edges = [
            (pos[a], pos[b]) for a, b in self.edges() if a in pos and b in pos
        ]
        return FeedbackGraph(len(keep), sub_edges), tuple(keep)

    def adjacency_matrix(self) -> np.ndarray:
        """Boolean num_arms x num_arms matrix; True on the diagonal."""
        if self._matrix is None:
            m = np.zeros((self.num_arms, self.num_arms), dtype=bool)
            for a in range(self.num_arms):
                m[a, sorted(self._neighbors[a])] = True
            m.setflags(write=False)
            object.__setattr__(self, "_matrix", m)
        return self._matrix

    def _check_vertex(self, a):
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.num_arms:
            raise InputError(
                f"vertex {a!r} is outside the range 0..{self.num_arms - 1}"
            )

    def __eq__(self, other):
        if not isinstance(other, FeedbackGraph):
            return NotImplemented
        return self.num_arms == other.num_arms and self._neighbors == other._neighbors

    def __hash__(self):
        return hash((self.num_arms, self._neighbors))

    def __repr__(self):
        return f"FeedbackGraph(num_arms={self.num_arms}, edges={len(self.edges())})"


@dataclass(frozen=True)
class IndependentSetResult:
    """A maximum (or greedy) independent set and its total weight."""

    vertices: frozenset
    value: float
    approximate: bool = False


def _neighbor_masks(graph: FeedbackGraph) -> list[int]:
    masks = []
    for a in range(graph.num_arms):
        m = 0
        for b in graph.neighborhood(a):
            if b != a:
                m |= 1 << b
        masks.append(m)
    return masks


def _mask_weight(mask: int, weights) -> float:
    total = 0.0
    while mask:
        v = (mask & -mask).bit_length() - 1
        total += weights[v]
        mask &= mask - 1
    return total


def _branch_vertex(cand: int, masks) -> int:
    # branch on the highest-degree candidate; ties go to the lowest id
    best_v, best_d = -1, -1
    m = cand
    while m:
        v = (m & -m).bit_length() - 1
        d = (masks[v] & cand).bit_count()
        if d > best_d:
            best_v, best_d = v, d
        m &= m - 1
    return best_v


def _best_value(masks, weights, cand: int) -> float:
    """Branch-and-bound maximum weight of an independent subset of ``cand``."""
    best = 0.0

    def dfs(cand, acc):
        nonlocal best
        if acc > best:
            best = acc
        if not cand:
            return
        if acc + _mask_weight(cand, weights) <= best:
            return
        v = _branch_vertex(cand, masks)
        dfs(cand & ~masks[v] & ~(1 << v), acc + weights[v])
        dfs(cand & ~(1 << v), acc)

    dfs(cand, 0.0)
    return best


def _lex_smallest_optimal(masks, weights, target: float) -> list[int]:
    """Lexicographically smallest vertex set achieving ``target``.

    Scans vertices in increasing order. A vertex is taken whenever taking it
    still allows the optimum; the scan stops as soon as the running total
    reaches the optimum, which prefers short prefixes over extensions.
    """
    eps = 1e-9 * max(1.0, abs(target))
    chosen: list[int] = []
    acc = 0.0
    cand = (1 << len(masks)) - 1
    while cand and acc < target - eps:
        v = (cand & -cand).bit_length() - 1
        with_v = cand & ~masks[v] & ~(1 << v)
        if acc + weights[v] + _best_value(masks, weights, with_v) >= target - eps:
            chosen.append(v)
            acc += weights[v]
            cand = with_v
        else:
            cand &= ~(1 << v)
    return chosen


def _greedy_set(graph: FeedbackGraph, weights) -> IndependentSetResult:
    k = graph.num_arms
    w = [1.0] * k if weights is None else weights
    order = sorted(
        range(k), key=lambda v: (-w[v], len(graph.neighborhood(v)), v)
    )
    chosen: list[int] = []
    blocked: set[int] = set()
    for v in order:
        if v not in blocked:
            chosen.append(v)
            blocked.update(graph.neighborhood(v))
    chosen.sort()
    value = len(chosen) if weights is None else math.fsum(w[v] for v in chosen)
    return IndependentSetResult(frozenset(chosen), value, approximate=True)


def max_independent_set(
    graph: FeedbackGraph,
    weights=None,
    *,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    allow_approximate: bool = False,
) -> IndependentSetResult:
    """Maximum-weight independent set of ``graph``.

    ``weights`` defaults to all ones (so the value is the independence
    number). Exact search runs branch and bound over vertex bitmasks and is
    refused above ``exact_limit`` vertices unless ``allow_approximate`` is
    set, in which case a deterministic greedy answer is returned and flagged.
    Ties among maximizing sets resolve to the lexicographically smallest
    sorted vertex tuple.
    """
    k = graph.num_arms
    if weights is not None:
        weights = [float(w) for w in weights]
        if len(weights) != k:
            raise InputError(
                f"expected {k} weights, got {len(weights)}"
            )
        for w in weights:
            if not math.isfinite(w) or w < 0:
                raise InputError(f"weights must be finite and nonnegative, got {w}")
    if k == 0:
        return IndependentSetResult(frozenset(), 0 if weights is None else 0.0)
    if k > exact_limit:
        if not allow_approximate:
            raise CapabilityError(
                f"exact independent-set search is limited to {exact_limit} "
                f"vertices (graph has {k}); pass allow_approximate=True to "
                "accept a greedy answer"
            )
        return _greedy_set(graph, weights)
    masks = _neighbor_masks(graph)
    w = [1.0] * k if weights is None else weights
    target = _best_value(masks, w, (1 << k) - 1)
    chosen = _lex_smallest_optimal(masks, w, target)
    if weights is None:
        value = len(chosen)
    else:
        value = math.fsum(w[v] for v in chosen)
    return IndependentSetResult(frozenset(chosen), value, approximate=False)


def independence_number(graph: FeedbackGraph, **kwargs) -> int:
    """Size of a maximum independent set (unweighted)."""
    return int(max_independent_set(graph, None, **kwargs).value)


def _require_arms(k: int) -> int:
    k = int(k)
    if k < 1:
        raise InputError(f"need at least one arm, got {k}")
    return k


def complete(num_arms: int) -> FeedbackGraph:
    """Every pair of arms connected; pulling anything reveals everything."""
    k = _require_arms(num_arms)
    return FeedbackGraph(k, [(a, b) for a in range(k) for b in range(a + 1, k)])


def edgeless(num_arms: int) -> FeedbackGraph:
    """No edges beyond self-loops; the classic bandit feedback setting."""
    return FeedbackGraph(_require_arms(num_arms))


def cycle(num_arms: int) -> FeedbackGraph:
    k = _require_arms(num_arms)
    return FeedbackGraph(k, [(a, (a + 1) % k) for a in range(k)])


def star(num_arms: int) -> FeedbackGraph:
    """Arm 0 is the hub, connected to every leaf."""
    k = _require_arms(num_arms)
    return FeedbackGraph(k, [(0, a) for a in range(1, k)])


def disjoint_cliques(sizes) -> FeedbackGraph:
    """Disjoint cliques of the given sizes, labeled block by block."""
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise InputError("need at least one clique size")
    for s in sizes:
        if s < 1:
            raise InputError(f"clique sizes must be positive, got {s}")
    edges = []
    offset = 0
    for s in sizes:
        edges.extend(
            (offset + a, offset + b) for a in range(s) for b in range(a + 1, s)
        )
        offset += s
    return FeedbackGraph(offset, edges)


def erdos_renyi(num_arms: int, p: float, seed: int) -> FeedbackGraph:
    """Each pair joined independently with probability ``p`` (seeded)."""
    k = _require_arms(num_arms)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InputError(f"edge probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(int(seed))
    edges = [
        (a, b)
        for a in range(k)
        for b in range(a + 1, k)
        if rng.random() < p
    ]
    return FeedbackGraph(k, edges)


def _read_edge_list(path: str) -> FeedbackGraph:
    declared = 0
    edges = []
    max_seen = -1
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read graph file {path!r}: {exc}") from None
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "-" in line:
                left, _, right = line.partition("-")
                try:
                    a, b = int(left), int(right)
                except ValueError:
                    raise InputError(
                        f"{path}:{lineno}: expected an 'a-b' edge, got {line!r}"
                    ) from None
                if a < 0 or b < 0:
                    raise InputError(f"{path}:{lineno}: negative vertex id")
                edges.append((a, b))
                max_seen = max(max_seen, a, b)
            else:
                try:
                    declared = max(declared, int(line))
                except ValueError:
                    raise InputError(
                        f"{path}:{lineno}: expected an 'a-b' edge or an arm "
                        f"count, got {line!r}"
                    ) from None
    num_arms = max(declared, max_seen + 1)
    if num_arms < 1:
        raise InputError(f"{path}: no arms declared and no edges found")
    return FeedbackGraph(num_arms, edges)


def parse_graph_spec(spec: str) -> FeedbackGraph:
    """Build a graph from a compact text spec.

    Supported forms: ``complete:K``, ``edgeless:K``, ``cycle:K``, ``star:K``,
    ``cliques:a,b,c``, ``er:K,p,seed``, and ``file:path`` where the file
    holds ``a-b`` edge lines plus an optional bare integer arm count.
    """
    if not isinstance(spec, str) or not spec.strip():
        raise InputError(f"empty graph spec {spec!r}")
    name, sep, rest = spec.strip().partition(":")
    name = name.lower()
    if not sep:
        raise InputError(f"graph spec {spec!r} is missing a ':' separator")
    try:
        if name == "complete":
            return complete(int(rest))
        if name == "edgeless":
            return edgeless(int(rest))
        if name == "cycle":
            return cycle(int(rest))
        if name == "star":
            return star(int(rest))
        if name == "cliques":
            return disjoint_cliques(int(s) for s in rest.split(","))
        if name == "er":
            k, p, seed = rest.split(",")
            return erdos_renyi(int(k), float(p), int(seed))
        if name == "file":
            return _read_edge_list(rest)
    except InputError:
        raise
    except ValueError:
        raise InputError(f"malformed graph spec {spec!r}") from None
    raise InputError(
        f"unknown graph family {name!r}; expected one of complete, edgeless, "
        "cycle, star, cliques, er, file"
    )
