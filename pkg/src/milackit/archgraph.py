"""Circuit topologies of tunable admittance networks as undirected graphs.

A network architecture is a simple undirected graph over the circuit ports:
vertices are ports, an edge (i, j) means a tunable admittance component sits
between ports i and j, and every port additionally carries a tunable grounding
component. The graph therefore fixes which entries of the susceptance matrix
are tunable (the mask) and how many components the circuit needs (the
complexity count).

Vertex labels are 1-based everywhere in this module, including the edge-list
text format. Mask arrays are plain numpy arrays and therefore 0-indexed.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GraphError",
    "MilacGraph",
    "ArchitectureMask",
    "CircuitComplexity",
    "complete_graph",
    "center_graph",
    "tx_stem_graph",
    "rx_stem_graph",
    "mask_from_graph",
    "circuit_complexity",
    "mask_membership",
    "complete_complexity_count",
    "center_complexity_count",
    "stem_complexity_count",
]


class GraphError(ValueError):
    """Raised for malformed graphs, masks, or central-vertex sets."""


def _normalize_edge(edge: tuple[int, int], n_ports: int) -> tuple[int, int]:
    try:
        i, j = (int(v) for v in edge)
    except (TypeError, ValueError) as exc:
        raise GraphError(f"edge {edge!r} is not a pair of integers") from exc
    if i == j:
        raise GraphError(f"self-loop at vertex {i} is not allowed")
    if not (1 <= i <= n_ports and 1 <= j <= n_ports):
        raise GraphError(f"edge ({i}, {j}) outside vertex range 1..{n_ports}")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class MilacGraph:
    """Simple undirected graph over 1-based port labels.

    Args:
        n_ports: Number of vertices (ports), >= 1.
        edges: Iterable of unordered vertex pairs. Stored normalized with
            i < j; duplicates collapse silently, self-loops raise.
    """

    n_ports: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not isinstance(self.n_ports, int) or self.n_ports < 1:
            raise GraphError(f"n_ports must be a positive integer, got {self.n_ports!r}")
        normalized = frozenset(_normalize_edge(e, self.n_ports) for e in self.edges)
        object.__setattr__(self, "edges", normalized)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        """True if a tunable component connects ports i and j (1-based)."""
        if i == j:
            return False
        return ((i, j) if i < j else (j, i)) in self.edges

    def neighbors(self, i: int) -> frozenset[int]:
        """Vertices adjacent to vertex i (1-based)."""
        if not 1 <= i <= self.n_ports:
            raise GraphError(f"vertex {i} outside 1..{self.n_ports}")
        return frozenset(b if a == i else a for a, b in self.edges if i in (a, b))

    def adjacency_matrix(self) -> np.ndarray:
        """Boolean adjacency matrix, 0-indexed, zero diagonal."""
        adj = np.zeros((self.n_ports, self.n_ports), dtype=bool)
        for i, j in self.edges:
            adj[i - 1, j - 1] = True
            adj[j - 1, i - 1] = True
        return adj

    def to_edge_list_text(self) -> str:
        """Serialize as text: first line n_ports, then one "i j" line per edge.

        Edges are written sorted, 1-based, i < j.
        """
        lines = [str(self.n_ports)]
        lines.extend(f"{i} {j}" for i, j in sorted(self.edges))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list_text(cls, text: str) -> "MilacGraph":
        """Parse the edge-list text format produced by to_edge_list_text."""
        rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        rows = [ln for ln in rows if ln]
        if not rows:
            raise GraphError("empty edge-list text")
        try:
            n_ports = int(rows[0])
        except ValueError as exc:
            raise GraphError(f"first line must be the vertex count, got {rows[0]!r}") from exc
        edges = []
        for ln in rows[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise GraphError(f"malformed edge line {ln!r}")
            edges.append((int(parts[0]), int(parts[1])))
        return cls(n_ports, frozenset(edges))


@dataclass(frozen=True, eq=False)
class ArchitectureMask:
    """Boolean tunability pattern over susceptance entries.

    tunable[m, n] (0-indexed) is True where the architecture provides a
    tunable component: always on the diagonal (grounding components), and on
    off-diagonal pairs connected in the underlying graph.
    """

    n_ports: int
    tunable: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.tunable, dtype=bool)
        if t.shape != (self.n_ports, self.n_ports):
            raise GraphError(
                f"mask shape {t.shape} does not match n_ports {self.n_ports}"
            )
        if not np.array_equal(t, t.T):
            raise GraphError("mask must be symmetric")
        if not np.all(np.diag(t)):
            raise GraphError("mask diagonal must be fully tunable")
        t = t.copy()
        t.flags.writeable = False
        object.__setattr__(self, "tunable", t)

    @property
    def forbidden(self) -> np.ndarray:
        """Complement pattern: entries forced to zero."""
        return ~self.tunable

    def to_csv_text(self) -> str:
        """0/1 matrix CSV, one row per line."""
        return "\n".join(",".join("1" if v else "0" for v in row) for row in self.tunable) + "\n"

    @classmethod
    def from_csv_text(cls, text: str) -> "ArchitectureMask":
        rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
        try:
            data = np.array([[int(c) for c in ln.split(",")] for ln in rows], dtype=int)
        except ValueError as exc:
            raise GraphError("mask CSV cells must be 0 or 1") from exc
        if data.size and not np.isin(data, (0, 1)).all():
            raise GraphError("mask CSV cells must be 0 or 1")
        return cls(data.shape[0], data.astype(bool))


@dataclass(frozen=True)
class CircuitComplexity:
    """Tunable-component count of an architecture: one component per edge
    plus one grounding component per port."""

    n_ports: int
    n_edges: int

    @property
    def count(self) -> int:
        return self.n_ports + self.n_edges

    def __int__(self) -> int:
        return self.count


@functools.lru_cache(maxsize=None)
def complete_graph(n_ports: int) -> MilacGraph:
    """Fully-connected architecture: every port pair carries a component."""
    if n_ports < 1:
        raise GraphError(f"n_ports must be >= 1, got {n_ports}")
    edges = frozenset((i, j) for i in range(1, n_ports) for j in range(i + 1, n_ports + 1))
    return MilacGraph(n_ports, edges)


def center_graph(n_ports: int, central: Sequence[int] | Iterable[int]) -> MilacGraph:
    """Graph whose central vertices connect to everything and whose remaining
    vertices connect only to central ones.

    Args:
        n_ports: Total vertex count.
        central: Distinct 1-based vertex labels forming the center; nonempty.
    """
    if n_ports < 1:
        raise GraphError(f"n_ports must be >= 1, got {n_ports}")
    cset = list(central)
    if not cset:
        raise GraphError("central set must be nonempty")
    if len(set(cset)) != len(cset):
        raise GraphError(f"central set has duplicates: {cset}")
    for v in cset:
        if not (isinstance(v, (int, np.integer)) and 1 <= v <= n_ports):
            raise GraphError(f"central vertex {v!r} outside 1..{n_ports}")
    cen = sorted(int(v) for v in cset)
    others = [v for v in range(1, n_ports + 1) if v not in set(cen)]
    edges = set()
    for a_idx, a in enumerate(cen):
        for b in cen[a_idx + 1:]:
            edges.add((a, b))
        for b in others:
            edges.add((a, b) if a < b else (b, a))
    return MilacGraph(n_ports, frozenset(edges))


@functools.lru_cache(maxsize=None)
def tx_stem_graph(n_streams: int, n_tx: int) -> MilacGraph:
    """Transmit-side stem architecture over n_streams + n_tx ports.

    Ports 1..n_streams are network inputs, the rest feed the antennas. The
    center consists of all input ports plus the first n_streams - 1 output
    ports, so the center size is 2 n_streams - 1.
    """
    if n_streams < 1:
        raise GraphError(f"n_streams must be >= 1, got {n_streams}")
    if n_tx < n_streams:
        raise GraphError(f"n_tx ({n_tx}) must be >= n_streams ({n_streams})")
    n_ports = n_streams + n_tx
    return center_graph(n_ports, range(1, 2 * n_streams))


@functools.lru_cache(maxsize=None)
def rx_stem_graph(n_streams: int, n_rx: int) -> MilacGraph:
    """Receive-side stem architecture over n_rx + n_streams ports.

    Ports 1..n_rx take the antenna signals, ports n_rx+1..n_rx+n_streams are
    network outputs. The center consists of all output ports plus the first
    n_streams - 1 input ports.
    """
    if n_streams < 1:
        raise GraphError(f"n_streams must be >= 1, got {n_streams}")
    if n_rx < n_streams:
        raise GraphError(f"n_rx ({n_rx}) must be >= n_streams ({n_streams})")
    n_ports = n_rx + n_streams
    central = list(range(1, n_streams)) + list(range(n_rx + 1, n_rx + n_streams + 1))
    return center_graph(n_ports, central)


def mask_from_graph(g: MilacGraph) -> ArchitectureMask:
    """Tunability mask of a graph: diagonal plus connected pairs."""
    tunable = g.adjacency_matrix()
    np.fill_diagonal(tunable, True)
    return ArchitectureMask(g.n_ports, tunable)


def circuit_complexity(g: MilacGraph) -> CircuitComplexity:
    """Component count of the architecture graph."""
    return CircuitComplexity(g.n_ports, g.n_edges)


def mask_membership(b, mask: ArchitectureMask, tol: float = 1e-12) -> bool:
    """True if every entry of b forbidden by the mask is zero within tol.

    Args:
        b: Square real matrix or SusceptanceMatrix-like (anything with an
            ``array`` attribute or convertible by np.asarray).
        mask: Architecture mask of matching size.
        tol: Absolute tolerance; default guards only round-trip rounding,
            since constructed matrices carry exact structural zeros.
    """
    arr = np.asarray(getattr(b, "array", b), dtype=float)
    if arr.shape != (mask.n_ports, mask.n_ports):
        raise GraphError(
            f"matrix shape {arr.shape} does not match mask n_ports {mask.n_ports}"
        )
    off = arr[mask.forbidden]
    return bool(off.size == 0 or np.max(np.abs(off)) <= tol)


def complete_complexity_count(n_ports: int) -> int:
    """Closed-form component count of the fully-connected architecture."""
    return n_ports * (n_ports + 1) // 2


def center_complexity_count(n_ports: int, center_size: int) -> int:
    """Closed-form component count of a center graph with the given center."""
    return (center_size + 1) * (2 * n_ports - center_size) // 2


def stem_complexity_count(n_streams: int, n_antennas: int) -> int:
    """Closed-form component count of a stem architecture: linear in the
    antenna count for fixed stream count."""
    return n_streams * (2 * n_antennas + 1)
