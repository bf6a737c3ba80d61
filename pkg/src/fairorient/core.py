"""Data model for fair orientation of edge-weighted multigraphs.

An instance is a loopless multigraph in which every edge carries two
nonnegative integer values, one per endpoint.  Orienting an edge towards an
endpoint allocates it, as a good, to that endpoint; edges may instead be left
unoriented ("charity").  Agent i's bundle X_i is the set of edges oriented
towards i.  Agent i envies j when v_i(X_i) < v_i(X_j), and strongly envies j
when the envy survives the removal of the good in X_j that i values least
(the minimum ranges over all of j's goods, including goods i values at 0).

An orientation is EF when nobody envies anybody, and EFX when nobody strongly
envies anybody.  The verifier here is the ground truth every solver in this
package is checked against.
"""

from typing import Iterable, Iterator, NamedTuple, Optional

# Assignment codes for a single edge.  An edge (u, v, w_u, w_v) assigned TO_U
# goes into u's bundle, TO_V into v's, CHARITY into nobody's.
TO_U = 0
TO_V = 1
CHARITY = 2

# Fairness notions accepted by verify() and the solvers.
EF = "ef"
EFX = "efx"

# Weights are kept within signed 64-bit range, and the *sum* of all weights of
# an instance must fit too, so every partial sum formed anywhere downstream is
# exact without further checks.
MAX_TOTAL_WEIGHT = 2**63 - 1


class InputError(ValueError):
    """Malformed instance, orientation, or operation argument."""


class UnsupportedInstanceError(InputError):
    """Instance is valid but outside an algorithm's supported class."""


class CapExceededError(RuntimeError):
    """An exhaustive routine refused to run because its size cap is exceeded."""


class InternalError(RuntimeError):
    """A solver invariant was violated; indicates a bug, not bad input."""


class Instance:
    """A loopless multigraph with two nonnegative integer values per edge.

    Edges are identified by their 0-based position in the edge sequence, so
    parallel edges are distinct goods.  Instances are immutable; the derived
    adjacency structures are built lazily and cached.
    """

    __slots__ = ("n", "edges", "_pair_edges", "_incident", "_w")

    def __init__(self, n: int, edges: Iterable[tuple]):
        if not isinstance(n, int) or n < 0:
            raise InputError("vertex count must be a nonnegative integer")
        edge_list = []
        total = 0
        for pos, edge in enumerate(edges):
            try:
                u, v, w_u, w_v = edge
            except (TypeError, ValueError):
                raise InputError(f"edge {pos}: expected (u, v, w_u, w_v)")
            if not all(isinstance(x, int) for x in (u, v, w_u, w_v)):
                raise InputError(f"edge {pos}: entries must be integers")
            if u == v:
                raise InputError(f"edge {pos}: loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {pos}: endpoint out of range")
            if w_u < 0 or w_v < 0:
                raise InputError(f"edge {pos}: negative weight")
            total += w_u + w_v
            if total > MAX_TOTAL_WEIGHT:
                raise InputError("total weight exceeds the 64-bit safety bound")
            edge_list.append((u, v, w_u, w_v))
        self.n = n
        self.edges = tuple(edge_list)
        self._pair_edges = None
        self._incident = None
        self._w = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def is_simple(self) -> bool:
        """True when no two edges share the same unordered endpoint pair."""
        return all(len(ids) == 1 for ids in self.pair_edges().values())

    def is_symmetric(self) -> bool:
        """True when both endpoints assign each edge the same value."""
        return all(w_u == w_v for _, _, w_u, w_v in self.edges)

    def pair_edges(self) -> dict:
        """Map from unordered endpoint pair (min, max) to its edge-id tuple."""
        if self._pair_edges is None:
            pairs = {}
            for e, (u, v, _, _) in enumerate(self.edges):
                key = (u, v) if u < v else (v, u)
                pairs.setdefault(key, []).append(e)
            self._pair_edges = {k: tuple(ids) for k, ids in pairs.items()}
        return self._pair_edges

    def incident_edges(self, i: int) -> tuple:
        if self._incident is None:
            inc = [[] for _ in range(self.n)]
            for e, (u, v, _, _) in enumerate(self.edges):
                inc[u].append(e)
                inc[v].append(e)
            self._incident = tuple(tuple(ids) for ids in inc)
        if not 0 <= i < self.n:
            raise InputError(f"vertex {i} out of range")
        return self._incident[i]

    def neighbors(self, i: int) -> tuple:
        """Distinct neighbors of i, ascending."""
        if not 0 <= i < self.n:
            raise InputError(f"vertex {i} out of range")
        seen = set()
        for e in self.incident_edges(i):
            u, v, _, _ = self.edges[e]
            seen.add(v if u == i else u)
        return tuple(sorted(seen))

    def value_to(self, i: int, e: int) -> int:
        """Value of edge e to vertex i; 0 when i is not an endpoint."""
        u, v, w_u, w_v = self.edges[e]
        if i == u:
            return w_u
        if i == v:
            return w_v
        return 0

    def other_end(self, e: int, i: int) -> int:
        u, v, _, _ = self.edges[e]
        if i == u:
            return v
        if i == v:
            return u
        raise InputError(f"vertex {i} is not an endpoint of edge {e}")

    def max_shared_weight(self) -> int:
        """Largest total value any vertex assigns to one neighbor's shared bundle.

        This is the maximum over ordered pairs (i, j) of the value i assigns
        to all edges between i and j, and 0 for the edgeless instance.
        """
        if self._w is None:
            best = 0
            for (u, v), ids in self.pair_edges().items():
                su = sv = 0
                for e in ids:
                    eu, _, w_u, w_v = self.edges[e]
                    if eu == u:
                        su += w_u
                        sv += w_v
                    else:
                        su += w_v
                        sv += w_u
                best = max(best, su, sv)
            self._w = best
        return self._w

    def __eq__(self, other):
        return (
            isinstance(other, Instance)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Instance(n={self.n}, edges={list(self.edges)!r})"


class PartialOrientation:
    """Per-edge assignment: TO_U, TO_V, or CHARITY.

    Immutable; the assignment length must match the instance it is used with
    (checked by the operations, since the orientation itself does not hold a
    reference to the instance).
    """

    __slots__ = ("assignment",)

    def __init__(self, assignment: Iterable[int]):
        assignment = tuple(assignment)
        for pos, a in enumerate(assignment):
            if a not in (TO_U, TO_V, CHARITY):
                raise InputError(f"edge {pos}: invalid assignment code {a!r}")
        self.assignment = assignment

    @property
    def charity_count(self) -> int:
        return self.assignment.count(CHARITY)

    def __len__(self):
        return len(self.assignment)

    def __iter__(self) -> Iterator[int]:
        return iter(self.assignment)

    def __getitem__(self, e: int) -> int:
        return self.assignment[e]

    def __eq__(self, other):
        if isinstance(other, PartialOrientation):
            return self.assignment == other.assignment
        return NotImplemented

    def __hash__(self):
        return hash(self.assignment)

    def __repr__(self):
        return f"PartialOrientation({list(self.assignment)!r})"


class SolveReport(NamedTuple):
    """Outcome of a solver run.

    decision     -- whether a fully oriented fair solution (zero charity)
                    exists; existence solvers report their answer, minimum
                    charity solvers report min_charity == 0.
    min_charity  -- minimum number of unoriented edges, or None when the
                    solver only answers the decision problem.
    certificate  -- a PartialOrientation witnessing the answer, or None for
                    "no" answers.
    stats        -- solver counters (branches, DP states, augmentations...).
    """

    decision: bool
    min_charity: Optional[int]
    certificate: Optional[PartialOrientation]
    stats: dict


class VerifyResult(NamedTuple):
    ok: bool
    charity: int
    witness: Optional[tuple]


def _assignment_of(orientation) -> tuple:
    if isinstance(orientation, PartialOrientation):
        return orientation.assignment
    return tuple(orientation)


def _check_orientation(inst: Instance, assignment: tuple) -> None:
    if len(assignment) != inst.m:
        raise InputError(
            f"orientation length {len(assignment)} != edge count {inst.m}"
        )


def bundle_value(inst: Instance, i: int, bundle: Iterable[int]) -> int:
    """Total value of a set of edge ids to vertex i.

    Edges not incident to i contribute 0; the empty bundle is worth 0.
    """
    if not 0 <= i < inst.n:
        raise InputError(f"vertex {i} out of range")
    total = 0
    for e in bundle:
        if not 0 <= e < inst.m:
            raise InputError(f"edge id {e} out of range")
        total += inst.value_to(i, e)
    return total


def bundles(inst: Instance, orientation) -> list:
    """Bundle of each vertex as a list of edge-id lists."""
    assignment = _assignment_of(orientation)
    _check_orientation(inst, assignment)
    out = [[] for _ in range(inst.n)]
    for e, a in enumerate(assignment):
        if a == TO_U:
            out[inst.edges[e][0]].append(e)
        elif a == TO_V:
            out[inst.edges[e][1]].append(e)
    return out


def _own_values(inst: Instance, assignment: tuple) -> list:
    own = [0] * inst.n
    for e, a in enumerate(assignment):
        u, v, w_u, w_v = inst.edges[e]
        if a == TO_U:
            own[u] += w_u
        elif a == TO_V:
            own[v] += w_v
    return own


def _pair_view(inst: Instance, assignment: tuple, i: int, j: int):
    """Value i assigns to j's share of the shared bundle, and the least such
    held good's value to i (None when j holds nothing from the shared bundle)."""
    key = (i, j) if i < j else (j, i)
    ids = inst.pair_edges().get(key, ())
    total = 0
    least = None
    for e in ids:
        u, v, w_u, w_v = inst.edges[e]
        a = assignment[e]
        if (a == TO_U and u == j) or (a == TO_V and v == j):
            w_i = w_u if u == i else w_v
            total += w_i
            least = w_i if least is None else min(least, w_i)
    return total, least


def envies(inst: Instance, orientation, i: int, j: int) -> bool:
    """True when i values j's bundle above its own."""
    if i == j:
        raise InputError("envy is defined for distinct vertices")
    for x in (i, j):
        if not 0 <= x < inst.n:
            raise InputError(f"vertex {x} out of range")
    assignment = _assignment_of(orientation)
    _check_orientation(inst, assignment)
    own = _own_values(inst, assignment)
    total, _ = _pair_view(inst, assignment, i, j)
    return own[i] < total


def strongly_envies(inst: Instance, orientation, i: int, j: int) -> bool:
    """True when i's envy of j survives removing j's good that i values least.

    The minimum ranges over every good j holds, so a single good j received
    from elsewhere (worth 0 to i) already drops the threshold to plain envy.
    A bundle of one good is never strongly envied, and an empty bundle is
    never envied at all.
    """
    if i == j:
        raise InputError("envy is defined for distinct vertices")
    for x in (i, j):
        if not 0 <= x < inst.n:
            raise InputError(f"vertex {x} out of range")
    assignment = _assignment_of(orientation)
    _check_orientation(inst, assignment)
    own = _own_values(inst, assignment)
    held = [0] * inst.n
    for e, a in enumerate(assignment):
        if a == TO_U:
            held[inst.edges[e][0]] += 1
        elif a == TO_V:
            held[inst.edges[e][1]] += 1
    return _strong_envy_with(inst, assignment, own, held, i, j)


def _strong_envy_with(inst, assignment, own, held, i, j) -> bool:
    if held[j] == 0:
        return False
    total, least = _pair_view(inst, assignment, i, j)
    shared_held = 0
    key = (i, j) if i < j else (j, i)
    for e in inst.pair_edges().get(key, ()):
        u, v, _, _ = inst.edges[e]
        a = assignment[e]
        if (a == TO_U and u == j) or (a == TO_V and v == j):
            shared_held += 1
    if held[j] > shared_held or least is None:
        least = 0  # j holds a good i values at 0 (or nothing shared at all)
    return own[i] < total - least


def verify(inst: Instance, orientation, fairness: str = EF) -> VerifyResult:
    """Check an orientation against a fairness notion.

    Returns (ok, charity, witness) where witness is the lexicographically
    first ordered pair (envier, enviee) violating the notion, or None.  Only
    ordered pairs sharing at least one edge are examined: a vertex values a
    stranger's bundle at 0, which can be neither envied nor strongly envied.
    """
    if fairness not in (EF, EFX):
        raise InputError(f"unknown fairness notion {fairness!r}")
    assignment = _assignment_of(orientation)
    _check_orientation(inst, assignment)
    charity = sum(1 for a in assignment if a == CHARITY)

    own = _own_values(inst, assignment)
    held = [0] * inst.n
    for e, a in enumerate(assignment):
        if a == TO_U:
            held[inst.edges[e][0]] += 1
        elif a == TO_V:
            held[inst.edges[e][1]] += 1

    for i in range(inst.n):
        for j in inst.neighbors(i):
            if fairness == EF:
                total, _ = _pair_view(inst, assignment, i, j)
                if own[i] < total:
                    return VerifyResult(False, charity, (i, j))
            else:
                if _strong_envy_with(inst, assignment, own, held, i, j):
                    return VerifyResult(False, charity, (i, j))
    return VerifyResult(True, charity, None)
