"""Exhaustive ground-truth solvers for tiny instances.

Everything else in this package is validated against these routines.  The
search enumerates assignment vectors in ascending numeric order, where edge 0
is the innermost (least significant) digit and the digit order is
to-first-endpoint, to-second-endpoint, charity.  Certificates are therefore
deterministic: the numerically smallest qualifying vector is returned, with
or without pruning.
"""

import itertools
from math import comb
from typing import Iterator, Optional

import numpy as np

from .core import (
    CHARITY,
    EF,
    EFX,
    CapExceededError,
    InputError,
    Instance,
    PartialOrientation,
    verify,
)

EXISTS_CAP = 20
MIN_CHARITY_CAP = 13
ENUMERATION_CAP = 5_000_000


def _finalization_plan(inst: Instance):
    """Per-edge finalization lists for the descending-id search.

    Edges are assigned from id m-1 down to 0, so a vertex's bundle and every
    shared bundle it can see become final exactly when its minimum incident
    edge id is assigned.
    """
    m = inst.m
    inc_min = [m] * inst.n  # m = never finalizes (isolated, trivially fine)
    for e, (u, v, _, _) in enumerate(inst.edges):
        inc_min[u] = min(inc_min[u], e)
        inc_min[v] = min(inc_min[v], e)
    fin_at = [[] for _ in range(m)]
    for i in range(inst.n):
        if inc_min[i] < m:
            fin_at[inc_min[i]].append(i)
    pair_info = {i: [] for i in range(inst.n)}
    for (u, v), ids in sorted(inst.pair_edges().items()):
        # (other endpoint, [(edge id, value to me, value to other,
        #                    digit giving the edge to the other end)])
        u_view = []
        v_view = []
        for e in ids:
            eu, _, w_u, w_v = inst.edges[e]
            if eu == u:
                u_view.append((e, w_u, w_v, 1))
                v_view.append((e, w_v, w_u, 0))
            else:
                u_view.append((e, w_v, w_u, 0))
                v_view.append((e, w_u, w_v, 1))
        pair_info[u].append((v, tuple(u_view)))
        pair_info[v].append((u, tuple(v_view)))
    return inc_min, fin_at, pair_info


def _search(inst: Instance, fairness: str, find_min_charity: bool, prune: bool):
    """Shared DFS over full (2^m) or partial (3^m) assignment vectors."""
    if fairness not in (EF, EFX):
        raise InputError(f"unknown fairness notion {fairness!r}")
    m = inst.m
    edges = inst.edges
    inc_min, fin_at, pair_info = _finalization_plan(inst)
    digits = [0] * m
    own = [0] * inst.n
    held = [0] * inst.n
    digit_choices = (0, 1, 2) if find_min_charity else (0, 1)

    best = {"k": None, "vec": None}

    def checks_pass(e: int) -> bool:
        for i in fin_at[e]:
            if fairness == EF:
                for j, shared in pair_info[i]:
                    got = 0
                    for eid, w_me, _, to_other in shared:
                        if digits[eid] == to_other:
                            got += w_me
                    if own[i] < got:
                        return False
            else:
                for j, shared in pair_info[i]:
                    if not (inc_min[j] > e or (inc_min[j] == e and j < i)):
                        continue  # pair handled at the later finalization
                    for a, b, mine_first in ((i, j, True), (j, i, False)):
                        if held[b] == 0:
                            continue
                        got = 0
                        cnt = 0
                        least = None
                        for eid, w_me, w_other, to_other in shared:
                            w_a = w_me if mine_first else w_other
                            target = to_other if mine_first else 1 - to_other
                            if digits[eid] == target:
                                got += w_a
                                cnt += 1
                                if least is None or w_a < least:
                                    least = w_a
                        if held[b] > cnt or least is None:
                            least = 0
                        if own[a] < got - least:
                            return False
        return True

    def rec(e: int, ch: int) -> bool:
        if e < 0:
            if not prune and not verify(inst, digits, fairness).ok:
                return False
            if not find_min_charity:
                best["k"] = ch
                best["vec"] = tuple(digits)
                return True
            if best["k"] is None or ch < best["k"]:
                best["k"] = ch
                best["vec"] = tuple(digits)
            return best["k"] == 0
        u, v, w_u, w_v = edges[e]
        for d in digit_choices:
            ch2 = ch + (1 if d == CHARITY else 0)
            if prune and find_min_charity and best["k"] is not None and ch2 >= best["k"]:
                continue
            digits[e] = d
            if d == 0:
                own[u] += w_u
                held[u] += 1
            elif d == 1:
                own[v] += w_v
                held[v] += 1
            if not prune or checks_pass(e):
                if rec(e - 1, ch2):
                    if d == 0:
                        own[u] -= w_u
                        held[u] -= 1
                    elif d == 1:
                        own[v] -= w_v
                        held[v] -= 1
                    return True
            if d == 0:
                own[u] -= w_u
                held[u] -= 1
            elif d == 1:
                own[v] -= w_v
                held[v] -= 1
        return False

    rec(m - 1, 0)
    return best["k"], best["vec"]


def brute_exists(
    inst: Instance, fairness: str = EF, cap: int = EXISTS_CAP, prune: bool = True
) -> tuple:
    """Decide existence of a full fair orientation by enumerating all 2^m.

    Returns (exists, certificate or None).  Refuses instances above the cap.
    """
    if inst.m > cap:
        raise CapExceededError(f"{inst.m} edges exceeds the cap of {cap}")
    k, vec = _search(inst, fairness, find_min_charity=False, prune=prune)
    if vec is None:
        return False, None
    return True, PartialOrientation(vec)


def brute_min_charity(
    inst: Instance, fairness: str = EF, cap: int = MIN_CHARITY_CAP, prune: bool = True
) -> tuple:
    """Minimum number of charity edges over all 3^m partial orientations.

    Always well defined: leaving every edge unoriented is EF and EFX.
    Returns (k, certificate).
    """
    if inst.m > cap:
        raise CapExceededError(f"{inst.m} edges exceeds the cap of {cap}")
    k, vec = _search(inst, fairness, find_min_charity=True, prune=prune)
    return k, PartialOrientation(vec)


def count_small_instances(
    n_max: int,
    m_max: int,
    weight_max: int,
    simple: bool = False,
    symmetric: bool = False,
    forbid_zero_zero: bool = False,
) -> int:
    """Closed-form size of the enumerate_small_instances stream."""
    pairs = n_max * (n_max - 1) // 2
    if symmetric:
        weight_combos = weight_max + 1
    else:
        weight_combos = (weight_max + 1) ** 2
    if forbid_zero_zero:
        weight_combos -= 1
    if simple:
        return sum(comb(pairs, m) * weight_combos**m for m in range(m_max + 1))
    types = pairs * weight_combos
    if types == 0:
        return 1  # just the edgeless instance
    return sum(comb(types + m - 1, m) for m in range(m_max + 1))


def enumerate_small_instances(
    n_max: int,
    m_max: int,
    weight_max: int,
    simple: bool = False,
    symmetric: bool = False,
    forbid_zero_zero: bool = False,
    cap: int = ENUMERATION_CAP,
) -> Iterator[Instance]:
    """Deterministic exhaustive stream of labeled instances.

    The vertex set is fixed to {0..n_max-1}; every edge multiset of size up to
    m_max over it is produced exactly once (the m=0 edgeless instance
    included), so the stream is deduplicated by exact edge multiset.  No
    isomorphism rejection is attempted.
    """
    if n_max < 1:
        raise InputError("need at least one vertex")
    total = count_small_instances(
        n_max, m_max, weight_max, simple, symmetric, forbid_zero_zero
    )
    if total > cap:
        raise CapExceededError(f"{total} instances exceeds the cap of {cap}")
    pairs = [(u, v) for u in range(n_max) for v in range(u + 1, n_max)]
    if symmetric:
        weight_pairs = [(w, w) for w in range(weight_max + 1)]
    else:
        weight_pairs = [
            (w_u, w_v)
            for w_u in range(weight_max + 1)
            for w_v in range(weight_max + 1)
        ]
    if forbid_zero_zero:
        weight_pairs = [wp for wp in weight_pairs if wp != (0, 0)]
    if simple:
        for m in range(m_max + 1):
            for chosen in itertools.combinations(pairs, m):
                for ws in itertools.product(weight_pairs, repeat=m):
                    yield Instance(
                        n_max,
                        [(u, v, w_u, w_v) for (u, v), (w_u, w_v) in zip(chosen, ws)],
                    )
    else:
        edge_types = [
            (u, v, w_u, w_v) for (u, v) in pairs for (w_u, w_v) in weight_pairs
        ]
        for m in range(m_max + 1):
            for combo in itertools.combinations_with_replacement(edge_types, m):
                yield Instance(n_max, combo)


class FamilyOracle:
    """Vectorized exhaustive minimum charity for large streams of tiny instances.

    Evaluates all 3^m partial orientations of one instance at once with
    numpy, reusing digit tables across instances of equal edge count.  Always
    agrees with brute_min_charity (cross-checked in the test suite); exists
    only because calling the branch-and-bound half a million times inside the
    acceptance sweeps would be too slow on one core.
    """

    def __init__(self, m_cap: int = 8):
        self.m_cap = m_cap
        self._tables = {}

    def _table(self, m: int):
        tab = self._tables.get(m)
        if tab is None:
            count = 3**m
            codes = np.arange(count)
            dig = np.empty((count, m), dtype=np.int64)
            for e in range(m):
                dig[:, e] = (codes // 3**e) % 3
            a0 = (dig == 0).astype(np.int64)
            a1 = (dig == 1).astype(np.int64)
            k3 = (dig == 2).sum(axis=1)
            tab = (a0, a1, k3)
            self._tables[m] = tab
        return tab

    def min_charity(self, inst: Instance, fairness: str = EF) -> int:
        if fairness not in (EF, EFX):
            raise InputError(f"unknown fairness notion {fairness!r}")
        m = inst.m
        if m == 0:
            return 0
        if m > self.m_cap:
            raise CapExceededError(f"{m} edges exceeds the cap of {self.m_cap}")
        a0, a1, k3 = self._table(m)
        n = inst.n
        cu = np.zeros((m, n), dtype=np.int64)
        cv = np.zeros((m, n), dtype=np.int64)
        for e, (u, v, w_u, w_v) in enumerate(inst.edges):
            cu[e, u] = w_u
            cv[e, v] = w_v
        own = a0 @ cu + a1 @ cv

        ordered = []  # (i, j, edge ids) for ordered pairs sharing edges
        for (u, v), ids in sorted(inst.pair_edges().items()):
            ordered.append((u, v, ids))
            ordered.append((v, u, ids))
        if not ordered:
            return 0
        np_pairs = len(ordered)
        p0 = np.zeros((m, np_pairs), dtype=np.int64)
        p1 = np.zeros((m, np_pairs), dtype=np.int64)
        i_idx = np.empty(np_pairs, dtype=np.intp)
        j_idx = np.empty(np_pairs, dtype=np.intp)
        for p, (i, j, ids) in enumerate(ordered):
            i_idx[p] = i
            j_idx[p] = j
            for e in ids:
                u, v, w_u, w_v = inst.edges[e]
                w_i = w_u if u == i else w_v
                if j == u:
                    p0[e, p] = w_i
                else:
                    p1[e, p] = w_i
        vx = a0 @ p0 + a1 @ p1
        own_i = own[:, i_idx]

        if fairness == EF:
            ok = (own_i >= vx).all(axis=1)
        else:
            iu = np.zeros((m, n), dtype=np.int64)
            iv = np.zeros((m, n), dtype=np.int64)
            for e, (u, v, _, _) in enumerate(inst.edges):
                iu[e, u] = 1
                iv[e, v] = 1
            heldcnt = a0 @ iu + a1 @ iv
            j0 = np.zeros((m, np_pairs), dtype=np.int64)
            j1 = np.zeros((m, np_pairs), dtype=np.int64)
            for p, (i, j, ids) in enumerate(ordered):
                for e in ids:
                    u, v, _, _ = inst.edges[e]
                    if j == u:
                        j0[e, p] = 1
                    else:
                        j1[e, p] = 1
            pairheld = a0 @ j0 + a1 @ j1
            big = np.int64(2**62)
            least = np.full((len(a0), np_pairs), big, dtype=np.int64)
            for p, (i, j, ids) in enumerate(ordered):
                for e in ids:
                    u, v, w_u, w_v = inst.edges[e]
                    w_i = w_u if u == i else w_v
                    held_by_j = a0[:, e] if j == u else a1[:, e]
                    col = np.where(held_by_j == 1, np.int64(w_i), big)
                    np.minimum(least[:, p], col, out=least[:, p])
            outside = heldcnt[:, j_idx] > pairheld
            least = np.where(outside, np.int64(0), least)
            least = np.where(least == big, np.int64(0), least)
            strong = (heldcnt[:, j_idx] > 0) & (own_i < vx - least)
            ok = ~strong.any(axis=1)

        if not ok.any():
            # all-charity is always valid, so this cannot happen
            raise AssertionError("no valid assignment found")
        return int(k3[ok].min())
