"""Ideals of members of the variety and the congruences they determine.

Here an *ideal* is a subset containing 1 that is closed under every ideal
term, i.e. every term ``t(xs, ys)`` with ``t(xs, 1, ..., 1) = 1``.  Note that
these are order filters (they contain 1 and are closed upwards), not
lattice ideals.  Closure under all ideal terms is decided by closure under
the finite basis

    t1(t(x1, x2, y1) v t(x3, x4, y2), x2 v x4)
    t1(t(x1, x2, y1) ^ t(x3, x4, y2), x2 ^ x4)
    t1(t(x1, x2, y)', x2')
    1

where ``t1`` and ``t`` are the built-in terms ``t1`` and ``tBig``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .congruence import Congruence, all_congruences, is_congruence
from .sasaki import require_member
from .terms import HOLDS, check_identity, evaluate_all, parse_identity, parse_term


class NotAnIdeal(ValueError):
    pass


class InternalViolation(AssertionError):
    pass


BASIS = (
    parse_term("t1(tBig(x1, x2, y1) v tBig(x3, x4, y2), x2 v x4)"),
    parse_term("t1(tBig(x1, x2, y1) ^ tBig(x3, x4, y2), x2 ^ x4)"),
    parse_term("t1(tBig(x1, x2, y)', x2')"),
    parse_term("1"),
)

IDEAL_IDENTITIES = {
    "i": parse_identity("x v (x ^ y)' = 1"),
    "ii": parse_identity("y v (x ^ y)' = 1"),
    "iii": parse_identity("x = (x v y) ^ (x v (x v y)')"),
    "iv": parse_identity("y = (x v y) ^ (y v (x v y)')"),
    "v": parse_identity("(x v y) ^ t1(x, y) = x ^ y"),
    "vi": parse_identity("t1(x, x) = 1"),
    "vii": parse_identity("tBig(x, y, t1(x, y)) = x"),
    "viii": parse_identity("tBig(x, y, 1) = y"),
}


def y_variables(term):
    return [v for v in term.variables() if v.startswith("y")]


def ideal_term_law(L, term):
    """Check ``term(xs, 1, ..., 1) = 1`` over all x-assignments."""
    ys = y_variables(term)
    xs = [v for v in term.variables() if v not in ys]
    vals = evaluate_all(term, L, xs + ys)
    at_top = vals[(Ellipsis,) + (L.top,) * len(ys)] if ys else vals
    return bool((at_top == L.top).all())


class IdealEngine:
    """Evaluates images of subsets under the basis terms of one lattice.

    The two four-variable basis terms are evaluated through the tables
    ``T[x1, x2, y] = t(x1, x2, y)`` and ``P[a, b] = t1(a, b)``: for fixed
    x2 the values ``t(x1, x2, y)`` (x1 free, y in S) form a set V[x2], and
    the first term's image is ``{P[v v w, x2 v x4] : v in V[x2], w in V[x4]}``.
    """

    def __init__(self, L, check=True):
        if check:
            require_member(L)
        self.L = L
        n = L.n
        self.T = np.ascontiguousarray(
            evaluate_all(parse_term("tBig(x, y, z)"), L, ["x", "y", "z"]))
        self.P = np.ascontiguousarray(evaluate_all(parse_term("t1(x, y)"), L, ["x", "y"]))
        onehot = np.eye(n, dtype=np.int64)
        self._join_hot = onehot[L.join]  # [v, w, a] = (v v w == a)
        self._meet_hot = onehot[L.meet]

    def _reachable(self, V, hot):
        # R[x2, x4, a]: some v in V[x2], w in V[x4] has op(v, w) == a
        return np.einsum("iv,jw,vwa->ija", V, V, hot, optimize=True) > 0

    def image(self, S):
        """Elements obtained by applying a basis term with all y-arguments in S."""
        L, n = self.L, self.L.n
        S = np.asarray(S, dtype=bool)
        out = np.zeros(n, dtype=bool)
        out[L.top] = True
        if not S.any():
            return out
        # V[x2, v]: v = t(x1, x2, y) for some x1 and y in S
        V = np.zeros((n, n), dtype=np.int64)
        vals = self.T[:, :, S]  # [x1, x2, y]
        for x2 in range(n):
            V[x2, np.unique(vals[:, x2, :])] = 1
        for table, hot in ((L.join, self._join_hot), (L.meet, self._meet_hot)):
            R = self._reachable(V, hot)
            x2, x4, a = np.nonzero(R)
            out[self.P[a, table[x2, x4]]] = True
        x2, v = np.nonzero(V)
        out[self.P[L.unary[v], L.unary[x2]]] = True
        return out

    def is_closed(self, S):
        S = np.asarray(S, dtype=bool)
        return bool(S[self.L.top]) and not (self.image(S) & ~S).any()

    def closure(self, S):
        S = np.asarray(S, dtype=bool).copy()
        S[self.L.top] = True
        while True:
            grown = S | self.image(S)
            if (grown == S).all():
                return S
            S = grown


def _mask(L, subset):
    m = np.zeros(L.n, dtype=bool)
    for s in subset:
        m[s if isinstance(s, (int, np.integer)) else L.index(s)] = True
    return m


def _as_set(mask):
    return frozenset(int(i) for i in np.flatnonzero(mask))


def is_ideal(L, S):
    """True iff S contains 1 and is closed under the basis terms."""
    return IdealEngine(L).is_closed(_mask(L, S))


def ideal_closure(L, S):
    return _as_set(IdealEngine(L).closure(_mask(L, S)))


def _sort_key(ideal):
    return (len(ideal), sorted(ideal))


def all_ideals(L, max_subset_n=20):
    """All ideals, sorted by size and then lexicographically.

    Subsets are enumerated directly when ``L.n <= max_subset_n``; otherwise
    the kernels of all congruences are taken and each is checked to be an
    ideal.
    """
    eng = IdealEngine(L)
    n = L.n
    if n > max_subset_n:
        kernels = {c.block_of(L.top) for c in all_congruences(L)}
        for k in kernels:
            if not eng.is_closed(_mask(L, k)):
                raise InternalViolation(f"kernel {sorted(k)} is not closed under the basis")
        return sorted(kernels, key=_sort_key)
    others = [x for x in range(n) if x != L.top]
    found = []
    for size in range(len(others) + 1):
        for combo in combinations(others, size):
            mask = np.zeros(n, dtype=bool)
            mask[list(combo)] = True
            mask[L.top] = True
            if eng.is_closed(mask):
                found.append(_as_set(mask))
    return sorted(found, key=_sort_key)


def ideals_by_kernels(L):
    return sorted({c.block_of(L.top) for c in all_congruences(L)}, key=_sort_key)


def theta_of_ideal(L, ideal):
    """The congruence {(x, y) : t1(x, y) in I}, verified before it is returned."""
    eng = IdealEngine(L)
    mask = _mask(L, ideal)
    if not eng.is_closed(mask):
        raise NotAnIdeal(f"{sorted(L.labels[i] for i in np.flatnonzero(mask))} is not an ideal")
    rel = mask[eng.P]
    if not (np.diag(rel).all() and (rel == rel.T).all()
            and ((rel.astype(np.int64) @ rel.astype(np.int64) > 0) <= rel).all()):
        raise InternalViolation("t1-relation of an ideal is not an equivalence")
    blocks = {}
    for x in range(L.n):
        blocks.setdefault(int(np.flatnonzero(rel[x])[0]), []).append(x)
    theta = Congruence.from_blocks(L.n, blocks.values())
    if not is_congruence(L, theta):
        raise InternalViolation("t1-relation of an ideal is not a congruence")
    if theta.block_of(L.top) != _as_set(mask):
        raise InternalViolation("kernel of the t1-relation differs from the ideal")
    return theta


@dataclass
class CoincidenceReport:
    ideals: list
    kernels: list
    injective: bool

    @property
    def holds(self):
        return self.injective and self.ideals == self.kernels

    @cached_property
    def only_ideals(self):
        return [i for i in self.ideals if i not in self.kernels]

    @cached_property
    def only_kernels(self):
        return [k for k in self.kernels if k not in self.ideals]


def verify_kernel_coincidence(L):
    cons = all_congruences(L)
    kernels = [c.block_of(L.top) for c in cons]
    injective = len(set(kernels)) == len(kernels)
    return CoincidenceReport(all_ideals(L), sorted(set(kernels), key=_sort_key), injective)


def verify_ideal_identities(L):
    """Map each identity label (i)..(viii) to HOLDS or its first counterexample."""
    require_member(L)
    return {k: check_identity(L, ident) for k, ident in IDEAL_IDENTITIES.items()}


def identities_hold(results):
    return all(r == HOLDS for r in results.values())
