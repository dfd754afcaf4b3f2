"""Sasaki operations, the adjointness condition and membership in the variety.

The Sasaki product and residual on a bounded lattice with a unary map are

    x o y  = (x v y') ^ y
    x -> y = x' v (x ^ y)

and they form an adjoint pair when ``x o y <= z  iff  x <= y -> z``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .terms import HOLDS, check_identity, check_quasi, parse_identity, parse_quasi


class NotComplemented(ValueError):
    pass


FORWARD_FAILS = "⇒-fails"
BACKWARD_FAILS = "⇐-fails"

# The six conditions on a complemented lattice.  (a)-(c) are equivalent and
# so are (d)-(f).
CONDITIONS = {
    "a": parse_quasi("x o y <= z => x <= y -> z"),
    "b": parse_identity("x v y' = y' v ((x v y') ^ y)"),
    "c": parse_quasi("x' <= y => y = x' v (y ^ x)"),
    "d": parse_quasi("x <= y -> z => x o y <= z"),
    "e": parse_identity("x ^ y = x ^ ((x ^ y) v x')"),
    "f": parse_quasi("x <= y => x = (y' v x) ^ y"),
}
GROUPS = (("a", "b", "c"), ("d", "e", "f"))


def sasaki_product(L, x, y):
    return int(L.meet[L.join[x, L.unary[y]], y])


def sasaki_residual(L, x, y):
    return int(L.join[L.unary[x], L.meet[x, y]])


def product_table(L):
    idx = np.arange(L.n)
    return L.meet[L.join[idx[:, None], L.unary[None, :]], idx[None, :]]


def residual_table(L):
    idx = np.arange(L.n)
    return L.join[L.unary[:, None], L.meet[idx[:, None], idx[None, :]]]


@dataclass
class AdjointReport:
    holds: bool
    witness: tuple | None = None  # (x, y, z) element indices
    direction: str | None = None
    triples: int = 0

    def describe(self, L):
        if self.holds:
            return f"holds ({self.triples} triples)"
        x, y, z = (L.labels[i] for i in self.witness)
        return f"fails ({self.direction}) at x={x}, y={y}, z={z}"


def check_adjoint(L):
    """Search all triples in lexicographic order for a failure of adjointness."""
    prod, res = product_table(L), residual_table(L)
    # left[x, y, z]: x o y <= z ; right[x, y, z]: x <= y -> z
    left = L.leq[prod[:, :, None], np.arange(L.n)[None, None, :]]
    right = L.leq[np.arange(L.n)[:, None, None], res[None, :, :]]
    bad = np.argwhere(left != right)
    total = L.n ** 3
    if len(bad) == 0:
        return AdjointReport(True, triples=total)
    x, y, z = (int(i) for i in bad[0])
    direction = FORWARD_FAILS if left[x, y, z] else BACKWARD_FAILS
    return AdjointReport(False, (x, y, z), direction, total)


@dataclass
class ConditionsReport:
    verdicts: dict  # condition letter -> bool
    counterexamples: dict = field(default_factory=dict)  # letter -> {var: index}

    @property
    def first_group_agrees(self):
        return len({self.verdicts[k] for k in GROUPS[0]}) == 1

    @property
    def second_group_agrees(self):
        return len({self.verdicts[k] for k in GROUPS[1]}) == 1


def check_conditions(L):
    if not L.is_complemented:
        raise NotComplemented("the unary map is not a complementation")
    verdicts, cex = {}, {}
    for key, stmt in CONDITIONS.items():
        if key in ("b", "e"):
            r = check_identity(L, stmt)
        else:
            r = check_quasi(L, stmt)
        verdicts[key] = r == HOLDS
        if r != HOLDS:
            cex[key] = r.assignment
    return ConditionsReport(verdicts, cex)


def membership_failure(L):
    """Why ``L`` is not in the variety, or None if it is.

    Returns ``("complemented", {"x": i})`` or ``(letter, assignment)`` for the
    first of the identities (b), (e) that fails.
    """
    if not L.is_complemented:
        idx = np.arange(L.n)
        bad = (L.meet[idx, L.unary] != L.bottom) | (L.join[idx, L.unary] != L.top)
        return "complemented", {"x": int(np.flatnonzero(bad)[0])}
    for key in ("b", "e"):
        r = check_identity(L, CONDITIONS[key])
        if r != HOLDS:
            return key, r.assignment
    return None


def is_member_of_V(L):
    """Complemented and satisfying identities (b) and (e)."""
    return membership_failure(L) is None


class NotInV(ValueError):
    pass


def require_member(L):
    why = membership_failure(L)
    if why is not None:
        key, asg = why
        where = ", ".join(f"{v}={L.labels[i]}" for v, i in asg.items())
        if key == "complemented":
            raise NotInV(f"not in the variety: unary map is not a complementation at {where}")
        raise NotInV(f"not in the variety: identity ({key}) fails at {where}")


VACUOUS, CONFIRMED, VIOLATION = "vacuous", "confirmed", "VIOLATION"


def check_complement_forcing(L):
    """Adjointness should force the unary map to be a complementation."""
    if not check_adjoint(L).holds:
        return VACUOUS
    return CONFIRMED if L.is_complemented else VIOLATION
