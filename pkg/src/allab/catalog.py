"""Named lattices and generators for the test corpus."""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .lattice import FiniteLattice, all_complementations, build_from_covers
from .sasaki import is_member_of_V


class NotADerangement(ValueError):
    pass


@dataclass(frozen=True)
class NamedFixture:
    id: str
    lattice: FiniteLattice
    provenance: str


M3_COVERS = [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]

FIG2_LABELS = ["0", "a", "b", "c", "d", "e", "f", "g", "h", "1"]
FIG2_COVERS = [
    ("0", "a"), ("0", "b"), ("0", "c"), ("0", "d"),
    ("a", "e"), ("a", "f"), ("b", "e"), ("b", "g"), ("c", "e"), ("c", "h"),
    ("d", "f"), ("d", "g"), ("d", "h"),
    ("e", "1"), ("f", "1"), ("g", "1"), ("h", "1"),
]
FIG2_FIRST = dict(zip(FIG2_LABELS, ["1", "g", "h", "f", "e", "d", "c", "a", "b", "0"]))
FIG2_SECOND = dict(zip(FIG2_LABELS, ["1", "g", "h", "f", "e", "d", "b", "c", "a", "0"]))


def m3():
    """M3 with the cyclic complementation a' = b, b' = c, c' = a."""
    unary = {"0": "1", "a": "b", "b": "c", "c": "a", "1": "0"}
    return build_from_covers(["0", "a", "b", "c", "1"], M3_COVERS, unary, name="m3")


def fig2(variant="first"):
    tables = {"first": FIG2_FIRST, "second": FIG2_SECOND}
    if variant not in tables:
        raise ValueError(f"variant must be 'first' or 'second', not {variant!r}")
    return build_from_covers(FIG2_LABELS, FIG2_COVERS, tables[variant], name=f"fig2_{variant}")


def n5():
    """The pentagon 0 < a < c < 1, 0 < b < 1 with a' = b, c' = b, b' = a."""
    covers = [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")]
    unary = {"0": "1", "a": "b", "b": "a", "c": "b", "1": "0"}
    return build_from_covers(["0", "a", "b", "c", "1"], covers, unary, name="n5")


def chain(k, name=None):
    labels = [str(i) for i in range(k)]
    covers = [(labels[i], labels[i + 1]) for i in range(k - 1)]
    unary = {s: labels[k - 1 - i] for i, s in enumerate(labels)}
    return build_from_covers(labels, covers, unary, name=name or f"chain{k}")


def parse_cycles(text, n):
    """Parse cycle notation such as ``(1 2)(3 4)`` over atoms ``1..n``.

    Returns the permutation as a list ``pi`` with ``pi[i-1] = j`` for i -> j.
    """
    pi = list(range(1, n + 1))
    seen = set()
    text = text.strip()
    if re.sub(r"\(\s*\d+(?:[\s,]+\d+)*\s*\)", "", text).strip():
        raise ValueError(f"malformed cycle notation {text!r}")
    for cyc in re.findall(r"\(([^)]*)\)", text):
        elems = [int(s) for s in re.split(r"[\s,]+", cyc.strip())]
        for e in elems:
            if not 1 <= e <= n or e in seen:
                raise ValueError(f"bad or repeated atom {e} in {text!r}")
            seen.add(e)
        for i, e in enumerate(elems):
            pi[e - 1] = elems[(i + 1) % len(elems)]
    return pi


def make_m_n(n, pi=None):
    """M_n with complementation a_i' = pi(a_i); ``pi`` maps 1..n to 1..n.

    ``pi`` may be a sequence (``pi[i-1]`` is the image of ``i``), a dict, or
    a cycle-notation string.  Defaults to the cycle (1 2 ... n).
    """
    if n < 3:
        raise ValueError("M_n needs n >= 3")
    if pi is None:
        pi = [i % n + 1 for i in range(1, n + 1)]
    elif isinstance(pi, str):
        pi = parse_cycles(pi, n)
    elif isinstance(pi, dict):
        pi = [pi[i] for i in range(1, n + 1)]
    pi = list(pi)
    if sorted(pi) != list(range(1, n + 1)):
        raise ValueError(f"{pi} is not a permutation of 1..{n}")
    fixed = [i for i in range(1, n + 1) if pi[i - 1] == i]
    if fixed:
        raise NotADerangement(f"a{fixed[0]} is a fixed point, so a{fixed[0]} ^ a{fixed[0]}' != 0")
    atoms = [f"a{i}" for i in range(1, n + 1)]
    covers = [("0", a) for a in atoms] + [(a, "1") for a in atoms]
    unary = {"0": "1", "1": "0"}
    unary.update({f"a{i}": f"a{pi[i - 1]}" for i in range(1, n + 1)})
    return build_from_covers(["0", *atoms, "1"], covers, unary, name=f"m{n}")


def derangement_cycle_types(n):
    """Partitions of n into parts >= 2, largest part first."""
    def parts(rest, largest):
        if rest == 0:
            yield []
            return
        for k in range(min(rest, largest), 1, -1):
            for tail in parts(rest - k, k):
                yield [k, *tail]
    return list(parts(n, n))


def derangement_for_type(cycle_type):
    """A representative derangement (as ``pi`` list) of the given cycle type."""
    pi = []
    start = 1
    for k in cycle_type:
        pi.extend(start + (j + 1) % k for j in range(k))
        start += k
    return pi


def fixtures():
    return [
        NamedFixture("m3", m3(), "M3 with the cyclic complementation"),
        NamedFixture("fig2_first", fig2("first"), "ten-element lattice, first complement table"),
        NamedFixture("fig2_second", fig2("second"), "ten-element lattice, second complement table"),
        NamedFixture("n5", n5(), "pentagon, not in the variety"),
        NamedFixture("m4", make_m_n(4, "(1 2)(3 4)"), "M_n template, n = 4"),
        NamedFixture("m5", make_m_n(5), "M_n template, n = 5"),
        NamedFixture("m6", make_m_n(6, "(1 2)(3 4)(5 6)"), "M_n template, n = 6"),
    ]


# enumeration up to isomorphism

MAX_ENUM_N = 7


def _naturally_labelled_posets(k):
    """All orders on range(k) in which i <= j implies i <= j as integers.

    Each is yielded as a tuple of down-sets (frozensets).  Every poset on k
    elements has at least one such labelling.
    """
    def extend(downs):
        j = len(downs)
        if j == k:
            yield tuple(downs)
            return
        # the strict down-set of the new element is any order ideal of the
        # poset built so far
        for ideal in _order_ideals(downs):
            yield from extend(downs + [ideal | {j}])

    yield from extend([])


def _order_ideals(downs):
    out = [frozenset()]
    for j, d in enumerate(downs):
        below = d - {j}
        out += [s | {j} for s in out if below <= s]
    return out


def _lattice_leq(k, downs):
    n = k + 2
    leq = np.zeros((n, n), dtype=bool)
    leq[0, :] = True
    leq[:, n - 1] = True
    for j, d in enumerate(downs):
        for i in d:
            leq[i + 1, j + 1] = True
    return leq


def _is_lattice(leq):
    n = leq.shape[0]
    for x in range(n):
        for y in range(x + 1, n):
            ub = np.flatnonzero(leq[x] & leq[y])
            if not any(leq[c, ub].all() for c in ub):
                return False
    return True


def canonical_code(leq):
    """Lexicographically least order matrix over relabellings fixing 0 and 1."""
    n = leq.shape[0]
    if n <= 2:
        return leq.tobytes()
    inner = range(1, n - 1)
    best = None
    for perm in permutations(inner):
        order = np.array([0, *perm, n - 1])
        code = leq[np.ix_(order, order)].tobytes()
        if best is None or code < best:
            best = code
    return best


def enumerate_bounded_lattices(n):
    """Yield every bounded lattice with ``n`` elements once, up to isomorphism.

    Elements are labelled ``0``, ``1`` (the bounds) and ``e1..e{n-2}``, and the
    unary map of each result is the identity placeholder.
    """
    if not 1 <= n <= MAX_ENUM_N:
        raise ValueError(f"exhaustive enumeration supports 1 <= n <= {MAX_ENUM_N}")
    if n == 1:
        yield FiniteLattice.from_order(["0"], np.ones((1, 1), bool), [0], name="L1_1")
        return
    k = n - 2
    labels = ["0", *(f"e{i}" for i in range(1, k + 1)), "1"]
    seen = set()
    count = 0
    for downs in _naturally_labelled_posets(k):
        leq = _lattice_leq(k, downs)
        if not _is_lattice(leq):
            continue
        code = canonical_code(leq)
        if code in seen:
            continue
        seen.add(code)
        count += 1
        yield FiniteLattice.from_order(labels, leq, list(range(n)), name=f"L{n}_{count}")


def complemented_corpus(max_n=6):
    """Every (lattice, complementation) pair with at most ``max_n`` elements."""
    for n in range(1, max_n + 1):
        for L in enumerate_bounded_lattices(n):
            for i, c in enumerate(all_complementations(L)):
                yield L.with_unary(c, name=f"{L.name}_c{i}")


def m_n_family(ns=range(3, 7)):
    """M_n with one derangement per cycle type (derangements up to conjugacy)."""
    for n in ns:
        for ct in derangement_cycle_types(n):
            tag = "_".join(map(str, ct))
            L = make_m_n(n, derangement_for_type(ct))
            yield L.with_unary(L.unary, name=f"m{n}_{tag}")


def variety_corpus(max_n=6):
    """Fixtures in the variety, enumerated members up to ``max_n``, and M_n for n = 3..6."""
    out = [f.lattice for f in fixtures() if is_member_of_V(f.lattice)]
    out += [L for L in complemented_corpus(max_n) if is_member_of_V(L)]
    out += list(m_n_family())
    return out
