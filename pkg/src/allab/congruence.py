"""Congruences of a finite lattice with a unary operation."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .sasaki import require_member
from .terms import HOLDS, Counterexample, check_identity, evaluate_all, parse_identity


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if rx > ry:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


@dataclass(frozen=True)
class Congruence:
    """A partition of ``range(n)`` stored as block representatives.

    ``rep[x]`` is the least element of the block of x, so two partitions are
    equal iff their ``rep`` tuples are.
    """

    rep: tuple

    @classmethod
    def from_blocks(cls, n, blocks):
        rep = list(range(n))
        for b in blocks:
            b = sorted(b)
            for x in b:
                rep[x] = b[0]
        return cls(tuple(rep))

    @classmethod
    def from_labels(cls, L, blocks):
        return cls.from_blocks(L.n, [[L.index(s) for s in b] for b in blocks])

    @classmethod
    def _from_uf(cls, uf, n):
        # the union-find keeps the least index as root
        return cls(tuple(uf.find(x) for x in range(n)))

    @classmethod
    def discrete(cls, n):
        return cls(tuple(range(n)))

    @classmethod
    def total(cls, n):
        return cls((0,) * n)

    @property
    def n(self):
        return len(self.rep)

    def blocks(self):
        out = {}
        for x, r in enumerate(self.rep):
            out.setdefault(r, []).append(x)
        return list(out.values())

    def block_of(self, x):
        return frozenset(y for y in range(self.n) if self.rep[y] == self.rep[x])

    def related(self, x, y):
        return self.rep[x] == self.rep[y]

    def matrix(self):
        r = np.array(self.rep)
        return r[:, None] == r[None, :]

    def is_discrete(self):
        return all(r == x for x, r in enumerate(self.rep))

    def is_total(self):
        return len(set(self.rep)) == 1

    def __le__(self, other):
        return bool((~self.matrix() | other.matrix()).all())

    def meet(self, other):
        pairs = {}
        rep = []
        for x in range(self.n):
            key = (self.rep[x], other.rep[x])
            rep.append(pairs.setdefault(key, x))
        return Congruence(tuple(rep))

    def join(self, other):
        uf = _UnionFind(self.n)
        for x in range(self.n):
            uf.union(x, self.rep[x])
            uf.union(x, other.rep[x])
        return Congruence._from_uf(uf, self.n)

    def labelled_blocks(self, L):
        """Blocks as sorted label lists, ordered by their least element."""
        return [[L.labels[x] for x in b] for b in self.blocks()]

    def describe(self, L):
        return " | ".join(",".join(b) for b in self.labelled_blocks(L))


def is_congruence(L, partition):
    """True iff the partition is compatible with join, meet and the unary map."""
    if not isinstance(partition, Congruence):
        partition = Congruence.from_blocks(L.n, partition)
    theta = partition.matrix()
    pairs = np.argwhere(theta)
    x, y = pairs[:, 0], pairs[:, 1]
    if not theta[L.unary[x], L.unary[y]].all():
        return False
    # compatibility with a binary op reduces to translations z -> op(z, x)
    for table in (L.join, L.meet):
        if not theta[table[x], table[y]].all():
            return False
    return True


def principal_congruence(L, a, b):
    """Least congruence collapsing a and b."""
    uf = _UnionFind(L.n)
    todo = [(a, b)]
    if a != b:
        uf.union(a, b)
    while todo:
        x, y = todo.pop()
        images = [(int(L.unary[x]), int(L.unary[y]))]
        for z in range(L.n):
            images.append((int(L.join[x, z]), int(L.join[y, z])))
            images.append((int(L.meet[x, z]), int(L.meet[y, z])))
        for p, q in images:
            if uf.union(p, q):
                todo.append((p, q))
    return Congruence._from_uf(uf, L.n)


def all_congruences(L):
    """Con L as the join-closure of the principal congruences, plus the discrete one.

    Returned sorted by number of blocks (descending), then by ``rep``.
    """
    n = L.n
    principal = {principal_congruence(L, a, b) for a, b in combinations(range(n), 2)}
    found = {Congruence.discrete(n)} | principal
    frontier = list(found)
    while frontier:
        new = []
        for c in frontier:
            for p in principal:
                j = c.join(p)
                if j not in found:
                    found.add(j)
                    new.append(j)
        frontier = new
    return sorted(found, key=lambda c: (-len(set(c.rep)), c.rep))


def compose(theta, phi):
    """Relational product: x (theta o phi) y iff x theta w phi y for some w."""
    a = theta.matrix().astype(np.int64)
    b = phi.matrix().astype(np.int64)
    return (a @ b) > 0


@dataclass
class CongruenceProperties:
    permutable: bool
    distributive: bool
    regular: bool
    simple: bool
    subdirectly_irreducible: bool
    count: int
    witnesses: dict

    def flags(self):
        return {k: getattr(self, k) for k in
                ("permutable", "distributive", "regular", "simple", "subdirectly_irreducible")}


def check_congruence_properties(L, congruences=None):
    cons = all_congruences(L) if congruences is None else list(congruences)
    wit = {}
    n = L.n

    for i, t in enumerate(cons):
        for p in cons[i + 1:]:
            if not np.array_equal(compose(t, p), compose(p, t)):
                wit.setdefault("permutable", (t, p))
                break
        if "permutable" in wit:
            break

    for t, p, q in ((t, p, q) for t in cons for p in cons for q in cons):
        if t.meet(p.join(q)) != t.meet(p).join(t.meet(q)):
            wit["distributive"] = (t, p, q)
            break

    for i, t in enumerate(cons):
        for p in cons[i + 1:]:
            same = [a for a in range(n) if t.block_of(a) == p.block_of(a)]
            if same:
                wit.setdefault("regular", (t, p, same[0]))
                break
        if "regular" in wit:
            break

    nontrivial = [c for c in cons if not c.is_discrete()]
    monolith = None
    if nontrivial:
        monolith = nontrivial[0]
        for c in nontrivial[1:]:
            monolith = monolith.meet(c)
    si = monolith is not None and not monolith.is_discrete()
    if si:
        wit["monolith"] = monolith
    return CongruenceProperties(
        permutable="permutable" not in wit,
        distributive="distributive" not in wit,
        regular="regular" not in wit,
        simple=len(cons) == 2,
        subdirectly_irreducible=si,
        count=len(cons),
        witnesses=wit,
    )


MALCEV = (parse_identity("p(x, x, z) = z"), parse_identity("p(x, z, z) = x"))
MAJORITY = (
    parse_identity("m(x, x, y) = x"),
    parse_identity("m(x, y, x) = x"),
    parse_identity("m(y, x, x) = x"),
)
_REG = (parse_identity("reg1(x, y, z) = z").lhs, parse_identity("reg2(x, y, z) = z").lhs)


@dataclass
class TermReport:
    malcev: dict  # identity text -> HOLDS or Counterexample
    majority: dict
    regularity: object  # HOLDS or Counterexample

    @property
    def holds(self):
        results = [*self.malcev.values(), *self.majority.values(), self.regularity]
        return all(r == HOLDS for r in results)


def check_regularity_terms(L):
    """(reg1 = z and reg2 = z) iff x = y, at every (x, y, z)."""
    variables = ["x", "y", "z"]
    r1 = evaluate_all(_REG[0], L, variables)
    r2 = evaluate_all(_REG[1], L, variables)
    z = np.arange(L.n)[None, None, :]
    both = (r1 == z) & (r2 == z)
    eq = np.broadcast_to(np.eye(L.n, dtype=bool)[:, :, None], both.shape)
    bad = np.argwhere(both != eq)
    if len(bad) == 0:
        return HOLDS
    return Counterexample(dict(zip(variables, (int(i) for i in bad[0]))))


def verify_witness_terms(L):
    require_member(L)
    return TermReport(
        malcev={str(i): check_identity(L, i) for i in MALCEV},
        majority={str(i): check_identity(L, i) for i in MAJORITY},
        regularity=check_regularity_terms(L),
    )
