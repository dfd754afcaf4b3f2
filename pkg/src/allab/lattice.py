"""Finite bounded lattices carrying a total unary operation.

Elements are the integers ``0..n-1``; labels exist only for input and output.
A lattice is built from a Hasse diagram (its cover pairs), and the order,
join and meet tables are derived from it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from pathlib import Path

import numpy as np


class LatticeError(ValueError):
    pass


class NotALattice(LatticeError):
    def __init__(self, pair, bounds, kind="join"):
        self.pair = pair
        self.bounds = bounds
        self.kind = kind
        word = "upper" if kind == "join" else "lower"
        super().__init__(
            f"{pair[0]} and {pair[1]} have no unique {kind}; "
            f"minimal {word} bounds: {', '.join(bounds) or 'none'}"
        )


class NoBounds(LatticeError):
    pass


class UnknownLabel(LatticeError):
    pass


class PartialUnary(LatticeError):
    pass


def _frozen(a):
    a = np.array(a)
    a.flags.writeable = False
    return a


def _transitive_closure(rel):
    rel = rel.copy()
    for k in range(rel.shape[0]):
        rel |= rel[:, k, None] & rel[None, k, :]
    return rel


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    """A bounded lattice ``(L, join, meet, ', 0, 1)`` on ``range(n)``.

    ``leq[x, y]`` is true iff x <= y.  ``join``/``meet`` are n x n integer
    tables and ``unary`` is an integer vector; the unary map need not be a
    complementation, see :attr:`is_complemented`.
    """

    labels: tuple
    leq: np.ndarray
    join: np.ndarray
    meet: np.ndarray
    bottom: int
    top: int
    unary: np.ndarray
    name: str = field(default="", compare=False)

    @property
    def n(self):
        return len(self.labels)

    def __len__(self):
        return self.n

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<FiniteLattice{tag} n={self.n}>"

    # construction

    @classmethod
    def from_order(cls, labels, leq, unary, name=""):
        """Build from a full order relation, computing the lattice tables."""
        labels = tuple(str(s) for s in labels)
        leq = np.asarray(leq, dtype=bool)
        n = len(labels)
        if n == 0:
            raise NoBounds("empty carrier")
        if not np.all(np.diag(leq)):
            raise LatticeError("order relation is not reflexive")
        off = leq & leq.T
        np.fill_diagonal(off, False)
        if off.any():
            x, y = np.argwhere(off)[0]
            raise LatticeError(f"cycle through {labels[x]} and {labels[y]}")
        bottoms = [x for x in range(n) if leq[x].all()]
        tops = [x for x in range(n) if leq[:, x].all()]
        if not bottoms or not tops:
            missing = "least" if not bottoms else "greatest"
            raise NoBounds(f"no {missing} element")
        join = np.empty((n, n), dtype=np.intp)
        meet = np.empty((n, n), dtype=np.intp)
        for x in range(n):
            for y in range(x, n):
                join[x, y] = join[y, x] = _extremal_bound(leq, labels, x, y, "join")
                meet[x, y] = meet[y, x] = _extremal_bound(leq, labels, x, y, "meet")
        unary = np.asarray(unary, dtype=np.intp)
        if unary.shape != (n,) or ((unary < 0) | (unary >= n)).any():
            raise PartialUnary("unary map must send every element into the carrier")
        return cls(labels, _frozen(leq), _frozen(join), _frozen(meet),
                   bottoms[0], tops[0], _frozen(unary), name)

    def with_unary(self, unary, name=None):
        unary = np.asarray(unary, dtype=np.intp)
        if unary.shape != (self.n,) or ((unary < 0) | (unary >= self.n)).any():
            raise PartialUnary("unary map must send every element into the carrier")
        return FiniteLattice(self.labels, self.leq, self.join, self.meet, self.bottom,
                             self.top, _frozen(unary), self.name if name is None else name)

    # lookups

    def index(self, label):
        try:
            return self._index[str(label)]
        except KeyError:
            raise UnknownLabel(f"unknown element {label!r}") from None

    @cached_property
    def _index(self):
        return {s: i for i, s in enumerate(self.labels)}

    def label(self, x):
        return self.labels[x]

    def comp(self, x):
        return int(self.unary[x])

    def covers(self):
        """Cover pairs ``(x, y)`` with x < y and nothing strictly between."""
        strict = self.leq.copy()
        np.fill_diagonal(strict, False)
        through = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
        return [(int(x), int(y)) for x, y in np.argwhere(strict & ~through)]

    @cached_property
    def is_complemented(self):
        u = self.unary
        idx = np.arange(self.n)
        return bool((self.meet[idx, u] == self.bottom).all()
                    and (self.join[idx, u] == self.top).all())

    # interchange

    def to_dict(self):
        return {
            "labels": list(self.labels),
            "covers": [[self.labels[x], self.labels[y]] for x, y in self.covers()],
            "unary": {self.labels[x]: self.labels[self.comp(x)] for x in range(self.n)},
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)

    def save(self, path):
        d = self.to_dict()
        # one cover pair per line keeps fixture diffs readable
        covers = ",\n    ".join(json.dumps(c) for c in d["covers"])
        text = (
            "{\n"
            f'  "labels": {json.dumps(d["labels"])},\n'
            f'  "covers": [\n    {covers}\n  ],\n'
            f'  "unary": {json.dumps(d["unary"])}\n'
            "}\n"
        )
        Path(path).write_text(text, encoding="utf-8")


def _extremal_bound(leq, labels, x, y, kind):
    n = len(labels)
    if kind == "join":
        cand = np.flatnonzero(leq[x] & leq[y])
        best = [c for c in cand if not any(leq[d, c] and d != c for d in cand)]
    else:
        cand = np.flatnonzero(leq[:, x] & leq[:, y])
        best = [c for c in cand if not any(leq[c, d] and d != c for d in cand)]
    if len(best) != 1:
        raise NotALattice((labels[x], labels[y]), [labels[b] for b in best], kind)
    assert best[0] < n
    return best[0]


def build_from_covers(labels, covers, unary, name=""):
    """Build a lattice from its Hasse diagram.

    ``covers`` is a list of ``(lower, upper)`` label pairs and ``unary`` a
    mapping from every label to a label.  The order is the reflexive,
    transitive closure of the covers.
    """
    labels = [str(s) for s in labels]
    if len(set(labels)) != len(labels):
        raise LatticeError("duplicate labels")
    index = {s: i for i, s in enumerate(labels)}
    n = len(labels)

    def look(s):
        try:
            return index[str(s)]
        except KeyError:
            raise UnknownLabel(f"unknown element {s!r}") from None

    rel = np.eye(n, dtype=bool)
    for lo, hi in covers:
        i, j = look(lo), look(hi)
        if i == j:
            raise LatticeError(f"cover pair ({lo}, {hi}) is reflexive")
        rel[i, j] = True
    leq = _transitive_closure(rel)

    unary = {str(k): str(v) for k, v in dict(unary).items()}
    for k in unary:
        look(k)
    missing = [s for s in labels if s not in unary]
    if missing:
        raise PartialUnary(f"unary map undefined on {', '.join(missing)}")
    vec = [look(unary[s]) for s in labels]
    return FiniteLattice.from_order(labels, leq, vec, name=name)


def from_dict(data, name=""):
    try:
        return build_from_covers(data["labels"], data["covers"], data["unary"], name=name)
    except KeyError as exc:
        raise LatticeError(f"lattice file lacks field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, LatticeError):
            raise
        raise LatticeError(f"malformed lattice data: {exc}") from None


def load(path):
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LatticeError(f"{path}: not valid JSON ({exc})") from None
    return from_dict(data, name=path.stem)


# classification


@dataclass
class ClassifierFlags:
    is_lattice: bool
    is_complemented: bool
    is_modular: bool
    is_distributive: bool
    unary_is_involution: bool
    unary_is_antitone: bool
    is_ortholattice: bool
    is_orthomodular: bool
    # flag name -> labelled counterexample, for flags that are false
    witnesses: dict = field(default_factory=dict)

    def flags(self):
        return {k: v for k, v in vars(self).items() if k != "witnesses"}


def _first(mask):
    hits = np.argwhere(mask)
    return None if len(hits) == 0 else tuple(int(i) for i in hits[0])


def classify(L):
    """Decide the standard structural properties of ``L`` exhaustively."""
    n, J, M, u, leq = L.n, L.join, L.meet, L.unary, L.leq
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    lab = L.labels
    wit = {}

    comp_bad = _first((M[np.arange(n), u] != L.bottom) | (J[np.arange(n), u] != L.top))
    if comp_bad is not None:
        (a,) = comp_bad
        wit["is_complemented"] = {"x": lab[a], "x'": lab[u[a]]}

    # modular law: x <= z implies x v (y ^ z) = (x v y) ^ z
    mod_fail = leq[x[:, :, 0], z[:, 0, :]][:, None, :] & (J[x, M[y, z]] != M[J[x, y], z])
    hit = _first(mod_fail)
    if hit is not None:
        wit["is_modular"] = dict(zip("xyz", (lab[i] for i in hit)))
    dist_fail = M[x, J[y, z]] != J[M[x, y], M[x, z]]
    hit = _first(dist_fail)
    if hit is not None:
        wit["is_distributive"] = dict(zip("xyz", (lab[i] for i in hit)))

    invol = _first(u[u] != np.arange(n))
    if invol is not None:
        (a,) = invol
        wit["unary_is_involution"] = {"x": lab[a], "x'": lab[u[a]], "x''": lab[u[u[a]]]}
    anti = _first(leq & ~leq[u[None, :], u[:, None]])
    if anti is not None:
        a, b = anti
        wit["unary_is_antitone"] = {"x": lab[a], "y": lab[b], "x'": lab[u[a]], "y'": lab[u[b]]}

    is_ortho = comp_bad is None and invol is None and anti is None
    # orthomodular law: x <= y implies y = x v (y ^ x')
    om_fail = leq & (J[x[:, :, 0], M[y[:, :, 0], u[x[:, :, 0]]]] != y[:, :, 0])
    om = is_ortho and _first(om_fail) is None
    if is_ortho and not om:
        a, b = _first(om_fail)
        wit["is_orthomodular"] = {"x": lab[a], "y": lab[b]}

    return ClassifierFlags(
        is_lattice=True,
        is_complemented=comp_bad is None,
        is_modular="is_modular" not in wit,
        is_distributive="is_distributive" not in wit,
        unary_is_involution=invol is None,
        unary_is_antitone=anti is None,
        is_ortholattice=is_ortho,
        is_orthomodular=om,
        witnesses=wit,
    )


def complements_of(L, x):
    return [y for y in range(L.n) if L.meet[x, y] == L.bottom and L.join[x, y] == L.top]


def all_complementations(L):
    """Every total map sending each element to one of its complements."""
    choices = [complements_of(L, x) for x in range(L.n)]
    if any(not c for c in choices):
        return []
    return [np.array(c, dtype=np.intp) for c in product(*choices)]


def direct_product(L1, L2, name=""):
    n1, n2 = L1.n, L2.n
    labels = tuple(f"({a},{b})" for a in L1.labels for b in L2.labels)
    # element (i, j) has index i * n2 + j
    I = np.repeat(np.arange(n1), n2)
    Jx = np.tile(np.arange(n2), n1)
    leq = L1.leq[I[:, None], I[None, :]] & L2.leq[Jx[:, None], Jx[None, :]]
    join = L1.join[I[:, None], I[None, :]] * n2 + L2.join[Jx[:, None], Jx[None, :]]
    meet = L1.meet[I[:, None], I[None, :]] * n2 + L2.meet[Jx[:, None], Jx[None, :]]
    unary = L1.unary[I] * n2 + L2.unary[Jx]
    return FiniteLattice(labels, _frozen(leq), _frozen(join), _frozen(meet),
                         L1.bottom * n2 + L2.bottom, L1.top * n2 + L2.top,
                         _frozen(unary), name or f"{L1.name}x{L2.name}")


def is_isomorphic(L1, L2, respect_unary=True):
    """Search for an order isomorphism, optionally commuting with the unary maps."""
    if L1.n != L2.n:
        return False
    n = L1.n
    up1, up2 = L1.leq.sum(1), L2.leq.sum(1)
    dn1, dn2 = L1.leq.sum(0), L2.leq.sum(0)
    sig1 = [(up1[x], dn1[x]) for x in range(n)]
    sig2 = [(up2[x], dn2[x]) for x in range(n)]
    if sorted(sig1) != sorted(sig2):
        return False
    f = [-1] * n
    used = [False] * n

    def consistent(x):
        for w in range(x + 1):
            if f[w] < 0:
                continue
            if L1.leq[x, w] != L2.leq[f[x], f[w]] or L1.leq[w, x] != L2.leq[f[w], f[x]]:
                return False
            if respect_unary:
                uw = L1.unary[w]
                if f[uw] >= 0 and L2.unary[f[w]] != f[uw]:
                    return False
                ux = L1.unary[x]
                if f[ux] >= 0 and L2.unary[f[x]] != f[ux]:
                    return False
        return True

    def extend(x):
        if x == n:
            return True
        for y in range(n):
            if used[y] or sig2[y] != sig1[x]:
                continue
            f[x], used[y] = y, True
            if consistent(x) and extend(x + 1):
                return True
            f[x], used[y] = -1, False
        return False

    return extend(0)
