"""Permutation arithmetic, cycle-notation I/O, exhaustive group materialization,
orbits, stabilizers, and subgroup enumeration.

Points are 0-based internally; all text I/O (cycle notation, generator files)
is 1-based.  Composition is left-to-right: (p * q)(x) = q(p(x)).  Groups are
materialized as full sorted element lists; the enumeration cap guards against
accidental use on groups that are too large for that.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .numtheory import factorize

DEFAULT_CAP = 10_000_000
SUBGROUP_ORDER_BOUND = 256
# order**2 table entries at 2 bytes each; 16000**2 is ~0.5 GB
_MUL_TABLE_MAX_ORDER = 16000


class CapExceededError(RuntimeError):
    """Group closure grew past the configured enumeration cap."""


class CycleFormatError(ValueError):
    """Malformed cycle-notation input."""


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    """A bijection on {0, ..., degree-1}, stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("images do not form a bijection on 0..degree-1")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: Permutation) -> Permutation:
        """self then other."""
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def __pow__(self, n: int) -> Permutation:
        if n < 0:
            return self.inverse() ** (-n)
        out = identity(self.degree)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point, sorted."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __str__(self) -> str:
        return print_cycles(self)

    def __repr__(self) -> str:
        return f"Permutation({print_cycles(self)!r}, degree={self.degree})"


def identity(degree: int) -> Permutation:
    return Permutation(tuple(range(degree)))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse 1-based disjoint cycle notation, e.g. "(1,2)(3,5)".

    Whitespace is tolerated anywhere; an empty string (or "()") is the
    identity.  Points must be distinct across the whole expression and lie
    in 1..degree.
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    stripped = re.sub(r"\s+", "", text)
    if not stripped:
        return identity(degree)
    consumed = _CYCLE_RE.sub("", stripped)
    if consumed:
        raise CycleFormatError(f"unbalanced or stray characters: {consumed!r}")
    images = list(range(degree))
    seen: set[int] = set()
    for body in _CYCLE_RE.findall(stripped):
        if not body:
            continue
        try:
            points = [int(tok) for tok in body.split(",")]
        except ValueError as exc:
            raise CycleFormatError(f"bad cycle {body!r}") from exc
        for pt in points:
            if not 1 <= pt <= degree:
                raise CycleFormatError(f"point {pt} out of range 1..{degree}")
            if pt in seen:
                raise CycleFormatError(f"point {pt} repeated")
            seen.add(pt)
        for a, b in zip(points, points[1:] + points[:1]):
            images[a - 1] = b - 1
    return Permutation(tuple(images))


def print_cycles(p: Permutation) -> str:
    """Canonical 1-based cycle notation; the identity prints as "()"."""
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(pt + 1) for pt in cyc) + ")" for cyc in cycles)


# ---------------------------------------------------------------------------
# generator files

GENS_HEADER_RE = re.compile(r"^degree:\s*(\d+)$")


def load_generators(path: str | Path) -> tuple[int, list[Permutation]]:
    """Read a generator file: `degree: N` then one cycle expression per line."""
    degree = None
    gens: list[Permutation] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if degree is None:
            m = GENS_HEADER_RE.match(line)
            if not m:
                raise CycleFormatError(f"first line must be 'degree: N', got {line!r}")
            degree = int(m.group(1))
            continue
        gens.append(parse_cycles(line, degree))
    if degree is None:
        raise CycleFormatError(f"{path}: missing 'degree:' header")
    return degree, gens


def write_generators(path: str | Path, degree: int, gens: Sequence[Permutation]) -> None:
    lines = [f"degree: {degree}"] + [print_cycles(g) for g in gens]
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# group tables


def _dtype_for(degree: int) -> np.dtype:
    return np.dtype(np.uint8) if degree <= 255 else np.dtype(np.uint16)


class GroupTable:
    """A finite permutation group materialized as its full sorted element list.

    Elements are identified by their index in the lexicographic ordering of
    image arrays; the identity is always index 0.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], imgs: np.ndarray):
        self.degree = degree
        self.generators = tuple(generators)
        self._imgs = imgs
        self._imgs.setflags(write=False)
        self.order = int(imgs.shape[0])
        self._index = {imgs[i].tobytes(): i for i in range(self.order)}
        self.generator_indices = tuple(self.index_of(g) for g in generators)
        self._mul_table: np.ndarray | None = None
        self._inv: np.ndarray | None = None
        self._orders: np.ndarray | None = None
        self._elements: list[Permutation] | None = None

    # -- construction

    @classmethod
    def generate(cls, generators: Sequence[Permutation], cap: int = DEFAULT_CAP) -> GroupTable:
        """Breadth-first closure of the generators under composition."""
        if not generators:
            raise ValueError("need at least one generator")
        degree = generators[0].degree
        if any(g.degree != degree for g in generators):
            raise ValueError("generators must share one degree")
        dt = _dtype_for(degree)
        gen_rows = np.array([g.images for g in generators], dtype=dt)
        ident = np.arange(degree, dtype=dt)
        seen: dict[bytes, None] = {ident.tobytes(): None}
        rows = [ident]
        frontier = []
        for row in gen_rows:
            key = row.tobytes()
            if key not in seen:
                seen[key] = None
                rows.append(row)
                frontier.append(row)
        frontier_arr = np.array(frontier, dtype=dt) if frontier else np.empty((0, degree), dt)
        while frontier_arr.shape[0]:
            new_rows = []
            for g in gen_rows:
                prods = g[frontier_arr]  # x then g, for every frontier x
                for row in prods:
                    key = row.tobytes()
                    if key not in seen:
                        seen[key] = None
                        rows.append(row)
                        new_rows.append(row)
            if len(seen) > cap:
                raise CapExceededError(
                    f"closure exceeded cap {cap}; raise the cap only if this is intended"
                )
            frontier_arr = (
                np.array(new_rows, dtype=dt) if new_rows else np.empty((0, degree), dt)
            )
        imgs = np.array(rows, dtype=dt)
        order = np.lexsort(imgs.T[::-1])
        return cls(degree, generators, imgs[order])

    @classmethod
    def from_file(cls, path: str | Path, cap: int = DEFAULT_CAP) -> GroupTable:
        degree, gens = load_generators(path)
        return cls.generate(gens, cap=cap)

    # -- element access

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(int(x) for x in self._imgs[i]))

    def elements(self) -> list[Permutation]:
        if self._elements is None:
            self._elements = [self.element(i) for i in range(self.order)]
        return self._elements

    def index_of(self, p: Permutation) -> int:
        key = np.asarray(p.images, dtype=self._imgs.dtype).tobytes()
        try:
            return self._index[key]
        except KeyError:
            raise ValueError("permutation is not an element of this group") from None

    @property
    def identity_index(self) -> int:
        return 0

    def images_array(self) -> np.ndarray:
        """(order, degree) read-only array of image rows, lexicographically sorted."""
        return self._imgs

    # -- index arithmetic

    def mul(self, i: int, j: int) -> int:
        """Index of element_i * element_j (left-to-right composition)."""
        if self._mul_table is not None:
            return int(self._mul_table[i, j])
        row = self._imgs[j][self._imgs[i]]
        return self._index[row.tobytes()]

    def inv(self, i: int) -> int:
        return int(self.inverse_indices()[i])

    def inverse_indices(self) -> np.ndarray:
        if self._inv is None:
            inv_rows = np.argsort(self._imgs, axis=1).astype(self._imgs.dtype)
            self._inv = np.fromiter(
                (self._index[inv_rows[i].tobytes()] for i in range(self.order)),
                dtype=np.int64,
                count=self.order,
            )
        return self._inv

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            if self._mul_table is not None:
                T = self._mul_table
                orders = np.zeros(self.order, dtype=np.int64)
                orders[0] = 1
                cur = np.arange(self.order, dtype=np.int64)
                alive = np.flatnonzero(cur)
                k = 1
                while alive.size:
                    k += 1
                    cur[alive] = T[cur[alive], alive]
                    done = alive[cur[alive] == 0]
                    orders[done] = k
                    alive = alive[cur[alive] != 0]
            else:
                orders = np.fromiter(
                    (self.element(i).order() for i in range(self.order)),
                    dtype=np.int64,
                    count=self.order,
                )
            self._orders = orders
        return self._orders

    def mul_table(self) -> np.ndarray:
        """Dense (order, order) multiplication table; rows built by left-BFS."""
        if self._mul_table is None:
            if self.order > _MUL_TABLE_MAX_ORDER:
                raise CapExceededError(
                    f"multiplication table for order {self.order} would be too large"
                )
            n = self.order
            dt = np.uint16 if n <= np.iinfo(np.uint16).max else np.uint32
            # left-multiplication maps for each generator: Lg[i] = index of g*e_i
            lmaps = []
            for g in self.generators:
                g_img = np.asarray(g.images, dtype=self._imgs.dtype)
                prod_rows = self._imgs[:, g_img]  # (g*e_i)(x) = e_i(g(x))
                lmaps.append(
                    np.fromiter(
                        (self._index[prod_rows[i].tobytes()] for i in range(n)),
                        dtype=np.int64,
                        count=n,
                    )
                )
            T = np.zeros((n, n), dtype=dt)
            T[0] = np.arange(n, dtype=dt)
            built = np.zeros(n, dtype=bool)
            built[0] = True
            frontier = [0]
            while frontier:
                nxt = []
                for y in frontier:
                    for lm in lmaps:
                        x = int(lm[y])
                        if not built[x]:
                            # e_x = g*e_y, so e_x*e_j = g*(e_y*e_j)
                            T[x] = lm[T[y]]
                            built[x] = True
                            nxt.append(x)
                frontier = nxt
            if not built.all():
                raise RuntimeError("multiplication table BFS did not cover the group")
            self._mul_table = T
        return self._mul_table

    # -- misc

    def is_transitive(self) -> bool:
        return len(orbits(self)) == 1

    def __repr__(self) -> str:
        return f"GroupTable(degree={self.degree}, order={self.order})"


generate = GroupTable.generate


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by the sorted indices of its elements in the parent."""

    parent: GroupTable = field(repr=False)
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if tuple(sorted(set(self.indices))) != self.indices:
            raise ValueError("indices must be sorted and duplicate-free")
        if not self.indices or self.indices[0] != self.parent.identity_index:
            raise ValueError("a subgroup must contain the identity")
        if self.parent.order % len(self.indices):
            raise ValueError("order does not divide the parent order")

    @classmethod
    def from_indices(
        cls, parent: GroupTable, indices: Iterable[int], verify: bool = False
    ) -> Subgroup:
        ids = tuple(sorted({int(i) for i in indices}))
        sub = cls(parent, ids)
        if verify and not sub.is_closed():
            raise ValueError("element set is not closed under composition")
        return sub

    @property
    def order(self) -> int:
        return len(self.indices)

    def is_closed(self) -> bool:
        ids = set(self.indices)
        return all(self.parent.mul(a, b) in ids for a in self.indices for b in self.indices)

    def elements(self) -> list[Permutation]:
        return [self.parent.element(i) for i in self.indices]

    def __contains__(self, p: Permutation) -> bool:
        try:
            return self.parent.index_of(p) in set(self.indices)
        except ValueError:
            return False

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent!r})"


def trivial_subgroup(G: GroupTable) -> Subgroup:
    return Subgroup(G, (G.identity_index,))


def whole_group(G: GroupTable) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def orbits(H: Subgroup | GroupTable) -> list[tuple[int, ...]]:
    """Point orbits, each sorted, the list sorted by (length, smallest point)."""
    if isinstance(H, GroupTable):
        degree = H.degree
        rows = [np.asarray(g.images) for g in H.generators]
    else:
        degree = H.parent.degree
        rows = [H.parent.images_array()[i] for i in H.indices]
    seen = np.zeros(degree, dtype=bool)
    out = []
    for start in range(degree):
        if seen[start]:
            continue
        orbit = {start}
        frontier = [start]
        seen[start] = True
        while frontier:
            nxt = []
            for pt in frontier:
                for row in rows:
                    q = int(row[pt])
                    if not seen[q]:
                        seen[q] = True
                        orbit.add(q)
                        nxt.append(q)
            frontier = nxt
        out.append(tuple(sorted(orbit)))
    out.sort(key=lambda orb: (len(orb), orb[0]))
    return out


def point_stabilizer(G: GroupTable, alpha: int) -> Subgroup:
    if not 0 <= alpha < G.degree:
        raise ValueError("point out of range")
    fixed = np.flatnonzero(G.images_array()[:, alpha] == alpha)
    return Subgroup.from_indices(G, fixed)


def set_stabilizer(G: GroupTable, points: Iterable[int]) -> Subgroup:
    """Setwise stabilizer {g : g(S) = S}, by exhaustive filter."""
    S = sorted({int(p) for p in points})
    if not S:
        raise ValueError("point set must be nonempty")
    if S[0] < 0 or S[-1] >= G.degree:
        raise ValueError("point out of range")
    mark = np.zeros(G.degree, dtype=bool)
    mark[S] = True
    inside = mark[G.images_array()[:, S]].all(axis=1)
    return Subgroup.from_indices(G, np.flatnonzero(inside))


# ---------------------------------------------------------------------------
# subgroup enumeration up to conjugacy


def _powers_of(T: np.ndarray, y: int) -> np.ndarray:
    """Sorted element indices of the cyclic subgroup generated by y."""
    elems = [0]
    cur = y
    while cur != 0:
        elems.append(cur)
        cur = int(T[cur, y])
    return np.array(sorted(elems), dtype=np.int64)


def _closure_capped(
    T: np.ndarray, H: np.ndarray, gens: tuple[int, ...], y: int, cap: int
) -> np.ndarray | None:
    """Elements of <H, y>, or None once the closure grows past cap.

    H must already be a subgroup; the result is built as a union of right
    cosets of H, walking the coset graph under the generators of H plus y.
    """
    n = T.shape[0]
    mask = np.zeros(n, dtype=bool)
    mask[H] = True
    count = len(H)
    step_gens = tuple(gens) + (y,)
    reps = [0]
    head = 0
    while head < len(reps):
        w = reps[head]
        head += 1
        for g in step_gens:
            u = int(T[w, g])
            if not mask[u]:
                coset = T[H, u]
                mask[coset] = True
                count += len(H)
                if count > cap:
                    return None
                reps.append(u)
    return np.flatnonzero(mask)


def subgroups_of_order(
    G: GroupTable, m: int, size_bound: int = SUBGROUP_ORDER_BOUND
) -> list[Subgroup]:
    """All subgroups of order m, one representative per conjugacy class.

    Bottom-up lattice closure: seed with every cyclic subgroup whose order
    divides m, then repeatedly extend stored subgroups by one element of
    order dividing m, keeping a result iff its order divides m.  When m has
    at most two distinct prime factors every group of order dividing m is
    solvable, so each extension step may be restricted to normalizing
    elements (every such subgroup tops a chain of prime-index normal
    subgroups); otherwise the unrestricted capped closure is used.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m > size_bound:
        raise ValueError(f"m={m} exceeds the configured size bound {size_bound}")
    if G.order % m:
        warnings.warn(f"m={m} does not divide the group order {G.order}; no subgroups")
        return []
    if m == 1:
        return [trivial_subgroup(G)]
    cache: dict[int, list[Subgroup]] = getattr(G, "_subgroup_class_cache", None) or {}
    if not hasattr(G, "_subgroup_class_cache"):
        G._subgroup_class_cache = cache
    if m in cache:
        return list(cache[m])

    T = G.mul_table()
    inv = G.inverse_indices()
    orders = G.element_orders()
    solvable_route = len(factorize(m)) <= 2

    cand = np.flatnonzero((m % orders) == 0)
    cand = cand[cand != 0]

    # one representative generator per cyclic subgroup
    cyc_elements: dict[int, np.ndarray] = {}
    seen_gen = np.zeros(G.order, dtype=bool)
    for y in cand:
        y = int(y)
        if seen_gen[y]:
            continue
        elems = _powers_of(T, y)
        for z in elems:
            if orders[z] == orders[y]:
                seen_gen[z] = True
        cyc_elements[y] = elems
    cyc_reps = np.array(sorted(cyc_elements), dtype=np.int64)

    lattice: dict[bytes, tuple[np.ndarray, tuple[int, ...]]] = {}
    queue: list[bytes] = []

    def store(elems: np.ndarray, gens: tuple[int, ...]) -> None:
        key = elems.astype(np.int64).tobytes()
        if key in lattice:
            return
        lattice[key] = (elems, gens)
        if len(elems) < m:
            queue.append(key)

    for rep in cyc_reps:
        store(cyc_elements[int(rep)], (int(rep),))

    head = 0
    while head < len(queue):
        H, gens = lattice[queue[head]]
        head += 1
        h = len(H)
        in_H = np.zeros(G.order, dtype=bool)
        in_H[H] = True
        ys = cyc_reps[~in_H[cyc_reps]]
        if ys.size == 0:
            continue
        # one extension attempt per coset H*y: dedupe candidates by coset
        cosets = T[np.ix_(H, ys)]  # column c is the coset H*ys[c]
        cosets = np.sort(cosets, axis=0)
        _, first = np.unique(cosets.T, axis=0, return_index=True)
        for y in sorted(int(ys[c]) for c in first):
            if solvable_route:
                conj = np.sort(T[T[inv[y], H], y])
                if not np.array_equal(conj, H):
                    continue
                prod = T[np.ix_(H, cyc_elements[y])].ravel()
                K = np.unique(prod)
                if m % len(K) == 0:
                    store(K, gens + (y,))
            else:
                K = _closure_capped(T, H, gens, y, cap=m)
                if K is not None and m % len(K) == 0:
                    store(K, gens + (y,))

    # collapse conjugacy classes among the order-m members
    full = sorted(
        (tuple(int(x) for x in elems) for elems, _ in lattice.values() if len(elems) == m)
    )
    assigned: set[tuple[int, ...]] = set()
    reps_out: list[tuple[int, ...]] = []
    gen_idx = G.generator_indices
    for sub in full:
        if sub in assigned:
            continue
        orbit = {sub}
        frontier = [np.array(sub, dtype=np.int64)]
        while frontier:
            nxt = []
            for arr in frontier:
                for g in gen_idx:
                    conj = np.sort(T[T[inv[g], arr], g])
                    key = tuple(int(x) for x in conj)
                    if key not in orbit:
                        orbit.add(key)
                        nxt.append(conj)
            frontier = nxt
        assigned |= orbit
        reps_out.append(min(orbit))
    reps_out.sort()
    result = [Subgroup(G, rep) for rep in reps_out]
    cache[m] = list(result)
    return result


def are_conjugate(G: GroupTable, H1: Subgroup, H2: Subgroup) -> Permutation | None:
    """A g with g^-1 * H1 * g = H2, or None.  Full sweep over the group."""
    if H1.parent is not G or H2.parent is not G:
        raise ValueError("subgroups must belong to the given group")
    if H1.order != H2.order:
        return None
    target = np.array(H2.indices, dtype=np.int64)
    arr = np.array(H1.indices, dtype=np.int64)
    T = G.mul_table()
    inv = G.inverse_indices()
    A = T[np.ix_(inv, arr)]  # A[g, j] = e_g^-1 * h_j
    B = T[A, np.arange(G.order, dtype=np.int64)[:, None]]
    B.sort(axis=1)
    hits = np.flatnonzero((B == target[None, :]).all(axis=1))
    if hits.size == 0:
        return None
    return G.element(int(hits[0]))
