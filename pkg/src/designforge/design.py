"""Incidence structures: t-design verification, replication arithmetic,
block/flag transitivity, and admissibility of t >= 3 under block-transitivity.

All arithmetic is exact (integers and fractions); blocks are canonically
sorted so design equality is plain structural equality.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .permgroup import GroupTable, set_stabilizer

# t-subset enumeration guard: general t only at desk scale
_GENERAL_T_MAX_V = 40


class Design:
    """A set of k-subsets (blocks) of {0, ..., v-1}, canonically sorted."""

    __slots__ = ("v", "k", "blocks", "_incidence")

    def __init__(self, v: int, blocks: Iterable[Iterable[int]]):
        normalized = sorted({tuple(sorted(int(p) for p in blk)) for blk in blocks})
        if not normalized:
            raise ValueError("a design needs at least one block")
        k = len(normalized[0])
        for blk in normalized:
            if len(blk) != k or len(set(blk)) != k:
                raise ValueError("blocks must all have the same number of distinct points")
            if blk[0] < 0 or blk[-1] >= v:
                raise ValueError("block point out of range")
        self.v = int(v)
        self.k = k
        self.blocks: tuple[tuple[int, ...], ...] = tuple(normalized)
        self._incidence: np.ndarray | None = None

    @property
    def b(self) -> int:
        return len(self.blocks)

    def incidence(self) -> np.ndarray:
        """(b, v) 0/1 incidence matrix, cached."""
        if self._incidence is None:
            inc = np.zeros((self.b, self.v), dtype=np.uint8)
            rows = np.repeat(np.arange(self.b), self.k)
            cols = np.fromiter((p for blk in self.blocks for p in blk), dtype=np.int64)
            inc[rows, cols] = 1
            self._incidence = inc
        return self._incidence

    def block_array(self) -> np.ndarray:
        return np.array(self.blocks, dtype=np.int64)

    def relabel(self, pi: Sequence[int]) -> Design:
        """Apply a point bijection; the result is re-canonicalized."""
        return Design(self.v, [[pi[p] for p in blk] for blk in self.blocks])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Design)
            and self.v == other.v
            and self.blocks == other.blocks
        )

    def __hash__(self) -> int:
        return hash((self.v, self.blocks))

    def __repr__(self) -> str:
        return f"Design(v={self.v}, k={self.k}, b={self.b})"


@dataclass(frozen=True)
class DesignParams:
    """Admissible parameter set of a t-design, with derived counts."""

    t: int
    v: int
    k: int
    lam: int

    def __post_init__(self) -> None:
        if not (0 < self.t <= self.k <= self.v and self.lam > 0):
            raise ValueError("need 0 < t <= k <= v and lambda > 0")
        for s in range(self.t + 1):
            if lambda_s(self.t, self.v, self.k, self.lam, s).denominator != 1:
                raise ValueError(f"lambda_{s} is not integral")

    @property
    def b(self) -> int:
        return int(lambda_s(self.t, self.v, self.k, self.lam, 0))

    @property
    def gamma(self) -> int:
        return int(lambda_s(self.t, self.v, self.k, self.lam, 1))


def lambda_s(t: int, v: int, k: int, lam: int, s: int) -> Fraction:
    """Blocks through a fixed s-subset of a t-(v,k,lam) design, exact."""
    if not 0 <= s <= t <= k <= v:
        raise ValueError("need 0 <= s <= t <= k <= v")
    return Fraction(lam) * Fraction(math.comb(v - s, t - s), math.comb(k - s, t - s))


def admissible_t(v: int, k: int, t: int, group_order: int) -> bool:
    """Can a block-transitive t-(v,k,*) design live inside a group of this order?

    The block count is lam_t * prod(v-j)/prod(k-j); with the ratio reduced to
    p/q, some integral block count dividing group_order exists iff p divides
    group_order.
    """
    if not t < k < v:
        raise ValueError("need t < k < v")
    ratio = Fraction(1)
    for j in range(t):
        ratio *= Fraction(v - j, k - j)
    return group_order % ratio.numerator == 0


def from_base_block(G: GroupTable, base: Iterable[int]) -> Design:
    """The orbit design (P, base^G)."""
    blk = tuple(sorted(int(p) for p in base))
    if not blk:
        raise ValueError("base block must be nonempty")
    if blk[0] < 0 or blk[-1] >= G.degree:
        raise ValueError("base block point out of range")
    gen_rows = [np.asarray(g.images, dtype=np.int64) for g in G.generators]
    seen = {blk}
    frontier = [blk]
    while frontier:
        nxt = []
        for cur in frontier:
            arr = np.array(cur, dtype=np.int64)
            for row in gen_rows:
                img = tuple(int(x) for x in np.sort(row[arr]))
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return Design(G.degree, seen)


def lambda_of(D: Design, t: int) -> int | None:
    """The constant t-subset coverage count, or None if coverage is not constant."""
    if not 1 <= t <= D.k:
        raise ValueError("need 1 <= t <= k")
    if t == 1:
        counts = D.incidence().sum(axis=0)
        vals = np.unique(counts)
        return int(vals[0]) if len(vals) == 1 else None
    if t == 2:
        inc = D.incidence().astype(np.float64)
        cov = inc.T @ inc  # exact: entries <= b < 2**53
        off = cov[~np.eye(D.v, dtype=bool)]
        vals = np.unique(off)
        return int(vals[0]) if len(vals) == 1 else None
    if t == 3:
        if D.v > 160:
            raise ValueError("triple verification limited to v <= 160")
        counts = np.zeros((D.v, D.v, D.v), dtype=np.int32)
        for blk in D.blocks:
            for trip in combinations(blk, 3):
                counts[trip] += 1
        idx = np.array(list(combinations(range(D.v), 3)), dtype=np.int64)
        vals = np.unique(counts[idx[:, 0], idx[:, 1], idx[:, 2]])
        return int(vals[0]) if len(vals) == 1 else None
    if D.v > _GENERAL_T_MAX_V:
        raise ValueError(f"t={t} verification restricted to v <= {_GENERAL_T_MAX_V}")
    counts: dict[tuple[int, ...], int] = {}
    for blk in D.blocks:
        for sub in combinations(blk, t):
            counts[sub] = counts.get(sub, 0) + 1
    if len(counts) < math.comb(D.v, t):
        return None
    vals = set(counts.values())
    return vals.pop() if len(vals) == 1 else None


def is_block_transitive(G: GroupTable, D: Design) -> bool:
    """True iff the block set is a single orbit of G."""
    if G.degree != D.v:
        raise ValueError("group degree must equal the point count")
    orbit = from_base_block(G, D.blocks[0])
    return orbit.blocks == D.blocks


def is_flag_transitive(G: GroupTable, D: Design) -> bool:
    """True iff the set stabilizer of a block is transitive on its points.

    Assumes block-transitivity has already been certified; under it the
    answer is independent of the chosen block.
    """
    blk = D.blocks[0]
    stab = set_stabilizer(G, blk)
    rows = [G.images_array()[i] for i in stab.indices]
    seen = {blk[0]}
    frontier = [blk[0]]
    while frontier:
        nxt = []
        for pt in frontier:
            for row in rows:
                q = int(row[pt])
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen == set(blk)


# ---------------------------------------------------------------------------
# design files (1-based on disk)


def design_to_dict(D: Design, meta: Mapping[str, object] | None = None) -> dict:
    doc: dict = {
        "v": D.v,
        "k": D.k,
        "blocks": [[p + 1 for p in blk] for blk in D.blocks],
    }
    if meta:
        doc["meta"] = dict(sorted(meta.items()))
    return doc


def save_design(path: str | Path, D: Design, meta: Mapping[str, object] | None = None) -> None:
    Path(path).write_text(json.dumps(design_to_dict(D, meta), indent=2, sort_keys=True) + "\n")


def load_design(path: str | Path) -> tuple[Design, dict]:
    doc = json.loads(Path(path).read_text())
    design = Design(doc["v"], [[p - 1 for p in blk] for blk in doc["blocks"]])
    return design, doc.get("meta", {})
