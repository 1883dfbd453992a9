"""Exhaustive enumeration of block-transitive 2-(k^2, k, lambda) designs for a
materialized group: candidate base blocks are unions of orbits of stabilizer-
sized subgroups, filtered by an exact pair-orbit proportionality test, then
verified by orbit size, set-stabilizer order, and full pair counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .design import Design, from_base_block, is_flag_transitive, lambda_of
from .iso import class_representatives, iso_classes
from .permgroup import GroupTable, Subgroup, orbits, set_stabilizer, subgroups_of_order

MAX_CANDIDATES = 1_000_000
_CHUNK = 65536


class CandidateExplosionError(RuntimeError):
    """A subgroup class yields more orbit-union candidates than the guard allows."""


@dataclass(frozen=True)
class SearchJob:
    """One (group, k, lambda) search instance.

    The block count of a block-transitive 2-(k^2,k,lambda) design is forced:
    b = lambda*k*(k+1), so block stabilizers have order |G|/b.
    """

    group: GroupTable = field(repr=False)
    k: int
    lam: int

    def __post_init__(self) -> None:
        if self.group.degree != self.k * self.k:
            raise ValueError(f"group degree {self.group.degree} != k^2 = {self.k**2}")
        if self.lam < 1:
            raise ValueError("lambda must be positive")

    @property
    def b(self) -> int:
        return self.lam * self.k * (self.k + 1)

    @property
    def stabilizer_order(self) -> int | None:
        """|G|/b, or None when b does not divide |G| (vacuous job)."""
        return self.group.order // self.b if self.group.order % self.b == 0 else None


@dataclass
class DesignRecord:
    design: Design
    base_block: tuple[int, ...]
    stabilizer_order: int
    flag_transitive: bool


@dataclass
class SearchResult:
    job: SearchJob
    designs: list[Design]
    records: list[DesignRecord]
    iso_class_count: int
    distinct_block_sets: int
    candidates_tested: int
    note: str | None = None


def orbit_union_blocks(H: Subgroup, k: int, max_candidates: int | None = None) -> list[tuple[int, ...]]:
    """All point sets of size k that are unions of H-orbits.

    Complete, duplicate-free, deterministic: orbit subsets are enumerated by
    (orbit-length multiplicity pattern, then lexicographic choice of orbits).
    """
    count, patterns, by_len = _orbit_union_plan(H, k)
    if max_candidates is not None and count > max_candidates:
        raise CandidateExplosionError(
            f"{count} orbit-union candidates exceed the {max_candidates} guard"
        )
    out: list[tuple[int, ...]] = []
    for pattern in patterns:
        chosen_groups = [combinations(by_len[ln], c) for ln, c in pattern]
        out.extend(
            tuple(sorted(p for orb_group in pick for orb in orb_group for p in orb))
            for pick in _product(chosen_groups)
        )
    return out


def _product(iterables):
    if not iterables:
        yield ()
        return
    from itertools import product

    yield from product(*iterables)


def _orbit_union_plan(H: Subgroup, k: int):
    """(total count, composition patterns, orbits grouped by length)."""
    orbs = orbits(H)
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for orb in orbs:
        by_len.setdefault(len(orb), []).append(orb)
    lengths = sorted(by_len)
    patterns: list[tuple[tuple[int, int], ...]] = []

    def rec(idx: int, remaining: int, acc: list[tuple[int, int]]):
        if remaining == 0:
            patterns.append(tuple(acc))
            return
        if idx == len(lengths):
            return
        ln = lengths[idx]
        max_c = min(len(by_len[ln]), remaining // ln)
        for c in range(max_c + 1):
            if c:
                acc.append((ln, c))
            rec(idx + 1, remaining - c * ln, acc)
            if c:
                acc.pop()

    rec(0, k, [])
    count = sum(
        math.prod(math.comb(len(by_len[ln]), c) for ln, c in pattern) for pattern in patterns
    )
    return count, patterns, by_len


def _candidate_chunks(H: Subgroup, k: int):
    """Yield (n, k) int arrays of candidate point sets, in deterministic order."""
    _, patterns, by_len = _orbit_union_plan(H, k)
    for pattern in patterns:
        groups = []
        for ln, c in pattern:
            orb_arr = np.array(by_len[ln], dtype=np.int64)  # (n_orbits, ln)
            combos = np.array(list(combinations(range(len(by_len[ln])), c)), dtype=np.int64)
            groups.append(orb_arr[combos].reshape(len(combos), c * ln))
        sizes = [g.shape[0] for g in groups]
        total = math.prod(sizes)
        for start in range(0, total, _CHUNK):
            stop = min(start + _CHUNK, total)
            idx = np.arange(start, stop, dtype=np.int64)
            parts = []
            rem = idx
            for g, size in zip(reversed(groups), reversed(sizes)):
                parts.append(g[rem % size])
                rem = rem // size
            block = np.concatenate(list(reversed(parts)), axis=1)
            block.sort(axis=1)
            yield block


def _pair_orbit_table(G: GroupTable) -> tuple[np.ndarray, np.ndarray]:
    """Label matrix for G-orbits on unordered point pairs, plus orbit sizes."""
    cached = getattr(G, "_pair_orbit_cache", None)
    if cached is not None:
        return cached
    v = G.degree
    labels = np.full((v, v), -1, dtype=np.int32)
    rows = [np.asarray(g.images, dtype=np.int64) for g in G.generators]
    sizes = []
    nxt_label = 0
    for p in range(v):
        for q in range(p + 1, v):
            if labels[p, q] >= 0:
                continue
            frontier = [(p, q)]
            labels[p, q] = labels[q, p] = nxt_label
            size = 1
            while frontier:
                new = []
                for a, b in frontier:
                    for row in rows:
                        x, y = int(row[a]), int(row[b])
                        if x > y:
                            x, y = y, x
                        if labels[x, y] < 0:
                            labels[x, y] = labels[y, x] = nxt_label
                            size += 1
                            new.append((x, y))
                frontier = new
            sizes.append(size)
            nxt_label += 1
    out = (labels, np.array(sizes, dtype=np.int64))
    G._pair_orbit_cache = out
    return out


def _proportionality_filter(
    cands: np.ndarray, labels: np.ndarray, sizes: np.ndarray, lam: int, b: int
) -> np.ndarray:
    """Keep candidates whose pairs hit every pair-orbit O with count lam*|O|/b.

    Any base block of an accepted design satisfies this exactly, so the filter
    never rejects a true block; survivors still face the full verification.
    """
    n, k = cands.shape
    n_lab = len(sizes)
    iu, ju = np.triu_indices(k, k=1)
    lab = labels[cands[:, iu], cands[:, ju]]  # (n, k*(k-1)/2)
    flat = lab + (np.arange(n, dtype=np.int64) * n_lab)[:, None]
    counts = np.bincount(flat.ravel(), minlength=n * n_lab).reshape(n, n_lab)
    ok = (counts.astype(np.int64) * b == lam * sizes[None, :]).all(axis=1)
    return ok


def _block_orbit(G: GroupTable, base: tuple[int, ...], cap: int) -> set[tuple[int, ...]] | None:
    """Orbit of a point set under G as a set of sorted tuples; None if > cap."""
    gen_rows = [np.asarray(g.images, dtype=np.int64) for g in G.generators]
    seen = {base}
    frontier = [np.array(base, dtype=np.int64)]
    while frontier:
        nxt = []
        for arr in frontier:
            for row in gen_rows:
                img = row[arr]
                img.sort()
                key = tuple(int(x) for x in img)
                if key not in seen:
                    seen.add(key)
                    if len(seen) > cap:
                        return None
                    nxt.append(img)
        frontier = nxt
    return seen


def run(job: SearchJob, max_candidates: int = MAX_CANDIDATES) -> SearchResult:
    """Enumerate all block-transitive 2-(k^2,k,lambda) designs for the job.

    For each conjugacy class of subgroups of the forced stabilizer order,
    every union of orbits of the class representative with k points is a
    candidate base block; a candidate is accepted iff its set stabilizer has
    exactly the forced order, its orbit has exactly b blocks, and the orbit
    covers every point pair exactly lambda times.
    """
    G = job.group
    m = job.stabilizer_order
    if m is None:
        return SearchResult(job, [], [], 0, 0, 0, note="inadmissible block count")
    labels, sizes = _pair_orbit_table(G)
    classes = subgroups_of_order(G, m, size_bound=max(m, 256))
    found: dict[tuple[tuple[int, ...], ...], Design] = {}
    member_blocks: set[tuple[int, ...]] = set()
    tested = 0
    for H in classes:
        total, _, _ = _orbit_union_plan(H, job.k)
        if total > max_candidates:
            raise CandidateExplosionError(
                f"{total} orbit-union candidates for one subgroup class exceed "
                f"the {max_candidates} guard"
            )
        for chunk in _candidate_chunks(H, job.k):
            tested += len(chunk)
            keep = _proportionality_filter(chunk, labels, sizes, job.lam, job.b)
            for row in chunk[keep]:
                base = tuple(int(x) for x in row)
                if base in member_blocks:
                    continue
                orbit = _block_orbit(G, base, cap=job.b)
                if orbit is None or len(orbit) != job.b:
                    continue
                if set_stabilizer(G, base).order != m:
                    continue
                D = Design(G.degree, orbit)
                if lambda_of(D, 2) != job.lam:
                    continue
                if D.blocks not in found:
                    found[D.blocks] = D
                    member_blocks.update(D.blocks)
    designs = [found[key] for key in sorted(found)]
    if not designs:
        return SearchResult(job, [], [], 0, 0, tested)
    classes_idx = iso_classes(designs)
    reps = class_representatives(designs, classes_idx)
    records = []
    for i in reps:
        D = designs[i]
        records.append(
            DesignRecord(
                design=D,
                base_block=D.blocks[0],
                stabilizer_order=set_stabilizer(G, D.blocks[0]).order,
                flag_transitive=is_flag_transitive(G, D),
            )
        )
    return SearchResult(
        job,
        [r.design for r in records],
        records,
        iso_class_count=len(classes_idx),
        distinct_block_sets=len(designs),
        candidates_tested=tested,
    )


def full_sweep(
    group: GroupTable, k: int, include_lambda_1: bool = False
) -> dict[int, SearchResult]:
    """Run the search for every divisor lambda of k (lambda >= 2 by default).

    lambda = 1 is excluded because a block-transitive 2-(k^2,k,1) design would
    be flag-transitive, and no flag-transitive such design exists; a flag can
    re-enable it for exploration.
    """
    if group.degree != k * k:
        raise ValueError(f"group degree {group.degree} != k^2 = {k**2}")
    lams = [d for d in range(1, k + 1) if k % d == 0 and (include_lambda_1 or d >= 2)]
    return {lam: run(SearchJob(group, k, lam)) for lam in lams}
