from __future__ import annotations

import random
from itertools import combinations

import pytest

from designforge import design as dz
from designforge import iso
from designforge import permgroup as pg

from conftest import BASE_BLOCK_LAMBDA3, BASE_BLOCK_LAMBDA6

FANO = dz.Design(
    7, [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
)


def _random_relabel(D: dz.Design, rng: random.Random) -> tuple[dz.Design, list[int]]:
    pi = list(range(D.v))
    rng.shuffle(pi)
    return D.relabel(pi), pi


# ---------------------------------------------------------------------------
# fingerprints


def test_fingerprint_relabel_invariant_fano():
    rng = random.Random(1)
    fp = iso.fingerprint(FANO)
    for _ in range(10):
        relabeled, _ = _random_relabel(FANO, rng)
        assert iso.fingerprint(relabeled) == fp


def test_fingerprint_relabel_invariant_reference_design(psl33):
    D = dz.from_base_block(psl33, BASE_BLOCK_LAMBDA3)
    rng = random.Random(2)
    fp = iso.fingerprint(D)
    for _ in range(5):
        relabeled, _ = _random_relabel(D, rng)
        assert iso.fingerprint(relabeled) == fp


def test_fingerprint_separates_different_lambda(psl33, pgl33):
    D1 = dz.from_base_block(psl33, BASE_BLOCK_LAMBDA3)
    D3 = dz.from_base_block(pgl33, BASE_BLOCK_LAMBDA6)
    fp1, fp3 = iso.fingerprint(D1), iso.fingerprint(D3)
    assert fp1 != fp3
    assert fp1.first_mismatch(fp3) is not None


# ---------------------------------------------------------------------------
# isomorphism decisions


def test_same_object_identity():
    cert = iso.are_isomorphic(FANO, FANO)
    assert cert.isomorphic
    assert cert.bijection is not None
    assert iso.verify_bijection(FANO, FANO, cert.bijection)


def test_relabel_recovery_fano():
    rng = random.Random(3)
    for _ in range(10):
        relabeled, _ = _random_relabel(FANO, rng)
        cert = iso.are_isomorphic(FANO, relabeled)
        assert cert.isomorphic
        assert iso.verify_bijection(FANO, relabeled, cert.bijection)


def test_relabel_recovery_reference_design(psl33):
    D = dz.from_base_block(psl33, BASE_BLOCK_LAMBDA3)
    rng = random.Random(4)
    relabeled, _ = _random_relabel(D, rng)
    cert = iso.are_isomorphic(D, relabeled)
    assert cert.isomorphic
    assert iso.verify_bijection(D, relabeled, cert.bijection)


def test_non_isomorphic_same_parameters():
    # two 2-(7,3,*) structures with different intersection patterns
    near = dz.Design(7, [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 6)])
    cert = iso.are_isomorphic(FANO, near)
    assert not cert.isomorphic
    assert cert.mismatch is not None
    assert cert.bijection is None


def test_mismatched_vk_rejected():
    small = dz.Design(6, [(0, 1, 2)])
    with pytest.raises(ValueError):
        iso.are_isomorphic(FANO, small)


def test_certificate_symmetric(psl33):
    D = dz.from_base_block(psl33, BASE_BLOCK_LAMBDA3)
    rng = random.Random(8)
    relabeled, _ = _random_relabel(D, rng)
    fwd = iso.are_isomorphic(D, relabeled)
    back = iso.are_isomorphic(relabeled, D)
    assert fwd.isomorphic and back.isomorphic
    inv = [0] * len(fwd.bijection)
    for i, j in enumerate(fwd.bijection):
        inv[j] = i
    assert iso.verify_bijection(relabeled, D, tuple(inv))
    assert iso.verify_bijection(relabeled, D, back.bijection)


# ---------------------------------------------------------------------------
# class partition


def test_iso_classes_repeated_design():
    classes = iso.iso_classes([FANO, FANO, FANO])
    assert classes == [[0, 1, 2]]


def test_iso_classes_mixed():
    rng = random.Random(5)
    relabeled, _ = _random_relabel(FANO, rng)
    complete = dz.Design(7, list(combinations(range(7), 3)))
    classes = iso.iso_classes([complete, FANO, relabeled])
    assert classes == [[1, 2], [0]] or classes == [[0], [1, 2]]


def test_iso_classes_input_order_invariant(psl33):
    D = dz.from_base_block(psl33, BASE_BLOCK_LAMBDA3)
    rng = random.Random(6)
    r1, _ = _random_relabel(D, rng)
    r2, _ = _random_relabel(D, rng)
    complete = dz.Design(144, [tuple(range(12)), tuple(range(6, 18))])
    a = iso.iso_classes([D, r1, complete, r2])
    partition_a = {frozenset((0, 1, 3)), frozenset((2,))}
    assert {frozenset(c) for c in a} == partition_a
    b = iso.iso_classes([complete, r2, r1, D])
    assert {frozenset(c) for c in b} == {frozenset((1, 2, 3)), frozenset((0,))}


def test_class_representatives(psl33):
    D = dz.from_base_block(psl33, BASE_BLOCK_LAMBDA3)
    rng = random.Random(7)
    r1, _ = _random_relabel(D, rng)
    designs = [r1, D]
    classes = iso.iso_classes(designs)
    reps = iso.class_representatives(designs, classes)
    assert len(reps) == 1
    assert designs[reps[0]].blocks == min(D.blocks, r1.blocks)


def test_flag_transitivity_is_class_invariant(psl33):
    # if D1 ~ D2 via pi and both carry the same abstract action, the stabilizer
    # of a block maps to the stabilizer of its image; spot-check via relabeling
    # by a group element, which preserves the G-action on the nose
    D = dz.from_base_block(psl33, BASE_BLOCK_LAMBDA3)
    g = psl33.element(17)
    mapped = D.relabel(g.images)
    assert mapped == D
    assert dz.is_flag_transitive(psl33, mapped) == dz.is_flag_transitive(psl33, D)


def test_fingerprint_mismatch_implies_no_bijection_brute_force():
    # exhaustively confirm on a desk-size pair: mismatched fingerprints really
    # do mean no bijection exists
    from itertools import permutations

    D1 = dz.Design(5, [(0, 1, 2), (0, 3, 4)])
    D2 = dz.Design(5, [(0, 1, 2), (0, 1, 3)])
    assert iso.fingerprint(D1) != iso.fingerprint(D2)
    blocks2 = set(D2.blocks)
    for pi in permutations(range(5)):
        mapped = {tuple(sorted(pi[p] for p in blk)) for blk in D1.blocks}
        assert mapped != blocks2
    cert = iso.are_isomorphic(D1, D2)
    assert not cert.isomorphic
