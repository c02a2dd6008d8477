"""Discrete multiple-orthogonality constructors and their pairing tables."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from pfafflab.errors import NotNormal
from pfafflab.mops import (KernelBimoments, SymmetricBimoments, TwoWeightFamilies, symmetric_p_hat,
                           WeightFamily, mbop_p_hat, mbop_q_hat, mixed_p_coeffs,
                           mixed_q_coeffs, pair_bimoment, pair_mixed,
                           pair_type_ii_type_i, random_kernel_bimoments,
                           random_symmetric_bimoments, random_two_families,
                           random_weight_family, type_i_coeffs, type_ii_coeffs,
                           verify_mbop, verify_mixed_orthogonality, verify_symmetric,
                           verify_type_biorthogonality)


def _indices(p, max_each):
    return [v for v in itertools.product(range(max_each + 1), repeat=p)]


def test_type_ii_degree_one_is_classical():
    wf = random_weight_family(3, 1, 5)
    coeffs = type_ii_coeffs(wf, (1,))
    assert coeffs[1] == 1
    assert coeffs[0] == -wf.moment(0, 1) / wf.moment(0, 0)


def test_type_i_defining_relations():
    wf = random_weight_family(7, 2, 8)
    v = (1, 1)
    a = type_i_coeffs(wf, v)
    # Moments of the linear form: 0 at degree 0, 1 at degree |v|-1 = 1.
    for k in range(sum(v)):
        total = sum(c * wf.moment(i, k + d)
                    for i, ai in enumerate(a) for d, c in enumerate(ai))
        assert total == (1 if k == sum(v) - 1 else 0)


def test_type_table_small():
    wf = random_weight_family(5, 2, 8)
    idx = [v for tot in range(1, 5) for v in [(a, tot - a) for a in range(tot + 1)]]
    for v in idx:
        for u in idx:
            report = verify_type_biorthogonality(wf, v, u)
            assert report.status in ("pass", "skipped"), (v, u, report.residual)


def test_type_table_unit_value():
    wf = random_weight_family(5, 2, 8)
    got = pair_type_ii_type_i(wf, type_ii_coeffs(wf, (1, 1)),
                              type_i_coeffs(wf, (2, 1)))
    assert got == 1


def test_singular_type_system_raises():
    # Two identical weights make every system singular.
    w = (Fraction(1), Fraction(2), Fraction(1))
    wf = WeightFamily((Fraction(0), Fraction(1), Fraction(2)), (w, w))
    with pytest.raises(NotNormal):
        type_i_coeffs(wf, (1, 1))


def test_mixed_orthogonality_table():
    tf = random_two_families(11, 2, 2, 8)
    forms = [(u, v) for u in _indices(2, 2) for v in _indices(2, 2)
             if sum(u) == sum(v) + 1]
    duals = [(u, v) for u in _indices(2, 2) for v in _indices(2, 2)
             if sum(v) == sum(u) + 1]
    checked = 0
    for u, v in forms[:8]:
        for u2, v2 in duals[:8]:
            try:
                report = verify_mixed_orthogonality(tf, u, v, u2, v2)
            except NotNormal:
                continue
            assert report.status in ("pass", "skipped"), (u, v, u2, v2, report.residual)
            checked += report.status == "pass"
    assert checked > 10


def test_mbop_table():
    kb = random_kernel_bimoments(5, 2, 2, 7, 7)
    idx = [v for v in _indices(2, 2) if sum(v) <= 3]
    statuses = {"pass": 0, "skipped": 0}
    for u in idx:
        for v in idx:
            if sum(u) != sum(v):
                continue
            for a, b in itertools.product((0, 1), repeat=2):
                for u2 in idx:
                    for v2 in idx:
                        if sum(u2) != sum(v2):
                            continue
                        try:
                            r = verify_mbop(kb, u, v, a, b, u2, v2)
                        except NotNormal:
                            continue
                        assert r.status != "fail", (u, v, a, b, u2, v2, r.residual)
                        statuses[r.status] = statuses.get(r.status, 0) + 1
    assert statuses["pass"] > 100


def test_mbop_ordinary_biorthogonal_pair():
    kb = random_kernel_bimoments(2, 1, 1, 6, 6)
    for deg in (0, 1, 2):
        r = verify_mbop(kb, (deg,), (deg,), 0, 0, (deg,), (deg,))
        assert r.status == "pass", r.residual


def test_mbop_zero_clause_directly():
    kb = random_kernel_bimoments(4, 1, 1, 6, 6)
    p = mbop_p_hat(kb, (1,), (1,), 0, 0)
    q = mbop_q_hat(kb, (2,), (2,), 0, 0)
    assert pair_bimoment(kb, p, q) == 0


def test_dispatchers():
    from pfafflab.mops import mop_solve, verify_mop_biorthogonality
    wf = random_weight_family(3, 2, 8)
    assert mop_solve("typeII", wf, v=(1, 1))[-1] == 1
    assert mop_solve("typeI", wf, v=(1, 1)) == type_i_coeffs(wf, (1, 1))
    report = verify_mop_biorthogonality("typeI", wf, v=(1, 1), u=(2, 1))
    assert report.status == "pass"
    kb = random_kernel_bimoments(5, 1, 1, 6, 6)
    p, q = mop_solve("mbop", kb, u=(1,), v=(1,), a=0, b=0)
    assert p == mbop_p_hat(kb, (1,), (1,), 0, 0)
    assert q == mbop_q_hat(kb, (1,), (1,), 0, 0)
    r = verify_mop_biorthogonality("mbop", kb, u=(1,), v=(1,), a=0, b=0,
                                   u2=(1,), v2=(1,))
    assert r.status == "pass"
    sb = random_symmetric_bimoments(7, 2, 8)
    assert mop_solve("symmetric", sb, v=(1, 1), b=0) == symmetric_p_hat(sb, (1, 1), 0)
    with pytest.raises(ValueError):
        mop_solve("nosuch", wf, v=(1,))


def test_symmetric_table():
    sb = random_symmetric_bimoments(13, 2, 8)
    idx = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]
    passed = 0
    for v in idx:
        for b in (0, 1):
            for v2 in idx:
                r = verify_symmetric(sb, v, b, v2)
                assert r.status != "fail", (v, b, v2, r.residual)
                passed += r.status == "pass"
    assert passed > 40
