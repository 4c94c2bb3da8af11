import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matineq.majorization import (
    MajReport,
    dominated_weak_majorize,
    entrywise_ge,
    ky_fan_norm,
    operator_norm,
    singular_values,
    strong_majorize,
    weak_majorize,
)
from matineq.scalar import angle
from matineq.spectral import SymMatrix, abs_matrix, apply_fn, random_sym

vec = st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=6)


def test_weak_examples():
    assert weak_majorize([1, 1], [2, 0], tol=0).holds
    r = weak_majorize([3, 0], [2, 2], tol=0)
    assert not r.holds and r.worst_k == 1 and r.worst_margin == -1


def test_weak_on_q1_data():
    A = SymMatrix([[0.9, 0], [0, 0.6]])
    B = SymMatrix([[0.8, 0.5], [0.5, 0.4]])
    g = angle(1, (1, 1))
    lhs = apply_fn(A, g) - apply_fn(B, g)
    rhs = apply_fn(abs_matrix(A - B), g)
    # the inequality asked about: lambda(g(|A-B|)) <_w lambda(g(A)-g(B))
    r = weak_majorize(rhs.eigenvalues, lhs.eigenvalues)
    assert not r.holds
    assert r.rhs_partial_sums[0] < r.lhs_partial_sums[0]
    assert abs(r.rhs_partial_sums[0] - 0.65010) <= 5e-5
    assert abs(r.lhs_partial_sums[0] - 0.65249) <= 5e-5
    assert abs(operator_norm(lhs) - 0.65010) <= 5e-5


def test_dominated_weak_examples():
    r = dominated_weak_majorize([0, 0, 0], [-0.00018194, 0.2573, 0.04], tol=0)
    assert not r.holds and r.worst_k == 1
    x = np.array([0.3, -1.0, 2.0])
    same = dominated_weak_majorize(x, x, tol=0)
    assert same.holds and same.worst_margin == 0
    assert dominated_weak_majorize(x, x + np.eye(3)[0], tol=0).holds


def test_dominated_weak_does_not_sort():
    # sorted both are (1, 0) so <_w holds, but unsorted prefix 1 > 0 fails
    assert weak_majorize([1, 0], [0, 1], tol=0).holds
    r = dominated_weak_majorize([1, 0], [0, 1], tol=0)
    assert not r.holds and r.worst_k == 1


def test_strong_examples():
    assert not strong_majorize([1, 1], [2, 1], tol=1e-12).holds
    assert strong_majorize([3, 1, 2], [1, 2, 3], tol=0).holds
    assert strong_majorize([1, 1], [2, 0], tol=0).holds


def test_schur_diagonal_vs_eigenvalues():
    rng = np.random.default_rng(41)
    for _ in range(200):
        m = rng.standard_normal((4, 4))
        c = (m + m.T) / 2
        # oracle: LAPACK eigenvalues
        assert strong_majorize(np.diag(c), np.linalg.eigvalsh(c)).holds


def test_length_mismatch():
    for rel in (weak_majorize, dominated_weak_majorize, strong_majorize, entrywise_ge):
        with pytest.raises(ValueError):
            rel([1, 2], [1, 2, 3])


def test_entrywise():
    assert entrywise_ge([1, 0], [1, 0.5], tol=0).holds
    r = entrywise_ge([1, 0], [0.5, 0.5], tol=0)
    assert not r.holds and r.worst_k == 1


def test_ky_fan():
    D = SymMatrix.diag([3, -1, 2])
    assert ky_fan_norm(SymMatrix.diag([3, 1, 2]), 2) == 5
    assert ky_fan_norm(D, 3) == 6 and operator_norm(D) == 3
    np.testing.assert_array_equal(singular_values(D), [3, 2, 1])
    with pytest.raises(ValueError):
        ky_fan_norm(D, 0)
    with pytest.raises(ValueError):
        ky_fan_norm(D, 4)


def test_ky_fan_dominance_agrees_with_weak_majorisation():
    rng = np.random.default_rng(3)
    agree = 0
    for i in range(300):
        n = 2 + i % 4
        A, B = random_sym(n, rng), random_sym(n, rng)
        via_norms = all(ky_fan_norm(A, k) <= ky_fan_norm(B, k) for k in range(1, n + 1))
        assert via_norms == weak_majorize(singular_values(A), singular_values(B), tol=0).holds
        agree += via_norms
    assert 0 < agree < 300


@given(vec, st.data())
def test_appending_smallest_entry_preserves_verdict(x, data):
    y = data.draw(st.lists(st.floats(-5, 5, allow_nan=False), min_size=len(x), max_size=len(x)))
    low = min(x + y) - 1.0
    before = weak_majorize(x, y, tol=0).holds
    assert weak_majorize(x + [low], y + [low], tol=0).holds == before


@given(vec)
def test_permutation_is_strongly_majorised(x):
    assert strong_majorize(x, x[::-1]).holds


def test_report_roundtrip():
    r = weak_majorize([3, 0], [2, 2])
    back = MajReport.from_dict(r.to_dict())
    assert back.to_dict() == r.to_dict()
