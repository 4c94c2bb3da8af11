import numpy as np
import pytest

from matineq.delta import (
    check_prop4b,
    corollary_checks,
    delta,
    delta_fd_oracle,
    eigen_clusters,
    min_gap,
)
from matineq.scalar import IDENTITY, MIN1, angle, pos_part_shift
from matineq.spectral import SymMatrix, apply_fn, positive_part, random_psd, random_sym
from matineq.suites import planted_degenerate

X6 = SymMatrix([[0.35614, -0.053243, 0.10116], [-0.053243, 0.87456, 0.40559],
                [0.10116, 0.40559, 0.82474]])
Y6 = SymMatrix.diag([0.53642, 0.42018, 0.094866])
I3 = SymMatrix.identity(3)
C6 = positive_part(X6 + Y6 - I3) - positive_part(X6 - I3)


def test_identity_gives_sorted_spectrum():
    C = random_sym(4, 5)
    dv = delta(C, SymMatrix.identity(4))
    np.testing.assert_allclose(dv.values, np.linalg.eigvalsh(C.entries)[::-1], atol=1e-12)
    assert dv.clusters == ((1.0, 4),)


@pytest.mark.parametrize("rotate", [False, True])
def test_block_structure(rotate):
    rng = np.random.default_rng(8)
    C = random_sym(4, rng)
    q = np.linalg.qr(rng.standard_normal((4, 4)))[0] if rotate else np.eye(4)
    A = SymMatrix((q * [5.0, 5.0, 3.0, 1.0]) @ q.T)
    c = q.T @ C.entries @ q
    expected = np.concatenate([np.linalg.eigvalsh(c[:2, :2])[::-1], [c[2, 2], c[3, 3]]])
    dv = delta(C, A)
    # entries 3, 4 and the block's prefix sums are basis independent
    np.testing.assert_allclose(dv.values, expected, atol=1e-10)
    assert [m for _, m in dv.clusters] == [2, 1, 1]


def test_fixture_values():
    np.testing.assert_array_equal(delta(positive_part(Y6 - I3), Y6).values, [0, 0, 0])
    np.testing.assert_allclose(delta(C6, Y6).values, [-0.00018194, 0.2573, 0.04], atol=5e-5)
    assert abs(delta_fd_oracle(C6, Y6)[0] + 0.00018194) <= 1e-4


def test_trace_and_basis_invariants():
    rng = np.random.default_rng(19)
    for i in range(100):
        n = 2 + i % 5
        A = planted_degenerate(rng, n) if i % 3 == 0 else random_sym(n, rng)
        C = random_sym(n, rng, 2.0)
        dv = delta(C, A)
        assert abs(np.sum(dv.values) - C.trace()) <= 1e-10 * (1 + C.norm()) * n
        U = dv.basis_used
        np.testing.assert_allclose(U.T @ U, np.eye(n), atol=1e-12)
        np.testing.assert_allclose(np.diag(U.T @ A.entries @ U), A.eigenvalues, atol=1e-10 * (1 + A.norm()))
        np.testing.assert_allclose(np.diag(U.T @ C.entries @ U), dv.values, atol=1e-10)
        for start, stop in eigen_clusters(A.eigenvalues, 1e-8 * (1 + A.norm())):
            assert np.all(np.diff(dv.values[start:stop]) <= 1e-12)


def test_oracle_agreement_simple_spectrum():
    rng = np.random.default_rng(23)
    for i in range(100):
        n = 2 + i % 5
        A, C = random_sym(n, rng, 2.0), random_sym(n, rng)
        if min_gap(A) < 1e-2:
            continue
        err = np.max(np.abs(delta(C, A).partial_sums - np.cumsum(delta_fd_oracle(C, A))))
        assert err <= 1e-4


def test_oracle_on_self_direction():
    A = random_sym(4, 2)
    np.testing.assert_allclose(np.cumsum(delta_fd_oracle(A, A)), np.cumsum(A.eigenvalues), atol=1e-6)


def test_argument_validation():
    with pytest.raises(ValueError):
        delta(SymMatrix.identity(2), SymMatrix.identity(3))
    with pytest.raises(ValueError):
        delta(SymMatrix.identity(2), SymMatrix.identity(2), cluster_tol=-1)
    with pytest.raises(ValueError):
        delta_fd_oracle(SymMatrix.identity(2), SymMatrix.identity(2), t=0)


def test_dict_output():
    d = delta(C6, Y6).to_dict()
    assert abs(d["trace_check"]["difference"]) < 1e-14
    assert d["basis_used"]["dim"] == 3 and len(d["partial_sums"]) == 3


def test_corollary_examples():
    G = random_sym(4, 11)
    C = random_sym(4, 12)
    rep = corollary_checks(G, C, IDENTITY, a=0.0)
    assert rep.holds and set(rep.items) == {"i", "ii", "iii", "iv"}
    np.testing.assert_allclose(delta(G, G).values, G.eigenvalues, atol=1e-12)
    # min1 is not strictly increasing, so the invariance item is skipped
    assert set(corollary_checks(random_psd(4, 1), C, MIN1, a=2.0).items) == {"i", "ii", "iii"}


def test_corollary_rejects_bad_arguments():
    G, C = random_sym(3, 1), random_sym(3, 2)
    with pytest.raises(ValueError):
        corollary_checks(G, C, angle(1, (0.5, -2)))
    with pytest.raises(ValueError):
        corollary_checks(G, C, IDENTITY, a=-1)


def test_corollary_on_random_instances():
    rng = np.random.default_rng(5)
    for i in range(50):
        n = 2 + i % 5
        G = planted_degenerate(rng, n) if i % 2 else random_sym(n, rng)
        rep = corollary_checks(G, random_sym(n, rng), angle(0.5, (0.2, 1.0)), a=float(rng.uniform(0, 3)))
        assert rep.holds, rep.to_dict()


def test_invariance_under_strictly_increasing_fn():
    rng = np.random.default_rng(6)
    f = angle(0.3, (0.5, 2.0))
    for _ in range(30):
        A, C = random_sym(4, rng), random_sym(4, rng)
        np.testing.assert_allclose(delta(C, apply_fn(A, f)).partial_sums, delta(C, A).partial_sums,
                                   atol=1e-9)


def test_prop4b_equal_inputs_hold():
    G = random_sym(3, 4)
    f2 = angle(1, (0.2, 1))
    rep = check_prop4b(G, apply_fn(G, f2), IDENTITY, f2)
    assert rep.pp1_holds and rep.pp2_holds and rep.pp3_holds and rep.consistent


def test_prop4b_fixture_fails():
    rep = check_prop4b(Y6, C6, IDENTITY, pos_part_shift(1.0))
    assert not rep.pp2_holds and not rep.pp1_holds and not rep.pp3_holds
    assert rep.failing_a("pp1")
    assert rep.to_dict()["consistent"]


def test_prop4b_rejects_negative_grid():
    G = random_sym(2, 1)
    with pytest.raises(ValueError):
        check_prop4b(G, G, IDENTITY, IDENTITY, a_grid=(-1.0,))
