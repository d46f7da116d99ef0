import numpy as np
import pytest

from uinorms.ensembles import (
    ginibre,
    haar_unitary,
    is_normal,
    is_positive,
    is_projection,
    is_unitary,
    make_rng,
    parse_seed,
    project_to_class,
    random_normal_operator,
    random_positive,
    random_projection,
)
from uinorms.exceptions import ConfigError
from uinorms.spectral import is_psd, matrix_abs, psd_sqrt, singular_values


def test_parse_seed():
    assert parse_seed("42") == 42
    assert parse_seed("0x2A") == 42
    assert parse_seed(2**64 - 1) == 2**64 - 1
    for bad in ["-1", str(2**64), "abc", True, "0xZZ"]:
        with pytest.raises(ConfigError):
            parse_seed(bad)


def test_substreams_are_reproducible_and_distinct():
    a = ginibre(3, make_rng(7, "case", 1, 2))
    np.testing.assert_array_equal(a, ginibre(3, make_rng(7, "case", 1, 2)))
    assert not np.array_equal(a, ginibre(3, make_rng(7, "case", 1, 3)))
    assert not np.array_equal(a, ginibre(3, make_rng(7, "other", 1, 2)))
    assert not np.array_equal(a, ginibre(3, make_rng(8, "case", 1, 2)))


def test_ginibre():
    one = ginibre(1, make_rng(1))
    assert one.shape == (1, 1)
    np.testing.assert_array_equal(one, ginibre(1, make_rng(1)))
    g = ginibre(8, make_rng(3))
    assert np.isfinite(g).all()
    # E|z|^2 = 1 for a standard complex Gaussian
    assert abs(np.mean(np.abs(g) ** 2) - 1) < 0.5
    with pytest.raises(ValueError):
        ginibre(0, make_rng(1))


@pytest.mark.parametrize("d", [1, 2, 5, 8])
def test_haar_unitary(d):
    u = haar_unitary(d, make_rng(11, "u", d))
    assert np.max(np.abs(u.conj().T @ u - np.eye(d))) <= 1e-10
    np.testing.assert_allclose(singular_values(u), np.ones(d), atol=1e-10)
    assert abs(abs(np.linalg.det(u)) - 1) <= 1e-8


def test_haar_phases_are_spread():
    # without phase normalization QR would pin diag(R) > 0 and bias U
    diags = np.array([haar_unitary(1, make_rng(5, "p", i))[0, 0] for i in range(400)])
    assert abs(np.mean(diags)) < 0.15


@pytest.mark.parametrize("d", [1, 3, 6])
def test_projection(d):
    rng = make_rng(2, "proj", d)
    np.testing.assert_array_equal(random_projection(d, 0, rng), np.zeros((d, d)))
    np.testing.assert_allclose(random_projection(d, d, rng), np.eye(d), atol=1e-10)
    for rank in range(d + 1):
        p = random_projection(d, rank, rng)
        assert abs(np.trace(p) - rank) <= 1e-8
        assert np.max(np.abs(p @ p - p)) <= 1e-9 and np.max(np.abs(p - p.conj().T)) <= 1e-9
    with pytest.raises(ValueError):
        random_projection(d, d + 1, rng)


def test_projection_ranks_cover_range():
    rng = make_rng(9)
    ranks = {round(np.trace(random_projection(3, None, rng)).real) for _ in range(60)}
    assert ranks == {0, 1, 2, 3}


@pytest.mark.parametrize("d", [1, 4, 8])
def test_positive(d):
    a = random_positive(d, make_rng(4, "pos", d))
    assert np.max(np.abs(a - a.conj().T)) <= 1e-10
    assert is_psd(a, 1e-10 * np.linalg.norm(a, 2)).is_psd
    np.testing.assert_allclose(matrix_abs(a), a, atol=1e-8 * np.linalg.norm(a))
    s = psd_sqrt(a)
    assert np.linalg.norm(s @ s - a) <= 1e-8 * np.linalg.norm(a)


@pytest.mark.parametrize("d", [1, 3, 7])
def test_normal(d):
    a = random_normal_operator(d, make_rng(6, "nrm", d))
    comm = a @ a.conj().T - a.conj().T @ a
    assert np.linalg.norm(comm) <= 1e-9 * np.linalg.norm(a) ** 2
    evals = np.linalg.eigvals(a)
    np.testing.assert_allclose(singular_values(a), np.sort(np.abs(evals))[::-1], atol=1e-9)


def test_predicates_reject():
    shift = np.array([[0, 1], [0, 0]], dtype=complex)
    assert not is_unitary(shift)
    assert not is_projection(np.array([[1, 1], [0, 0]], dtype=complex))
    assert not is_positive(np.diag([1.0, -1.0]))
    assert not is_normal(shift)


@pytest.mark.parametrize("kind,check", [
    ("projection", is_projection),
    ("positive", is_positive),
    ("normal", is_normal),
    ("unitary", is_unitary),
])
def test_project_to_class(kind, check):
    rng = make_rng(12, kind)
    m = ginibre(4, rng)
    assert check(project_to_class(kind, m))
