"""Seeded random matrices for each operator class the inequalities range over.

Randomness comes from numpy's PCG64 bit generator. Each trial gets its own
substream: the campaign seed is the ``SeedSequence`` entropy and the trial's
coordinates form the spawn key, so a trial can be regenerated alone and in
any order.
"""

from __future__ import annotations

import zlib

import numpy as np

from .exceptions import ConfigError, GenerationError
from .spectral import hermitian_eig

__all__ = [
    "PRNG_NAME",
    "parse_seed",
    "make_rng",
    "ginibre",
    "haar_unitary",
    "random_projection",
    "random_positive",
    "random_normal_operator",
    "random_of_class",
    "project_to_class",
    "is_unitary",
    "is_projection",
    "is_positive",
    "is_normal",
]

PRNG_NAME = "PCG64 (numpy SeedSequence; entropy=seed, spawn_key=(crc32(label), *path))"
CLASS_TOL = 1e-9
_MAX_ATTEMPTS = 5


def parse_seed(value) -> int:
    """Accept an int, a decimal string or a ``0x`` hex string as a 64-bit seed."""
    if isinstance(value, bool):
        raise ConfigError(f"invalid seed {value!r}")
    if isinstance(value, int):
        seed = value
    else:
        text = str(value).strip().lower()
        try:
            seed = int(text, 16) if text.startswith("0x") else int(text, 10)
        except ValueError:
            raise ConfigError(f"invalid seed {value!r}") from None
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed {seed} is outside the unsigned 64-bit range")
    return seed


def make_rng(seed: int, label: str = "", *path: int) -> np.random.Generator:
    """Independent generator for the substream ``(label, *path)`` of ``seed``."""
    key = (zlib.crc32(label.encode()),) + tuple(int(p) for p in path)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def _check_dim(d):
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d}")


def ginibre(d: int, rng: np.random.Generator) -> np.ndarray:
    """``d x d`` matrix of independent standard complex Gaussians (E|z|^2 = 1)."""
    _check_dim(d)
    z = rng.standard_normal((d, d, 2)) / np.sqrt(2.0)
    return z[..., 0] + 1j * z[..., 1]


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a Ginibre draw."""
    _check_dim(d)
    for _ in range(_MAX_ATTEMPTS):
        q, r = np.linalg.qr(ginibre(d, rng))
        diag = np.diagonal(r)
        if np.min(np.abs(diag)) < 1e-12:
            continue
        u = q * (diag / np.abs(diag))
        if is_unitary(u):
            return u
    raise GenerationError(f"no well-conditioned Ginibre draw in {_MAX_ATTEMPTS} attempts")


def random_projection(d: int, rank: int | None, rng: np.random.Generator) -> np.ndarray:
    """Orthogonal projection onto a Haar-random subspace of the given rank.

    ``rank=None`` draws the rank uniformly from ``0..d``.
    """
    _check_dim(d)
    if rank is None:
        rank = int(rng.integers(0, d + 1))
    if not 0 <= rank <= d:
        raise ValueError(f"rank must lie in [0, {d}], got {rank}")
    q = haar_unitary(d, rng)[:, :rank]
    p = q @ q.conj().T
    if not is_projection(p):
        raise GenerationError("projection draw failed P^2 = P = P*")
    return p


def random_positive(d: int, rng: np.random.Generator) -> np.ndarray:
    g = ginibre(d, rng)
    a = g.conj().T @ g
    a = 0.5 * (a + a.conj().T)
    if not is_positive(a):
        raise GenerationError("positive draw has a negative eigenvalue")
    return a


def random_normal_operator(d: int, rng: np.random.Generator) -> np.ndarray:
    """``U diag(z) U*`` with Haar ``U`` and standard complex Gaussian ``z``."""
    u = haar_unitary(d, rng)
    z = rng.standard_normal((d, 2)) / np.sqrt(2.0)
    a = (u * (z[:, 0] + 1j * z[:, 1])) @ u.conj().T
    if not is_normal(a):
        raise GenerationError("normal draw failed the commutator test")
    return a


def random_of_class(kind: str, d: int, rng: np.random.Generator) -> np.ndarray:
    if kind == "general":
        return ginibre(d, rng)
    if kind == "unitary":
        return haar_unitary(d, rng)
    if kind == "projection":
        return random_projection(d, None, rng)
    if kind == "positive":
        return random_positive(d, rng)
    if kind == "normal":
        return random_normal_operator(d, rng)
    raise ValueError(f"unknown matrix class {kind!r}")


# -- class predicates


def is_unitary(u, tol: float = CLASS_TOL) -> bool:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[1])))) <= tol


def is_projection(p, tol: float = CLASS_TOL) -> bool:
    p = np.asarray(p)
    if p.size == 0:
        return True
    return (
        float(np.max(np.abs(p @ p - p))) <= tol
        and float(np.max(np.abs(p - p.conj().T))) <= tol
    )


def is_positive(a, tol: float = 1e-10) -> bool:
    a = np.asarray(a)
    if float(np.max(np.abs(a - a.conj().T))) > tol:
        return False
    w = hermitian_eig(a).eigenvalues
    return bool(w[-1] >= -tol * max(1.0, abs(w[0])))


def is_normal(a, tol: float = CLASS_TOL) -> bool:
    a = np.asarray(a)
    comm = a @ a.conj().T - a.conj().T @ a
    fro2 = float(np.sum(np.abs(a) ** 2))
    return float(np.linalg.norm(comm)) <= tol * max(fro2, 1e-300)



def project_to_class(kind: str, m: np.ndarray) -> np.ndarray:
    """Map a nearby matrix back into ``kind``; used by the tightness search.

    Projections round the spectrum of the Hermitian part to {0, 1}, positives
    clip it at zero, normals keep the diagonal of ``m`` in the eigenbasis of
    its Hermitian part, and unitaries take the polar factor.
    """
    if kind == "general":
        return m
    h = 0.5 * (m + m.conj().T)
    if kind in ("projection", "positive"):
        w, v = hermitian_eig(h)
        w = (w >= 0.5).astype(float) if kind == "projection" else np.clip(w, 0.0, None)
        out = (v * w) @ v.conj().T
        return 0.5 * (out + out.conj().T)
    if kind == "normal":
        _, v = hermitian_eig(h)
        z = np.einsum("ki,kl,li->i", v.conj(), m, v)
        return (v * z) @ v.conj().T
    if kind == "unitary":
        u, _, vh = np.linalg.svd(m)
        return u @ vh
    raise ValueError(f"unknown matrix class {kind!r}")
