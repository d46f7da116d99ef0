import numpy as np


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar(rng, d):
    q, r = np.linalg.qr(cgauss(rng, d, d))
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
