import numpy as np

from chfn.hermitian import group_inverse
from chfn.sampling import Sampler, SamplerConfig, child_config


def sampler_for(seed, stream=0):
    return Sampler(child_config(SamplerConfig(seed=seed), stream))


def conjugate(G, *Ms):
    Gi = group_inverse(G)
    out = tuple(G @ M @ Gi for M in Ms)
    return out if len(out) > 1 else out[0]


def rel_close(x, y, tol):
    x, y = np.asarray(x), np.asarray(y)
    return bool(np.all(np.abs(x - y) <= tol * np.maximum(1.0, np.abs(x))))


def same_line(u, v, tol=1e-9):
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    return np.linalg.norm(v - np.vdot(u, v) * u) <= tol
