"""Seeded generation of random jointly sparse MMV instances.

Random numbers
--------------
All randomness comes from the PCG64 bit generator (``numpy.random.PCG64``,
seeded through ``numpy.random.SeedSequence``). Only its raw 64-bit output
is used, because numpy guarantees that stream is stable across releases
while the distribution methods of ``numpy.random.Generator`` are not.

* uniform doubles: ``(raw >> 11) * 2**-53``, in ``[0, 1)``;
* standard normals: Box-Muller on consecutive pairs of uniforms,
  ``sqrt(-2 log(1 - u1)) * (cos(2 pi u2), sin(2 pi u2))``;
* supports: partial Fisher-Yates shuffle of ``range(n)`` driven by
  ``floor(u * (n - i))``.

Draw order is fixed: sensing matrix (row-major), support, nonzero
entries of ``X`` (row-major over the sorted support), then noise.
"""
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import ParameterError, ZapError
from .linalg import read_matrix, write_matrix

RNG_NAME = "pcg64-raw/box-muller/v1"


class RawStream:
    """Deterministic uniform and Gaussian variates from PCG64 raw output."""

    def __init__(self, seed):
        self._bitgen = np.random.PCG64(np.random.SeedSequence(int(seed) % 2**64))

    def uniform(self, size):
        raw = self._bitgen.random_raw(size)
        return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)

    def normal(self, size):
        pairs = (size + 1) // 2
        u = self.uniform(2 * pairs).reshape(pairs, 2)
        radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        theta = 2.0 * np.pi * u[:, 1]
        z = np.empty(2 * pairs)
        z[0::2] = radius * np.cos(theta)
        z[1::2] = radius * np.sin(theta)
        return z[:size]

    def subset(self, n, k):
        pool = list(range(n))
        u = self.uniform(k)
        for i in range(k):
            j = i + min(int(u[i] * (n - i)), n - i - 1)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])


@dataclass(frozen=True)
class MmvProblem:
    a: np.ndarray
    y: np.ndarray
    x_true: np.ndarray
    support_true: tuple
    snr_db: float | None
    seed: int

    @property
    def shape(self):
        """``(n, m, l, k)``."""
        m, n = self.a.shape
        return n, m, self.y.shape[1], len(self.support_true)

    @property
    def noiseless(self):
        return self.snr_db is None


def generate(n, m, l, k, snr_db=None, seed=0):
    """Draw a Gaussian MMV instance with ``k`` nonzero rows.

    With ``snr_db`` set, white Gaussian noise is added and rescaled so that
    ``10 log10(||A X||^2 / ||V||^2)`` equals ``snr_db`` for this draw.
    """
    for name, v in (("n", n), ("m", m), ("l", l), ("k", k)):
        if int(v) != v:
            raise ParameterError(f"{name} must be an integer, got {v}")
    n, m, l, k = int(n), int(m), int(l), int(k)
    if l < 1:
        raise ParameterError(f"l must be at least 1, got {l}")
    if not 0 <= k <= m < n:
        raise ParameterError(f"need 0 <= k <= m < n, got n={n}, m={m}, k={k}")
    if snr_db is not None:
        snr_db = float(snr_db)
        if math.isinf(snr_db) and snr_db > 0:
            snr_db = None
        elif not math.isfinite(snr_db):
            raise ParameterError(f"snr_db must be finite, got {snr_db}")
    if snr_db is not None and k == 0:
        raise ParameterError("SNR is undefined for a zero signal (k = 0)")

    stream = RawStream(seed)
    a = stream.normal(m * n).reshape(m, n)
    support = stream.subset(n, k)
    x = np.zeros((n, l))
    if k:
        x[support] = stream.normal(k * l).reshape(k, l)
    clean = a @ x
    y = clean
    if snr_db is not None:
        v = stream.normal(m * l).reshape(m, l)
        scale = np.linalg.norm(clean) / (np.linalg.norm(v) * 10.0 ** (snr_db / 20.0))
        y = clean + scale * v
    return MmvProblem(a=a, y=y, x_true=x, support_true=tuple(support), snr_db=snr_db, seed=int(seed))


def realized_snr_db(problem):
    clean = problem.a @ problem.x_true
    noise = problem.y - clean
    return 10.0 * math.log10(np.sum(clean**2) / np.sum(noise**2))


def write_problem(problem, directory):
    """Write ``a.txt``, ``y.txt``, ``x_true.txt`` and ``meta.txt`` into ``directory``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    write_matrix(d / "a.txt", problem.a)
    write_matrix(d / "y.txt", problem.y)
    write_matrix(d / "x_true.txt", problem.x_true)
    n, m, l, k = problem.shape
    snr = "noiseless" if problem.snr_db is None else format(problem.snr_db, ".17g")
    meta = {"n": n, "m": m, "l": l, "k": k, "snr": snr, "seed": problem.seed, "rng": RNG_NAME}
    (d / "meta.txt").write_text("".join(f"{key}={val}\n" for key, val in meta.items()), encoding="utf-8")
    return d


def read_problem(directory):
    d = Path(directory)
    meta = {}
    for line in (d / "meta.txt").read_text(encoding="utf-8").splitlines():
        if line.strip():
            key, _, val = line.partition("=")
            meta[key.strip()] = val.strip()
    try:
        snr = None if meta["snr"] == "noiseless" else float(meta["snr"])
        seed = int(meta["seed"])
    except KeyError as exc:
        raise ZapError(f"{d / 'meta.txt'}: missing key {exc}") from exc
    x = read_matrix(d / "x_true.txt")
    support = tuple(int(i) for i in np.flatnonzero(np.any(x != 0, axis=1)))
    return MmvProblem(
        a=read_matrix(d / "a.txt"),
        y=read_matrix(d / "y.txt"),
        x_true=x,
        support_true=support,
        snr_db=snr,
        seed=seed,
    )
