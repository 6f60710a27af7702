"""Diagonal quadratic test problems for the benchmark.

Two functional forms are used:

* ``TESTQP``:   f(x) = (x - x*)' diag(v) (x - x*), gradient 2 diag(v)(x - x*).
  The Hessian is 2 diag(v), so the eigenvalues are 2 v_j.
* ``HALFFORM``: f(x) = x' diag(v) x / 2 with x* = 0, gradient diag(v) x.
  The Hessian is diag(v) itself.

Benchmark problems are TESTQP with one of five spectrum recipes (``SET_IDS``):
sets 1, 3 and 5 pin v_1 = 1 and v_n = kappa with random interiors, set 2 draws
two clusters near 1 and near kappa, and set 4 is the deterministic geometric
ladder kappa^((n-j)/(n-1)).  The tiny verification problems are HALFFORM with
spectrum (1, kappa/2, kappa).

Randomness: a single integer seed feeds ``numpy.random.SeedSequence``;
independent streams are split off with spawn keys so that the spectrum,
the solution point and each starting replicate are decoupled:

* spawn key (0,): spectrum draws
* spawn key (1,): x* draws
* spawn key (2, r): starting point replicate r

All generators are PCG64.  Open intervals (a, b) are enforced by redrawing
any sample that lands exactly on an endpoint.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec

SET_IDS = (1, 2, 3, 4, 5)

_SPECTRUM_KEY = (0,)
_XSTAR_KEY = (1,)
_START_KEY = 2


class Form(enum.Enum):
    TESTQP = "testqp"
    HALFFORM = "halfform"


@dataclass(frozen=True)
class QuadraticProblem:
    """A diagonal quadratic with known solution.

    ``spectrum`` is the diagonal v, not the Hessian eigenvalues; those are
    ``grad_scale * v``.  ``gen_kappa`` is the kappa the generator was asked
    for, kept for serialization; the realized condition number is ``kappa``.
    """

    spectrum: np.ndarray
    x_star: np.ndarray
    form: Form
    set_id: int = 0
    gen_kappa: float = 0.0
    seed: int = 0

    def __post_init__(self):
        v = np.asarray(self.spectrum, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise InvalidSpec("spectrum must be a 1-d vector")
        if not np.all(v > 0.0):
            raise InvalidSpec("spectrum must be positive")
        if self.x_star.shape != v.shape:
            raise InvalidSpec("x_star and spectrum shapes differ")
        object.__setattr__(self, "spectrum", v)
        object.__setattr__(
            self, "x_star", np.asarray(self.x_star, dtype=float)
        )

    @property
    def n(self) -> int:
        return self.spectrum.size

    @property
    def kappa(self) -> float:
        """Realized condition number max(v) / min(v)."""
        return float(self.spectrum.max() / self.spectrum.min())

    @property
    def grad_scale(self) -> float:
        return 2.0 if self.form is Form.TESTQP else 1.0

    @property
    def value_scale(self) -> float:
        return 1.0 if self.form is Form.TESTQP else 0.5

    @property
    def hessian_diag(self) -> np.ndarray:
        return self.grad_scale * self.spectrum


def value(p: QuadraticProblem, x: np.ndarray) -> float:
    d = np.asarray(x, dtype=float) - p.x_star
    return p.value_scale * float(d @ (p.spectrum * d))

def gradient(p: QuadraticProblem, x: np.ndarray) -> np.ndarray:
    d = np.asarray(x, dtype=float) - p.x_star
    return p.grad_scale * (p.spectrum * d)

def hess_vec(p: QuadraticProblem, d: np.ndarray) -> np.ndarray:
    return p.grad_scale * (p.spectrum * np.asarray(d, dtype=float))


def _stream(seed: int, key: tuple) -> np.random.Generator:
    """PCG64 generator for one named sub-stream of a problem seed."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=key))
    )


def _open_uniform(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    """Uniform draws on the open interval (lo, hi), endpoints rejected."""
    out = rng.uniform(lo, hi, size=size)
    bad = (out == lo) | (out == hi)
    while bad.any():
        out[bad] = rng.uniform(lo, hi, size=int(bad.sum()))
        bad = (out == lo) | (out == hi)
    return out


def _spectrum(set_id: int, n: int, kappa: float, rng: np.random.Generator) -> np.ndarray:
    v = np.empty(n)
    if set_id == 1:
        v[0] = 1.0
        v[-1] = kappa
        v[1:-1] = _open_uniform(rng, 1.0, kappa, n - 2)
    elif set_id == 2:
        if n % 2 != 0:
            raise InvalidSpec("set 2 needs even n")
        h = n // 2
        s = np.empty(n)
        s[:h] = _open_uniform(rng, 0.8, 1.0, h)
        s[h:] = _open_uniform(rng, 0.0, 0.2, n - h)
        v = 1.0 + (kappa - 1.0) * s
    elif set_id in (3, 5):
        if n % 5 != 0:
            raise InvalidSpec(f"set {set_id} needs n divisible by 5")
        if kappa < 100.0:
            raise InvalidSpec(f"set {set_id} needs kappa >= 100")
        v[0] = 1.0
        v[-1] = kappa
        # low group runs through index n/5 for set 3, 4n/5 for set 5
        lo_count = (n // 5 if set_id == 3 else 4 * (n // 5)) - 1
        v[1 : 1 + lo_count] = _open_uniform(rng, 1.0, 100.0, lo_count)
        v[1 + lo_count : -1] = _open_uniform(
            rng, kappa / 2.0, kappa, n - 2 - lo_count
        )
    elif set_id == 4:
        j = np.arange(1, n + 1, dtype=float)
        v = kappa ** ((n - j) / (n - 1.0))
    else:
        raise InvalidSpec(f"unknown set id {set_id}")
    return v


def generate(set_id: int, n: int, kappa: float, seed: int) -> QuadraticProblem:
    """Generate one benchmark problem (TESTQP form).

    ``x*`` is uniform on [-10, 10]^n from the (1,) stream; the spectrum
    comes from the (0,) stream so changing one never perturbs the other.
    """
    if n < 3:
        raise InvalidSpec("n must be at least 3")
    if set_id not in SET_IDS:
        raise InvalidSpec(f"unknown set id {set_id}")
    if not kappa > 1.0:
        raise InvalidSpec("kappa must exceed 1")
    spec_rng = _stream(seed, _SPECTRUM_KEY)
    xstar_rng = _stream(seed, _XSTAR_KEY)
    v = _spectrum(set_id, n, kappa, spec_rng)
    x_star = xstar_rng.uniform(-10.0, 10.0, size=n)
    return QuadraticProblem(
        spectrum=v, x_star=x_star, form=Form.TESTQP,
        set_id=set_id, gen_kappa=float(kappa), seed=int(seed),
    )


def verification_problem(kappa: float) -> QuadraticProblem:
    """The 3-d HALFFORM problem diag(1, kappa/2, kappa) with x* = 0."""
    if not kappa > 1.0:
        raise InvalidSpec("kappa must exceed 1")
    v = np.array([1.0, kappa / 2.0, kappa])
    return QuadraticProblem(
        spectrum=v, x_star=np.zeros(3), form=Form.HALFFORM,
        set_id=0, gen_kappa=float(kappa), seed=0,
    )


def starting_point(p: QuadraticProblem, replicate: int) -> np.ndarray:
    """Starting point replicate, uniform on [-10, 10]^n.

    Derived from the problem seed and the replicate index through the
    (2, replicate) spawn key, so replicates are mutually independent and
    reproducible without storing any state.
    """
    rng = _stream(p.seed, (_START_KEY, int(replicate)))
    return rng.uniform(-10.0, 10.0, size=p.n)


def save_problem(p: QuadraticProblem, path) -> None:
    """Write a problem as a small text file.

    First line is ``set,n,kappa,seed,form`` (kappa as requested at
    generation time), then one spectrum entry per line, then one x* entry
    per line.  Everything round-trips through :func:`load_problem`.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f"{p.set_id},{p.n},{p.gen_kappa:.17g},{p.seed},{p.form.value}\n"
        )
        for val in p.spectrum:
            fh.write(f"{val:.17g}\n")
        for val in p.x_star:
            fh.write(f"{val:.17g}\n")


def load_problem(path) -> QuadraticProblem:
    """Read a problem written by :func:`save_problem`."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if len(header) != 5:
            raise InvalidSpec(f"bad problem header: {header}")
        set_id, n, kappa, seed, form = header
        n = int(n)
        rest = [float(line) for line in fh if line.strip()]
    if len(rest) != 2 * n:
        raise InvalidSpec(f"expected {2 * n} values, found {len(rest)}")
    return QuadraticProblem(
        spectrum=np.array(rest[:n]),
        x_star=np.array(rest[n:]),
        form=Form(form),
        set_id=int(set_id),
        gen_kappa=float(kappa),
        seed=int(seed),
    )
