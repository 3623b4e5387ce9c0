"""Deterministic numerical integration backbone.

Adaptive Gauss-Kronrod quadrature on finite and half-infinite intervals,
fixed-order product rules on the unit sphere, Gaussian-regularized delta
integration (oracle use), Richardson extrapolation, and seeded Monte Carlo
with variance estimation.

Determinism contract: results are a fixed-order (canonical) combination of
panel/chunk contributions, so they do not depend on evaluation order or on
how work would be split across workers.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NumericalError

__all__ = [
    "QuadratureResult",
    "MonteCarloSpec",
    "integrate_1d",
    "integrate_sphere",
    "delta_regularized",
    "richardson",
    "mc_integrate",
    "pairwise_sum",
]


@dataclass(frozen=True)
class QuadratureResult:
    """Value + error estimate of a numerical integral."""

    value: complex | float | np.ndarray
    error_estimate: float
    evaluations: int
    converged: bool

    def __float__(self) -> float:
        return float(np.real(self.value))


@dataclass(frozen=True)
class MonteCarloSpec:
    """Sample budget and seeding for a Monte Carlo integration.

    ``samples >= 1000`` is expected for any acceptance-grade run; smaller
    budgets are allowed for smoke tests.
    """

    samples: int
    seed: int
    stratification: int | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.stratification is not None and self.stratification < 1:
            raise ValueError("stratification must be positive when given")


def pairwise_sum(values) -> complex | float:
    """Exactly-rounded sum (math.fsum), complex-aware; order independent."""
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real.ravel()), math.fsum(arr.imag.ravel()))
    return math.fsum(arr.ravel())


# 15-point Kronrod extension of 7-point Gauss (nodes on [-1, 1]).
_XK = np.array([
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])
# Gauss-7 weights, applied to the odd-index Kronrod nodes.
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
])


def _gk_panel(f: Callable, a: float, b: float):
    """One G7/K15 panel: returns (kronrod, error_estimate, n_evals).

    The error estimate is |K15 - G7| floored at 50 eps times the absolute
    integral of the panel; the floor accounts for rounding, which the
    embedded-rule difference cannot see.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid + half * _XK
    fx = np.asarray(f(x))
    if fx.shape != x.shape:
        raise ValueError("integrand must be vectorized: f(x) with x.shape -> same shape")
    kron = half * np.sum(_WK * fx)
    gauss = half * np.sum(_WG * fx[1::2])
    resabs = abs(half) * float(np.sum(_WK * np.abs(fx)))
    err = max(abs(kron - gauss), 50.0 * np.finfo(float).eps * resabs)
    return kron, err, 15


def integrate_1d(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    *,
    rtol: float = 1e-10,
    atol: float = 0.0,
    limit: int = 2000,
) -> QuadratureResult:
    """Adaptively integrate a vectorized integrand over [a, b].

    Half-infinite domains are supported: ``b = inf`` (or ``a = -inf``) is
    mapped to the unit interval by the rational transform x = a + t/(1-t),
    which preserves algebraic tails without introducing endpoint nodes.

    Worst-panel bisection with the |K15 - G7| embedded error estimate; the
    final value is the fsum of panel results in canonical (left-to-right)
    order, so the outcome is independent of refinement scheduling.
    """
    if math.isinf(a) and math.isinf(b):
        raise ValueError("doubly infinite domains are not supported")
    if math.isinf(b):
        g = lambda t: f(a + t / (1.0 - t)) / (1.0 - t) ** 2
        return _integrate_finite(g, 0.0, 1.0, rtol=rtol, atol=atol, limit=limit)
    if math.isinf(a):
        g = lambda t: f(b - t / (1.0 - t)) / (1.0 - t) ** 2
        return _integrate_finite(g, 0.0, 1.0, rtol=rtol, atol=atol, limit=limit)
    return _integrate_finite(f, a, b, rtol=rtol, atol=atol, limit=limit)


def _integrate_finite(f, a, b, *, rtol, atol, limit) -> QuadratureResult:
    if not b > a:
        if b == a:
            return QuadratureResult(0.0, 0.0, 0, True)
        raise ValueError("need b >= a")
    val, err, n = _gk_panel(f, a, b)
    # heap of (-error, insertion order, a, b, value, error)
    panels = [(-err, 0, a, b, val, err)]
    counter = 1
    evals = n
    while True:
        total_err = math.fsum(p[5] for p in panels)
        total_val = pairwise_sum([p[4] for p in panels])
        tol = max(atol, rtol * abs(total_val))
        if total_err <= tol or len(panels) >= limit:
            break
        neg_err, _, pa, pb, pval, perr = heapq.heappop(panels)
        pm = 0.5 * (pa + pb)
        if pm <= pa or pm >= pb:  # interval at rounding resolution
            heapq.heappush(panels, (0.0, counter, pa, pb, pval, perr))
            counter += 1
            continue
        v1, e1, n1 = _gk_panel(f, pa, pm)
        v2, e2, n2 = _gk_panel(f, pm, pb)
        evals += n1 + n2
        heapq.heappush(panels, (-e1, counter, pa, pm, v1, e1))
        heapq.heappush(panels, (-e2, counter + 1, pm, pb, v2, e2))
        counter += 2
    ordered = sorted(panels, key=lambda p: p[2])
    value = pairwise_sum([p[4] for p in ordered])
    error = math.fsum(p[5] for p in ordered)
    converged = error <= max(atol, rtol * abs(value))
    return QuadratureResult(value, error, evals, converged)


def sphere_rule(order: int):
    """Nodes (N,3) and weights (N,) of the Gauss-Legendre x azimuth rule."""
    if order < 8:
        raise ValueError("order must be >= 8")
    z, wz = np.polynomial.legendre.leggauss(order)
    nphi = 2 * order
    phi = 2.0 * np.pi * np.arange(nphi) / nphi
    wphi = 2.0 * np.pi / nphi
    st = np.sqrt(1.0 - z**2)
    dirs = np.empty((order * nphi, 3))
    dirs[:, 0] = np.outer(st, np.cos(phi)).ravel()
    dirs[:, 1] = np.outer(st, np.sin(phi)).ravel()
    dirs[:, 2] = np.repeat(z, nphi)
    weights = np.repeat(wz, nphi) * wphi
    return dirs, weights


def integrate_sphere(f: Callable[[np.ndarray], np.ndarray], order: int = 16) -> QuadratureResult:
    """Integrate f over the unit sphere with a product rule.

    ``f`` receives an (N, 3) array of unit vectors and may return shape
    (N,) or (N, ...) for tensor-valued integrands.  The rule integrates
    spherical polynomials up to degree 2*order - 1 exactly.  The error
    estimate compares against a companion rule of order + 4.
    """

    def run(p):
        dirs, w = sphere_rule(p)
        vals = np.asarray(f(dirs))
        return np.tensordot(w, vals, axes=([0], [0])), len(dirs)

    coarse, n1 = run(order)
    fine, n2 = run(order + 4)
    err = float(np.max(np.abs(np.asarray(fine) - np.asarray(coarse))))
    value = fine if np.ndim(fine) else fine.item() if isinstance(fine, np.ndarray) else fine
    return QuadratureResult(value, err, n1 + n2, True)


def delta_regularized(
    f: Callable[[np.ndarray], np.ndarray],
    argfun: Callable[[np.ndarray], np.ndarray],
    width: float,
    domain: tuple[float, float],
    *,
    scan_points: int = 4096,
    rtol: float = 1e-10,
) -> QuadratureResult:
    """Integrate f(k) against a normalized Gaussian of argfun(k).

    Oracle-grade replacement of the Dirac delta delta(argfun(k)) by
    N(argfun(k); width).  Roots of argfun are located by a sign-change scan
    over ``domain`` followed by bisection; each root contributes a local
    adaptive integral over +-12 Gaussian widths.  Returns 0 (converged) if
    argfun has no sign change on the domain.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    a, b = domain
    ks = np.linspace(a, b, scan_points)
    vals = np.asarray(argfun(ks))
    sign_change = np.nonzero(np.diff(np.signbit(vals)))[0]
    if len(sign_change) == 0:
        return QuadratureResult(0.0, 0.0, scan_points, True)

    norm = 1.0 / (width * math.sqrt(2.0 * math.pi))

    def integrand(k):
        y = np.asarray(argfun(k))
        return np.asarray(f(k)) * norm * np.exp(-(y * y) / (2.0 * width**2))

    total = 0.0
    err = 0.0
    evals = scan_points
    converged = True
    for idx in sign_change:
        lo, hi = ks[idx], ks[idx + 1]
        for _ in range(80):  # bisection to locate the root
            mid = 0.5 * (lo + hi)
            if np.signbit(argfun(np.array([mid]))[0]) == np.signbit(argfun(np.array([lo]))[0]):
                lo = mid
            else:
                hi = mid
        root = 0.5 * (lo + hi)
        h = 1e-6 * max(abs(root), 1.0)
        slope = (argfun(np.array([root + h]))[0] - argfun(np.array([root - h]))[0]) / (2 * h)
        halfwin = 12.0 * width / max(abs(slope), 1e-300)
        res = integrate_1d(integrand, max(a, root - halfwin), min(b, root + halfwin), rtol=rtol)
        total += np.real(res.value)
        err += res.error_estimate
        evals += res.evaluations
        converged = converged and res.converged
    return QuadratureResult(total, err, evals, converged)


def richardson(values: Sequence[tuple[float, complex | float | np.ndarray]]):
    """Extrapolate a geometric h-sequence of values to h = 0.

    Neville polynomial extrapolation in h.  Requires at least three entries
    with (approximately) geometric spacing; raises NumericalError when the
    tableau does not converge monotonically, which signals a broken error
    model rather than returning a misleading number.
    """
    if len(values) < 3:
        raise ValueError("need at least 3 (h, value) pairs")
    hs = np.array([float(h) for h, _ in values])
    if np.any(hs <= 0) or np.any(np.diff(hs) >= 0):
        raise ValueError("h sequence must be positive and strictly decreasing")
    ratios = hs[1:] / hs[:-1]
    if np.max(np.abs(ratios - ratios[0])) > 0.05 * ratios[0]:
        raise ValueError("h sequence must be geometric")
    tableau = [np.asarray(v, dtype=complex) for _, v in values]
    # error-model check: the input sequence must converge monotonically
    # (successive differences non-increasing), otherwise the polynomial
    # extrapolation has no error model to stand on
    scale = max(float(np.max(np.abs(v))) for v in tableau) or 1.0
    diffs = [float(np.max(np.abs(tableau[i + 1] - tableau[i]))) for i in range(len(tableau) - 1)]
    for earlier, later in zip(diffs, diffs[1:]):
        if later > earlier * (1.0 + 1e-9) + 1e-14 * scale:
            raise NumericalError(
                f"non-monotone convergence: successive differences {earlier:.3e} -> {later:.3e}"
            )
    prev_diff = None
    n = len(tableau)
    for level in range(1, n):
        new = []
        for i in range(n - level):
            num = hs[i] * tableau[i + 1] - hs[i + level] * tableau[i]
            new.append(num / (hs[i] - hs[i + level]))
        diff = float(np.max(np.abs(new[-1] - tableau[-1])))
        scale = float(np.max(np.abs(new[-1]))) or 1.0
        if prev_diff is not None and diff > 4.0 * prev_diff and diff > 1e-13 * scale:
            raise NumericalError(
                f"Richardson tableau diverges at level {level}: {diff:.3e} > {prev_diff:.3e}"
            )
        prev_diff = diff
        tableau = new
    out = tableau[0]
    if out.ndim == 0:
        out = out.item()
        if isinstance(out, complex) and out.imag == 0.0:
            return out.real
        return out
    if np.all(np.abs(np.imag(out)) == 0.0):
        return np.real(out)
    return out


_MC_CHUNK = 1 << 16


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    # Philox counter streams keyed by global chunk index: reproducible
    # regardless of how chunks would be distributed across workers.
    return np.random.Generator(np.random.Philox(key=seed, counter=chunk_index << 66))


def mc_integrate(
    f: Callable[[np.ndarray], np.ndarray],
    sampler,
    spec: MonteCarloSpec,
    workers: int = 1,
) -> QuadratureResult:
    """Importance-sampled Monte Carlo mean of f under ``sampler``.

    ``sampler`` must provide ``sample(rng, n) -> (n, d)`` points drawn from
    a normalized density and ``pdf(points) -> (n,)``.  The estimate is
    mean(f/q) with a standard-error estimate.

    Each fixed-size chunk draws from a Philox counter stream keyed by its
    global chunk index, and chunk contributions are merged in canonical
    index order (fsum), so a fixed seed gives bitwise identical results no
    matter how the chunks are scheduled.  ``workers`` only permutes the
    evaluation order (round-robin), exercising that contract.
    """
    if workers < 1:
        raise ValueError("workers must be positive")
    sizes = []
    n_left = spec.samples
    while n_left > 0:
        sizes.append(min(_MC_CHUNK, n_left))
        n_left -= sizes[-1]
    order = [i for w in range(workers) for i in range(w, len(sizes), workers)]
    results: dict[int, tuple[float, float, int]] = {}
    for index in order:
        n = sizes[index]
        rng = _chunk_rng(spec.seed, index)
        pts = sampler.sample(rng, n)
        q = np.asarray(sampler.pdf(pts), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            y = np.asarray(f(pts), dtype=float) / q
        if not np.all(np.isfinite(y)):
            bad = np.nonzero(~np.isfinite(y))[0][0]
            raise NumericalError(f"non-finite Monte Carlo sample at point {pts[bad]!r}")
        results[index] = (math.fsum(y), math.fsum(y * y), n)
    ordered = [results[i] for i in range(len(sizes))]
    total_n = sum(r[2] for r in ordered)
    mean = math.fsum(r[0] for r in ordered) / total_n
    second = math.fsum(r[1] for r in ordered) / total_n
    var = max(second - mean * mean, 0.0)
    stderr = math.sqrt(var / total_n)
    return QuadratureResult(mean, stderr, total_n, True)
