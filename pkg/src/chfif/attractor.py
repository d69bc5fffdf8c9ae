"""Evaluation of the interpolating pair (f1, f2).

Three routes are provided on purpose, because each one checks the others:

* :func:`sample_exact` propagates node values through the functional
  equations, giving exact values on address-refined grids;
* :func:`fixed_point_iterate` runs the contraction operator on a uniform
  grid until successive sweeps agree;
* :func:`chaos_game` renders the attractor by seeded random iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DepthLimitError
from .geometry import ChfifModel

CHAOS_BURN_IN = 100

# sample_exact(depth) materialises N**(depth+1) + 1 points per component.
DEFAULT_MAX_POINTS = 20_000_000


@dataclass(frozen=True)
class Address:
    """A finite word (r_1, ..., r_m) over {1..N} naming a subinterval.

    The empty word names the whole domain.  Symbol r_k acts as the k-th
    applied map, so the last symbol selects the top-level interval the
    subinterval sits in.
    """

    word: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.word)


def _require_symbols(word: tuple[int, ...], n: int) -> None:
    for r in word:
        if not 1 <= r <= n:
            raise ValueError(f"address symbol {r} outside 1..{n}")


def interval_of(model: ChfifModel, address: Address | tuple[int, ...]) -> tuple[float, float]:
    """Unit-domain (start, length) of the subinterval named by ``address``.

    Follows the recursion new = L_r(old) with each successive symbol applied
    as the outermost map, so the length is the product of the interval
    lengths selected by the word.
    """
    word = address.word if isinstance(address, Address) else tuple(address)
    _require_symbols(word, model.n_intervals)
    start, length = 0.0, 1.0
    for r in word:
        j = r - 1
        start = model.a[j] * start + model.b[j]
        length = model.a[j] * length
    return start, length


@dataclass(frozen=True)
class SampledGraph:
    """Sorted abscissas with the two component values at each point.

    ``depth`` records the refinement level when the grid is an
    address-refined node grid; None for other grids.
    """

    xs: np.ndarray
    f1s: np.ndarray
    f2s: np.ndarray
    depth: int | None = None

    def __len__(self) -> int:
        return len(self.xs)


def sample_exact(model: ChfifModel, depth: int, *, max_points: int = DEFAULT_MAX_POINTS) -> SampledGraph:
    """Exact values of (f1, f2) on the level-``depth`` subdivision grid.

    Seeds the node values and pushes them through the functional equations
    once per level: values at the image points L_i(x) are alpha_i f1(x) +
    beta_i f2(x) + p_i(x) and gamma_i f2(x) + q_i(x).  No truncation error
    is introduced; every output value is an exact (floating-point) image of
    the seed values.  Depth m produces N**(m+1) + 1 points; depth 0 returns
    the original nodes.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    n = model.n_intervals
    final = n ** (depth + 1) + 1
    if final > max_points:
        raise DepthLimitError(
            f"depth {depth} needs {final} points, above the limit of {max_points}")

    xs = model.node_x.copy()
    f1 = model.y.copy()
    f2 = model.z.copy()
    for _ in range(depth):
        bx, b1, b2 = [], [], []
        for i in range(1, n + 1):
            j = i - 1
            img_x = model.a[j] * xs + model.b[j]
            img_x[-1] = model.node_x[j + 1]   # keep shared boundaries canonical
            img_1 = model.alpha[j] * f1 + model.beta[j] * f2 + model.p_eval(i, xs)
            img_2 = model.gamma[j] * f2 + model.q_eval(i, xs)
            if j > 0:   # drop the duplicate of the previous block's endpoint
                img_x, img_1, img_2 = img_x[1:], img_1[1:], img_2[1:]
            bx.append(img_x)
            b1.append(img_1)
            b2.append(img_2)
        xs = np.concatenate(bx)
        f1 = np.concatenate(b1)
        f2 = np.concatenate(b2)

    return SampledGraph(xs=model.to_raw(xs), f1s=f1, f2s=f2, depth=depth)


def _interval_index(model: ChfifModel, xs: np.ndarray) -> np.ndarray:
    # node abscissas belong to the interval they close on the right
    idx = np.searchsorted(model.node_x, xs, side="left") - 1
    return np.clip(idx, 0, model.n_intervals - 1)


def apply_operator(model: ChfifModel, xs: np.ndarray, f1: np.ndarray, f2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One sweep of the contraction operator on a grid function.

    ``xs`` must be sorted unit-domain abscissas covering [0, 1]; values of
    the current iterate at L_i^{-1}(x) are obtained by linear interpolation
    between grid samples.
    """
    idx = _interval_index(model, xs)
    u = (xs - model.b[idx]) / model.a[idx]
    u = np.clip(u, 0.0, 1.0)
    f1_u = np.interp(u, xs, f1)
    f2_u = np.interp(u, xs, f2)
    alpha, beta, gamma = model.alpha[idx], model.beta[idx], model.gamma[idx]
    p = model.p_c[idx] * u + model.p_d[idx]
    if np.any(model.p_h != 0.0):
        p = p + model.p_h[idx] * np.power(u, model.p_lam[idx])
    q = model.q_e[idx] * u + model.q_f[idx]
    if np.any(model.q_k != 0.0):
        q = q + model.q_k[idx] * np.power(u, model.q_mu[idx])
    return alpha * f1_u + beta * f2_u + p, gamma * f2_u + q


@dataclass(frozen=True)
class IterationResult:
    """Fixed-point iteration output with its convergence history."""

    graph: SampledGraph
    f1_distances: tuple[float, ...]
    f2_distances: tuple[float, ...]
    iterations: int
    converged: bool

    @property
    def distances(self) -> tuple[float, ...]:
        return tuple(max(d1, d2) for d1, d2 in zip(self.f1_distances, self.f2_distances))


def fixed_point_iterate(
    model: ChfifModel,
    grid_size: int,
    max_iters: int = 10_000,
    tol: float = 1e-10,
) -> IterationResult:
    """Iterate the operator on a uniform grid until sweeps stop moving.

    Starts from the piecewise-linear interpolant of the nodes (which already
    satisfies the endpoint conditions) and records the sup-distance between
    successive sweeps per component.  Non-convergence is reported through
    ``converged`` rather than raised, so callers can inspect the distance
    sequence; it usually means the tolerance is tighter than the grid
    resolution supports.
    """
    if grid_size < model.n_intervals + 1:
        raise ValueError("grid_size must be at least N + 1")
    if tol <= 0:
        raise ValueError("tol must be positive")

    xs = np.linspace(0.0, 1.0, grid_size)
    f1 = np.interp(xs, model.node_x, model.y)
    f2 = np.interp(xs, model.node_x, model.z)

    d1s: list[float] = []
    d2s: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        new_f1, new_f2 = apply_operator(model, xs, f1, f2)
        d1 = float(np.max(np.abs(new_f1 - f1)))
        d2 = float(np.max(np.abs(new_f2 - f2)))
        f1, f2 = new_f1, new_f2
        d1s.append(d1)
        d2s.append(d2)
        if max(d1, d2) < tol:
            converged = True
            break

    graph = SampledGraph(xs=model.to_raw(xs), f1s=f1, f2s=f2, depth=None)
    return IterationResult(
        graph=graph,
        f1_distances=tuple(d1s),
        f2_distances=tuple(d2s),
        iterations=iterations,
        converged=converged,
    )


def functional_residuals(model: ChfifModel, graph: SampledGraph) -> tuple[float, float]:
    """Sup-norm residuals of the two functional equations on a grid function.

    Evaluates one operator sweep with linear interpolation, so this is the
    natural residual for iterates (bounded by a small multiple of the
    iteration tolerance once converged).  On exact address-grid samples the
    interpolated preimage lookup can amplify one-ulp abscissa noise by the
    local oscillation; use :func:`exact_residuals` for those.
    """
    xs = (np.asarray(graph.xs, dtype=float) - model.x0) / model.span
    t1, t2 = apply_operator(model, xs, graph.f1s, graph.f2s)
    return float(np.max(np.abs(t1 - graph.f1s))), float(np.max(np.abs(t2 - graph.f2s)))


def exact_residuals(model: ChfifModel, depth: int) -> tuple[float, float]:
    """Functional-equation residuals of exact samples, by value lookup.

    For every level-``depth`` grid point x and every interval i, compares
    the stored value at L_i(x) (a level-``depth + 1`` grid point) against
    alpha_i f1(x) + beta_i f2(x) + p_i(x) and the hidden analogue.  Exact
    propagation makes these vanish to machine precision.
    """
    coarse = sample_exact(model, depth)
    fine = sample_exact(model, depth + 1)
    xs = (np.asarray(coarse.xs, dtype=float) - model.x0) / model.span
    per_block = len(xs)
    worst1 = worst2 = 0.0
    for i in range(1, model.n_intervals + 1):
        j = i - 1
        lo = j * (per_block - 1)
        sl = slice(lo, lo + per_block)
        image_x = model.a[j] * xs + model.b[j]
        stored_x = (np.asarray(fine.xs[sl], dtype=float) - model.x0) / model.span
        if not np.allclose(stored_x, image_x, rtol=0, atol=1e-9):
            raise AssertionError("refined grid misaligned with interval images")
        rhs1 = model.alpha[j] * coarse.f1s + model.beta[j] * coarse.f2s + model.p_eval(i, xs)
        rhs2 = model.gamma[j] * coarse.f2s + model.q_eval(i, xs)
        worst1 = max(worst1, float(np.max(np.abs(fine.f1s[sl] - rhs1))))
        worst2 = max(worst2, float(np.max(np.abs(fine.f2s[sl] - rhs2))))
    return worst1, worst2


def chaos_game(model: ChfifModel, n_points: int, seed: int, burn_in: int = CHAOS_BURN_IN) -> np.ndarray:
    """Random-iteration rendering of the attractor.

    Applies a uniformly chosen map per step from a seeded pseudorandom
    stream, discards ``burn_in`` initial points, and returns an
    (n_points, 3) array of (x, f1, f2) rows.  Bit-identical for identical
    (seed, n_points, burn_in).
    """
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, model.n_intervals, size=burn_in + n_points)

    x, fy, fz = 0.0, float(model.y[0]), float(model.z[0])
    out = np.empty((n_points, 3), dtype=float)
    for k, j in enumerate(picks):
        px = model.p_c[j] * x + model.p_d[j]
        qx = model.q_e[j] * x + model.q_f[j]
        if model.p_h[j] != 0.0:
            px += model.p_h[j] * x ** model.p_lam[j]
        if model.q_k[j] != 0.0:
            qx += model.q_k[j] * x ** model.q_mu[j]
        fy, fz = model.alpha[j] * fy + model.beta[j] * fz + px, model.gamma[j] * fz + qx
        x = model.a[j] * x + model.b[j]
        if k >= burn_in:
            out[k - burn_in] = (x, fy, fz)
    out[:, 0] = model.to_raw(out[:, 0])
    return out
