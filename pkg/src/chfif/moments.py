"""Integral moments over address intervals and the averaging operator.

The integral of each component over an address interval obeys a one-step
recursion in the outermost address symbol:

    a_{w r} = |I_r| ( int_{I_w} q_r  + gamma_r a_w )
    b_{w r} = |I_r| ( int_{I_w} p_r  + beta_r a_w + alpha_r b_w )

with the whole-interval integrals A, B as base case.  Template integrals
are closed-form, so the recursion is exact; quadrature appears only in test
oracles.  The level-m averaging operator returns the mean b_w / |I_w| of
the cell containing the query point and converges uniformly to f1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attractor import Address, SampledGraph, sample_exact
from .geometry import ChfifModel


def whole_interval_integrals(model: ChfifModel) -> tuple[float, float]:
    """Whole-domain integrals (A, B) of the hidden and visible components.

    Integrating both functional equations over the unit domain and summing
    over intervals gives closed-form linear solves; the denominators cannot
    vanish because |alpha_i| < 1, |gamma_i| < 1 and the lengths sum to 1.
    """
    int_q = np.array([model.q_integral(i, 0.0, 1.0) for i in range(1, model.n_intervals + 1)])
    int_p = np.array([model.p_integral(i, 0.0, 1.0) for i in range(1, model.n_intervals + 1)])
    lengths = model.lengths
    a_val = float(np.sum(lengths * int_q) / (1.0 - np.sum(lengths * model.gamma)))
    b_val = float(
        np.sum(lengths * (int_p + model.beta * a_val))
        / (1.0 - np.sum(lengths * model.alpha))
    )
    return a_val, b_val


def _as_word(address: Address | tuple[int, ...]) -> tuple[int, ...]:
    return address.word if isinstance(address, Address) else tuple(address)


def _walk(model: ChfifModel, word: tuple[int, ...]) -> tuple[float, float, float, float]:
    # returns (start, length, a_w, b_w) after absorbing the word left to right
    a_val, b_val = whole_interval_integrals(model)
    start, length = 0.0, 1.0
    for r in word:
        j = r - 1
        iq = float(model.q_integral(r, start, start + length))
        ip = float(model.p_integral(r, start, start + length))
        a_new = model.a[j] * (iq + model.gamma[j] * a_val)
        b_new = model.a[j] * (ip + model.beta[j] * a_val + model.alpha[j] * b_val)
        start = model.a[j] * start + model.b[j]
        length = model.a[j] * length
        a_val, b_val = a_new, b_new
    return start, length, a_val, b_val


def moment_a(model: ChfifModel, address: Address | tuple[int, ...]) -> float:
    """Integral of the hidden component over the address interval."""
    return _walk(model, _as_word(address))[2]


def moment_b(model: ChfifModel, address: Address | tuple[int, ...]) -> float:
    """Integral of the visible component over the address interval."""
    return _walk(model, _as_word(address))[3]


@dataclass(frozen=True)
class LevelMoments:
    """Moment data for every word of one length, in spatial order."""

    starts: np.ndarray
    lengths: np.ndarray
    a_values: np.ndarray
    b_values: np.ndarray


@dataclass(frozen=True)
class MomentTable:
    """Moments for all words up to a depth, with O(1) lookup by word.

    Built level by level, so shared prefixes are computed once.  Words of
    length k are stored at index sum (r_j - 1) * N**(j-1), which coincides
    with left-to-right spatial order of the intervals.
    """

    n_intervals: int
    depth: int
    whole_a: float
    whole_b: float
    levels: tuple[LevelMoments, ...]

    def word_index(self, word: tuple[int, ...]) -> int:
        idx = 0
        for pos, r in enumerate(word):
            idx += (r - 1) * self.n_intervals ** pos
        return idx

    def lookup(self, address: Address | tuple[int, ...]) -> tuple[float, float]:
        """(b, a) moment pair for a stored word."""
        word = _as_word(address)
        if not word:
            return self.whole_b, self.whole_a
        if len(word) > self.depth:
            raise KeyError(f"word of length {len(word)} beyond table depth {self.depth}")
        lvl = self.levels[len(word) - 1]
        i = self.word_index(word)
        return float(lvl.b_values[i]), float(lvl.a_values[i])


def build_moment_table(model: ChfifModel, depth: int) -> MomentTable:
    """Tabulate moments for every word of length <= depth."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    whole_a, whole_b = whole_interval_integrals(model)
    starts = np.array([0.0])
    lengths = np.array([1.0])
    a_vals = np.array([whole_a])
    b_vals = np.array([whole_b])
    levels: list[LevelMoments] = []
    for _ in range(depth):
        ns, nl, na, nb = [], [], [], []
        for i in range(1, model.n_intervals + 1):
            j = i - 1
            iq = model.q_integral(i, starts, starts + lengths)
            ip = model.p_integral(i, starts, starts + lengths)
            na.append(model.a[j] * (iq + model.gamma[j] * a_vals))
            nb.append(model.a[j] * (ip + model.beta[j] * a_vals + model.alpha[j] * b_vals))
            ns.append(model.a[j] * starts + model.b[j])
            nl.append(model.a[j] * lengths)
        starts = np.concatenate(ns)
        lengths = np.concatenate(nl)
        a_vals = np.concatenate(na)
        b_vals = np.concatenate(nb)
        levels.append(LevelMoments(starts, lengths, a_vals, b_vals))
    return MomentTable(
        n_intervals=model.n_intervals,
        depth=depth,
        whole_a=whole_a,
        whole_b=whole_b,
        levels=tuple(levels),
    )


def _cell_indices(level: LevelMoments, xs: np.ndarray) -> np.ndarray:
    # cells are [start, start + length) except the last, which is closed
    idx = np.searchsorted(level.starts, xs, side="right") - 1
    return np.clip(idx, 0, len(level.starts) - 1)


def q_m_values(
    model: ChfifModel,
    m: int,
    xs: np.ndarray,
    table: MomentTable | None = None,
) -> np.ndarray:
    """Level-m averaging operator evaluated at unit-domain points."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if table is None or table.depth < m:
        table = build_moment_table(model, m)
    level = table.levels[m - 1]
    idx = _cell_indices(level, np.asarray(xs, dtype=float))
    return level.b_values[idx] / level.lengths[idx]


def q_m_operator(model: ChfifModel, m: int, x: float, table: MomentTable | None = None) -> float:
    """Mean of f1 over the level-m cell containing ``x``.

    Cells partition [0, 1] half-open with the last cell closed, so shared
    cell endpoints resolve to the cell they start.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    return float(q_m_values(model, m, np.array([x]), table)[0])


def address_of(model: ChfifModel, x: float, m: int) -> Address:
    """Length-m address of the cell containing ``x`` (same tie-breaking)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    word: list[int] = []
    for _ in range(m):
        idx = int(np.clip(np.searchsorted(model.node_x, x, side="right") - 1, 0, model.n_intervals - 1))
        word.append(idx + 1)
        x = min(max(model.L_inv(idx + 1, x), 0.0), 1.0)
    return Address(tuple(reversed(word)))


def convergence_profile(
    model: ChfifModel,
    m_max: int,
    probe_depth: int,
    probe: SampledGraph | None = None,
) -> tuple[tuple[int, float], ...]:
    """Empirical uniform-convergence certificate for the averaging operator.

    For each level m <= m_max, the sup over a level-``probe_depth`` exact
    sample grid of |Q_m - f1|.
    """
    if probe_depth < m_max:
        raise ValueError("probe_depth must be >= m_max")
    if probe is None:
        probe = sample_exact(model, probe_depth)
    xs = (np.asarray(probe.xs, dtype=float) - model.x0) / model.span
    table = build_moment_table(model, m_max)
    out = []
    for m in range(1, m_max + 1):
        qm = q_m_values(model, m, xs, table)
        out.append((m, float(np.max(np.abs(qm - probe.f1s)))))
    return tuple(out)
