"""Offline transfer-function sampling from measured response data.

The point of this module: given pre-recorded frequency-response data
G(j w_k) or impulse-response data h(t_k), produce tangential samples
G(sigma) b and c G(mu) at arbitrary points in the sampling-admissible region
(open right half-plane for continuous time, exterior of the unit circle for
discrete time) without any new experiment.  The samples come from
trapezoidal quadrature of resolvent-weighted integrals of the measured data;
derivative samples come from a forward finite difference of two such
quadratures.

All samplers share one capability contract: ``right_samples(sigma, b)``
returning the p x r stack of G(sigma_i) b_i and ``left_samples(mu, c)``
returning the r x m stack of c_i G(mu_i).  ``ExactSampler`` implements the
same contract by dense solves against a known model and serves as the test
oracle for the quadrature-based samplers.

Quadrature sums run sequentially over the grid (bit-reproducible for fixed
inputs on a fixed platform).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyGrid,
    MissingDeltaS,
    NonPositiveRealPart,
    PointInsideUnitDisk,
)
from .loewner import SampleSet
from .lti import Domain, eval_tf, eval_tf_derivative

GRID_JITTER_RTOL = 1e-9   # allowed non-uniformity of measurement grids
DEFAULT_DELTA_S = 1e-4 * (1 + 1j)


def _check_uniform(grid, what):
    steps = np.diff(grid)
    if np.any(steps <= 0):
        raise DimensionMismatch(f"{what} grid must be strictly increasing")
    if len(steps) > 0:
        h = steps.mean()
        if np.abs(steps - h).max() > GRID_JITTER_RTOL * abs(h):
            raise DimensionMismatch(f"{what} grid spacing is not uniform")


@dataclass(frozen=True)
class FrequencyResponseData:
    """Measured frequency response on a uniform nonnegative grid.

    ``values[k]`` is G(j omegas[k]) for continuous-time data (omegas in
    rad/s) or G(e^{j omegas[k]}) for discrete-time data (omegas in radians,
    within [0, pi]).  Negative frequencies are never stored; they are
    synthesized from conjugate symmetry of real systems.
    """

    omegas: np.ndarray
    values: np.ndarray
    domain: Domain = Domain.CONTINUOUS

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if omegas.ndim != 1 or len(omegas) < 2:
            raise EmptyGrid("frequency grid needs at least two points")
        if values.ndim != 3 or values.shape[0] != len(omegas):
            raise DimensionMismatch("values must be an (N, p, m) array matching the grid")
        if omegas[0] < 0:
            raise DimensionMismatch("frequencies must be nonnegative")
        if self.domain is Domain.DISCRETE and omegas[-1] > np.pi * (1 + 1e-12):
            raise DimensionMismatch("discrete-time frequencies must lie in [0, pi]")
        _check_uniform(omegas, "frequency")
        omegas.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "values", values)

    @property
    def num_outputs(self):
        return self.values.shape[1]

    @property
    def num_inputs(self):
        return self.values.shape[2]


@dataclass(frozen=True)
class ImpulseResponseData:
    """Measured impulse response: uniform times from t=0, or integer indices.

    Continuous-time data must start exactly at t=0 on a uniform grid;
    discrete-time data is indexed k = 0..N.  Values are real p x m matrices.
    """

    times: np.ndarray
    values: np.ndarray
    domain: Domain = Domain.CONTINUOUS

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or len(times) < 2:
            raise EmptyGrid("impulse-response grid needs at least two points")
        if values.ndim != 3 or values.shape[0] != len(times):
            raise DimensionMismatch("values must be an (N, p, m) array matching the grid")
        if self.domain is Domain.CONTINUOUS:
            if times[0] != 0.0:
                raise DimensionMismatch("continuous impulse data must start at t = 0")
            _check_uniform(times, "time")
        else:
            if np.any(times != np.arange(len(times))):
                raise DimensionMismatch("discrete impulse data must be indexed k = 0..N")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def num_outputs(self):
        return self.values.shape[1]

    @property
    def num_inputs(self):
        return self.values.shape[2]


def _require_continuous_points(sigma):
    sigma = np.asarray(sigma, dtype=complex)
    if np.any(sigma.real <= 0):
        raise NonPositiveRealPart(f"sampling points need Re(s) > 0, got {sigma}")
    return sigma


def _require_outside_disk(sigma):
    sigma = np.asarray(sigma, dtype=complex)
    if np.any(np.abs(sigma) <= 1):
        raise PointInsideUnitDisk(f"sampling points need |z| > 1, got {sigma}")
    return sigma


def _mirrored_grid(frd):
    """Symmetric grid over [-w_N, w_N] with G(-jw) = conj(G(jw)).

    If the stored grid starts at w_1 > 0, the gap (-w_1, w_1) is bridged by
    a single trapezoid panel; a stored w = 0 sample is used once.
    """
    w = frd.omegas
    G = frd.values
    if w[0] == 0.0:
        w_full = np.concatenate([-w[::-1][:-1], w])
        G_full = np.concatenate([G[::-1][:-1].conj(), G], axis=0)
    else:
        w_full = np.concatenate([-w[::-1], w])
        G_full = np.concatenate([G[::-1].conj(), G], axis=0)
    return w_full, G_full


def _as_directions(vecs, count, rows=False):
    arr = np.atleast_2d(np.asarray(vecs, dtype=complex))
    if (arr.shape[0] if rows else arr.shape[1]) != count:
        raise DimensionMismatch("direction count does not match point count")
    return arr


def fqlf_right_samples(frd, sigma, b, _mirrored=None):
    """Quadrature estimate of [G(sigma_1) b_1, ..., G(sigma_r) b_r].

    Integrates G(jw) b_i / (sigma_i - jw) over the symmetric finite band
    with the trapezoid rule; data beyond the measured band is treated as
    zero, so the estimate carries a truncation error that decays like the
    reciprocal of the band edge.
    """
    if frd.domain is not Domain.CONTINUOUS:
        raise DimensionMismatch("fqlf sampling requires continuous-time data")
    sigma = _require_continuous_points(sigma)
    b = _as_directions(b, len(sigma))
    w_full, G_full = _mirrored_grid(frd) if _mirrored is None else _mirrored
    out = np.empty((frd.num_outputs, len(sigma)), dtype=complex)
    for i, s_i in enumerate(sigma):
        kernel = (G_full @ b[:, i]) / (s_i - 1j * w_full)[:, None]
        out[:, i] = np.trapezoid(kernel, w_full, axis=0) / (2 * np.pi)
    return out


def fqlf_left_samples(frd, mu, c, _mirrored=None):
    """Quadrature estimate of the left samples c_i G(mu_i), stacked as rows."""
    if frd.domain is not Domain.CONTINUOUS:
        raise DimensionMismatch("fqlf sampling requires continuous-time data")
    mu = _require_continuous_points(mu)
    c = _as_directions(c, len(mu), rows=True)
    w_full, G_full = _mirrored_grid(frd) if _mirrored is None else _mirrored
    out = np.empty((len(mu), frd.num_inputs), dtype=complex)
    for i, m_i in enumerate(mu):
        kernel = (c[i] @ G_full) / (m_i - 1j * w_full)[:, None]
        out[i] = np.trapezoid(kernel, w_full, axis=0) / (2 * np.pi)
    return out


def tqlf_right_samples(ird, sigma, b):
    """Trapezoid estimate of G(sigma_i) b_i from impulse-response data.

    Integrates h(t) b_i e^{-sigma_i t} over the recorded window [0, t_N];
    the tail beyond t_N is dropped, which is negligible once the response
    has decayed.
    """
    if ird.domain is not Domain.CONTINUOUS:
        raise DimensionMismatch("tqlf sampling requires continuous-time data")
    sigma = _require_continuous_points(sigma)
    b = _as_directions(b, len(sigma))
    out = np.empty((ird.num_outputs, len(sigma)), dtype=complex)
    for i, s_i in enumerate(sigma):
        kernel = (ird.values @ b[:, i]) * np.exp(-s_i * ird.times)[:, None]
        out[:, i] = np.trapezoid(kernel, ird.times, axis=0)
    return out


def tqlf_left_samples(ird, mu, c):
    """Trapezoid estimate of the rows c_i G(mu_i) from impulse-response data."""
    if ird.domain is not Domain.CONTINUOUS:
        raise DimensionMismatch("tqlf sampling requires continuous-time data")
    mu = _require_continuous_points(mu)
    c = _as_directions(c, len(mu), rows=True)
    out = np.empty((len(mu), ird.num_inputs), dtype=complex)
    for i, m_i in enumerate(mu):
        kernel = (c[i] @ ird.values) * np.exp(-m_i * ird.times)[:, None]
        out[i] = np.trapezoid(kernel, ird.times, axis=0)
    return out


def dt_fqlf_right_samples(frd, sigma, b, _mirrored=None):
    """Discrete-time right samples from unit-circle frequency data.

    Integrates G(e^{jw}) b_i / (e^{-jw} - 1/sigma_i) over [-pi, pi], then
    scales by 1/sigma_i.  Valid at any point outside the unit circle,
    including points with negative real part.
    """
    if frd.domain is not Domain.DISCRETE:
        raise DimensionMismatch("dt_fqlf sampling requires discrete-time data")
    sigma = _require_outside_disk(sigma)
    b = _as_directions(b, len(sigma))
    w_full, G_full = _mirrored_grid(frd) if _mirrored is None else _mirrored
    out = np.empty((frd.num_outputs, len(sigma)), dtype=complex)
    for i, s_i in enumerate(sigma):
        kernel = (G_full @ b[:, i]) / (np.exp(-1j * w_full) - 1.0 / s_i)[:, None]
        out[:, i] = np.trapezoid(kernel, w_full, axis=0) / (2 * np.pi) / s_i
    return out


def dt_fqlf_left_samples(frd, mu, c, _mirrored=None):
    """Discrete-time left samples from unit-circle frequency data."""
    if frd.domain is not Domain.DISCRETE:
        raise DimensionMismatch("dt_fqlf sampling requires discrete-time data")
    mu = _require_outside_disk(mu)
    c = _as_directions(c, len(mu), rows=True)
    w_full, G_full = _mirrored_grid(frd) if _mirrored is None else _mirrored
    out = np.empty((len(mu), frd.num_inputs), dtype=complex)
    for i, m_i in enumerate(mu):
        kernel = (c[i] @ G_full) / (np.exp(-1j * w_full) - 1.0 / m_i)[:, None]
        out[i] = np.trapezoid(kernel, w_full, axis=0) / (2 * np.pi) / m_i
    return out


def dt_impulse_right_samples(ird, sigma, b):
    """Discrete-time right samples as truncated geometric sums.

    Column i is sum_k h(k) b_i sigma_i^{-(k+1)} over the recorded indices;
    the truncation error decays like (spectral radius / |sigma_i|)^N.
    """
    if ird.domain is not Domain.DISCRETE:
        raise DimensionMismatch("dt impulse sampling requires discrete-time data")
    sigma = _require_outside_disk(sigma)
    b = _as_directions(b, len(sigma))
    out = np.empty((ird.num_outputs, len(sigma)), dtype=complex)
    ks = np.arange(len(ird.times))
    for i, s_i in enumerate(sigma):
        weights = s_i ** (-(ks + 1.0))
        out[:, i] = ((ird.values @ b[:, i]) * weights[:, None]).sum(axis=0)
    return out


def dt_impulse_left_samples(ird, mu, c):
    """Discrete-time left samples as truncated geometric sums."""
    if ird.domain is not Domain.DISCRETE:
        raise DimensionMismatch("dt impulse sampling requires discrete-time data")
    mu = _require_outside_disk(mu)
    c = _as_directions(c, len(mu), rows=True)
    out = np.empty((len(mu), ird.num_inputs), dtype=complex)
    ks = np.arange(len(ird.times))
    for i, m_i in enumerate(mu):
        weights = m_i ** (-(ks + 1.0))
        out[i] = ((c[i] @ ird.values) * weights[:, None]).sum(axis=0)
    return out


class ExactSampler:
    """Sampler backed by dense resolvent solves on a known model (oracle)."""

    def __init__(self, model):
        self.model = model

    @property
    def domain(self):
        return self.model.domain

    @property
    def num_inputs(self):
        return self.model.num_inputs

    @property
    def num_outputs(self):
        return self.model.num_outputs

    def _check(self, points):
        if self.domain is Domain.CONTINUOUS:
            return _require_continuous_points(points)
        return _require_outside_disk(points)

    def right_samples(self, sigma, b):
        sigma = self._check(sigma)
        b = _as_directions(b, len(sigma))
        return np.stack(
            [eval_tf(self.model, s) @ b[:, i] for i, s in enumerate(sigma)], axis=1
        )

    def left_samples(self, mu, c):
        mu = self._check(mu)
        c = _as_directions(c, len(mu), rows=True)
        return np.stack(
            [c[i] @ eval_tf(self.model, m) for i, m in enumerate(mu)], axis=0
        )

    def exact_hermite_diag(self, sigma, b):
        """Exact derivative samples G'(sigma_i) b_i (no finite difference)."""
        sigma = self._check(sigma)
        b = _as_directions(b, len(sigma))
        return np.stack(
            [eval_tf_derivative(self.model, s) @ b[:, i] for i, s in enumerate(sigma)],
            axis=1,
        )


class FqlfSampler:
    """Sampler backed by frequency-response data (continuous or discrete)."""

    def __init__(self, frd):
        self.frd = frd
        self._mirrored = _mirrored_grid(frd)

    @property
    def domain(self):
        return self.frd.domain

    @property
    def num_inputs(self):
        return self.frd.num_inputs

    @property
    def num_outputs(self):
        return self.frd.num_outputs

    def right_samples(self, sigma, b):
        if self.domain is Domain.CONTINUOUS:
            return fqlf_right_samples(self.frd, sigma, b, _mirrored=self._mirrored)
        return dt_fqlf_right_samples(self.frd, sigma, b, _mirrored=self._mirrored)

    def left_samples(self, mu, c):
        if self.domain is Domain.CONTINUOUS:
            return fqlf_left_samples(self.frd, mu, c, _mirrored=self._mirrored)
        return dt_fqlf_left_samples(self.frd, mu, c, _mirrored=self._mirrored)


class TqlfSampler:
    """Sampler backed by impulse-response data (continuous or discrete)."""

    def __init__(self, ird):
        self.ird = ird

    @property
    def domain(self):
        return self.ird.domain

    @property
    def num_inputs(self):
        return self.ird.num_inputs

    @property
    def num_outputs(self):
        return self.ird.num_outputs

    def right_samples(self, sigma, b):
        if self.domain is Domain.CONTINUOUS:
            return tqlf_right_samples(self.ird, sigma, b)
        return dt_impulse_right_samples(self.ird, sigma, b)

    def left_samples(self, mu, c):
        if self.domain is Domain.CONTINUOUS:
            return tqlf_left_samples(self.ird, mu, c)
        return dt_impulse_left_samples(self.ird, mu, c)


def derivative_samples(sampler, sigma, b, delta_s):
    """Forward-difference derivative samples (G(s + ds) - G(s)) b / ds.

    Works with any sampler; the estimate inherits the sampler's own error
    plus an O(|delta_s|) differencing error.
    """
    if delta_s == 0:
        raise MissingDeltaS("delta_s must be nonzero")
    sigma = np.asarray(sigma, dtype=complex)
    base = sampler.right_samples(sigma, b)
    shifted = sampler.right_samples(sigma + delta_s, b)
    return (shifted - base) / delta_s


def build_sample_set(sampler, data, delta_s=None):
    """Bundle right, left and (if Hermite) derivative samples for reduction.

    With an :class:`ExactSampler` and no ``delta_s`` the Hermite diagonal is
    exact; data-driven samplers require an explicit finite-difference step.
    """
    right = sampler.right_samples(data.sigma, data.b)
    left = sampler.left_samples(data.mu, data.c)
    diag = None
    if data.hermite:
        if delta_s is not None:
            diag = derivative_samples(sampler, data.sigma, data.b, delta_s)
        elif isinstance(sampler, ExactSampler):
            diag = sampler.exact_hermite_diag(data.sigma, data.b)
        else:
            raise MissingDeltaS(
                "data-driven Hermite samples need a finite-difference step delta_s"
            )
    return SampleSet(right=right, left=left, hermite_diag=diag, data=data)
