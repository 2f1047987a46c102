"""Sampler-driven IRKA: iterate Hermite interpolation toward H2 optimality.

Each iteration samples the transfer function (and its derivative) at the
current shifts through whatever sampler is supplied, builds the Hermite
Loewner realization, and mirrors its poles and residue directions into the
next shift set.  Because the sampler can be backed by pre-recorded frequency
or impulse response data, the whole fixed-point iteration runs offline; no
new measurement is ever needed, and the iteration can be restarted from any
interpolation data at zero experimental cost.

Convergence is declared when the (canonically sorted) shift set stops
moving, or when the monitored error surrogate stops growing.  The surrogate
for a reduced model uses only quantities already computed during the
iteration: the fresh tangential samples taken at the mirrored poles and the
cheap r x r H2 norm of the reduced model itself.
"""

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    CoincidentPoints,
    DegenerateROM,
    NotConjugateClosed,
    RepeatedPoles,
    SingularLoewner,
    SingularShift,
    UnstableROM,
)
from .loewner import TangentialData, build_pencil, conjugate_pairing, lf_rom, realify_rom
from .lti import Domain, StateSpaceModel, eval_tf, eval_tf_derivative, h2_norm, pole_residue
from .sampling import DEFAULT_DELTA_S, ExactSampler, build_sample_set, derivative_samples

REAL_SNAP_RTOL = 1e-9        # shifts with smaller relative imaginary part become real
PAIR_MATCH_RTOL = 1e-6       # conjugate-partner matching tolerance during canonicalization
BOUNDARY_GUARD = 1e-12       # pole distance to the stability boundary below this is degenerate


class TerminationReason(Enum):
    SHIFTS_CONVERGED = "shifts_converged"
    SURROGATE_PLATEAU = "surrogate_plateau"
    MAX_ITERATIONS = "max_iterations"
    FAILURE = "failure"


@dataclass
class IrkaIterationRecord:
    shifts: np.ndarray
    shift_change: float
    surrogate: float
    seconds: float


@dataclass
class IrkaTrace:
    records: list = field(default_factory=list)
    termination: TerminationReason = TerminationReason.MAX_ITERATIONS
    detail: str = ""

    @property
    def num_iterations(self):
        return len(self.records)

    def surrogates(self):
        return np.array([rec.surrogate for rec in self.records])


@dataclass
class IrkaConfig:
    """Iteration parameters.

    ``delta_s`` is the finite-difference step used for Hermite samples with
    data-driven samplers; exact samplers use exact derivatives.  Random
    initialization draws a conjugate-closed shift set (log-uniform magnitude
    in [0.1, 100]) with unit tangential directions, deterministically from
    ``seed``.  Discrete-time sampling domains are supported only behind
    ``allow_experimental_discrete`` since the pole-mirroring update has no
    optimality theory there.
    """

    r: int
    max_iterations: int = 50
    shift_tolerance: float = 1e-6
    surrogate_window: int = 3
    surrogate_tolerance: float = 1e-8
    delta_s: complex = DEFAULT_DELTA_S
    seed: int = 0
    initial_data: TangentialData = None
    allow_experimental_discrete: bool = False

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("reduction order must be at least 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.shift_tolerance <= 0 or self.surrogate_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.surrogate_window < 1:
            raise ValueError("surrogate_window must be at least 1")


def _canonical_data(sigma, b, c, domain):
    """Sort shifts by (Re, Im) and enforce exact conjugate closure.

    Nearly-real shifts are snapped to the real axis together with their
    directions; every remaining shift must find a conjugate partner, whose
    entries are overwritten with exact conjugates so that closure holds by
    construction.
    """
    sigma = np.asarray(sigma, dtype=complex).copy()
    b = np.asarray(b, dtype=complex).copy()
    c = np.asarray(c, dtype=complex).copy()
    order = np.lexsort((sigma.imag, sigma.real))
    sigma, b, c = sigma[order], b[:, order], c[order]
    r = len(sigma)
    used = np.zeros(r, dtype=bool)
    for i in range(r):
        if used[i]:
            continue
        scale = 1.0 + abs(sigma[i])
        if abs(sigma[i].imag) < REAL_SNAP_RTOL * scale:
            sigma[i] = sigma[i].real
            b[:, i] = b[:, i].real
            c[i] = c[i].real
            used[i] = True
            continue
        partner, best = None, np.inf
        for j in range(i + 1, r):
            if not used[j]:
                dist = abs(sigma[j] - sigma[i].conj())
                if dist < best:
                    best, partner = dist, j
        if partner is None or best > PAIR_MATCH_RTOL * scale:
            raise NotConjugateClosed(f"shift {sigma[i]} has no conjugate partner")
        sigma[partner] = sigma[i].conj()
        b[:, partner] = b[:, i].conj()
        c[partner] = c[i].conj()
        used[i] = used[partner] = True
    order = np.lexsort((sigma.imag, sigma.real))
    return TangentialData.hermite_data(sigma[order], b[:, order], c[order], domain=domain)


def init_shifts(r, num_inputs, num_outputs, seed=0, domain=Domain.CONTINUOUS):
    """Random conjugate-closed Hermite interpolation data.

    Shift magnitudes are log-uniform in [0.1, 100] (discrete: [1.5, 100],
    outside the unit circle); complex shifts come in conjugate pairs, and an
    odd order adds one real shift.  Directions are unit vectors, conjugated
    across each pair.  Deterministic for a given seed.
    """
    rng = np.random.default_rng(seed)
    npairs, nreal = divmod(r, 2)
    shifts = []
    for _ in range(npairs):
        if domain is Domain.CONTINUOUS:
            mag = 10 ** rng.uniform(-1, 2)
            ang = rng.uniform(0, np.pi / 2)
        else:
            mag = 10 ** rng.uniform(np.log10(1.5), 2)
            ang = rng.uniform(0, np.pi)
        shifts += [mag * np.exp(1j * ang), mag * np.exp(-1j * ang)]
    for _ in range(nreal):
        if domain is Domain.CONTINUOUS:
            shifts.append(10 ** rng.uniform(-1, 2) + 0j)
        else:
            shifts.append(10 ** rng.uniform(np.log10(1.5), 2) + 0j)
    sigma = np.array(shifts)
    b = rng.standard_normal((num_inputs, r)) + 0j
    c = rng.standard_normal((r, num_outputs)) + 0j
    for k in range(npairs):
        b[:, 2 * k + 1] = b[:, 2 * k].conj()
        c[2 * k + 1] = c[2 * k].conj()
    b /= np.linalg.norm(b, axis=0, keepdims=True)
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    return _canonical_data(sigma, b, c, domain)


def _next_data_from_rom(rom, domain):
    """Mirror ROM poles and residue directions into fresh Hermite data."""
    prf = pole_residue(rom)
    lam = prf.poles
    scale = 1.0 + np.abs(lam)
    if domain is Domain.CONTINUOUS:
        if np.any(np.abs(lam.real) < BOUNDARY_GUARD * scale):
            raise DegenerateROM("reduced pole on the imaginary axis; cannot mirror")
        sigma = np.abs(lam.real) + 1j * lam.imag
    else:
        if np.any(np.abs(np.abs(lam) - 1.0) < BOUNDARY_GUARD * scale):
            raise DegenerateROM("reduced pole on the unit circle; cannot mirror")
        sigma = 1.0 / lam
        inside = np.abs(sigma) <= 1.0
        sigma[inside] = sigma[inside] / np.abs(sigma[inside]) ** 2
    b = prf.right_factors.copy()
    c = prf.left_factors.conj().T.copy()
    # per-point direction scaling is a diagonal state transformation of the
    # interpolant, so unit normalization is free and keeps the pencil balanced
    b /= np.linalg.norm(b, axis=0, keepdims=True)
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    return _canonical_data(sigma, b, c, domain)


def _step(sampler, data, delta_s):
    samples = build_sample_set(sampler, data, delta_s)
    rom = lf_rom(build_pencil(data, samples))
    next_data = _next_data_from_rom(rom, data.domain)
    return samples, rom, next_data


def irka_step(sampler, data, delta_s=None):
    """One fixed-point iteration: sample, interpolate, mirror the poles.

    Returns the Hermite interpolant of the current data and the
    conjugate-closed tangential data for the next iteration.
    """
    _, rom, next_data = _step(sampler, data, delta_s)
    return rom, next_data


def _shift_change(new_sigma, old_sigma):
    return float(np.max(np.abs(new_sigma - old_sigma) / np.abs(old_sigma)))


class SurrogateSide(Enum):
    RIGHT = "right"
    LEFT = "left"


def error_surrogate(samples, rom, side=SurrogateSide.RIGHT):
    """Monitored H2-error surrogate J = 2 Re(cross term) - ||rom||_H2^2.

    The cross term is the trace of the sampled-response stack against the
    reduced model's output (or input) residue factors, evaluated in the
    pole-residue realization aligned with the sample directions; when the
    samples were taken at the mirror images of the reduced poles this is an
    exact evaluation of the H2 inner product of the original and reduced
    models, so ||G||^2 - J equals the squared H2 error.  Growth of J across
    iterations tracks the error reduction without touching the full model.
    """
    if not rom.is_stable():
        raise UnstableROM("surrogate needs a stable reduced model")
    if samples.data is None:
        raise ValueError("samples must carry their tangential data (use build_sample_set)")
    data = samples.data
    prf = pole_residue(rom)
    if rom.domain is Domain.CONTINUOUS:
        expected = -prf.poles.conj()
    else:
        expected = 1.0 / prf.poles
    # pair every mirrored pole with its nearest sample point (sorting is not
    # robust here: ties in the real part break under rounding)
    free = list(range(data.r))
    matches = []
    for kp in range(data.r):
        kd = free.pop(int(np.argmin(np.abs(data.sigma[free] - expected[kp]))))
        matches.append((kp, kd))
    cross = 0.0 + 0.0j
    for kp, kd in matches:
        lhat = prf.left_factors[:, kp]
        rhat = prf.right_factors[:, kp]
        if side is SurrogateSide.RIGHT:
            bk = data.b[:, kd]
            alpha = np.vdot(bk, rhat) / np.vdot(bk, bk)
            cross += alpha * np.vdot(lhat, samples.right[:, kd])
        else:
            ck = data.c[kd]
            beta = np.vdot(ck, lhat.conj()) / np.vdot(ck, ck)
            cross += beta * (samples.left[kd] @ rhat)
    return float(2.0 * np.real(cross) - h2_norm(rom) ** 2)


@dataclass(frozen=True)
class OptimalityReport:
    """Relative residuals of the first-order H2 conditions, one per pole."""

    points: np.ndarray
    derivative: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def max_residual(self):
        return float(max(self.derivative.max(), self.left.max(), self.right.max()))


def verify_h2_optimality(oracle, rom, delta_s=None):
    """Residuals of the Hermite optimality conditions at the mirrored poles.

    For every reduced pole with residue factors (l, r), compares original
    and reduced responses at the mirror point: matched along r (right
    condition), along l (left condition) and in the bilinear derivative
    (Hermite condition).  ``oracle`` is a model or any sampler; data-driven
    oracles estimate the derivative by forward differences with ``delta_s``.
    """
    if not hasattr(oracle, "right_samples"):
        oracle = ExactSampler(oracle)
    if rom.domain is not Domain.CONTINUOUS:
        raise ValueError("optimality conditions are defined for continuous-time models")
    if not rom.is_stable():
        raise UnstableROM("optimality check needs a stable reduced model")
    prf = pole_residue(rom)
    points = -prf.poles.conj()
    rdir = prf.right_factors
    ref_right = oracle.right_samples(points, rdir)
    ref_left = oracle.left_samples(points, prf.left_factors.conj().T)
    if isinstance(oracle, ExactSampler):
        ref_diag = oracle.exact_hermite_diag(points, rdir)
    else:
        ref_diag = derivative_samples(oracle, points, rdir, delta_s or DEFAULT_DELTA_S)
    res_d = np.zeros(len(points))
    res_l = np.zeros(len(points))
    res_r = np.zeros(len(points))
    for k, pt in enumerate(points):
        lhat = prf.left_factors[:, k]
        rhat = rdir[:, k]
        rom_tf = eval_tf(rom, pt)
        rom_d = eval_tf_derivative(rom, pt)
        ref5 = np.vdot(lhat, ref_diag[:, k])
        got5 = np.vdot(lhat, rom_d @ rhat)
        res_d[k] = abs(ref5 - got5) / max(abs(ref5), 1e-300)
        ref6 = ref_left[k]
        got6 = lhat.conj() @ rom_tf
        res_l[k] = np.linalg.norm(ref6 - got6) / max(np.linalg.norm(ref6), 1e-300)
        ref7 = ref_right[:, k]
        got7 = rom_tf @ rhat
        res_r[k] = np.linalg.norm(ref7 - got7) / max(np.linalg.norm(ref7), 1e-300)
    return OptimalityReport(points=points, derivative=res_d, left=res_l, right=res_r)


_RECOVERABLE = (
    SingularLoewner,
    RepeatedPoles,
    DegenerateROM,
    NotConjugateClosed,
    CoincidentPoints,
    SingularShift,
)


def run_irka(sampler, config):
    """Run the offline fixed-point iteration to (sub)optimality.

    Returns the realified final reduced model and the iteration trace.  A
    recoverable numerical failure triggers one restart from fresh random
    shifts; a second failure is recorded in the trace (termination
    ``FAILURE``) instead of being raised, and the model returned is the last
    successfully built one (or None when no iteration completed).
    """
    if sampler.domain is Domain.DISCRETE and not config.allow_experimental_discrete:
        raise ValueError(
            "discrete-time IRKA is experimental; set allow_experimental_discrete=True"
        )
    delta_s = None if isinstance(sampler, ExactSampler) else config.delta_s
    if config.initial_data is not None:
        if not config.initial_data.hermite:
            raise ValueError("IRKA requires Hermite (sigma = mu) interpolation data")
        if config.initial_data.r != config.r:
            raise ValueError("initial data order does not match config.r")
        data = _canonical_data(
            config.initial_data.sigma, config.initial_data.b, config.initial_data.c,
            config.initial_data.domain,
        )
    else:
        data = init_shifts(config.r, sampler.num_inputs, sampler.num_outputs,
                           seed=config.seed, domain=sampler.domain)
    trace = IrkaTrace()
    best = None          # (rom, data that built it)
    prev_rom = None
    restarted = False
    it = 0
    while it < config.max_iterations:
        started = time.perf_counter()
        try:
            samples, rom, next_data = _step(sampler, data, delta_s)
        except _RECOVERABLE as exc:
            if not restarted:
                restarted = True
                trace.detail = f"restarted after {type(exc).__name__}: {exc}"
                data = init_shifts(config.r, sampler.num_inputs, sampler.num_outputs,
                                   seed=config.seed + 1, domain=sampler.domain)
                prev_rom = None
                continue
            trace.termination = TerminationReason.FAILURE
            trace.detail += f"; failed with {type(exc).__name__}: {exc}"
            break
        if prev_rom is not None and trace.records:
            try:
                trace.records[-1].surrogate = error_surrogate(samples, prev_rom)
            except UnstableROM:
                pass
        change = _shift_change(next_data.sigma, data.sigma)
        trace.records.append(IrkaIterationRecord(
            shifts=data.sigma, shift_change=change, surrogate=np.nan,
            seconds=time.perf_counter() - started,
        ))
        best = (rom, data)
        prev_rom = rom
        it += 1
        if change < config.shift_tolerance:
            trace.termination = TerminationReason.SHIFTS_CONVERGED
            data = next_data
            break
        js = [rec.surrogate for rec in trace.records]
        w = config.surrogate_window
        if len(js) > w and np.all(np.isfinite(js[-w - 1:])):
            if abs(js[-1] - js[-1 - w]) <= config.surrogate_tolerance * abs(js[-1]):
                trace.termination = TerminationReason.SURROGATE_PLATEAU
                data = next_data
                break
        data = next_data
    else:
        trace.termination = TerminationReason.MAX_ITERATIONS
    if best is None:
        return None, trace
    rom, rom_data = best
    # score the final model with one extra sampling pass at its mirrored poles
    if trace.records and not np.isfinite(trace.records[-1].surrogate):
        try:
            final_samples = build_sample_set(sampler, _strip_hermite(data), delta_s=None)
            trace.records[-1].surrogate = error_surrogate(final_samples, rom)
        except Exception:
            pass
    pairs = conjugate_pairing(rom_data.sigma)
    return realify_rom(rom, pairs), trace


def _strip_hermite(data):
    """Same points and directions, without the Hermite flag (no derivatives)."""
    return TangentialData(sigma=data.sigma, mu=data.mu, b=data.b, c=data.c,
                          hermite=False, domain=data.domain)
