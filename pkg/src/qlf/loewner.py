"""Tangential interpolation data and the Loewner realization machinery.

A reduced model is assembled purely from tangential samples of the transfer
function: the Loewner matrix and its shifted companion are divided-difference
tables of those samples, and their pencil realizes an interpolant of the data
without ever touching the original state-space matrices.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CoincidentPoints,
    DimensionMismatch,
    NonPositiveRealPart,
    NotConjugateClosed,
    PointInsideUnitDisk,
    SingularLoewner,
)
from .lti import ComplexROM, Domain, StateSpaceModel, eval_tf, eval_tf_derivative

COLLISION_RTOL = 1e-12      # sigma/mu collision threshold (divided difference blows up)
RCOND_LOEWNER = 1e-12       # reciprocal condition below this means redundant data
REALIFY_IMAG_RTOL = 1e-8    # residual imaginary mass allowed when realifying
PAIRING_RTOL = 1e-8         # conjugate-pair detection tolerance


def _validate_points(points, domain, what):
    points = np.asarray(points, dtype=complex)
    if domain is Domain.CONTINUOUS:
        if np.any(points.real <= 0):
            raise NonPositiveRealPart(f"{what} must have positive real part, got {points}")
    else:
        if np.any(np.abs(points) <= 1):
            raise PointInsideUnitDisk(f"{what} must lie outside the unit circle, got {points}")
    return points


@dataclass(frozen=True)
class TangentialData:
    """Interpolation points with tangential directions.

    ``sigma``/``mu`` are the right/left points, ``b`` stacks the right
    directions as columns (m x r) and ``c`` the left direction rows (r x p).
    In Hermite mode the left and right points coincide.
    """

    sigma: np.ndarray
    mu: np.ndarray
    b: np.ndarray
    c: np.ndarray
    hermite: bool = False
    domain: Domain = Domain.CONTINUOUS

    def __post_init__(self):
        object.__setattr__(self, "sigma", _validate_points(self.sigma, self.domain, "right points"))
        object.__setattr__(self, "mu", _validate_points(self.mu, self.domain, "left points"))
        object.__setattr__(self, "b", np.atleast_2d(np.asarray(self.b, dtype=complex)))
        object.__setattr__(self, "c", np.atleast_2d(np.asarray(self.c, dtype=complex)))
        r = len(self.sigma)
        if len(self.mu) != r:
            raise DimensionMismatch("sigma and mu must have equal length")
        if self.b.shape[1] != r:
            raise DimensionMismatch(f"b must have {r} columns, got {self.b.shape}")
        if self.c.shape[0] != r:
            raise DimensionMismatch(f"c must have {r} rows, got {self.c.shape}")
        if self.hermite and np.any(self.sigma != self.mu):
            raise DimensionMismatch("hermite mode requires mu identical to sigma")
        for arr in (self.sigma, self.mu, self.b, self.c):
            arr.setflags(write=False)

    @classmethod
    def hermite_data(cls, sigma, b, c, domain=Domain.CONTINUOUS):
        sigma = np.asarray(sigma, dtype=complex)
        return cls(sigma=sigma, mu=sigma.copy(), b=b, c=c, hermite=True, domain=domain)

    @property
    def r(self):
        return len(self.sigma)

    def is_conjugate_closed(self, rtol=PAIRING_RTOL):
        """True when points and directions are closed under conjugation."""
        try:
            conjugate_pairing(self.sigma, self.b, self.c, rtol=rtol)
            if not self.hermite:
                conjugate_pairing(self.mu, None, self.c, rtol=rtol)
        except NotConjugateClosed:
            return False
        return True


def conjugate_pairing(points, b=None, c=None, rtol=PAIRING_RTOL):
    """Pair up conjugate points; returns a list of (i, j) index pairs.

    Indices not in any pair correspond to (numerically) real points.  When
    direction data is supplied it must be conjugated consistently with the
    point pairing.  Raises :class:`NotConjugateClosed` if no pairing exists.
    """
    points = np.asarray(points, dtype=complex)
    scale = 1.0 + np.abs(points)
    pairs = []
    used = np.zeros(len(points), dtype=bool)
    for i in range(len(points)):
        if used[i]:
            continue
        if abs(points[i].imag) < rtol * scale[i]:
            used[i] = True
            continue
        candidates = [
            j for j in range(i + 1, len(points))
            if not used[j] and abs(points[j] - points[i].conj()) < rtol * scale[i]
        ]
        if not candidates:
            raise NotConjugateClosed(f"point {points[i]} has no conjugate partner")
        j = candidates[0]
        if b is not None:
            db = np.abs(b[:, j] - b[:, i].conj()).max()
            if db > rtol * (1.0 + np.abs(b[:, i]).max()):
                raise NotConjugateClosed("right directions are not conjugate-paired")
        if c is not None:
            dc = np.abs(c[j] - c[i].conj()).max()
            if dc > rtol * (1.0 + np.abs(c[i]).max()):
                raise NotConjugateClosed("left directions are not conjugate-paired")
        used[i] = used[j] = True
        pairs.append((i, j))
    return pairs


@dataclass(frozen=True)
class SampleSet:
    """Tangential transfer-function samples, the sole input of the reductions.

    ``right`` stacks G(sigma_i) b_i as columns (p x r), ``left`` stacks
    c_i G(mu_i) as rows (r x m), and ``hermite_diag`` stacks the derivative
    samples G'(sigma_i) b_i (present exactly in Hermite mode).  ``data``
    records the tangential data the samples were taken at.
    """

    right: np.ndarray
    left: np.ndarray
    hermite_diag: np.ndarray = None
    data: TangentialData = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "right", np.atleast_2d(np.asarray(self.right, dtype=complex)))
        object.__setattr__(self, "left", np.atleast_2d(np.asarray(self.left, dtype=complex)))
        if self.right.shape[1] != self.left.shape[0]:
            raise DimensionMismatch("right/left sample counts disagree")
        if self.hermite_diag is not None:
            hd = np.atleast_2d(np.asarray(self.hermite_diag, dtype=complex))
            if hd.shape != self.right.shape:
                raise DimensionMismatch("hermite_diag shape must match right samples")
            object.__setattr__(self, "hermite_diag", hd)

    @property
    def r(self):
        return self.right.shape[1]


@dataclass(frozen=True)
class LoewnerPencil:
    """Loewner matrix, shifted Loewner matrix and the stacked samples."""

    loewner: np.ndarray
    shifted: np.ndarray
    left_stack: np.ndarray    # r x m, rows c_i G(mu_i)
    right_stack: np.ndarray   # p x r, columns G(sigma_i) b_i
    domain: Domain = Domain.CONTINUOUS


def build_pencil(data, samples):
    """Assemble the Loewner pencil from tangential samples only.

    Every entry is a divided difference of the scalar contractions
    c_i G(sigma_j) b_j and c_i G(mu_i) b_j; full p x m samples are never
    required.  In Hermite mode the diagonal uses the derivative samples:
    the (i, i) entries are -c_i G'(sigma_i) b_i and
    -c_i (G(sigma_i) + sigma_i G'(sigma_i)) b_i.

    Raises
    ------
    CoincidentPoints
        If sigma_j equals mu_i (within tolerance) anywhere a divided
        difference is needed; Hermite mode covers the intended coincidence.
    MissingDeltaS-free precondition: Hermite data must come with
        ``hermite_diag`` samples.
    """
    if samples.r != data.r:
        raise DimensionMismatch("sample count does not match tangential data")
    if data.hermite and samples.hermite_diag is None:
        raise DimensionMismatch("hermite data requires hermite_diag samples")
    r = data.r
    sigma, mu = data.sigma, data.mu
    L = np.zeros((r, r), dtype=complex)
    Ls = np.zeros((r, r), dtype=complex)
    for i in range(r):
        for j in range(r):
            if data.hermite and i == j:
                d = samples.hermite_diag[:, i]
                L[i, i] = -(data.c[i] @ d)
                Ls[i, i] = -(data.c[i] @ (samples.right[:, i] + sigma[i] * d))
                continue
            gap = sigma[j] - mu[i]
            if abs(gap) < COLLISION_RTOL * (1.0 + abs(sigma[j])):
                raise CoincidentPoints(
                    f"sigma[{j}] = {sigma[j]} collides with mu[{i}] = {mu[i]}; "
                    "use Hermite mode for coincident points"
                )
            cv = data.c[i] @ samples.right[:, j]
            wb = samples.left[i] @ data.b[:, j]
            L[i, j] = -(cv - wb) / gap
            Ls[i, j] = -(sigma[j] * cv - mu[i] * wb) / gap
    return LoewnerPencil(
        loewner=L, shifted=Ls, left_stack=samples.left, right_stack=samples.right,
        domain=data.domain,
    )


def lf_rom(pencil):
    """Reduced model from a Loewner pencil: A = L^{-1} Ls, B = L^{-1} W, C = V.

    Raises
    ------
    SingularLoewner
        If the Loewner matrix is numerically singular, which signals
        redundant interpolation data (reduce r).
    """
    if np.linalg.cond(pencil.loewner) > 1.0 / RCOND_LOEWNER:
        raise SingularLoewner("Loewner matrix is singular; interpolation data is redundant")
    A = np.linalg.solve(pencil.loewner, pencil.shifted)
    B = np.linalg.solve(pencil.loewner, pencil.left_stack)
    return ComplexROM(A=A, B=B, C=pencil.right_stack, domain=pencil.domain)


@dataclass(frozen=True)
class InterpolationReport:
    """Relative residuals of the tangential interpolation conditions."""

    right: np.ndarray
    left: np.ndarray
    hermite: np.ndarray = None

    def max_residual(self):
        worst = max(self.right.max(), self.left.max())
        if self.hermite is not None:
            worst = max(worst, self.hermite.max())
        return float(worst)


def _tiny_guard(x):
    return max(x, 1e-300)


def verify_interpolation(oracle, rom, data):
    """Check the interpolation conditions of ``rom`` against an oracle.

    ``oracle`` is either a model (evaluated exactly) or any sampler exposing
    ``right_samples`` / ``left_samples``.  Returns per-condition relative
    residuals; purely diagnostic, nothing is raised for large residuals.
    """
    from .sampling import ExactSampler  # local import to avoid a cycle

    if not hasattr(oracle, "right_samples"):
        oracle = ExactSampler(oracle)
    ref_right = oracle.right_samples(data.sigma, data.b)
    ref_left = oracle.left_samples(data.mu, data.c)
    right = np.zeros(data.r)
    left = np.zeros(data.r)
    for i in range(data.r):
        got = eval_tf(rom, data.sigma[i]) @ data.b[:, i]
        right[i] = np.linalg.norm(ref_right[:, i] - got) / _tiny_guard(np.linalg.norm(ref_right[:, i]))
        got = data.c[i] @ eval_tf(rom, data.mu[i])
        left[i] = np.linalg.norm(ref_left[i] - got) / _tiny_guard(np.linalg.norm(ref_left[i]))
    hermite = None
    if data.hermite:
        from .sampling import derivative_samples

        if isinstance(oracle, ExactSampler):
            ref_diag = oracle.exact_hermite_diag(data.sigma, data.b)
        else:
            ref_diag = derivative_samples(oracle, data.sigma, data.b, 1e-4 * (1 + 1j))
        hermite = np.zeros(data.r)
        for i in range(data.r):
            ref = data.c[i] @ ref_diag[:, i]
            got = data.c[i] @ (eval_tf_derivative(rom, data.sigma[i]) @ data.b[:, i])
            hermite[i] = abs(ref - got) / _tiny_guard(abs(ref))
    return InterpolationReport(right=right, left=left, hermite=hermite)


def realify_rom(rom, pairing):
    """Convert a conjugate-closed complex ROM into a real state-space model.

    ``pairing`` lists index pairs (i, j) of conjugate states; all remaining
    indices must correspond to real (self-conjugate) states.  Each pair is
    mixed by the transformation block [[1, -1j], [1, 1j]] / 2, which sends a
    conjugate column pair (v, conj(v)) to (Re v, Im v).  The transfer
    function is preserved exactly.

    Raises
    ------
    NotConjugateClosed
        If the transformed matrices retain significant imaginary parts.
    """
    r = rom.order
    seen = set()
    for i, j in pairing:
        if i == j or not (0 <= i < r and 0 <= j < r) or i in seen or j in seen:
            raise DimensionMismatch(f"invalid pairing entry ({i}, {j})")
        seen.update((i, j))
    J = np.zeros((r, r), dtype=complex)
    Jinv = np.zeros((r, r), dtype=complex)
    for k in range(r):
        if k not in seen:
            J[k, k] = 1.0
            Jinv[k, k] = 1.0
    for i, j in pairing:
        J[np.ix_((i, j), (i, j))] = np.array([[1, -1j], [1, 1j]]) / 2
        Jinv[np.ix_((i, j), (i, j))] = np.array([[1, 1], [1j, -1j]])
    A = Jinv @ rom.A @ J
    B = Jinv @ rom.B
    C = rom.C @ J
    for name, M in (("A", A), ("B", B), ("C", C)):
        imag = np.abs(M.imag).max()
        scale = _tiny_guard(np.abs(M.real).max())
        if imag > REALIFY_IMAG_RTOL * scale:
            raise NotConjugateClosed(
                f"realified {name} keeps imaginary mass {imag:.2e} (scale {scale:.2e}); "
                "check the pairing and conjugate closure of the data"
            )
    return StateSpaceModel(A=A.real, B=B.real, C=C.real, domain=rom.domain)
