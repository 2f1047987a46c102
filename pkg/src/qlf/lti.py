"""State-space models, exact transfer-function evaluation and H2 machinery.

Everything here is plain dense linear algebra on desk-scale systems: the
full-order truth models used to synthesize test data, the complex
reduced-order realizations produced by the interpolation algorithms, and the
pole-residue / H2-norm utilities shared by all other modules.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg as spla

from .errors import (
    DimensionMismatch,
    EigFailure,
    NegativeTime,
    RepeatedPoles,
    SingularMatrix,
    SingularShift,
    UnstableModel,
)

RCOND_SINGULAR = 1e-12          # reciprocal-condition threshold for solves
POLE_SEPARATION_RTOL = 1e-8     # eigenvalues closer than this are "repeated"


class Domain(Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


def _as_matrix(M, dtype):
    M = np.atleast_2d(np.asarray(M, dtype=dtype))
    M.setflags(write=False)
    return M


@dataclass(frozen=True)
class StateSpaceModel:
    """Real LTI system x' = Ax + Bu, y = Cx (or its discrete-time analogue).

    Transfer function G(s) = C (sI - A)^{-1} B; no feedthrough term.
    Instances are immutable and safe to share across threads.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    domain: Domain = Domain.CONTINUOUS

    def __post_init__(self):
        object.__setattr__(self, "A", _as_matrix(self.A, float))
        object.__setattr__(self, "B", _as_matrix(self.B, float))
        object.__setattr__(self, "C", _as_matrix(self.C, float))
        n, n2 = self.A.shape
        if n != n2:
            raise DimensionMismatch(f"A must be square, got {self.A.shape}")
        if self.B.shape[0] != n:
            raise DimensionMismatch(f"B has {self.B.shape[0]} rows, expected {n}")
        if self.C.shape[1] != n:
            raise DimensionMismatch(f"C has {self.C.shape[1]} columns, expected {n}")

    @property
    def order(self):
        return self.A.shape[0]

    @property
    def num_inputs(self):
        return self.B.shape[1]

    @property
    def num_outputs(self):
        return self.C.shape[0]

    def poles(self):
        return np.linalg.eigvals(self.A)

    def is_stable(self):
        """Hurwitz (continuous) or Schur (discrete) stability of A."""
        lam = self.poles()
        if self.domain is Domain.CONTINUOUS:
            return bool(np.all(lam.real < 0))
        return bool(np.all(np.abs(lam) < 1))


@dataclass(frozen=True)
class ComplexROM:
    """Reduced-order realization with complex matrices.

    Interpolatory constructions produce complex state-space data before any
    realification; the transfer-function conventions are identical to
    :class:`StateSpaceModel`.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    domain: Domain = Domain.CONTINUOUS

    def __post_init__(self):
        object.__setattr__(self, "A", _as_matrix(self.A, complex))
        object.__setattr__(self, "B", _as_matrix(self.B, complex))
        object.__setattr__(self, "C", _as_matrix(self.C, complex))
        r, r2 = self.A.shape
        if r != r2 or r < 1:
            raise DimensionMismatch(f"A must be square and nonempty, got {self.A.shape}")
        if self.B.shape[0] != r:
            raise DimensionMismatch(f"B has {self.B.shape[0]} rows, expected {r}")
        if self.C.shape[1] != r:
            raise DimensionMismatch(f"C has {self.C.shape[1]} columns, expected {r}")

    order = StateSpaceModel.order
    num_inputs = StateSpaceModel.num_inputs
    num_outputs = StateSpaceModel.num_outputs
    poles = StateSpaceModel.poles
    is_stable = StateSpaceModel.is_stable


@dataclass(frozen=True)
class PoleResidueForm:
    """Partial-fraction data: G(s) = sum_k l_k r_k^* / (s - poles_k).

    ``left_factors`` holds the l_k as columns (p x r), ``right_factors`` the
    r_k as columns (m x r); the rank-one residue of pole k is
    ``outer(l_k, conj(r_k))``.
    """

    poles: np.ndarray
    left_factors: np.ndarray
    right_factors: np.ndarray

    def evaluate(self, s):
        """Reconstruct G(s) from the partial fractions."""
        acc = np.zeros((self.left_factors.shape[0], self.right_factors.shape[0]), dtype=complex)
        for k, lam in enumerate(self.poles):
            acc += np.outer(self.left_factors[:, k], self.right_factors[:, k].conj()) / (s - lam)
        return acc


def solve_dense(A, B):
    """Solve A X = B for desk-scale dense A, rejecting singular systems."""
    A = np.atleast_2d(np.asarray(A))
    if np.linalg.cond(A) > 1.0 / RCOND_SINGULAR:
        raise SingularMatrix(f"matrix is singular to rcond {RCOND_SINGULAR:g}")
    return np.linalg.solve(A, np.asarray(B))


def eig_dense(A):
    """Eigendecomposition (values, vectors) of a dense square matrix."""
    try:
        return np.linalg.eig(np.atleast_2d(np.asarray(A)))
    except np.linalg.LinAlgError as exc:
        raise EigFailure(str(exc)) from exc


def _resolvent_apply(model, s):
    """(sI - A)^{-1} B with a singular-shift guard."""
    n = model.order
    M = s * np.eye(n) - model.A
    if np.linalg.cond(M) > 1.0 / RCOND_SINGULAR:
        raise SingularShift(f"shift {s} is numerically a pole of the model")
    return np.linalg.solve(M, model.B)


def eval_tf(model, s):
    """Evaluate the transfer function C (sI - A)^{-1} B at a complex point."""
    return model.C @ _resolvent_apply(model, s)


def eval_tf_derivative(model, s):
    """Evaluate dG/ds = -C (sI - A)^{-2} B at a complex point."""
    n = model.order
    R = _resolvent_apply(model, s)
    return -model.C @ np.linalg.solve(s * np.eye(n) - model.A, R)


def impulse_response(model, t):
    """Impulse response C e^{At} B (continuous) or C A^k B (discrete)."""
    if model.domain is Domain.CONTINUOUS:
        if t < 0:
            raise NegativeTime(f"t = {t} < 0")
        return model.C @ spla.expm(model.A * float(t)) @ model.B
    k = int(t)
    if k != t or k < 0:
        raise NegativeTime(f"discrete index must be an integer >= 0, got {t}")
    return model.C @ np.linalg.matrix_power(model.A, k) @ model.B


def pole_residue(model):
    """Decompose a model with simple poles into pole-residue form.

    Returns
    -------
    PoleResidueForm
        Poles are the eigenvalues of A; with A = X diag(poles) X^{-1} the
        left factors are the columns of C X and the right factors the
        conjugated rows of X^{-1} B.

    Raises
    ------
    RepeatedPoles
        If two eigenvalues coincide within ``POLE_SEPARATION_RTOL``.
    """
    lam, X = eig_dense(model.A)
    scale = max(np.max(np.abs(lam)), 1e-300)
    for i in range(len(lam)):
        sep = np.abs(lam[i] - np.delete(lam, i)).min() if len(lam) > 1 else np.inf
        if sep < POLE_SEPARATION_RTOL * scale:
            raise RepeatedPoles(f"poles closer than {POLE_SEPARATION_RTOL:g} * max|pole|")
    left = model.C @ X
    right_rows = np.linalg.solve(X, model.B.astype(complex))
    return PoleResidueForm(poles=lam, left_factors=left, right_factors=right_rows.conj().T)


def controllability_gramian(model):
    """Solve A P + P A^H + B B^H = 0 (continuous) or A P A^H - P + B B^H = 0."""
    BBt = model.B @ np.conjugate(model.B).T
    if model.domain is Domain.CONTINUOUS:
        return spla.solve_continuous_lyapunov(model.A, -BBt)
    return spla.solve_discrete_lyapunov(model.A, BBt)


def h2_norm(model):
    """H2 norm via the controllability Gramian; requires a stable model."""
    if not model.is_stable():
        raise UnstableModel("H2 norm is only defined for stable models")
    P = controllability_gramian(model)
    val = np.real(np.trace(model.C @ P @ np.conjugate(model.C).T))
    return float(np.sqrt(max(val, 0.0)))


def h2_error(model_a, model_b):
    """H2 norm of the difference system G_a - G_b.

    Both arguments may be real models or complex ROMs; domains must agree.
    """
    if model_a.domain is not model_b.domain:
        raise DimensionMismatch("cannot compare models across time domains")
    na, nb = model_a.order, model_b.order
    A = np.zeros((na + nb, na + nb), dtype=complex)
    A[:na, :na] = model_a.A
    A[na:, na:] = model_b.A
    B = np.vstack([model_a.B.astype(complex), model_b.B.astype(complex)])
    C = np.hstack([model_a.C.astype(complex), -model_b.C.astype(complex)])
    return h2_norm(ComplexROM(A, B, C, domain=model_a.domain))
