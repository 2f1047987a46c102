"""One-shot pseudo-optimal reduction from one-sided tangential samples.

Both constructions fix the reduced poles at the mirror images of the
interpolation points and pick the remaining degrees of freedom so that the
corresponding one-sided H2 optimality conditions hold exactly.  The diagonal
structure of the shift matrices gives the Gramians in closed Cauchy-like
form; no Lyapunov solver is involved.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NonPositiveRealPart, NotControllable, NotObservable
from .lti import ComplexROM, Domain


class GramianKind(Enum):
    OBSERVABILITY = "observability"
    CONTROLLABILITY = "controllability"


@dataclass(frozen=True)
class PorkGramian:
    """Closed-form Gramian of the shift/direction pair, with its Cholesky factor."""

    matrix: np.ndarray
    kind: GramianKind
    cholesky: np.ndarray


def _check_points(points):
    points = np.asarray(points, dtype=complex)
    if np.any(points.real <= 0):
        raise NonPositiveRealPart(f"interpolation points need Re > 0, got {points}")
    return points


def gramian_qs(sigma, b):
    """Observability Gramian of the mirrored shift pair, entrywise.

    Qs[i, j] = (b_i^H b_j) / (conj(sigma_i) + sigma_j); positive definiteness
    certifies observability of the pair and is checked by Cholesky.
    """
    sigma = _check_points(sigma)
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    Qs = (b.conj().T @ b) / (sigma.conj()[:, None] + sigma[None, :])
    try:
        chol = np.linalg.cholesky(Qs)
    except np.linalg.LinAlgError as exc:
        raise NotObservable(
            "shift/direction pair is unobservable (duplicate points with parallel directions)"
        ) from exc
    return PorkGramian(matrix=Qs, kind=GramianKind.OBSERVABILITY, cholesky=chol)


def gramian_ps(mu, c):
    """Controllability Gramian of the dual pair: Ps[i, j] = (c_i c_j^H) / (mu_i + conj(mu_j))."""
    mu = _check_points(mu)
    c = np.atleast_2d(np.asarray(c, dtype=complex))
    Ps = (c @ c.conj().T) / (mu[:, None] + mu.conj()[None, :])
    try:
        chol = np.linalg.cholesky(Ps)
    except np.linalg.LinAlgError as exc:
        raise NotControllable(
            "shift/direction pair is uncontrollable (duplicate points with parallel directions)"
        ) from exc
    return PorkGramian(matrix=Ps, kind=GramianKind.CONTROLLABILITY, cholesky=chol)


def pork_output(samples_right, sigma, b):
    """Pseudo-optimal ROM from right tangential samples.

    Parameters
    ----------
    samples_right
        p x r stack of the samples G(sigma_i) b_i.
    sigma, b
        Right interpolation points and direction columns.

    Returns
    -------
    ComplexROM
        A = -Qs^{-1} S^H Qs (spectrum exactly {-conj(sigma_i)}, stable by
        construction), B = -Qs^{-1} Lb^H, C = -[G(sigma_1) b_1, ...].  The
        realization satisfies A = S + B Lb; its transfer function matches
        the original along the sample directions at the points and fulfils
        the right-sided H2 optimality conditions at the mirrored poles.
    """
    sigma = _check_points(sigma)
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    V = np.atleast_2d(np.asarray(samples_right, dtype=complex))
    Qs = gramian_qs(sigma, b).matrix
    S = np.diag(sigma)
    A = -np.linalg.solve(Qs, S.conj().T @ Qs)
    B = -np.linalg.solve(Qs, b.conj().T)
    # C carries the sign that makes (A, B, C) the pseudo-optimal transfer
    # function; flipping B and C together is only a state-space sign change.
    return ComplexROM(A=A, B=B, C=-V, domain=Domain.CONTINUOUS)


def pork_input(samples_left, mu, c):
    """Pseudo-optimal ROM from left tangential samples (dual construction).

    A = -Ps U^H Ps^{-1} with spectrum {-conj(mu_i)}, C = -Lc^H Ps^{-1},
    B = -[c_1 G(mu_1); ...]; satisfies A = U + Lc C and the left-sided H2
    optimality conditions at the mirrored poles.
    """
    mu = _check_points(mu)
    c = np.atleast_2d(np.asarray(c, dtype=complex))
    W = np.atleast_2d(np.asarray(samples_left, dtype=complex))
    Ps = gramian_ps(mu, c).matrix
    U = np.diag(mu)
    A = -Ps @ U.conj().T @ np.linalg.inv(Ps)
    C = -np.linalg.solve(Ps.conj().T, c).conj().T
    return ComplexROM(A=A, B=-W, C=C, domain=Domain.CONTINUOUS)
