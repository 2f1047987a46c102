"""Shared test helpers: model generators and independent oracles."""

import numpy as np

from qlf import ComplexROM, Domain, StateSpaceModel, TangentialData


def make_stable_model(n, m, p, seed):
    """Random stable continuous-time model with well-separated poles.

    Poles are drawn with log-uniform magnitudes in [0.1, ~16] (conjugate
    pairs plus real poles), assembled in real block-diagonal form and mixed
    by a random orthogonal similarity.
    """
    rng = np.random.default_rng(seed)
    npairs = n // 2
    blocks = []
    for _ in range(npairs):
        a = -(10 ** rng.uniform(-1, 1.2))
        b = 10 ** rng.uniform(-1, 1.2)
        blocks.append(np.array([[a, b], [-b, a]]))
    if n % 2:
        blocks.append(np.array([[-(10 ** rng.uniform(-1, 1.2))]]))
    A = np.zeros((n, n))
    k = 0
    for blk in blocks:
        s = blk.shape[0]
        A[k:k + s, k:k + s] = blk
        k += s
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    A = Q @ A @ Q.T
    return StateSpaceModel(A=A, B=rng.standard_normal((n, m)), C=rng.standard_normal((p, n)))


def make_stable_discrete_model(n, m, p, seed, radius=0.85):
    """Random Schur-stable discrete-time model with given spectral radius."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    A *= radius / np.max(np.abs(np.linalg.eigvals(A)))
    return StateSpaceModel(A=A, B=rng.standard_normal((n, m)), C=rng.standard_normal((p, n)),
                           domain=Domain.DISCRETE)


def random_tangential_data(model, r, seed, hermite=False):
    """Conjugate-closed tangential data compatible with a model's dimensions."""
    rng = np.random.default_rng(seed)
    npairs, nreal = divmod(r, 2)
    sigma = []
    for _ in range(npairs):
        pt = 10 ** rng.uniform(-0.5, 1.2) * np.exp(1j * rng.uniform(0.1, np.pi / 2 - 0.1))
        sigma += [pt, pt.conjugate()]
    for _ in range(nreal):
        sigma.append(10 ** rng.uniform(-0.5, 1.2) + 0j)
    sigma = np.array(sigma)
    if hermite:
        mu = sigma.copy()
    else:
        mu = sigma * rng.uniform(1.1, 1.7) + 0.3  # distinct from sigma, still closed
        for k in range(npairs):
            mu[2 * k + 1] = mu[2 * k].conjugate()
    b = rng.standard_normal((model.num_inputs, r)) + 0j
    c = rng.standard_normal((r, model.num_outputs)) + 0j
    for k in range(npairs):
        b[:, 2 * k + 1] = b[:, 2 * k].conj()
        c[2 * k + 1] = c[2 * k].conj()
    return TangentialData(sigma=sigma, mu=mu, b=b, c=c, hermite=hermite)


def h2_norm_kron(model):
    """Independent H2 oracle: vectorized Lyapunov/Stein solve via Kronecker products."""
    A = np.asarray(model.A, dtype=complex)
    B = np.asarray(model.B, dtype=complex)
    C = np.asarray(model.C, dtype=complex)
    n = A.shape[0]
    eye = np.eye(n)
    if model.domain is Domain.CONTINUOUS:
        K = np.kron(eye, A) + np.kron(A.conj(), eye)
        rhs = (-B @ B.conj().T).reshape(-1, order="F")
    else:
        K = np.kron(A.conj(), A) - np.kron(eye, eye)
        rhs = (-B @ B.conj().T).reshape(-1, order="F")
    P = np.linalg.solve(K, rhs).reshape(n, n, order="F")
    return float(np.sqrt(np.real(np.trace(C @ P @ C.conj().T))))


def dense_projection_matrices(model, data):
    """Resolvent-based projection bases for pencil cross-checks.

    Columns of V are (sigma_j I - A)^{-1} B b_j; columns of W are the
    conjugated rows of c_i C (mu_i I - A)^{-1}.
    """
    n = model.order
    V = np.stack([
        np.linalg.solve(data.sigma[j] * np.eye(n) - model.A, model.B @ data.b[:, j])
        for j in range(data.r)
    ], axis=1)
    W = np.stack([
        np.linalg.solve((data.mu[i] * np.eye(n) - model.A).conj().T, (data.c[i] @ model.C).conj())
        for i in range(data.r)
    ], axis=1)
    return V, W


def spectral_rom(poles, left, right, domain=Domain.CONTINUOUS):
    """Diagonal realization of a pole-residue triple."""
    return ComplexROM(A=np.diag(poles), B=right.conj().T, C=left, domain=domain)


def setwise_distance(got, want):
    """Greedy nearest-neighbour matching distance between two point sets."""
    got = list(np.asarray(got, dtype=complex))
    worst = 0.0
    for w in np.asarray(want, dtype=complex):
        k = int(np.argmin([abs(g - w) for g in got]))
        worst = max(worst, abs(got.pop(k) - w))
    return worst
