import numpy as np
import pytest

from qlf import (
    ComplexROM,
    Domain,
    StateSpaceModel,
    eig_dense,
    eval_tf,
    eval_tf_derivative,
    h2_norm,
    impulse_response,
    pole_residue,
    solve_dense,
)
from qlf.errors import (
    NegativeTime,
    RepeatedPoles,
    SingularMatrix,
    SingularShift,
    UnstableModel,
)
from qlf import demo

from util import h2_norm_kron, make_stable_model

FIRST_ORDER = StateSpaceModel([[-1.0]], [[1.0]], [[1.0]])


class TestEvalTf:
    def test_scalar_resolvent(self):
        assert eval_tf(FIRST_ORDER, 2.0) == pytest.approx(1 / 3)

    def test_dc_gain(self):
        assert eval_tf(FIRST_ORDER, 0.0) == pytest.approx(1.0)

    def test_singular_shift_rejected(self):
        with pytest.raises(SingularShift):
            eval_tf(FIRST_ORDER, -1.0)

    def test_works_on_complex_roms(self):
        rom = ComplexROM([[-1.0 + 1j]], [[1.0]], [[1.0]])
        assert eval_tf(rom, 0.0)[0, 0] == pytest.approx(1 / (1 - 1j))

    def test_realization_invariance(self):
        rng = np.random.default_rng(0)
        for seed in range(5):
            model = make_stable_model(5, 2, 2, seed)
            T = rng.standard_normal((5, 5)) + np.eye(5) * 2
            alt = StateSpaceModel(
                np.linalg.solve(T, model.A @ T), np.linalg.solve(T, model.B), model.C @ T)
            s = rng.uniform(0.5, 5) + 1j * rng.uniform(-5, 5)
            ref = eval_tf(model, s)
            got = eval_tf(alt, s)
            assert np.linalg.norm(ref - got) <= 1e-10 * np.linalg.norm(ref)


class TestDerivative:
    def test_scalar(self):
        assert eval_tf_derivative(FIRST_ORDER, 2.0) == pytest.approx(-1 / 9)

    def test_demo_reference_values(self, demo_model, demo_data):
        # reference constants are tabulated as C(sI-A)^{-2}B b, i.e. -G'(s)b,
        # printed to four decimals: parts match to 5e-5
        for tag, idx in (("s1", 0), ("s3", 2)):
            got = -(eval_tf_derivative(demo_model, demo_data.sigma[idx]) @ demo_data.b[:, idx])
            ref = demo.REFERENCE_NEG_DERIV_EXACT[tag]
            assert np.abs((got - ref).real).max() <= 5e-5
            assert np.abs((got - ref).imag).max() <= 5e-5

    def test_matches_central_differences(self):
        h = 1e-6
        for seed in range(8):
            model = make_stable_model(6, 2, 2, seed)
            s = 0.7 + 0.9j * (seed + 1)
            fd = (eval_tf(model, s + h) - eval_tf(model, s - h)) / (2 * h)
            an = eval_tf_derivative(model, s)
            assert np.linalg.norm(fd - an) <= 1e-4 * np.linalg.norm(an)


class TestImpulseResponse:
    def test_t_zero(self):
        assert impulse_response(FIRST_ORDER, 0.0) == pytest.approx(1.0)

    def test_scalar_exponential(self):
        assert impulse_response(FIRST_ORDER, 1.0) == pytest.approx(np.exp(-1))

    def test_discrete_power(self):
        model = StateSpaceModel([[0.5]], [[1.0]], [[1.0]], domain=Domain.DISCRETE)
        assert impulse_response(model, 3) == pytest.approx(0.125)

    def test_negative_time(self):
        with pytest.raises(NegativeTime):
            impulse_response(FIRST_ORDER, -0.5)
        model = StateSpaceModel([[0.5]], [[1.0]], [[1.0]], domain=Domain.DISCRETE)
        with pytest.raises(NegativeTime):
            impulse_response(model, 1.5)


class TestPoleResidue:
    def test_scalar(self):
        prf = pole_residue(StateSpaceModel([[-1.0]], [[2.0]], [[3.0]]))
        assert prf.poles[0] == pytest.approx(-1.0)
        assert (prf.left_factors[:, 0] @ prf.right_factors[:, 0].conj()) == pytest.approx(6.0)

    def test_diagonal(self):
        model = StateSpaceModel(np.diag([-1.0, -2.0]), [[1.0], [1.0]], [[1.0, 1.0]])
        prf = pole_residue(model)
        order = np.argsort(prf.poles.real)
        assert np.allclose(np.sort(prf.poles.real), [-2, -1])
        for k in order:
            res = np.outer(prf.left_factors[:, k], prf.right_factors[:, k].conj())
            assert res == pytest.approx(1.0)

    def test_demo_reconstruction(self, demo_model):
        prf = pole_residue(demo_model)
        assert len(prf.poles) == 6
        rng = np.random.default_rng(1)
        for _ in range(5):
            s = rng.uniform(0.5, 5) + 1j * rng.uniform(-8, 8)
            ref = eval_tf(demo_model, s)
            assert np.linalg.norm(prf.evaluate(s) - ref) <= 1e-8 * np.linalg.norm(ref)

    def test_reconstruction_property(self):
        rng = np.random.default_rng(7)
        for seed in range(10):
            model = make_stable_model(4 + seed % 4, 2, 2, seed + 100)
            prf = pole_residue(model)
            s = rng.uniform(0.2, 3) + 1j * rng.uniform(-5, 5)
            ref = eval_tf(model, s)
            assert np.linalg.norm(prf.evaluate(s) - ref) <= 1e-8 * np.linalg.norm(ref)

    def test_repeated_poles_rejected(self):
        model = StateSpaceModel(np.diag([-1.0, -1.0]), np.ones((2, 1)), np.ones((1, 2)))
        with pytest.raises(RepeatedPoles):
            pole_residue(model)


class TestH2Norm:
    def test_first_order(self):
        assert h2_norm(FIRST_ORDER) == pytest.approx(np.sqrt(0.5))

    def test_discrete_first_order(self):
        model = StateSpaceModel([[0.5]], [[1.0]], [[1.0]], domain=Domain.DISCRETE)
        assert h2_norm(model) == pytest.approx(np.sqrt(4 / 3))

    def test_demo_frozen_regression(self, demo_model):
        # constant frozen from the Kronecker-product Lyapunov oracle
        assert h2_norm(demo_model) == pytest.approx(4.281333097411231, abs=1e-10)
        assert h2_norm_kron(demo_model) == pytest.approx(4.281333097411231, abs=1e-10)

    def test_matches_kron_oracle(self):
        for seed in range(6):
            model = make_stable_model(5, 2, 2, seed + 40)
            assert h2_norm(model) == pytest.approx(h2_norm_kron(model), rel=1e-10)
        disc = StateSpaceModel([[0.3, 0.1], [0.0, -0.4]], [[1.0], [0.5]], [[1.0, 1.0]],
                               domain=Domain.DISCRETE)
        assert h2_norm(disc) == pytest.approx(h2_norm_kron(disc), rel=1e-10)

    def test_parseval_cross_check(self):
        # h2^2 against (1/pi) * integral of ||G(jw)||_F^2 by fine trapezoid
        for seed in (3, 4, 5):
            model = make_stable_model(4, 1, 1, seed)
            omegas = np.linspace(0.0, 5000.0, 400001)
            M = 1j * omegas[:, None, None] * np.eye(4) - model.A
            G = model.C @ np.linalg.solve(M, np.broadcast_to(model.B, (len(omegas), 4, 1)))
            integrand = np.sum(np.abs(G) ** 2, axis=(1, 2))
            approx = np.sqrt(np.trapezoid(integrand, omegas) / np.pi)
            assert h2_norm(model) == pytest.approx(approx, rel=1e-3)

    def test_unstable_rejected(self):
        with pytest.raises(UnstableModel):
            h2_norm(StateSpaceModel([[1.0]], [[1.0]], [[1.0]]))


class TestDenseKernels:
    def test_identity_solve(self):
        B = np.arange(6.0).reshape(3, 2)
        assert np.array_equal(solve_dense(np.eye(3), B), B)

    def test_diagonal_eig(self):
        lam, _ = eig_dense(np.diag([2.0, -3.0]))
        assert set(np.round(lam.real, 12)) == {2.0, -3.0}

    def test_random_roundtrip(self):
        rng = np.random.default_rng(11)
        A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        B = rng.standard_normal((6, 2))
        X = solve_dense(A, B)
        assert np.linalg.norm(A @ X - B) <= 1e-10 * np.linalg.norm(B)

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrix):
            solve_dense(np.zeros((2, 2)), np.eye(2))

    def test_stability_checks(self):
        assert FIRST_ORDER.is_stable()
        assert not StateSpaceModel([[0.2]], [[1.0]], [[1.0]]).is_stable()
        assert StateSpaceModel([[0.9]], [[1.0]], [[1.0]], domain=Domain.DISCRETE).is_stable()
        assert not StateSpaceModel([[1.1]], [[1.0]], [[1.0]], domain=Domain.DISCRETE).is_stable()
