import numpy as np
import pytest

from qlf import (
    ExactSampler,
    StateSpaceModel,
    TangentialData,
    eval_tf,
    gramian_ps,
    gramian_qs,
    h2_error,
    pork_input,
    pork_output,
    verify_h2_optimality,
    verify_interpolation,
)
from qlf.errors import NonPositiveRealPart, NotControllable, NotObservable

from util import make_stable_model, setwise_distance

FIRST_ORDER = StateSpaceModel([[-1.0]], [[1.0]], [[1.0]])


class TestGramians:
    def test_scalar(self):
        assert gramian_qs([2.0 + 0j], [[1.0]]).matrix[0, 0] == pytest.approx(0.25)

    def test_cauchy_matrix(self):
        Qs = gramian_qs([1.0 + 0j, 2.0 + 0j], [[1.0, 1.0]]).matrix
        assert np.allclose(Qs, [[0.5, 1 / 3], [1 / 3, 0.25]])

    def test_demo_defining_equation(self, demo_data):
        Qs = gramian_qs(demo_data.sigma, demo_data.b).matrix
        S = np.diag(demo_data.sigma)
        resid = S.conj().T @ Qs + Qs @ S - demo_data.b.conj().T @ demo_data.b
        assert np.abs(resid).max() <= 1e-10 * np.abs(Qs).max()

    def test_dual_defining_equation(self, demo_data):
        Ps = gramian_ps(demo_data.mu, demo_data.c).matrix
        U = np.diag(demo_data.mu)
        resid = U @ Ps + Ps @ U.conj().T - demo_data.c @ demo_data.c.conj().T
        assert np.abs(resid).max() <= 1e-10 * np.abs(Ps).max()

    def test_unobservable_rejected(self):
        with pytest.raises(NotObservable):
            gramian_qs([2.0 + 0j, 2.0 + 0j], [[1.0, 1.0], [2.0, 2.0]])

    def test_uncontrollable_rejected(self):
        with pytest.raises(NotControllable):
            gramian_ps([2.0 + 0j, 2.0 + 0j], [[1.0, 2.0], [1.0, 2.0]])

    def test_nonpositive_points_rejected(self):
        with pytest.raises(NonPositiveRealPart):
            gramian_qs([-1.0 + 2j], [[1.0]])


class TestPorkOutput:
    def test_scalar_construction(self):
        samples = np.array([[1 / 3]])  # G(2) for 1/(s+1)
        rom = pork_output(samples, [2.0 + 0j], [[1.0]])
        assert rom.A[0, 0] == pytest.approx(-2.0)
        assert rom.B[0, 0] == pytest.approx(-4.0)
        assert rom.C[0, 0] == pytest.approx(-1 / 3)
        # transfer function is the best residue for the mirrored pole
        assert eval_tf(rom, 2.0)[0, 0] == pytest.approx(1 / 3)
        report = verify_h2_optimality(FIRST_ORDER, rom)
        assert report.right.max() <= 1e-10

    def test_spectrum_mirroring(self, demo_model, demo_data):
        right = ExactSampler(demo_model).right_samples(demo_data.sigma, demo_data.b)
        rom = pork_output(right, demo_data.sigma, demo_data.b)
        want = -demo_data.sigma.conj()
        assert setwise_distance(rom.poles(), want) <= 1e-10 * np.abs(want).max()
        assert rom.is_stable()

    def test_structural_identity(self):
        rng = np.random.default_rng(3)
        for seed in range(6):
            model = make_stable_model(6, 3, 2, seed + 600)
            r = 3
            sigma = rng.uniform(0.2, 5, r) + 1j * rng.uniform(-4, 4, r)
            b = rng.standard_normal((3, r)) + 1j * rng.standard_normal((3, r))
            right = ExactSampler(model).right_samples(sigma, b)
            rom = pork_output(right, sigma, b)
            resid = rom.A - (np.diag(sigma) + rom.B @ b)
            assert np.abs(resid).max() <= 1e-10 * np.abs(rom.A).max()

    def test_pseudo_optimality(self, demo_model, demo_data):
        right = ExactSampler(demo_model).right_samples(demo_data.sigma, demo_data.b)
        rom = pork_output(right, demo_data.sigma, demo_data.b)
        report = verify_h2_optimality(demo_model, rom)
        assert report.right.max() <= 1e-8       # satisfied one-sided conditions
        assert report.left.max() > 1e-3         # the dual side stays open

    def test_right_interpolation(self, demo_model, demo_data):
        right = ExactSampler(demo_model).right_samples(demo_data.sigma, demo_data.b)
        rom = pork_output(right, demo_data.sigma, demo_data.b)
        report = verify_interpolation(demo_model, rom, demo_data)
        assert report.right.max() <= 1e-8
        assert report.left.max() > 1e-3

    def test_residue_is_constrained_optimum(self):
        # direct 1-d optimization oracle: for a fixed pole at -2, the best
        # residue for 1/(s+1) is 4/3, and that is exactly what comes out
        rhos = np.linspace(0.5, 2.0, 2001)
        errs = 0.5 - 2 * rhos / 3 + rhos ** 2 / 4  # closed-form H2 error squared
        best = rhos[np.argmin(errs)]
        rom = pork_output(np.array([[1 / 3]]), [2.0 + 0j], [[1.0]])
        got = (rom.C @ rom.B)[0, 0]
        assert got == pytest.approx(4 / 3, abs=1e-12)
        assert best == pytest.approx(got, abs=1e-3)


class TestPorkInput:
    def test_scalar_construction(self):
        samples = np.array([[1 / 3]])  # G(2) for 1/(s+1)
        rom = pork_input(samples, [2.0 + 0j], [[1.0]])
        assert rom.A[0, 0] == pytest.approx(-2.0)
        assert rom.C[0, 0] == pytest.approx(-4.0)
        assert rom.B[0, 0] == pytest.approx(-1 / 3)
        report = verify_h2_optimality(FIRST_ORDER, rom)
        assert report.left.max() <= 1e-10

    def test_spectrum_mirroring(self, demo_model, demo_data):
        left = ExactSampler(demo_model).left_samples(demo_data.mu, demo_data.c)
        rom = pork_input(left, demo_data.mu, demo_data.c)
        want = -demo_data.mu.conj()
        assert setwise_distance(rom.poles(), want) <= 1e-10
        assert rom.is_stable()

    def test_structural_identity(self, demo_data):
        model = make_stable_model(6, 3, 2, 700)
        left = ExactSampler(model).left_samples(demo_data.mu, demo_data.c)
        rom = pork_input(left, demo_data.mu, demo_data.c)
        resid = rom.A - (np.diag(demo_data.mu) + demo_data.c @ rom.C)
        assert np.abs(resid).max() <= 1e-10 * np.abs(rom.A).max()

    def test_pseudo_optimality(self, demo_model, demo_data):
        left = ExactSampler(demo_model).left_samples(demo_data.mu, demo_data.c)
        rom = pork_input(left, demo_data.mu, demo_data.c)
        report = verify_h2_optimality(demo_model, rom)
        assert report.left.max() <= 1e-8
        assert report.right.max() > 1e-3

    def test_left_interpolation(self, demo_model, demo_data):
        left = ExactSampler(demo_model).left_samples(demo_data.mu, demo_data.c)
        rom = pork_input(left, demo_data.mu, demo_data.c)
        report = verify_interpolation(demo_model, rom, demo_data)
        assert report.left.max() <= 1e-8


class TestMonotoneDecay:
    def _nested_error(self, model, make_rom, r_values, seed):
        rng = np.random.default_rng(seed)
        pts, dirs_b, dirs_c = [], [], []
        for _ in range(max(r_values) // 2):
            pt = rng.uniform(0.3, 4) + 1j * rng.uniform(0.2, 4)
            pts += [pt, pt.conjugate()]
            vb = rng.standard_normal(model.num_inputs) + 1j * rng.standard_normal(model.num_inputs)
            dirs_b += [vb, vb.conj()]
            vc = rng.standard_normal(model.num_outputs) + 1j * rng.standard_normal(model.num_outputs)
            dirs_c += [vc, vc.conj()]
        errors = []
        for r in r_values:
            sigma = np.array(pts[:r])
            b = np.stack(dirs_b[:r], axis=1)
            c = np.stack(dirs_c[:r], axis=0)
            errors.append(h2_error(model, make_rom(model, sigma, b, c)))
        return errors

    def test_output_type(self):
        model = make_stable_model(8, 2, 2, 800)

        def make(model, sigma, b, c):
            right = ExactSampler(model).right_samples(sigma, b)
            return pork_output(right, sigma, b)

        errors = self._nested_error(model, make, [2, 4, 6], seed=801)
        assert errors[1] <= errors[0] + 1e-10
        assert errors[2] <= errors[1] + 1e-10

    def test_input_type(self):
        model = make_stable_model(8, 2, 2, 802)

        def make(model, sigma, b, c):
            left = ExactSampler(model).left_samples(sigma, c)
            return pork_input(left, sigma, c)

        errors = self._nested_error(model, make, [2, 4, 6], seed=803)
        assert errors[1] <= errors[0] + 1e-10
        assert errors[2] <= errors[1] + 1e-10
