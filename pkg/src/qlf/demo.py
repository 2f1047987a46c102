"""Bundled 6th-order benchmark system with frozen reference results.

The fixture is a stable 3-input / 2-output system plus a fixed set of
conjugate-closed tangential interpolation data.  The reference matrices
below are frozen validation constants for the order-4 reductions built from
exact samples, from frequency-response data on [0, 500] rad/s with 25000
points, and from impulse-response data on [0, 30] s with 10000 points; the
``repro`` command rebuilds all of them and reports the deviations.

Reference matrices are quoted to four decimal places, so agreement is
checked in absolute terms.
"""

import numpy as np

from .loewner import TangentialData
from .lti import StateSpaceModel


def demo_model():
    A = np.array([
        [2.0405, -4.0202, 3.6597, -3.0030, -1.3991, 0.0223],
        [10.7565, -2.6355, 3.0279, 1.1415, -2.8439, -11.4753],
        [0, 0, -5.0713, -0.7836, 3.5921, 5.3577],
        [0, 0, 0, -0.7377, 0.4368, 2.0851],
        [0, 0, 0, 0, -2.4419, -0.5944],
        [0, 0, 0, 0, 0, -1.9241],
    ])
    B = np.array([
        [-1.9113, 0.5763, 1.6860],
        [-1.3247, 4.8135, 9.5314],
        [1.9909, -3.7210, -5.1055],
        [-0.9923, 1.5222, -1.5323],
        [-0.5533, 1.9860, 0.7948],
        [1.0127, 1.3013, 3.4008],
    ])
    C = np.array([
        [0.0680, 0.2673, 0.0594, 0.4300, -0.0130, -0.1340],
        [0.1494, -0.1304, 0.2256, 0.5877, -0.0828, 0.1467],
    ])
    return StateSpaceModel(A=A, B=B, C=C)


def demo_tangential_data():
    sigma = np.array([5 + 7j, 5 - 7j, 3 + 2j, 3 - 2j])
    mu = np.array([0.1 + 6j, 0.1 - 6j, 0.5 + 1j, 0.5 - 1j])
    b = np.array([
        [1 + 2j, 1 - 2j, 3 + 4j, 3 - 4j],
        [5 + 6j, 5 - 6j, 7 + 8j, 7 - 8j],
        [9 + 10j, 9 - 10j, 11 + 12j, 11 - 12j],
    ])
    c = np.array([
        [13 + 14j, 15 + 16j],
        [13 - 14j, 15 - 16j],
        [17 + 18j, 19 + 20j],
        [17 - 18j, 19 - 20j],
    ])
    return TangentialData(sigma=sigma, mu=mu, b=b, c=c, hermite=False)


# grids the reference reductions were computed on
FRD_SPAN = (0.0, 500.0)
FRD_POINTS = 25000
IRD_SPAN = (0.0, 30.0)
IRD_POINTS = 10000
DELTA_S = 1e-4 * (1 + 1j)

# tolerances for reproducing the reference matrices (absolute, entrywise)
TOL_EXACT = 5e-4
TOL_FRD = 2e-3
TOL_IRD = 2e-3
TOL_DERIV_ESTIMATE = 5e-4
TOL_DERIV_EXACT = 5e-5

REFERENCE_LF = {
    "A": np.array([
        [12.8203, 15.3845, 8.9487, 9.5128],
        [-21.7995, -11.3167, -17.8338, -19.3510],
        [-2.8202, -3.1235, -0.4269, -1.7302],
        [-7.4980, -8.2729, -11.0477, -6.8226],
    ]),
    "B": np.array([
        [0.0842, 0.5174, -1.1657],
        [-0.4234, 0.5606, 1.3800],
        [-0.1007, 0.1789, 0.2252],
        [0.2188, -0.5686, 1.1247],
    ]),
    "C": np.array([
        [-0.2705, 2.1923, -0.9447, -1.6136],
        [-1.8891, -2.5726, 4.1727, -2.0704],
    ]),
}

REFERENCE_FQLF = {
    "A": np.array([
        [12.7743, 15.3316, 8.8888, 9.4461],
        [-21.7762, -11.2899, -17.8035, -19.3172],
        [-2.8162, -3.1189, -0.4216, -1.7244],
        [-7.4581, -8.2270, -10.9960, -6.7649],
    ]),
    "B": np.array([
        [0.0885, 0.5128, -1.1585],
        [-0.4256, 0.5629, 1.3764],
        [-0.1011, 0.1793, 0.2245],
        [0.2151, -0.5646, 1.1185],
    ]),
    "C": np.array([
        [-0.2820, 2.1796, -0.9585, -1.6287],
        [-1.8727, -2.5541, 4.1931, -2.0480],
    ]),
}

REFERENCE_TQLF = {
    "A": np.array([
        [12.8218, 15.3862, 8.9506, 9.5149],
        [-21.8003, -11.3175, -17.8348, -19.3520],
        [-2.8204, -3.1237, -0.4271, -1.7305],
        [-7.4992, -8.2742, -11.0493, -6.8244],
    ]),
    "B": np.array([
        [0.0841, 0.5173, -1.1659],
        [-0.4234, 0.5606, 1.3801],
        [-0.1007, 0.1789, 0.2252],
        [0.2188, -0.5686, 1.1248],
    ]),
    "C": np.array([
        [-0.2704, 2.1926, -0.9445, -1.6134],
        [-1.8892, -2.5730, 4.1727, -2.0708],
    ]),
}

# Reference derivative samples at sigma_1 and sigma_3, tabulated in the
# resolvent-squared convention C (sI - A)^{-2} B b, which is the NEGATED
# transfer-function derivative -G'(s) b.
REFERENCE_NEG_DERIV_EXACT = {
    "s1": np.array([-0.2523 + 0.6019j, -0.2884 - 0.5045j]),
    "s3": np.array([0.3699 - 1.1534j, 2.3440 - 0.7540j]),
}
REFERENCE_NEG_DERIV_FQLF = {
    "s1": np.array([-0.2522 + 0.6019j, -0.2884 - 0.5045j]),
    "s3": np.array([0.3698 - 1.1534j, 2.3439 - 0.7540j]),
}
REFERENCE_NEG_DERIV_TQLF = {
    "s1": np.array([-0.2522 + 0.6019j, -0.2884 - 0.5045j]),
    "s3": np.array([0.3698 - 1.1534j, 2.3440 - 0.7541j]),
}

# H2 norm of the demo model, frozen from an independent Kronecker-product
# Lyapunov solve (tests recompute it from scratch).
DEMO_H2_NORM = 4.281333097411231
