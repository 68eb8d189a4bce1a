#!/usr/bin/env python3
"""Brute-force rotation-grid oracle for optimal-superposition RMSD.

Samples ~10^6 rotations (Fibonacci-sphere axes x uniform angles), applies the
optimal translation for each, then polishes the best grid point with
Nelder-Mead on the axis-angle vector. No SVD / quaternion algebra anywhere, so
the result is independent of the production superposition code. The values it
prints are frozen into tests/test_align.py and tests/test_acceptance.py.
"""

import numpy as np
from scipy.optimize import minimize


def rotation_from_axis_angle(v):
    """Rodrigues rotation matrix from an axis-angle vector."""
    theta = np.linalg.norm(v)
    if theta < 1e-12:
        return np.eye(3)
    k = v / theta
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(theta) * K + (1 - np.cos(theta)) * (K @ K)


def rmsd_after_translation(P_rot, Qc):
    d = P_rot - P_rot.mean(axis=0) - Qc
    return np.sqrt((d ** 2).sum() / len(Qc))


def grid_min_rmsd(P, Q, n_axes=10000, n_angles=100, refine=True):
    Pc = P - P.mean(axis=0)
    Qc = Q - Q.mean(axis=0)

    # Fibonacci sphere axes
    i = np.arange(n_axes)
    golden = (1 + 5 ** 0.5) / 2
    z = 1 - 2 * (i + 0.5) / n_axes
    r = np.sqrt(1 - z ** 2)
    phi = 2 * np.pi * i / golden
    axes = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)

    angles = np.linspace(0, np.pi, n_angles)  # axis covers both hemispheres
    best = (np.inf, None)
    # batch over axes for each angle to bound memory
    for theta in angles:
        K = np.zeros((n_axes, 3, 3))
        K[:, 0, 1] = -axes[:, 2]; K[:, 0, 2] = axes[:, 1]
        K[:, 1, 0] = axes[:, 2]; K[:, 1, 2] = -axes[:, 0]
        K[:, 2, 0] = -axes[:, 1]; K[:, 2, 1] = axes[:, 0]
        R = np.eye(3)[None] + np.sin(theta) * K + (1 - np.cos(theta)) * (K @ K)
        P_rot = np.einsum("aij,nj->ani", R, Pc)
        d = P_rot - Qc[None]
        rmsds = np.sqrt((d ** 2).sum(axis=(1, 2)) / len(Qc))
        k = int(np.argmin(rmsds))
        if rmsds[k] < best[0]:
            best = (float(rmsds[k]), axes[k] * theta)

    if not refine:
        return best[0]

    def objective(v):
        return rmsd_after_translation(Pc @ rotation_from_axis_angle(v).T, Qc)

    res = minimize(objective, best[1], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20000})
    return min(best[0], float(res.fun))


FIXED_CASES = [
    # (P, Q) pairs; small rigid-ish sets with genuine residual deviation
    (
        [[0.0, 0.0, 0.0], [1.5, 0.0, 0.0], [1.5, 1.5, 0.0], [0.0, 1.5, 1.0]],
        [[0.1, 0.0, 0.2], [1.4, 0.3, 0.0], [1.7, 1.6, 0.1], [0.2, 1.4, 0.9]],
    ),
    (
        [[0.0, 0.0, 0.0], [3.8, 0.0, 0.0], [7.6, 1.0, 0.0], [11.4, 1.0, 1.0]],
        [[0.0, 0.5, 0.0], [0.2, 4.1, 0.3], [1.0, 7.8, 0.3], [1.3, 11.6, 1.2]],
    ),
    (
        [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 2.0], [3.0, 1.0, 5.0], [2.0, 2.0, 2.0]],
        [[1.2, 2.2, 2.7], [3.9, 5.4, 6.1], [7.3, 7.7, 2.4], [2.8, 1.1, 4.6], [2.0, 1.8, 2.3]],
    ),
    (
        [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0], [2.0, 0.5, 0.5]],
        [[0.3, 0.1, 0.0], [1.2, 0.2, 0.1], [-0.1, 1.1, 0.2], [0.1, -0.2, 1.1], [0.9, 1.2, 0.8], [2.2, 0.4, 0.7]],
    ),
    (
        [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [2.0, 2.0, 0.0], [0.0, 2.0, 0.0]],
        [[0.0, 0.0, 0.0], [0.0, 2.0, 0.2], [-2.0, 2.0, 0.0], [-2.0, 0.0, -0.2]],
    ),
]


def main():
    print("grid+refine oracle rmsd values (freeze into tests):")
    for idx, (P, Q) in enumerate(FIXED_CASES):
        P = np.array(P, dtype=float)
        Q = np.array(Q, dtype=float)
        val = grid_min_rmsd(P, Q)
        print(f"case {idx}: rmsd = {val:.9f}")


if __name__ == "__main__":
    main()
