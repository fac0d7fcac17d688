"""Independent numerical oracles shared by the test modules.

Everything here deliberately avoids the production root finder: roots are
located by dense sign-change scans refined with scipy's brentq, and the
degenerate (double-root) coupling is found by bisecting on the sign of the
slope function's minimum.  Agreement between these routines and the library
is the point of the tests.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from becstab import Dimension, DimensionlessProblem, denergy


def slope(problem: DimensionlessProblem):
    """Scalar de/ds callable for scipy routines."""

    def f(s: float) -> float:
        return denergy(s, problem, 1)

    return f


def scan_roots(problem: DimensionlessProblem, lo=1e-3, hi=3.0, n=100_000):
    """All roots of de/ds in (lo, hi] by dense sign-change scan + brentq."""
    f = slope(problem)
    grid = np.linspace(lo, hi, n)
    values = np.array([f(s) for s in grid])
    roots = []
    signs = np.sign(values)
    for i in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        roots.append(brentq(f, grid[i], grid[i + 1], xtol=1e-14))
    roots.extend(float(grid[i]) for i in np.nonzero(signs == 0)[0])
    return sorted(roots)


def attractive_3d_roots(gamma: float):
    """Both branch roots for an attractive 3D coupling, robust near critical.

    The slope's sign dip always contains its own minimiser, so bracketing
    from the argmin works arbitrarily close to the merge point.
    """
    problem = DimensionlessProblem(Dimension.D3, gamma)
    f = slope(problem)
    res = minimize_scalar(f, bounds=(0.05, 2.0), method="bounded",
                          options={"xatol": 1e-13})
    if res.fun >= 0.0:
        return []
    s_star = res.x
    left = brentq(f, 1e-6, s_star, xtol=1e-15)
    right = brentq(f, s_star, 3.0, xtol=1e-15)
    return [left, right]


def locate_double_root(merge_tol: float = 1e-6):
    """Coupling and width where the two attractive 3D branches merge.

    Bisects the coupling between 'two roots' and 'no roots' outcomes until
    the two roots are closer than ``merge_tol``; returns (gamma, s_merge).
    """
    gamma_two = -0.5     # comfortably subcritical
    gamma_none = -0.8    # comfortably collapsed
    assert len(attractive_3d_roots(gamma_two)) == 2
    assert len(attractive_3d_roots(gamma_none)) == 0
    while True:
        mid = 0.5 * (gamma_two + gamma_none)
        roots = attractive_3d_roots(mid)
        if roots:
            gamma_two = mid
            if roots[1] - roots[0] < merge_tol:
                return mid, 0.5 * (roots[0] + roots[1])
        else:
            gamma_none = mid


def central_difference(fn, x: float, order: int = 1) -> float:
    """Five-point central first or second derivative, O(h^4) truncation.

    The relative step 1e-3 balances truncation against roundoff well enough
    to resolve derivatives to ~1e-9 even where they nearly vanish.
    """
    h = max(x, 0.05) * 1e-3
    fm2, fm1, fp1, fp2 = fn(x - 2 * h), fn(x - h), fn(x + h), fn(x + 2 * h)
    if order == 1:
        return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    return (-fm2 + 16.0 * fm1 - 30.0 * fn(x) + 16.0 * fp1 - fp2) / (12.0 * h * h)
