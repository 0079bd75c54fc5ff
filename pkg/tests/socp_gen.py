"""Random strictly feasible, bounded SOCPs shared by the solver tests."""
import numpy as np

from locpower.conic import ConeProgram, LinearConstraint, SocConstraint


def random_socp(rng, n_max=40, k_max=30):
    n = int(rng.integers(2, n_max + 1))
    k = int(rng.integers(1, k_max + 1))
    v0 = rng.normal(size=n)
    cones = []
    for _ in range(k):
        q = int(rng.integers(1, 6))
        A = rng.normal(size=(q, n))
        b = rng.normal(size=q)
        g = rng.normal(size=n) * 0.3
        h = np.linalg.norm(A @ v0 + b) - g @ v0 + rng.uniform(0.1, 1.0)
        cones.append(SocConstraint(A, b, g, h))
    # a ball keeps the problem bounded
    cones.append(SocConstraint(np.eye(n), -v0, np.zeros(n), 10.0 * np.sqrt(n)))
    lins = []
    for _ in range(int(rng.integers(0, 4))):
        f = rng.normal(size=n)
        lins.append(LinearConstraint(f, f @ v0 + rng.uniform(0.1, 1.0)))
    return ConeProgram(rng.normal(size=n), cones, lins)


def cvxpy_value(prog):
    """Optimal value from an unrelated conic solver."""
    import cvxpy as cp
    v = cp.Variable(prog.n)
    cons = [cp.norm(c.A @ v + c.b) <= c.g @ v + c.h for c in prog.soc_constraints]
    cons += [c.f @ v <= c.e for c in prog.linear_constraints]
    if prog.nonneg:
        cons.append(v[list(prog.nonneg)] >= 0)
    p = cp.Problem(cp.Minimize(prog.objective @ v), cons)
    p.solve(solver="CLARABEL", tol_gap_abs=1e-9, tol_gap_rel=1e-9, tol_feas=1e-9)
    return p.value
