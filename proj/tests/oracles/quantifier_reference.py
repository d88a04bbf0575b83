"""Regenerates tests/data/quantifier_reference.json with cvxpy + Clarabel.

Input matrices come from the library's seeded generators (printed by a small
driver); the optimal values here are solved independently:

  grob       min tr X - 1   s.t. X >= 0, X^T_B >= 0, X - rho >= 0
  grob_sep   same plus (X - rho)^T_B >= 0
  weight     1 - max tr Y   s.t. Y >= 0, Y^T_B >= 0, rho - Y >= 0
  povm rob   min r          s.t. sum X_i = (1 + r) I, X_i, X_i^T_B, X_i - M_i >= 0
  povm wt    1 - max t      s.t. sum Y_i = t I, Y_i, Y_i^T_B, M_i - Y_i >= 0

usage: python3 quantifier_reference.py instances.json > quantifier_reference.json
"""
import json
import sys

import cvxpy as cp
import numpy as np


def mat(m):
    a = np.array(m)
    return a[..., 0] + 1j * a[..., 1]


def pt(x, d):
    return cp.partial_transpose(x, list(d), axis=1)


def solve(obj, cons, sense=cp.Minimize):
    p = cp.Problem(sense(obj), cons)
    p.solve(solver=cp.CLARABEL, tol_gap_abs=1e-11, tol_gap_rel=1e-11, tol_feas=1e-11)
    return float(p.value)


def state_values(m, d):
    n = m.shape[0]
    x = cp.Variable((n, n), hermitian=True)
    g = solve(cp.real(cp.trace(x)) - 1, [x >> 0, pt(x, d) >> 0, x - m >> 0])
    x = cp.Variable((n, n), hermitian=True)
    gs = solve(cp.real(cp.trace(x)) - 1, [x >> 0, pt(x, d) >> 0, x - m >> 0, pt(x - m, d) >> 0])
    y = cp.Variable((n, n), hermitian=True)
    w = 1 - solve(cp.real(cp.trace(y)), [y >> 0, pt(y, d) >> 0, m - y >> 0], cp.Maximize)
    return g, gs, w


def povm_values(effects, d):
    n = effects[0].shape[0]
    eye = np.eye(n)
    out = []
    for sep in (False, True):
        r = cp.Variable()
        xs = [cp.Variable((n, n), hermitian=True) for _ in effects]
        cons = [sum(xs) == (1 + r) * eye]
        for x, m in zip(xs, effects):
            cons += [x >> 0, pt(x, d) >> 0, x - m >> 0]
            if sep:
                cons += [pt(x - m, d) >> 0]
        out.append(solve(r, cons))
    t = cp.Variable()
    ys = [cp.Variable((n, n), hermitian=True) for _ in effects]
    cons = [sum(ys) == t * eye]
    for y, m in zip(ys, effects):
        cons += [y >> 0, pt(y, d) >> 0, m - y >> 0]
    out.append(1 - solve(t, cons, cp.Maximize))
    return out


def main():
    inst = json.load(open(sys.argv[1]))
    res = {"states": [], "povms": []}
    for s in inst["states"]:
        g, gs, w = state_values(mat(s["m"]), s["dims"])
        res["states"].append({"seed": s["seed"], "dims": s["dims"], "grob": g, "grob_sep": gs, "weight": w})
    for p in inst["povms"]:
        r, rs, w = povm_values([mat(e) for e in p["effects"]], [2, 2])
        res["povms"].append({"seed": p["seed"], "outcomes": len(p["effects"]), "rob": r, "rob_sep": rs, "weight": w})
    json.dump(res, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
