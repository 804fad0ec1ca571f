"""Scalar reference implementation for commuting (diagonal) states.

When every eve state is diagonal, the whole problem is a bivariate
distribution p(a, e); each quantity reduces to elementary sums. This module
implements those sums directly, with no matrix code, as the independent
oracle for the commutative-reduction checks.
"""

import math

import numpy as np


def _joint(probs, diags):
    p = np.asarray(probs, float)[:, None] * np.asarray(diags, float)
    return p  # (|A|, d_E)


def _h(vec):
    v = vec[vec > 0]
    return float(-np.sum(v * np.log(v)))


def classical_quantities(probs, diags, s_values=(), t_values=()):
    p = _joint(probs, diags)
    q = p.sum(axis=0)  # marginal on E
    pa = p.sum(axis=1)  # marginal on A
    n = p.shape[0]
    out = {
        "H_AE": _h(p.ravel()),
        "H_E": _h(q),
        "H_A": _h(pa),
    }
    out["H_cond"] = out["H_AE"] - out["H_E"]
    mask = p > 0
    ratio = np.where(mask, p / np.where(mask, q[None, :], 1.0), 0.0)
    out["H_cond_bar"] = float(-np.sum(p[mask] * np.log(ratio[mask])))
    out["H_min"] = float(-math.log(np.max(ratio)))
    out["I"] = float(np.sum(p[mask] * np.log(p[mask] / (pa[:, None] * q[None, :])[mask])))
    uniform_prod = np.broadcast_to(q[None, :] / n, p.shape)
    out["I_prime"] = float(np.sum(p[mask] * np.log(p[mask] / uniform_prod[mask])))
    out["I_bar"] = out["I"]
    out["I_bar_prime"] = out["I_prime"]
    out["d1"] = float(np.sum(np.abs(p - pa[:, None] * q[None, :])))
    out["d1_prime"] = float(np.sum(np.abs(p - q[None, :] / n)))
    for s in s_values:
        if s == 0:
            out[f"H_renyi({s:g})"] = out["H_cond"]
            continue
        total = float(np.sum(p[mask] ** (1 + s) * np.where(mask, q[None, :], 1.0)[mask] ** (-s)))
        val = -math.log(total) / s
        out[f"H_renyi({s:g})"] = val
        out[f"H_renyi_bar_star({s:g})"] = val
    for t in t_values:
        a = 1.0 / (1.0 - t)
        inner = np.sum(np.where(mask, p, 0.0) ** a, axis=0)
        out[f"phi({t:g})"] = float(math.log(np.sum(inner ** (1.0 - t))))
    return out
