"""Vectorised Dormand-Prince 5(4) integrator.

Integrates a batch of independent initial value problems in lock-step.  Each
member of the batch has its own clock, step size and list of breakpoints; the
right-hand side is told which breakpoint segment every active member is in, so
piecewise-defined vector fields are never stepped across a discontinuity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ToleranceUnreachable

# Dormand & Prince (1980), RK5(4)7M
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array(_A[6] + [0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

SAFETY = 0.9
MIN_FACTOR, MAX_FACTOR = 0.2, 5.0


@dataclass
class BatchResult:
    """Accepted steps of every batch member, split per member.

    ``t[i]`` and ``y[i]`` hold the sample times and states of member ``i``
    (initial point first); ``f_left[i]``/``f_right[i]`` hold the derivative at
    both ends of each step, evaluated with that step's segment parameters.
    """

    t: list
    y: list
    f_left: list
    f_right: list


def dopri_batch(rhs, t0, y0, breaks, rel_tol=1e-10, abs_tol=None,
                step_cap=None, max_steps=1_000_000, h0=None) -> BatchResult:
    """Integrate ``y' = rhs(t, y, idx, seg)`` for a batch.

    t0:     (n,) start times
    y0:     (n, d) initial states (real or complex)
    breaks: (n, K) increasing segment end times; integration stops at breaks[:, -1]
    rhs:    called with the active members' times (m,), states (m, d), their
            indices into the batch (m,) and current segment numbers (m,)
    step_cap: optional ``(t, y, f, idx) -> (m,)`` upper bound on the step
    """
    t = np.array(t0, dtype=float).copy()
    y = np.array(y0).copy()
    if y.ndim == 1:
        y = y[:, None]
    breaks = np.atleast_2d(np.asarray(breaks, dtype=float))
    n, K = breaks.shape
    if abs_tol is None:
        abs_tol = 1e-3 * rel_tol
    seg = np.zeros(n, dtype=int)
    # skip segments that end at or before the start
    while True:
        behind = (seg < K) & (breaks[np.arange(n), np.minimum(seg, K - 1)] <= t)
        if not behind.any():
            break
        seg[behind] += 1
    active = seg < K

    idx_all = np.arange(n)
    f = np.zeros_like(y)
    if active.any():
        f[active] = rhs(t[active], y[active], idx_all[active], seg[active])
    h = np.zeros(n)
    if h0 is None:
        scale = np.abs(y).max(axis=1) + abs_tol
        fn = np.abs(f).max(axis=1) + 1e-300
        h[:] = 0.5 * rel_tol ** 0.2 * scale / fn
    else:
        h[:] = h0

    rec_i, rec_t, rec_y, rec_fl, rec_fr = [idx_all], [t.copy()], [y.copy()], [], []
    step_i = []
    steps = 0
    while active.any():
        steps += 1
        if steps > max_steps:
            raise ToleranceUnreachable("step budget exhausted", t=float(t[active].min()))
        ia = idx_all[active]
        ta, ya, fa, sa = t[ia], y[ia], f[ia], seg[ia]
        tb = breaks[ia, sa]
        ha = h[ia]
        if step_cap is not None:
            ha = np.minimum(ha, step_cap(ta, ya, fa, ia))
        remaining = tb - ta
        ha = np.where(ta + 1.1 * ha >= tb, remaining, ha)
        tiny = ha <= 1e-14 * np.maximum(1.0, np.abs(ta))
        if tiny.any() and (remaining[tiny] > 1e-14 * np.maximum(1.0, np.abs(ta[tiny]))).any():
            bad = ia[tiny][0]
            raise ToleranceUnreachable(f"step size underflow at t={t[bad]:.17g}", t=float(t[bad]))

        k = [fa]
        hcol = ha[:, None]
        for s in range(1, 7):
            acc = ya.copy()
            for j, a in enumerate(_A[s]):
                if a:
                    acc = acc + hcol * a * k[j]
            k.append(rhs(ta + _C[s] * ha, acc, ia, sa))
        y_new = ya + hcol * sum(b * kk for b, kk in zip(_A[6], k[:6]))
        err = hcol * sum(e * kk for e, kk in zip(_E, k) if e)
        sc = abs_tol + rel_tol * np.maximum(np.abs(ya), np.abs(y_new))
        err_norm = np.max(np.abs(err) / sc, axis=1)
        ok = err_norm <= 1.0

        with np.errstate(divide="ignore"):
            factor = SAFETY * err_norm ** -0.2
        factor = np.clip(np.nan_to_num(factor, posinf=MAX_FACTOR), MIN_FACTOR, MAX_FACTOR)
        factor = np.where(ok, factor, np.minimum(factor, 1.0))

        acc_i = ia[ok]
        if acc_i.size:
            t_new = np.where(ha[ok] == remaining[ok], tb[ok], ta[ok] + ha[ok])
            t[acc_i] = t_new
            y[acc_i] = y_new[ok]
            rec_i.append(acc_i)
            rec_t.append(t_new)
            rec_y.append(y_new[ok])
            rec_fl.append(fa[ok])
            rec_fr.append(k[6][ok])
            step_i.append(acc_i)
            crossed = t_new >= breaks[acc_i, seg[acc_i]]
            hop = acc_i[crossed]
            while hop.size:
                seg[hop] += 1
                hop = hop[seg[hop] < K]
                hop = hop[breaks[hop, seg[hop]] <= t[hop]]
            active[acc_i[crossed]] = seg[acc_i[crossed]] < K
            f[acc_i] = k[6][ok]
            moved = acc_i[crossed & active[acc_i]]
            if moved.size:
                # the field may jump at a breakpoint; refresh the FSAL derivative
                f[moved] = rhs(t[moved], y[moved], moved, seg[moved])
        # a step shortened to land on a breakpoint says nothing about the scale
        clamped = ok & (ha < h[ia])
        h[ia] = np.where(clamped, np.maximum(h[ia], ha * factor), ha * factor)

    return _split(n, rec_i, rec_t, rec_y, step_i, rec_fl, rec_fr)


def _split(n, rec_i, rec_t, rec_y, step_i, rec_fl, rec_fr) -> BatchResult:
    ii = np.concatenate(rec_i)
    tt = np.concatenate(rec_t)
    yy = np.concatenate(rec_y)
    order = np.argsort(ii, kind="stable")
    bounds = np.searchsorted(ii[order], np.arange(n + 1))
    ts = [tt[order[bounds[i]:bounds[i + 1]]] for i in range(n)]
    ys = [yy[order[bounds[i]:bounds[i + 1]]] for i in range(n)]
    if step_i:
        si = np.concatenate(step_i)
        fl = np.concatenate(rec_fl)
        fr = np.concatenate(rec_fr)
        order = np.argsort(si, kind="stable")
        bounds = np.searchsorted(si[order], np.arange(n + 1))
        fls = [fl[order[bounds[i]:bounds[i + 1]]] for i in range(n)]
        frs = [fr[order[bounds[i]:bounds[i + 1]]] for i in range(n)]
    else:
        d = yy.shape[1]
        fls = [np.empty((0, d), yy.dtype) for _ in range(n)]
        frs = list(fls)
    return BatchResult(ts, ys, fls, frs)


def hermite(t0, t1, y0, y1, f0, f1, t):
    """Cubic Hermite interpolant on [t0, t1] evaluated at t."""
    h = t1 - t0
    s = (t - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1
