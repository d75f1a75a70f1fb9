"""Pure-Python right-hand sides for every integration kernel.

This is the reference implementation and the fallback backend; the compiled
module mirrors these expressions term by term.  States and derivatives are
plain float lists.  Domain violations (nonpositive radius) return NaN vectors,
which the stepper reports as a non-finite abort instead of raising.
"""

import math

from .kinds import (
    KIND_CARTESIAN,
    KIND_CRITICAL,
    KIND_CRITICAL_L2,
    KIND_GAMMA_NEG,
    KIND_GAMMA_POS_A0,
    KIND_GAMMA_POS_APOS,
    KIND_REDUCED,
)

_NAN = math.nan


def rhs(kind, P, y):
    """Evaluate kernel `kind` with packed params P at state y."""
    alpha = P[0]
    beta = P[1]
    delta = P[2]
    gamma = P[3]
    gt = P[4]

    if kind == KIND_REDUCED:
        r = y[0]
        p = y[1]
        l = y[2]
        if r <= 0.0:
            return [_NAN] * 5
        lr = l / r
        w2 = lr * lr + p * p
        drag = delta * r ** (-beta) * w2 ** (0.5 * alpha)
        return [
            p,
            (l * l / r - 1.0) / (r * r) - drag * p,
            -drag * l,
            l / (r * r),
            1.0,
        ]

    if kind == KIND_GAMMA_NEG:
        r1 = y[0]
        v = y[1]
        x = y[2]
        if r1 <= 0.0:
            return [_NAN] * 5
        big = delta * r1 ** (-alpha - beta) * (1.0 + r1 * r1 * v * v) ** (0.5 * alpha)
        return [
            v + 2.0 * big * x * r1,
            -(r1 - 1.0) / (r1 * r1 * r1) - 2.0 * big * x * v,
            -gt * big * x * x,
            1.0 / (r1 * r1),
            x ** (3.0 / gt) if x > 0.0 else 0.0,
        ]

    if kind == KIND_GAMMA_POS_APOS:
        q1 = y[0]
        v11 = y[1]
        mu11 = y[2]
        s = mu11 * mu11 + v11 * v11
        g = s ** (0.5 * alpha)
        q2 = q1 * q1
        return [
            0.5 * gamma / (alpha + 1.0) * q1 * q2 * v11,
            -1.0 + q2 * (mu11 * mu11 + (2.0 - beta) / (alpha + 1.0) * v11 * v11)
            - delta * g * v11,
            -((alpha + beta - 1.0) / (alpha + 1.0) * q2 * v11 + delta * g) * mu11,
            mu11 * q2,
            q1 ** (2.0 * (2.0 * alpha + beta) / gamma) if q1 > 0.0 else 0.0,
        ]

    if kind == KIND_GAMMA_POS_A0:
        yy = y[0]
        v1 = y[1]
        mu1 = y[2]
        return [
            0.5 * gamma * yy * yy * v1,
            (-1.0 + mu1 * mu1 + 0.5 * v1 * v1) * yy - delta * v1,
            -(0.5 * yy * v1 + delta) * mu1,
            mu1 * yy,
            yy ** (2.0 * beta / gamma) if yy > 0.0 else 0.0,
        ]

    if kind == KIND_CRITICAL:
        r1 = y[0]
        v = y[1]
        rho1 = y[2]
        if r1 <= 0.0:
            return [_NAN] * 5
        big = delta * r1 ** (-alpha - beta) * (1.0 + r1 * r1 * v * v) ** (0.5 * alpha)
        return [
            v + 2.0 * big * r1,
            -(r1 - 1.0) / (r1 * r1 * r1) - 2.0 * big * v,
            -big * rho1,
            1.0 / (r1 * r1),
            rho1 * rho1 * rho1,
        ]

    if kind == KIND_CRITICAL_L2:
        v1 = y[0]
        mu1 = y[1]
        rho2 = y[2]
        s = mu1 * mu1 + v1 * v1
        g = s ** (0.5 * alpha)
        return [
            0.5 * v1 * v1 - 1.0 + mu1 * mu1 - delta * g * v1,
            -(0.5 * v1 + delta * g) * mu1,
            0.5 * rho2 * v1,
            mu1,
            rho2 * rho2 * rho2,
        ]

    if kind == KIND_CARTESIAN:
        ux = y[0]
        uy = y[1]
        vx = y[2]
        vy = y[3]
        r2 = ux * ux + uy * uy
        if r2 <= 0.0:
            return [_NAN] * 4
        r = math.sqrt(r2)
        ir3 = 1.0 / (r2 * r)
        s2 = vx * vx + vy * vy
        k = delta * r ** (-beta) * s2 ** (0.5 * alpha)
        return [vx, vy, -ux * ir3 - k * vx, -uy * ir3 - k * vy]

    raise ValueError(f"unknown kernel kind {kind}")
