#!/usr/bin/env python3
"""Hand evaluation of the norm rates for the two single-jump scenarios.

Independent of the C++ code: Burgers traces, the piecewise weight and the
jump sums are written out directly with Fractions. The printed values are
the ones frozen in the acceptance test.
"""
from fractions import Fraction as F


def a(u, v):
    # Burgers f = u^2/2: the secant speed of (u, v).
    return (u + v) / 2


def single_jump(ul, ur, v, m):
    """u^I jumps ul -> ur at x = 0, u^II = v everywhere."""
    lam = a(ul, ur)
    a_minus, a_plus = a(ul, v), a(ur, v)
    psi_minus, psi_plus = v - ul, v - ur
    b = abs(ur - ul)  # the only jump of b, owned by run I
    vi_total, vii_total = b, F(0)

    def weight(kappa, vi, vii):
        if kappa > 0:
            return m + vi_total - vi + vii
        return m + vi + vii_total - vii

    w_minus = weight(psi_minus, F(0), F(0))
    w_plus = weight(psi_plus, b, F(0))
    plain = (lam - a_minus) * abs(psi_minus) + (a_plus - lam) * abs(psi_plus)
    weighted = (lam - a_minus) * abs(psi_minus) * w_minus + (a_plus - lam) * abs(psi_plus) * w_plus
    atom = (a_minus - lam) * psi_minus * b
    return dict(lam=lam, a_minus=a_minus, a_plus=a_plus, w_minus=w_minus, w_plus=w_plus,
                plain=plain, weighted=weighted, atom=atom,
                slow_fast=b * abs(a_minus - lam) * abs(psi_minus))


def nonconservative_atom(um, up, vm, vp, jump):
    # Average of the two trace evaluations at a jump of w = V(u).
    t1 = (a(up, vp) - a(um, up)) * (vp - up)
    t2 = (a(um, vm) - a(um, up)) * (vm - um)
    return F(1, 2) * (t1 + t2) * jump, t1, t2


if __name__ == "__main__":
    slow = single_jump(F(2), F(0), F(3), F(1))
    print("slow_uc weighted rate, m=1:", slow["weighted"])        # -3
    print("slow_uc slow/fast term:", slow["slow_fast"])           # 3
    print("slow_uc product atom:", slow["atom"])                  # 3
    print("slow_uc nonconservative atom:", nonconservative_atom(F(2), F(0), F(3), F(3), F(2)))
    lax = single_jump(F(1), F(-1), F(0), F(1))
    print("lax plain rate:", lax["plain"])                        # -1
    for m in (F(0), F(1), F(100)):
        print("lax weighted rate, m=%s:" % m, single_jump(F(1), F(-1), F(0), m)["weighted"])
