"""Minimal D-type case n0' = n1' = 1, m' = 0: ell = z^2 + 2 h0 + h1^2 / z^2.

Reduced chart (h0, h1) = (h_{0,1}, h_{1,1}); the ambient coordinates h_{1,0} and
h_{1,2} vanish.  Everything below is computed directly from the closed form of
ell with sympy residues and series, independently of the library.
"""
from sympy import symbols, Rational as R, diff, series, oo, simplify, residue, together, expand

z, s, h0, h1 = symbols('z s h0 h1')
ell = z**2 + 2 * h0 + h1**2 / z**2
dl = diff(ell, z)
T = [diff(ell, h0), diff(ell, h1)]


def res_inf(f):
    return -residue(f.subs(z, 1 / z) / z**2, z, 0)


def form(f):
    return simplify(-(res_inf(f) + residue(f, z, 0)))


def split(f, var):
    """(f)_{inf, >= 0} + (f)_{0, <= -1} as a function of var"""
    inf = series(f.subs(z, 1 / z), z, 0, 6).removeO()
    pos = sum(inf.coeff(z, -k) * var**k for k in range(0, 6))
    at0 = series(f, z, 0, 1).removeO()
    neg = sum(at0.coeff(z, -k) * var**(-k) for k in range(1, 8))
    return simplify(pos + neg)


pt = {h0: R(1, 3), h1: R(2)}
print('metric', [[form(T[a] * T[b] / dl).subs(pt) for b in range(2)] for a in range(2)])
print('triples', [[[form(T[a] * T[b] * T[c] / dl).subs(pt) for c in range(2)] for b in range(2)] for a in range(2)])
sv = R(5, 2)
print('dd', [[split(T[a] * T[b] / dl, s).subs(pt).subs(s, sv) for b in range(2)] for a in range(2)])
print('ds', [T[a].subs(z, s).subs(pt).subs(s, sv) for a in range(2)])
