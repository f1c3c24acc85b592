"""Reference computations written without the package's own machinery.

Coefficients are ``fractions.Fraction``; words are tuples of letter indices.
"""

import math
from fractions import Fraction
from itertools import product

import sympy


def t_add(acc, t, c=1):
    for w, v in t.items():
        x = acc.get(w, 0) + c * v
        if x:
            acc[w] = x
        else:
            acc.pop(w, None)
    return acc


def mul(a, b, N):
    out = {}
    for u, cu in a.items():
        for v, cv in b.items():
            if len(u) + len(v) <= N:
                t_add(out, {u + v: cu * cv})
    return out


def log_exp(N):
    """log(e^x e^y) for letters 0 and 1, truncated at length N."""
    def exp(letter):
        return {(letter,) * k: Fraction(1, math.factorial(k)) for k in range(N + 1)}
    z = mul(exp(0), exp(1), N)
    z.pop((), None)
    out, power = {}, {(): Fraction(1)}
    for k in range(1, N + 1):
        power = mul(power, z, N)
        t_add(out, power, Fraction((-1) ** (k + 1), k))
    return out


def conjugate(x_letter, y, N):
    """e^x y e^{-x} in the free associative algebra."""
    ex = {(x_letter,) * k: Fraction(1, math.factorial(k)) for k in range(N + 1)}
    emx = {(x_letter,) * k: Fraction((-1) ** k, math.factorial(k)) for k in range(N + 1)}
    return mul(mul(ex, y, N), emx, N)


def mobius(n):
    return int(sympy.mobius(n))


def necklace(k, q):
    return sum(mobius(d) * k ** (q // d) for d in range(1, q + 1) if q % d == 0) // q


def graded_lie_rank(degrees, q):
    """Rank of all right-normed graded brackets of length q, expanded."""
    def comm(a, b):
        out = {}
        for u, cu in a.items():
            for v, cv in b.items():
                du = sum(degrees[i] for i in u)
                dv = sum(degrees[i] for i in v)
                t_add(out, {u + v: cu * cv})
                t_add(out, {v + u: cu * cv}, 1 if (du * dv) % 2 else -1)
        return out

    def rn(seq):
        if len(seq) == 1:
            return {seq: 1}
        return comm({seq[:1]: 1}, rn(seq[1:]))

    # brackets with different letter content are independent
    blocks = {}
    for seq in product(range(len(degrees)), repeat=q):
        blocks.setdefault(tuple(sorted(seq)), []).append(rn(seq))
    total = 0
    for vecs in blocks.values():
        keys = sorted({w for v in vecs for w in v})
        if keys:
            total += sympy.Matrix([[v.get(w, 0) for w in keys] for v in vecs]).rank()
    return total
