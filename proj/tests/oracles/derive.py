"""Independent derivations of the constants frozen in the C++ tests.

Run with: python3 tests/oracles/derive.py
Nothing here shares code with the library; values are computed with exact
fractions, mpmath, scipy and numpy.
"""

from fractions import Fraction
from itertools import product, combinations_with_replacement
from math import factorial

import mpmath as mp
import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy import special, stats

mp.mp.dps = 30


def show(name, value):
    print(f"{name:42s} {value!r}")


# Seminorms.
show("evaluate diag(1,4) (1,1)", mp.sqrt(5))
v, w = np.array([1.0, 1.0]), np.array([1.0, -1.0])
show("polarize diag(1,4) (1,1),(1,-1)", float(v @ np.diag([1, 4]) @ w))
# sup l(v) on 4 v1^2 + v2^2 <= 1 via Lagrange: v1 = 1/2.
show("dual_norm diag(4,1) l=(1,0)", float(np.sqrt(np.array([1, 0]) @ np.linalg.inv(np.diag([4.0, 1.0])) @ np.array([1, 0]))))
ev, vec = np.linalg.eigh(np.ones((2, 2)))
show("ones(2,2) eigen", (ev.tolist(), vec.T.tolist()))

# Traces.
show("tr(diag(1,4)/I)", sum(Fraction(x) for x in (1, 4)))
show("tr(2p / 0.5q)", Fraction(2) ** 2 / Fraction(1, 2) ** 2 * 5)
show("tower N=3", sum(Fraction(1, n * n) for n in range(1, 4)))
show("tower N=100 < pi^2/6", float(sum(Fraction(1, n * n) for n in range(1, 101))) < float(mp.pi ** 2 / 6))

# Gaussian tails.
show("2(1-Phi(1)) scipy", 2 * stats.norm.sf(1.0))
show("erfc(1/sqrt2) mpmath", mp.erfc(1 / mp.sqrt(2)))
show("P(|Z|>10)", 2 * stats.norm.sf(10.0))
show("Kolmogorov Q(1.0)", special.kolmogorov(1.0))
show("Kolmogorov Q(0.5)", special.kolmogorov(0.5))
show("Kolmogorov Q(2.0)", special.kolmogorov(2.0))

# Fundamental lemma hand example.
hyp = Fraction(1, 100) * (Fraction(1, 2) * Fraction(1, 4) + Fraction(1, 2) * 9)
show("lemma hypothesis value", hyp)

# Gauss rules (probabilists' Hermite: moments 1,0,1,0,3,0).
x, wts = hermegauss(3)
show("hermegauss(3) nodes", x.tolist())
show("hermegauss(3) weights", (wts / np.sqrt(2 * np.pi)).tolist())
x, wts = hermegauss(2)
show("hermegauss(2) nodes", x.tolist())

# Carleman geometric tail.
show("1/(e-1)", 1 / (mp.e - 1))

# Pipeline fixture.
atoms = np.array([[1.0, 2.0], [-1.0, 0.0]])
m2 = 0.5 * atoms.T @ atoms
show("second moment matrix", m2.tolist())
show("trace second moment", float(np.trace(m2)))

# construct_q with lambda_n = 1/n.
show("sum lambda^2, lambda=1/n, N=3", sum(Fraction(1, n * n) for n in range(1, 4)))

# Moment matrices.
show("eig [[1,0,1],[0,1,0],[1,0,3]]", np.linalg.eigvalsh(np.array([[1, 0, 1], [0, 1, 0], [1, 0, 3.0]])).tolist())


# Flat ranks of the product measure (+-1) x (+-1).
def moment_matrix(atoms, weights, d):
    n = atoms.shape[1]
    mons = [a for k in range(d + 1) for a in product(range(k + 1), repeat=n) if sum(a) == k]
    feats = np.array([[np.prod(c ** np.array(a)) for a in mons] for c in atoms])
    return feats.T @ np.diag(weights) @ feats


prod_atoms = np.array([[s, t] for s in (-1.0, 1.0) for t in (-1.0, 1.0)])
for d in (1, 2, 3):
    m = moment_matrix(prod_atoms, np.full(4, 0.25), d)
    sv = np.linalg.svd(m, compute_uv=False)
    show(f"product measure rank M_{d}", int(np.sum(sv > 1e-9 * sv[0])))

# Polarization constants d^d / d!.
for d in (1, 2, 3):
    show(f"polarization constant d={d}", Fraction(d ** d, factorial(d)))

# Graded sums for p = diag(1,4): ordered tuples vs sorted monomials at d = 2.
wts2 = [1, 4]
show("ordered d=2", sum(wts2[i] * wts2[j] for i, j in product(range(2), repeat=2)))
show("sorted d=2", sum(wts2[i] * wts2[j] for i, j in combinations_with_replacement(range(2), 2)))
show("p~(x1), lambda1=2, C=3", 2 * mp.sqrt(3))


# Philox4x32-10, written from the published round function.
def philox(key, ctr):
    m0, m1 = 0xD2511F53, 0xCD9E8D57
    w0, w1 = 0x9E3779B9, 0xBB67AE85
    k0, k1 = key
    c = list(ctr)
    for r in range(10):
        p0, p1 = m0 * c[0], m1 * c[2]
        c = [(p1 >> 32) ^ c[1] ^ k0, p1 & 0xFFFFFFFF, (p0 >> 32) ^ c[3] ^ k1, p0 & 0xFFFFFFFF]
        k0, k1 = (k0 + w0) & 0xFFFFFFFF, (k1 + w1) & 0xFFFFFFFF
    return [hex(x) for x in c]


show("philox key0 ctr0", philox((0, 0), (0, 0, 0, 0)))
show("philox pi key", philox((0xA4093822, 0x299F31D0), (0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344)))
show("philox ones", philox((0xFFFFFFFF, 0xFFFFFFFF), (0xFFFFFFFF,) * 4))
