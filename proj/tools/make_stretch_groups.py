#!/usr/bin/env python3
"""Writes permutation generator files for M11, Sz(8) and PSU3(4).

Sz(8) acts on the 65 points of the Suzuki ovoid in PG(3, 8) and PSU3(4) on
the 65 isotropic points of a hermitian form over F16. Each group is built
from matrices, checked by closure against its known order, and then written
with two generators found by a seeded search. The aut: section lists outer
automorphisms (field automorphisms; empty for M11, whose Out is trivial).

Usage: make_stretch_groups.py OUTDIR
"""

import random
import sys
from pathlib import Path


class Field:
    """GF(2^k) with elements as bit masks."""

    def __init__(self, k, poly):
        self.q = 1 << k
        self.exp = [0] * (2 * self.q)
        self.log = [0] * self.q
        x = 1
        for i in range(self.q - 1):
            self.exp[i] = x
            self.log[x] = i
            x <<= 1
            if x & self.q:
                x ^= poly
        for i in range(self.q - 1, 2 * self.q):
            self.exp[i] = self.exp[i - (self.q - 1)]

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def pow(self, a, n):
        if a == 0:
            return 0 if n else 1
        return self.exp[(self.log[a] * n) % (self.q - 1)]

    def inv(self, a):
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]


def mat_vec(F, m, v):
    """Row vector v times matrix m."""
    n = len(v)
    out = []
    for j in range(n):
        s = 0
        for i in range(n):
            s ^= F.mul(v[i], m[i][j])
        out.append(s)
    return tuple(out)


def normalize(F, v):
    for c in v:
        if c:
            inv = F.inv(c)
            return tuple(F.mul(x, inv) for x in v)
    raise ValueError("zero vector")


def orbit(F, mats, start):
    pts = [normalize(F, start)]
    index = {pts[0]: 0}
    for p in pts:
        for m in mats:
            w = normalize(F, mat_vec(F, m, p))
            if w not in index:
                index[w] = len(pts)
                pts.append(w)
    return pts, index


def as_perm(F, m, pts, index):
    return tuple(index[normalize(F, mat_vec(F, m, p))] for p in pts)


def compose(p, q):
    """(p q)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


def closure_order(gens, limit):
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    queue = [ident]
    for g in queue:
        for s in gens:
            h = compose(g, s)
            if h not in seen:
                seen.add(h)
                queue.append(h)
                if len(seen) > limit:
                    return len(seen)
    return len(seen)


def two_generators(gens, order, seed):
    """Random words in gens until two of them generate the whole group."""
    rng = random.Random(seed)

    def random_element():
        g = tuple(range(len(gens[0])))
        for _ in range(40):
            g = compose(g, rng.choice(gens))
        return g

    while True:
        a, b = random_element(), random_element()
        if closure_order([a, b], order) == order:
            return a, b


def cycles(p):
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(str(j + 1))
            j = p[j]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "()"


def write(path, title, gens, auts):
    with open(path, "w") as f:
        f.write(f"# {title}\n")
        for g in gens:
            f.write(cycles(g) + "\n")
        f.write("aut:\n")
        for a in auts:
            f.write(cycles(a) + "\n")


def frobenius_perm(F, pts, index):
    return tuple(index[normalize(F, tuple(F.mul(c, c) for c in p))] for p in pts)


def m11():
    a = tuple((i + 1) % 11 for i in range(11))
    b = list(range(11))
    for cyc in [(3, 7, 11, 8), (4, 10, 5, 6)]:
        for k in range(len(cyc)):
            b[cyc[k] - 1] = cyc[(k + 1) % len(cyc)] - 1
    gens = [a, tuple(b)]
    assert closure_order(gens, 7920) == 7920
    return gens, []


def sz8():
    F = Field(3, 0b1011)
    theta = lambda x: F.pow(x, 4)  # theta^2 is the Frobenius

    def t(a, b):
        c = F.mul(F.pow(a, 2), theta(a)) ^ F.mul(a, b) ^ theta(b)
        return [
            [1, 0, 0, 0],
            [a, 1, 0, 0],
            [b, theta(a), 1, 0],
            [c, F.mul(a, theta(a)) ^ b, a, 1],
        ]

    w = [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]
    mats = [t(a, b) for a in range(8) for b in range(8) if a or b] + [w]
    pts, index = orbit(F, mats, (0, 0, 0, 1))
    assert len(pts) == 65, len(pts)
    perms = sorted({as_perm(F, m, pts, index) for m in mats})
    assert closure_order(perms, 29120) == 29120
    gens = two_generators(perms, 29120, seed=8)
    return gens, [frobenius_perm(F, pts, index)]


def psu34():
    F = Field(4, 0b10011)
    bar = lambda x: F.pow(x, 4)

    def form(u, v):
        return F.mul(u[0], bar(v[2])) ^ F.mul(u[1], bar(v[1])) ^ F.mul(u[2], bar(v[0]))

    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]

    def unitary(m):
        rows = [mat_vec(F, m, e) for e in basis]
        return all(form(rows[i], rows[j]) == form(basis[i], basis[j]) for i in range(3) for j in range(3))

    mats = []
    for a in range(16):
        for b in range(16):
            m = [[1, a, b], [0, 1, bar(a)], [0, 0, 1]]
            if (a or b) and unitary(m):
                mats.append(m)
    w = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    assert unitary(w)
    mats.append(w)
    pts, index = orbit(F, mats, (1, 0, 0))
    assert len(pts) == 65, len(pts)
    assert all(form(p, p) == 0 for p in pts)
    perms = sorted({as_perm(F, m, pts, index) for m in mats})
    assert closure_order(perms, 62400) == 62400
    gens = two_generators(perms, 62400, seed=4)
    return gens, [frobenius_perm(F, pts, index)]


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    out.mkdir(parents=True, exist_ok=True)
    gens, auts = m11()
    write(out / "m11.txt", "M11 on 11 points, order 7920", gens, auts)
    gens, auts = sz8()
    write(out / "sz8.txt", "Sz(8) on the 65 ovoid points, order 29120", gens, auts)
    gens, auts = psu34()
    write(out / "psu3_4.txt", "PSU3(4) on the 65 isotropic points, order 62400", gens, auts)


if __name__ == "__main__":
    main()
