"""Independent brute-force oracles over F_2 in plain integers.

They share nothing with the package beyond reading structure constants.
"""

import itertools


# Beck derivations


def ints(v):
    return [int(str(c)) % 2 for c in v]


def imat(M):
    return [ints(r) for r in M.entries]


def mv(M, v):
    return [sum(M[r][c] * v[c] for c in range(len(v))) % 2 for r in range(len(M))]


def oracle_derivations(L, M):
    N, m = L.dim, M.dim
    T = [[ints(L.lie.table[i][j]) for j in range(N)] for i in range(N)]
    Pi = [ints(v) for v in L.lie.pimages]
    rho = [imat(R) for R in M.l_action]
    LA = [imat(R) for R in L.a_action]
    MA = [imat(R) for R in M.a_action]
    P = imat(M.P) if M.P is not None else [[0] * m for _ in range(m)]

    def pmap(c):
        out = [0] * N
        for i in range(N):
            if c[i]:
                out = [(x + y) % 2 for x, y in zip(out, Pi[i])]
        for i in range(N):
            for j in range(i + 1, N):
                if c[i] and c[j]:
                    out = [(x + y) % 2 for x, y in zip(out, T[i][j])]
        return out

    def act(c, v):
        out = [0] * m
        for i in range(N):
            if c[i]:
                out = [(x + y) % 2 for x, y in zip(out, mv(rho[i], v))]
        return out

    elems = list(itertools.product([0, 1], repeat=N))
    found = set()
    for bits in itertools.product([0, 1], repeat=m * N):
        d = [[bits[r * N + j] for j in range(N)] for r in range(m)]
        ok = True
        for a in range(len(LA)):
            for j in range(N):
                ej = [int(k == j) for k in range(N)]
                if mv(d, mv(LA[a], ej)) != mv(MA[a], mv(d, ej)):
                    ok = False
        for i in range(N):
            for j in range(N):
                ei = [int(k == i) for k in range(N)]
                ej = [int(k == j) for k in range(N)]
                rhs = [(x - y) % 2 for x, y in zip(mv(rho[i], mv(d, ej)), mv(rho[j], mv(d, ei)))]
                if mv(d, T[i][j]) != rhs:
                    ok = False
        if not ok:
            continue
        for c in elems:
            dx = mv(d, list(c))
            rhs = [(x + y) % 2 for x, y in zip(act(c, dx), mv(P, dx))]
            if mv(d, pmap(c)) != rhs:
                ok = False
                break
        if ok:
            found.add(tuple(bits))
    return found


def span_of(basis, m, N):
    out = set()
    for coeffs in itertools.product([0, 1], repeat=len(basis)):
        acc = [0] * (m * N)
        for c, D in zip(coeffs, basis):
            if c:
                flat = [int(str(D.entries[r][j])) for r in range(m) for j in range(N)]
                acc = [(x + y) % 2 for x, y in zip(acc, flat)]
        out.add(tuple(acc))
    return out


# extension classes for A = k


class Oracle:
    def __init__(self, L, M):
        self.N, self.m = L.dim, M.dim
        iv = lambda v: [int(str(c)) for c in v]
        self.T = [[iv(L.lie.table[i][j]) for j in range(self.N)] for i in range(self.N)]
        self.Pi = [iv(v) for v in L.lie.pimages]
        self.rho = [[iv(r) for r in R.entries] for R in M.l_action]
        self.P = [iv(r) for r in M.P.entries] if M.P is not None else [[0] * self.m for _ in range(self.m)]

    def pairs(self):
        return [(i, j) for i in range(self.N) for j in range(i + 1, self.N)]

    def candidates(self):
        m, N = self.m, self.N
        slots = (len(self.pairs()) + N) * m
        for bits in itertools.product([0, 1], repeat=slots):
            yield bits

    def split_bits(self, bits):
        m, N = self.m, self.N
        k = len(self.pairs())
        h = {pr: list(bits[t * m : (t + 1) * m]) for t, pr in enumerate(self.pairs())}
        g = [list(bits[(k + j) * m : (k + j + 1) * m]) for j in range(N)]
        return h, g

    def structure(self, bits):
        """bracket table and basis p-images of E = M + L (M first)."""
        m, N = self.m, self.N
        D = m + N
        h, g = self.split_bits(bits)
        Z = [0] * D
        T = [[list(Z) for _ in range(D)] for _ in range(D)]
        for i in range(N):
            for r in range(m):
                col = [self.rho[i][s][r] for s in range(m)] + [0] * N
                T[m + i][r] = col
                T[r][m + i] = col  # char 2: -v = v
            for j in range(N):
                hv = h.get((i, j)) or h.get((j, i)) or [0] * m
                if i == j:
                    hv = [0] * m
                T[m + i][m + j] = [x % 2 for x in hv + self.T[i][j]]
        Pi = [[self.P[s][r] for s in range(m)] + [0] * N for r in range(m)]
        Pi += [g[j] + self.Pi[j] for j in range(N)]
        return T, Pi

    @staticmethod
    def br(T, x, y):
        D = len(x)
        out = [0] * D
        for i in range(D):
            for j in range(D):
                if x[i] and y[j]:
                    out = [(a + b) % 2 for a, b in zip(out, T[i][j])]
        return out

    @staticmethod
    def pmap(T, Pi, x):
        D = len(x)
        out = [0] * D
        for i in range(D):
            if x[i]:
                out = [(a + b) % 2 for a, b in zip(out, Pi[i])]
        for i in range(D):
            for j in range(i + 1, D):
                if x[i] and x[j]:
                    out = [(a + b) % 2 for a, b in zip(out, T[i][j])]
        return out

    def valid(self, bits):
        T, Pi = self.structure(bits)
        D = self.m + self.N
        e = [[int(k == i) for k in range(D)] for i in range(D)]
        for a, b, c in itertools.product(range(D), repeat=3):
            s = [0] * D
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                s = [(u + v) % 2 for u, v in zip(s, self.br(T, e[x], self.br(T, e[y], e[z])))]
            if any(s):
                return False
        for i in range(D):
            for j in range(D):
                if self.br(T, Pi[i], e[j]) != self.br(T, e[i], self.br(T, e[i], e[j])):
                    return False
        return True

    def equivalent(self, b1, b2):
        T1, P1 = self.structure(b1)
        T2, P2 = self.structure(b2)
        m, N = self.m, self.N
        D = m + N
        elems = list(itertools.product([0, 1], repeat=D))
        for gbits in itertools.product([0, 1], repeat=m * N):
            def f(x):
                out = list(x)
                for j in range(N):
                    if x[m + j]:
                        for r in range(m):
                            out[r] = (out[r] + gbits[j * m + r]) % 2
                return out

            e = [[int(k == i) for k in range(D)] for i in range(D)]
            if any(f(self.br(T1, e[i], e[j])) != self.br(T2, f(e[i]), f(e[j])) for i in range(D) for j in range(D)):
                continue
            if all(f(self.pmap(T1, P1, list(x))) == self.pmap(T2, P2, f(list(x))) for x in elems):
                return True
        return False

    def classify(self):
        valid = [b for b in self.candidates() if self.valid(b)]
        classes: list[list] = []
        for b in valid:
            for c in classes:
                if self.equivalent(b, c[0]):
                    c.append(b)
                    break
            else:
                classes.append([b])
        return classes

    def class_of(self, classes, bits):
        return next(i for i, c in enumerate(classes) if self.equivalent(bits, c[0]))


def data_bits(e, oracle):
    bits = []
    for pr in oracle.pairs():
        bits += [int(str(c)) for c in e.h_of(*pr)]
    for v in e.g:
        bits += [int(str(c)) for c in v]
    return tuple(bits)


