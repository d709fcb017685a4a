"""Pure-Python kernels: reference implementations of the hot loops.

The compiled extension (ncover._core) exposes the same API; ncover._kernels
picks whichever is available.  Semantics here are the contract — the
consistency test suite checks the compiled core against this module.
"""

from __future__ import annotations

BACKEND = "python"


class ClosureCapExceeded(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"group closure exceeded the configured cap of {cap} elements")
        self.cap = cap


# ---------------------------------------------------------------------------
# permutation groups


class PermGroup:
    """Closed permutation group; elements are dense indices, 0 = identity.

    Element order is breadth-first from the generators, so indices are
    reproducible for a fixed generator list.
    """

    def __init__(self, perms: list[tuple[int, ...]], index: dict[tuple[int, ...], int],
                 gen_indices: list[int]):
        self._perms = perms
        self._index = index
        self.gens = gen_indices
        self.n = len(perms)
        self.degree = len(perms[0])
        self._inv: list[int | None] = [None] * self.n

    def perm(self, i: int) -> tuple[int, ...]:
        return self._perms[i]

    def index_of(self, seq) -> int:
        return self._index.get(tuple(seq), -1)

    def mul(self, i: int, j: int) -> int:
        a = self._perms[i]
        b = self._perms[j]
        return self._index[tuple(b[x] for x in a)]

    def inv(self, i: int) -> int:
        r = self._inv[i]
        if r is None:
            a = self._perms[i]
            out = [0] * self.degree
            for t, x in enumerate(a):
                out[x] = t
            r = self._index[tuple(out)]
            self._inv[i] = r
        return r


def perm_closure(gens: list, cap: int) -> PermGroup:
    """BFS closure of a generator list of permutations (sequences of ints)."""
    gens = [tuple(g) for g in gens]
    degree = len(gens[0]) if gens else 1
    ident = tuple(range(degree))
    perms = [ident]
    index = {ident: 0}
    frontier = 0
    while frontier < len(perms):
        a = perms[frontier]
        frontier += 1
        for g in gens:
            c = tuple(g[x] for x in a)
            if c not in index:
                index[c] = len(perms)
                perms.append(c)
                if len(perms) > cap:
                    raise ClosureCapExceeded(cap)
    gen_indices = [index[g] for g in gens]
    return PermGroup(perms, index, gen_indices)


# ---------------------------------------------------------------------------
# spinning for subgroups of the 1-dimensional semilinear group

class Gl1SpinContext:
    def __init__(self, p: int, f: int, coords):
        self.p = p
        self.f = f
        self.q1 = len(coords)  # q - 1
        self.coords = [tuple(c) for c in coords]


def make_gl1_ctx(p: int, f: int, coords) -> Gl1SpinContext:
    """coords[e] = F_p coordinate vector of generator**e, for 0 <= e < q-1."""
    return Gl1SpinContext(p, f, coords)


def gl1_min_spin_dim(ctx: Gl1SpinContext, gens: list[tuple[int, int]]) -> int:
    """Minimum, over nonzero v, of dim span_{F_p}(orbit of v under the gens).

    gens are (s, a) pairs acting on exponents by e -> e*p**s + a (mod q-1).
    Equals f exactly when the generated subgroup acts irreducibly.
    """
    p, f, q1 = ctx.p, ctx.f, ctx.q1
    if f == 1 or q1 == 0:
        return f
    coords = ctx.coords
    acts = [(pow(p, s, q1), a) for s, a in gens]
    best = f
    for v in range(q1):
        # echelon basis rows, each with its pivot position
        basis: list[tuple[int, ...]] = []
        pivots: list[int] = []
        seen = bytearray(q1)
        stack = [v]
        seen[v] = 1
        dim = 0
        while stack and dim < f:
            e = stack.pop()
            row = list(coords[e])
            for b, piv in zip(basis, pivots):
                c = row[piv]
                if c:
                    inv = pow(b[piv], p - 2, p)
                    m = c * inv % p
                    row = [(x - m * y) % p for x, y in zip(row, b)]
            piv = next((t for t, x in enumerate(row) if x), -1)
            if piv >= 0:
                basis.append(tuple(row))
                pivots.append(piv)
                dim += 1
            for mult, a in acts:
                e2 = (e * mult + a) % q1
                if not seen[e2]:
                    seen[e2] = 1
                    stack.append(e2)
        if dim < best:
            best = dim
            if best == 0:
                break
    return best


# ---------------------------------------------------------------------------
# semilinear d x d matrix groups over F_q (value-encoded entries)


class SemiContext:
    """Tables for one (field, dimension) pair.

    Elements are packed base q: d*d entries row-major, then the Frobenius
    power, so key = sum(entry_t * q**t) + s * q**(d*d).
    """

    def __init__(self, p, d, f, q, mul, add, frob, coords):
        self.p = p
        self.d = d
        self.f = f
        self.q = q
        self.mul = mul
        self.add = add
        self.frob = frob
        self.coords = [tuple(c) for c in coords]
        self.identity = self.pack([1 if i == j else 0 for i in range(d) for j in range(d)], 0)

    def pack(self, entries, s: int) -> int:
        key = 0
        for e in reversed(entries):
            key = key * self.q + e
        return key + s * self.q ** (self.d * self.d)

    def unpack(self, key: int):
        dd = self.d * self.d
        s, key = divmod(key, self.q**dd)
        entries = []
        for _ in range(dd):
            key, e = divmod(key, self.q)
            entries.append(e)
        return entries, s


def make_semi_ctx(p, d, f, q, mul, add, frob, coords) -> SemiContext:
    return SemiContext(p, d, f, q, mul, add, frob, coords)


def semi_mul(ctx: SemiContext, ka: int, kb: int) -> int:
    """(A, s)(B, t) = (A^{sigma^t} B, s + t mod f)."""
    d, q, f = ctx.d, ctx.q, ctx.f
    A, s = ctx.unpack(ka)
    B, t = ctx.unpack(kb)
    mul, add, fro = ctx.mul, ctx.add, ctx.frob[t]
    out = [0] * (d * d)
    for i in range(d):
        base = i * d
        for j in range(d):
            acc = 0
            for k in range(d):
                acc = add[acc][mul[fro[A[base + k]]][B[k * d + j]]]
            out[base + j] = acc
    return ctx.pack(out, (s + t) % f)


def semi_closure(ctx: SemiContext, gens: list[int], cap: int) -> list[int]:
    """BFS closure, identity first; deterministic for a fixed generator list."""
    elems = [ctx.identity]
    index = {ctx.identity: 0}
    frontier = 0
    while frontier < len(elems):
        a = elems[frontier]
        frontier += 1
        for g in gens:
            c = semi_mul(ctx, a, g)
            if c not in index:
                index[c] = len(elems)
                elems.append(c)
                if len(elems) > cap:
                    raise ClosureCapExceeded(cap)
    return elems


def semi_fixed_dims(ctx: SemiContext, elems: list[int]) -> list[int]:
    """F_p-dimension of the fixed space of each element.

    Works on the F_p-linearization: the action on row vectors of F_q^d read
    as F_p^{d f} in the basis {generator**t e_i}.
    """
    p, d, f, q = ctx.p, ctx.d, ctx.f, ctx.q
    mul, coords = ctx.mul, ctx.coords
    n = d * f
    # value encoding packs F_p coords base p, so basis element g**t has value p**t
    pow_vals = [p**t for t in range(f)]
    out = []
    for key in elems:
        A, s = ctx.unpack(key)
        fro = ctx.frob[s]
        # rows of (L - I) over F_p, basis index = i*f + t
        rows = []
        for i in range(d):
            for t in range(f):
                x = fro[pow_vals[t]]
                row = [0] * n
                for j in range(d):
                    val = mul[x][A[i * d + j]]
                    cv = coords[val]
                    for u in range(f):
                        row[j * f + u] = cv[u]
                row[i * f + t] = (row[i * f + t] - 1) % p
                rows.append(row)
        out.append(n - _rank_mod_p(rows, p))
    return out


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rank = 0
    ncols = len(rows[0]) if rows else 0
    rows = [r[:] for r in rows]
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), -1)
        if piv < 0:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                m = rows[r][col] % p
                rows[r] = [(x - m * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def semi_apply_vector(ctx: SemiContext, key: int, vkey: int) -> int:
    """Image of the packed vector (d base-q digits) under the element."""
    d, q = ctx.d, ctx.q
    A, s = ctx.unpack(key)
    mul, add, fro = ctx.mul, ctx.add, ctx.frob[s]
    v = []
    rest = vkey
    for _ in range(d):
        rest, e = divmod(rest, q)
        v.append(fro[e])
    out = 0
    for j in reversed(range(d)):
        acc = 0
        for i in range(d):
            acc = add[acc][mul[v[i]][A[i * d + j]]]
        out = out * q + acc
    return out


def semi_vector_orbits(ctx: SemiContext, gens: list[int]) -> list[int]:
    """Orbit id for every packed vector of F_q^d (ids in BFS discovery order)."""
    d, q = ctx.d, ctx.q
    total = q**d
    orbit = [-1] * total
    next_id = 0
    for start in range(total):
        if orbit[start] >= 0:
            continue
        orbit[start] = next_id
        stack = [start]
        while stack:
            v = stack.pop()
            for g in gens:
                w = semi_apply_vector(ctx, g, v)
                if orbit[w] < 0:
                    orbit[w] = next_id
                    stack.append(w)
        next_id += 1
    return orbit
