# cython: language_level=3
"""Compiled kernels: permutation-group storage, spinning, semilinear closure.

API mirror of ncover._core_py; that module is the semantic reference.
"""

from libc.stdlib cimport malloc, free, realloc
from libc.string cimport memset, memcpy

from ncover._core_py import ClosureCapExceeded

BACKEND = "cython"


# ---------------------------------------------------------------------------
# permutation groups

cdef inline unsigned long long _hash_perm(unsigned short* buf, Py_ssize_t deg):
    cdef unsigned long long h = 1469598103934665603ULL
    cdef Py_ssize_t t
    for t in range(deg):
        h ^= <unsigned long long> buf[t]
        h *= 1099511628211ULL
    return h


cdef class PermGroup:
    """Closed permutation group over dense indices; index 0 is the identity."""

    cdef unsigned short* data
    cdef unsigned short* scratch
    cdef long* slots
    cdef long* invtab
    cdef Py_ssize_t _n, _degree, alloc, nslots
    cdef public list gens

    def __cinit__(self):
        self.data = NULL
        self.scratch = NULL
        self.slots = NULL
        self.invtab = NULL

    def __dealloc__(self):
        if self.data != NULL:
            free(self.data)
        if self.scratch != NULL:
            free(self.scratch)
        if self.slots != NULL:
            free(self.slots)
        if self.invtab != NULL:
            free(self.invtab)

    @property
    def n(self):
        return self._n

    @property
    def degree(self):
        return self._degree

    cdef void _init(self, Py_ssize_t degree):
        self._degree = degree
        self._n = 0
        self.alloc = 64
        self.data = <unsigned short*> malloc(self.alloc * degree * sizeof(unsigned short))
        self.scratch = <unsigned short*> malloc(degree * sizeof(unsigned short))
        self.nslots = 256
        self.slots = <long*> malloc(self.nslots * sizeof(long))
        memset(self.slots, 0xff, self.nslots * sizeof(long))
        self.invtab = NULL
        self.gens = []

    cdef void _grow(self):
        self.alloc *= 2
        self.data = <unsigned short*> realloc(
            self.data, self.alloc * self._degree * sizeof(unsigned short))

    cdef void _rehash(self):
        cdef Py_ssize_t newsize = self.nslots * 4
        cdef long* ns = <long*> malloc(newsize * sizeof(long))
        memset(ns, 0xff, newsize * sizeof(long))
        cdef Py_ssize_t i, pos
        cdef unsigned long long h
        for i in range(self._n):
            h = _hash_perm(self.data + i * self._degree, self._degree)
            pos = h & (newsize - 1)
            while ns[pos] != -1:
                pos = (pos + 1) & (newsize - 1)
            ns[pos] = i
        free(self.slots)
        self.slots = ns
        self.nslots = newsize

    cdef long _lookup(self, unsigned short* buf):
        cdef unsigned long long h = _hash_perm(buf, self._degree)
        cdef Py_ssize_t pos = h & (self.nslots - 1)
        cdef long idx
        while True:
            idx = self.slots[pos]
            if idx == -1:
                return -1
            if memcmp_eq(self.data + idx * self._degree, buf, self._degree):
                return idx
            pos = (pos + 1) & (self.nslots - 1)

    cdef long _insert(self, unsigned short* buf):
        cdef long idx = self._lookup(buf)
        if idx >= 0:
            return idx
        if self._n * 5 >= self.nslots * 3:
            self._rehash()
        if self._n == self.alloc:
            self._grow()
        memcpy(self.data + self._n * self._degree, buf, self._degree * sizeof(unsigned short))
        cdef unsigned long long h = _hash_perm(buf, self._degree)
        cdef Py_ssize_t pos = h & (self.nslots - 1)
        while self.slots[pos] != -1:
            pos = (pos + 1) & (self.nslots - 1)
        self.slots[pos] = self._n
        self._n += 1
        return self._n - 1

    cpdef long mul(self, Py_ssize_t i, Py_ssize_t j):
        """Index of element i followed by element j (right action compose)."""
        cdef unsigned short* a = self.data + i * self._degree
        cdef unsigned short* b = self.data + j * self._degree
        cdef Py_ssize_t t
        for t in range(self._degree):
            self.scratch[t] = b[a[t]]
        cdef long r = self._lookup(self.scratch)
        if r < 0:
            raise ValueError("product left the stored group; closure is incomplete")
        return r

    cpdef long inv(self, Py_ssize_t i):
        cdef Py_ssize_t t
        if self.invtab == NULL:
            self.invtab = <long*> malloc(self._n * sizeof(long))
            for t in range(self._n):
                self.invtab[t] = -1
        if self.invtab[i] >= 0:
            return self.invtab[i]
        cdef unsigned short* a = self.data + i * self._degree
        for t in range(self._degree):
            self.scratch[a[t]] = <unsigned short> t
        cdef long r = self._lookup(self.scratch)
        self.invtab[i] = r
        return r

    def perm(self, Py_ssize_t i):
        cdef Py_ssize_t t
        return tuple(self.data[i * self._degree + t] for t in range(self._degree))

    def index_of(self, seq):
        cdef Py_ssize_t t
        cdef list s = list(seq)
        if len(s) != self._degree:
            return -1
        for t in range(self._degree):
            self.scratch[t] = <unsigned short> s[t]
        return self._lookup(self.scratch)


cdef inline bint memcmp_eq(unsigned short* a, unsigned short* b, Py_ssize_t deg):
    cdef Py_ssize_t t
    for t in range(deg):
        if a[t] != b[t]:
            return 0
    return 1


def perm_closure(gens, cap):
    """BFS closure of permutations given as sequences of point images."""
    cdef list tgens = [tuple(g) for g in gens]
    cdef Py_ssize_t degree = len(tgens[0]) if tgens else 1
    if degree > 65535:
        raise ValueError("permutation degree above 65535 is unsupported")
    cdef PermGroup G = PermGroup.__new__(PermGroup)
    G._init(degree)
    cdef Py_ssize_t t, frontier = 0
    cdef unsigned short* buf = G.scratch
    for t in range(degree):
        buf[t] = <unsigned short> t
    G._insert(buf)
    # store generators as raw arrays for the BFS
    cdef Py_ssize_t m = len(tgens)
    cdef unsigned short* graw = <unsigned short*> malloc(m * degree * sizeof(unsigned short))
    cdef Py_ssize_t gi
    for gi in range(m):
        for t in range(degree):
            graw[gi * degree + t] = <unsigned short> tgens[gi][t]
    cdef long icap = cap
    cdef unsigned short* a
    try:
        while frontier < G._n:
            for gi in range(m):
                a = G.data + frontier * degree  # recompute: data may have moved
                for t in range(degree):
                    buf[t] = graw[gi * degree + a[t]]
                G._insert(buf)
                if G._n > icap:
                    raise ClosureCapExceeded(cap)
            frontier += 1
    finally:
        free(graw)
    G.gens = [G.index_of(g) for g in tgens]
    return G


# ---------------------------------------------------------------------------
# spinning for subgroups of the 1-dimensional semilinear group

cdef class Gl1SpinContext:
    cdef unsigned char* coords   # (q-1) x f
    cdef int* invmod             # inverses mod p
    cdef public int p, f, q1

    def __cinit__(self):
        self.coords = NULL
        self.invmod = NULL

    def __dealloc__(self):
        if self.coords != NULL:
            free(self.coords)
        if self.invmod != NULL:
            free(self.invmod)


def make_gl1_ctx(int p, int f, coords):
    cdef Gl1SpinContext ctx = Gl1SpinContext.__new__(Gl1SpinContext)
    ctx.p = p
    ctx.f = f
    ctx.q1 = len(coords)
    ctx.coords = <unsigned char*> malloc(max(1, ctx.q1 * f) * sizeof(unsigned char))
    cdef Py_ssize_t e, t
    for e in range(ctx.q1):
        row = coords[e]
        for t in range(f):
            ctx.coords[e * f + t] = <unsigned char> row[t]
    ctx.invmod = <int*> malloc(p * sizeof(int))
    cdef int x, y
    ctx.invmod[0] = 0
    for x in range(1, p):
        for y in range(1, p):
            if (x * y) % p == 1:
                ctx.invmod[x] = y
                break
    return ctx


def gl1_min_spin_dim(Gl1SpinContext ctx, gens):
    """Minimum over nonzero v of the F_p-span dimension of the orbit of v."""
    cdef int p = ctx.p, f = ctx.f
    cdef long q1 = ctx.q1
    if f == 1 or q1 == 0:
        return f
    cdef Py_ssize_t m = len(gens)
    cdef long* gmult = <long*> malloc(m * sizeof(long))
    cdef long* gadd = <long*> malloc(m * sizeof(long))
    cdef Py_ssize_t gi
    for gi in range(m):
        s, a = gens[gi]
        gmult[gi] = pow(ctx.p, s, q1)
        gadd[gi] = a % q1
    cdef unsigned char* seen = <unsigned char*> malloc(q1)
    cdef long* stack = <long*> malloc(q1 * sizeof(long))
    cdef int* basis = <int*> malloc(f * f * sizeof(int))
    cdef int* pivots = <int*> malloc(f * sizeof(int))
    cdef int* row = <int*> malloc(f * sizeof(int))
    cdef int best = f, dim, piv, t, b, c, mfac
    cdef long v, e, e2, sp
    try:
        for v in range(q1):
            memset(seen, 0, q1)
            stack[0] = v
            seen[v] = 1
            sp = 1
            dim = 0
            while sp > 0 and dim < f:
                sp -= 1
                e = stack[sp]
                for t in range(f):
                    row[t] = ctx.coords[e * f + t]
                for b in range(dim):
                    piv = pivots[b]
                    c = row[piv]
                    if c:
                        mfac = (c * ctx.invmod[basis[b * f + piv]]) % p
                        for t in range(f):
                            row[t] = (row[t] - mfac * basis[b * f + t]) % p
                            if row[t] < 0:
                                row[t] += p
                piv = -1
                for t in range(f):
                    if row[t]:
                        piv = t
                        break
                if piv >= 0:
                    for t in range(f):
                        basis[dim * f + t] = row[t]
                    pivots[dim] = piv
                    dim += 1
                for gi in range(m):
                    e2 = (e * gmult[gi] + gadd[gi]) % q1
                    if not seen[e2]:
                        seen[e2] = 1
                        stack[sp] = e2
                        sp += 1
            if dim < best:
                best = dim
                if best == 0:
                    break
    finally:
        free(gmult)
        free(gadd)
        free(seen)
        free(stack)
        free(basis)
        free(pivots)
        free(row)
    return best


# ---------------------------------------------------------------------------
# semilinear matrix groups (value-encoded entries packed base q into uint64)

cdef inline unsigned long long _mix64(unsigned long long x):
    x += 11400714819323198485ULL
    x = (x ^ (x >> 30)) * 13787848793156543929ULL
    x = (x ^ (x >> 27)) * 10723151780598845931ULL
    return x ^ (x >> 31)


cdef class SemiContext:
    cdef unsigned short* mul     # q*q
    cdef unsigned short* add     # q*q
    cdef unsigned short* frob    # f*q
    cdef unsigned char* coords   # q*f
    cdef public int p, d, f, q
    cdef public unsigned long long identity
    cdef unsigned long long qdd  # q ** (d*d)

    def __cinit__(self):
        self.mul = NULL
        self.add = NULL
        self.frob = NULL
        self.coords = NULL

    def __dealloc__(self):
        if self.mul != NULL:
            free(self.mul)
        if self.add != NULL:
            free(self.add)
        if self.frob != NULL:
            free(self.frob)
        if self.coords != NULL:
            free(self.coords)

    cdef void _unpack(self, unsigned long long key, int* entries, int* s):
        cdef int dd = self.d * self.d, t
        cdef unsigned long long uq = <unsigned long long> self.q
        s[0] = <int> (key // self.qdd)
        key = key % self.qdd
        for t in range(dd):
            entries[t] = <int> (key % uq)
            key = key // uq

    cdef unsigned long long _pack(self, int* entries, int s):
        cdef int dd = self.d * self.d, t
        cdef unsigned long long key = 0
        for t in range(dd - 1, -1, -1):
            key = key * self.q + entries[t]
        return key + (<unsigned long long> s) * self.qdd

    def pack(self, entries, s):
        cdef int buf[9]
        cdef int t
        for t in range(self.d * self.d):
            buf[t] = entries[t]
        return self._pack(buf, s)

    def unpack(self, key):
        cdef int buf[9]
        cdef int s
        self._unpack(key, buf, &s)
        return [buf[t] for t in range(self.d * self.d)], s


def make_semi_ctx(int p, int d, int f, int q, mul, add, frob, coords):
    if d > 3:
        raise ValueError("semilinear kernel supports d <= 3")
    cdef SemiContext ctx = SemiContext.__new__(SemiContext)
    ctx.p = p
    ctx.d = d
    ctx.f = f
    ctx.q = q
    cdef unsigned long long qdd = 1
    cdef int t
    for t in range(d * d):
        qdd *= q
    ctx.qdd = qdd
    if qdd * <unsigned long long> f >= (1ULL << 62):
        raise ValueError("field/dimension too large for packed encoding")
    ctx.mul = <unsigned short*> malloc(q * q * sizeof(unsigned short))
    ctx.add = <unsigned short*> malloc(q * q * sizeof(unsigned short))
    ctx.frob = <unsigned short*> malloc(f * q * sizeof(unsigned short))
    ctx.coords = <unsigned char*> malloc(q * f * sizeof(unsigned char))
    cdef Py_ssize_t i, j
    for i in range(q):
        mrow = mul[i]
        arow = add[i]
        for j in range(q):
            ctx.mul[i * q + j] = <unsigned short> mrow[j]
            ctx.add[i * q + j] = <unsigned short> arow[j]
    for i in range(f):
        frow = frob[i]
        for j in range(q):
            ctx.frob[i * q + j] = <unsigned short> frow[j]
    for i in range(q):
        crow = coords[i]
        for j in range(f):
            ctx.coords[i * f + j] = <unsigned char> crow[j]
    cdef int ident[9]
    for t in range(d * d):
        ident[t] = 0
    for t in range(d):
        ident[t * d + t] = 1
    ctx.identity = ctx._pack(ident, 0)
    return ctx


cdef unsigned long long _semi_mul_raw(SemiContext ctx, unsigned long long ka,
                                      unsigned long long kb):
    cdef int A[9]
    cdef int B[9]
    cdef int out[9]
    cdef int s, t2, i, j, k, acc, d = ctx.d, q = ctx.q
    ctx._unpack(ka, A, &s)
    ctx._unpack(kb, B, &t2)
    cdef unsigned short* fro = ctx.frob + t2 * q
    cdef unsigned short* mul = ctx.mul
    cdef unsigned short* add = ctx.add
    for i in range(d):
        for j in range(d):
            acc = 0
            for k in range(d):
                acc = add[acc * q + mul[fro[A[i * d + k]] * q + B[k * d + j]]]
            out[i * d + j] = acc
    return ctx._pack(out, (s + t2) % ctx.f)


def semi_mul(SemiContext ctx, ka, kb):
    return _semi_mul_raw(ctx, ka, kb)


cdef class _U64Set:
    cdef unsigned long long* keys
    cdef long* slots
    cdef Py_ssize_t n, alloc, nslots

    def __cinit__(self):
        self.keys = NULL
        self.slots = NULL

    def __dealloc__(self):
        if self.keys != NULL:
            free(self.keys)
        if self.slots != NULL:
            free(self.slots)

    cdef void _init(self):
        self.n = 0
        self.alloc = 64
        self.keys = <unsigned long long*> malloc(self.alloc * sizeof(unsigned long long))
        self.nslots = 256
        self.slots = <long*> malloc(self.nslots * sizeof(long))
        memset(self.slots, 0xff, self.nslots * sizeof(long))

    cdef void _rehash(self):
        cdef Py_ssize_t newsize = self.nslots * 4, i, pos
        cdef long* ns = <long*> malloc(newsize * sizeof(long))
        memset(ns, 0xff, newsize * sizeof(long))
        for i in range(self.n):
            pos = _mix64(self.keys[i]) & (newsize - 1)
            while ns[pos] != -1:
                pos = (pos + 1) & (newsize - 1)
            ns[pos] = i
        free(self.slots)
        self.slots = ns
        self.nslots = newsize

    cdef long add(self, unsigned long long key):
        """Insert; returns index (existing or new)."""
        cdef Py_ssize_t pos = _mix64(key) & (self.nslots - 1)
        cdef long idx
        while True:
            idx = self.slots[pos]
            if idx == -1:
                break
            if self.keys[idx] == key:
                return idx
            pos = (pos + 1) & (self.nslots - 1)
        if self.n * 5 >= self.nslots * 3:
            self._rehash()
            pos = _mix64(key) & (self.nslots - 1)
            while self.slots[pos] != -1:
                pos = (pos + 1) & (self.nslots - 1)
        if self.n == self.alloc:
            self.alloc *= 2
            self.keys = <unsigned long long*> realloc(
                self.keys, self.alloc * sizeof(unsigned long long))
        self.keys[self.n] = key
        self.slots[pos] = self.n
        self.n += 1
        return self.n - 1


def semi_closure(SemiContext ctx, gens, cap):
    """BFS closure over packed element keys, identity first."""
    cdef _U64Set seen = _U64Set.__new__(_U64Set)
    seen._init()
    cdef Py_ssize_t m = len(gens)
    cdef unsigned long long* graw = <unsigned long long*> malloc(
        max(1, m) * sizeof(unsigned long long))
    cdef Py_ssize_t gi
    for gi in range(m):
        graw[gi] = gens[gi]
    seen.add(ctx.identity)
    cdef Py_ssize_t frontier = 0
    cdef long icap = cap
    cdef unsigned long long prod
    try:
        while frontier < seen.n:
            for gi in range(m):
                prod = _semi_mul_raw(ctx, seen.keys[frontier], graw[gi])
                seen.add(prod)
                if seen.n > icap:
                    raise ClosureCapExceeded(cap)
            frontier += 1
    finally:
        free(graw)
    return [seen.keys[gi] for gi in range(seen.n)]


def semi_fixed_dims(SemiContext ctx, elems):
    """F_p fixed-space dimension for each packed element."""
    cdef int p = ctx.p, d = ctx.d, f = ctx.f, q = ctx.q
    cdef int n = d * f
    cdef int* rows = <int*> malloc(n * n * sizeof(int))
    cdef int* invmod = <int*> malloc(p * sizeof(int))
    cdef int A[9]
    cdef int x, y, s, i, t, j, u, val, rank, col, piv, c, mfac, r
    invmod[0] = 0
    for x in range(1, p):
        for y in range(1, p):
            if (x * y) % p == 1:
                invmod[x] = y
                break
    out = []
    cdef unsigned long long key
    cdef unsigned short* fro
    try:
        for key_obj in elems:
            key = key_obj
            ctx._unpack(key, A, &s)
            fro = ctx.frob + s * q
            for i in range(d):
                for t in range(f):
                    x = fro[_powp(ctx, t)]
                    for j in range(d):
                        val = ctx.mul[x * q + A[i * d + j]]
                        for u in range(f):
                            rows[(i * f + t) * n + j * f + u] = ctx.coords[val * f + u]
                    rows[(i * f + t) * n + i * f + t] = (
                        rows[(i * f + t) * n + i * f + t] - 1) % p
                    if rows[(i * f + t) * n + i * f + t] < 0:
                        rows[(i * f + t) * n + i * f + t] += p
            rank = 0
            for col in range(n):
                piv = -1
                for r in range(rank, n):
                    if rows[r * n + col]:
                        piv = r
                        break
                if piv < 0:
                    continue
                if piv != rank:
                    for t in range(n):
                        x = rows[rank * n + t]
                        rows[rank * n + t] = rows[piv * n + t]
                        rows[piv * n + t] = x
                mfac = invmod[rows[rank * n + col]]
                for t in range(n):
                    rows[rank * n + t] = (rows[rank * n + t] * mfac) % p
                for r in range(n):
                    if r != rank and rows[r * n + col]:
                        c = rows[r * n + col]
                        for t in range(n):
                            rows[r * n + t] = (rows[r * n + t] - c * rows[rank * n + t]) % p
                            if rows[r * n + t] < 0:
                                rows[r * n + t] += p
                rank += 1
                if rank == n:
                    break
            out.append(n - rank)
    finally:
        free(rows)
        free(invmod)
    return out


cdef inline int _powp(SemiContext ctx, int t):
    # value encoding packs coords base p, so the basis element g**t packs to p**t
    cdef int v = 1, i
    for i in range(t):
        v *= ctx.p
    return v


cdef unsigned long long _semi_apply_raw(SemiContext ctx, unsigned long long key,
                                        unsigned long long vkey):
    cdef int A[9]
    cdef int v[3]
    cdef int s, i, j, acc, d = ctx.d, q = ctx.q
    ctx._unpack(key, A, &s)
    cdef unsigned short* fro = ctx.frob + s * q
    cdef unsigned long long rest = vkey
    for i in range(d):
        v[i] = fro[<int> (rest % q)]
        rest //= q
    cdef unsigned long long outk = 0
    for j in range(d - 1, -1, -1):
        acc = 0
        for i in range(d):
            acc = ctx.add[acc * q + ctx.mul[v[i] * q + A[i * d + j]]]
        outk = outk * q + acc
    return outk


def semi_apply_vector(SemiContext ctx, key, vkey):
    return _semi_apply_raw(ctx, key, vkey)


def semi_vector_orbits(SemiContext ctx, gens):
    """Orbit id per packed vector of F_q^d, ids in discovery order."""
    cdef int d = ctx.d, q = ctx.q
    cdef long total = 1, t
    for t in range(d):
        total *= q
    cdef long* orbit = <long*> malloc(total * sizeof(long))
    cdef long* stack = <long*> malloc(total * sizeof(long))
    cdef Py_ssize_t m = len(gens)
    cdef unsigned long long* graw = <unsigned long long*> malloc(
        max(1, m) * sizeof(unsigned long long))
    cdef Py_ssize_t gi
    for gi in range(m):
        graw[gi] = gens[gi]
    cdef long start, v, w, sp, next_id = 0
    for t in range(total):
        orbit[t] = -1
    try:
        for start in range(total):
            if orbit[start] >= 0:
                continue
            orbit[start] = next_id
            stack[0] = start
            sp = 1
            while sp > 0:
                sp -= 1
                v = stack[sp]
                for gi in range(m):
                    w = <long> _semi_apply_raw(ctx, graw[gi], <unsigned long long> v)
                    if orbit[w] < 0:
                        orbit[w] = next_id
                        stack[sp] = w
                        sp += 1
            next_id += 1
        return [orbit[t] for t in range(total)]
    finally:
        free(orbit)
        free(stack)
        free(graw)
