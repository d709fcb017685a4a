"""Generic finite-group oracle: closure, classes, lattice, covering numbers.

Groups live on dense element indices with 0 the identity.  The permutation
backend stores elements in the compiled kernel; quotients chain lazily to
their parent.  Everything downstream (minimal normal subgroups, maximal
subgroups, normal covering numbers) is computed from mul/inv alone, so the
engine is usable as an independent cross-check of the arithmetic criteria.

Maximal subgroups are found recursively: pick a minimal normal subgroup N
(elementary abelian for every group this artifact feeds in); the maximal
subgroups containing N are pullbacks from G/N, and the ones not containing
N are exactly the complements of N, enumerated by solving the twisted
1-cocycle equations over F_r and fused under conjugacy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ._kernels import ClosureCapExceeded, perm_closure
from .numth import factorize, is_prime

DEFAULT_CLOSURE_CAP = 200_000
DEFAULT_LATTICE_CAP = 2_000


class LatticeCapExceeded(RuntimeError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"group of order {size} exceeds the lattice cap of {cap}")
        self.cap = cap


class UnsupportedGroupError(RuntimeError):
    """Raised where the implemented algorithms need solvability."""


class ContractViolation(ValueError):
    """An argument violates a documented precondition."""


# ---------------------------------------------------------------------------
# group representations


class FiniteGroup:
    """Dense-index group: subclasses provide n, gens, mul, inv."""

    n: int
    gens: list[int]

    def mul(self, i: int, j: int) -> int:
        raise NotImplementedError

    def inv(self, i: int) -> int:
        raise NotImplementedError

    def label(self, i: int) -> str:
        return str(i)

    # --- derived structure, cached per instance ---

    def conjugacy_classes(self) -> list[list[int]]:
        cached = getattr(self, "_classes", None)
        if cached is None:
            cached = self._compute_classes()
            self._classes = cached
        return cached

    def _compute_classes(self) -> list[list[int]]:
        cid = [-1] * self.n
        classes: list[list[int]] = []
        gens = self.gens
        invs = [self.inv(g) for g in gens]
        for x in range(self.n):
            if cid[x] >= 0:
                continue
            k = len(classes)
            cid[x] = k
            orbit = [x]
            stack = [x]
            while stack:
                y = stack.pop()
                for g, gi in zip(gens, invs):
                    z = self.mul(self.mul(gi, y), g)
                    if cid[z] < 0:
                        cid[z] = k
                        orbit.append(z)
                        stack.append(z)
            classes.append(sorted(orbit))
        self._class_id = cid
        return classes

    def class_ids(self) -> list[int]:
        self.conjugacy_classes()
        return self._class_id

    def element_order(self, i: int) -> int:
        o = 1
        x = i
        while x != 0:
            x = self.mul(x, i)
            o += 1
        return o

    def orders(self) -> list[int]:
        cached = getattr(self, "_orders", None)
        if cached is None:
            cached = [self.element_order(i) for i in range(self.n)]
            self._orders = cached
        return cached

    def is_cyclic(self) -> bool:
        return max(self.orders()) == self.n

    def is_abelian(self) -> bool:
        gens = self.reduced_generators()
        return all(
            self.mul(a, b) == self.mul(b, a) for a in gens for b in gens
        )

    def conjugate(self, x: int, by: int) -> int:
        return self.mul(self.mul(self.inv(by), x), by)

    def commutator(self, x: int, y: int) -> int:
        return self.mul(
            self.mul(self.inv(x), self.inv(y)), self.mul(x, y)
        )

    # --- subgroup machinery on index sets ---

    def subgroup_closure(self, seeds) -> tuple[int, ...]:
        """Sorted index tuple of the subgroup generated by the seeds."""
        member = bytearray(self.n)
        member[0] = 1
        elems = [0]
        queue = [0]
        gens = sorted({s for s in seeds if s != 0})
        while queue:
            x = queue.pop()
            for g in gens:
                y = self.mul(x, g)
                if not member[y]:
                    member[y] = 1
                    elems.append(y)
                    queue.append(y)
        return tuple(sorted(elems))

    def normal_closure(self, seeds) -> tuple[int, ...]:
        gens_k = sorted({s for s in seeds if s != 0})
        closure = self.subgroup_closure(gens_k)
        kset = set(closure)
        changed = True
        while changed:
            changed = False
            for g in self.gens:
                for s in list(gens_k):
                    t = self.conjugate(s, g)
                    if t not in kset:
                        gens_k.append(t)
                        closure = self.subgroup_closure(gens_k)
                        kset = set(closure)
                        changed = True
        return closure

    def conjugate_set(self, indices, by: int) -> tuple[int, ...]:
        bi = self.inv(by)
        return tuple(sorted(self.mul(self.mul(bi, x), by) for x in indices))

    def is_normal_set(self, indices) -> bool:
        iset = set(indices)
        gens_s = self.reduce_subgroup_generators(indices)
        return all(self.conjugate(s, g) in iset for g in self.gens for s in gens_s)

    def reduce_subgroup_generators(self, indices) -> list[int]:
        """Small generating set for a subgroup given as a closed index set."""
        out: list[int] = []
        have = {0}
        for x in indices:
            if x not in have:
                out.append(x)
                have = set(self.subgroup_closure(out))
                if len(have) == len(indices):
                    break
        return out

    def reduced_generators(self) -> list[int]:
        cached = getattr(self, "_redgens", None)
        if cached is None:
            out: list[int] = []
            have = {0}
            for g in self.gens:
                if g not in have:
                    out.append(g)
                    have = set(self.subgroup_closure(out))
            if len(have) != self.n:
                raise AssertionError("stored generators do not generate the group")
            cached = out
            self._redgens = cached
        return cached

    def derived_series_lengths(self) -> list[int]:
        sizes = [self.n]
        current = tuple(range(self.n))
        while True:
            nxt = self._derived_of(current)
            if len(nxt) == len(current):
                break
            sizes.append(len(nxt))
            current = nxt
        return sizes

    def _derived_of(self, indices) -> tuple[int, ...]:
        gens_s = self.reduce_subgroup_generators(indices)
        comms = {self.commutator(a, b) for a in gens_s for b in gens_s}
        comms.discard(0)
        gens_k = sorted(comms)
        closure = self.subgroup_closure(gens_k)
        kset = set(closure)
        changed = True
        while changed:  # normal closure within the subgroup
            changed = False
            for g in gens_s:
                for s in list(gens_k):
                    t = self.conjugate(s, g)
                    if t not in kset:
                        gens_k.append(t)
                        closure = self.subgroup_closure(gens_k)
                        kset = set(closure)
                        changed = True
        return closure

    def is_solvable(self) -> bool:
        return self.derived_series_lengths()[-1] == 1

    def derived_subgroup(self) -> tuple[int, ...]:
        return self._derived_of(tuple(range(self.n)))

    def minimal_normal_subgroups(self) -> list[tuple[int, ...]]:
        """All minimal normal subgroups, as sorted index tuples.

        Every minimal normal subgroup is the normal closure of any of its
        prime-order elements, so closing one representative per prime-order
        class and keeping the inclusion-minimal results is exhaustive.
        """
        cached = getattr(self, "_min_normals", None)
        if cached is not None:
            return cached
        orders = self.orders()
        seen: set[tuple[int, ...]] = set()
        for cls in self.conjugacy_classes():
            rep = cls[0]
            if rep == 0 or not is_prime(orders[rep]):
                continue
            seen.add(self.normal_closure([rep]))
        normals = sorted(seen, key=lambda t: (len(t), t))
        minimal = []
        for nt in normals:
            ns = set(nt)
            if not any(set(m) < ns for m in minimal):
                minimal.append(nt)
        result = [m for m in minimal if not any(set(o) < set(m) for o in minimal)]
        self._min_normals = result
        return result

    def quotient(self, normal) -> "QuotientGroup":
        return QuotientGroup(self, tuple(sorted(normal)))


class PermBackedGroup(FiniteGroup):
    """Group stored as permutations in the kernel backend."""

    def __init__(self, kernel_group):
        self._k = kernel_group
        self.n = kernel_group.n
        self.gens = [g for g in kernel_group.gens if g != 0]

    def mul(self, i: int, j: int) -> int:
        return self._k.mul(i, j)

    def inv(self, i: int) -> int:
        return self._k.inv(i)

    def perm(self, i: int) -> tuple[int, ...]:
        return self._k.perm(i)

    def index_of_perm(self, seq) -> int:
        return self._k.index_of(seq)

    def label(self, i: int) -> str:
        return str(self._k.perm(i))


class TableGroup(FiniteGroup):
    """Explicit multiplication table (import format / small calibrations)."""

    def __init__(self, table: list[list[int]], gens: list[int] | None = None):
        self.table = table
        self.n = len(table)
        if any(len(row) != self.n for row in table):
            raise ContractViolation("multiplication table is not square")
        if table[0] != list(range(self.n)) or any(table[i][0] != i for i in range(self.n)):
            raise ContractViolation("index 0 must be the identity")
        self._invtab = [-1] * self.n
        for i in range(self.n):
            for j in range(self.n):
                if table[i][j] == 0:
                    self._invtab[i] = j
                    break
        if -1 in self._invtab:
            raise ContractViolation("some element has no inverse")
        rng = random.Random(0)
        for _ in range(min(200, self.n * self.n)):
            a = rng.randrange(self.n)
            b = rng.randrange(self.n)
            c = rng.randrange(self.n)
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise ContractViolation("multiplication table is not associative")
        if gens is None:
            gens = []
            have = {0}
            for x in range(self.n):
                if x not in have:
                    gens.append(x)
                    have = set(self.subgroup_closure(gens))
        self.gens = gens

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self._invtab[i]


class OracleGroup(FiniteGroup):
    """Closure over arbitrary hashable elements with a multiplication callable."""

    def __init__(self, elements, index, mul_oracle, gens):
        self.elements = elements
        self._index = index
        self._mul = mul_oracle
        self.gens = gens
        self.n = len(elements)
        self._invtab: dict[int, int] = {}

    def mul(self, i: int, j: int) -> int:
        return self._index[self._mul(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        r = self._invtab.get(i)
        if r is None:
            x = i
            while True:
                y = self.mul(x, i)
                if y == 0:
                    break
                x = y
            self._invtab[i] = x
            r = x
        return r

    def label(self, i: int) -> str:
        return str(self.elements[i])


class QuotientGroup(FiniteGroup):
    """G/N on least-element coset representatives."""

    def __init__(self, parent: FiniteGroup, normal: tuple[int, ...]):
        if not parent.is_normal_set(normal):
            raise ContractViolation("quotient requires a normal subgroup")
        self.parent = parent
        self.normal = normal
        coset_id = [-1] * parent.n
        reps: list[int] = []
        for x in range(parent.n):
            if coset_id[x] >= 0:
                continue
            cid = len(reps)
            reps.append(x)
            for nn in normal:
                coset_id[parent.mul(nn, x)] = cid
        self.coset_id = coset_id
        self.reps = reps
        self.n = len(reps)
        gens = []
        for g in parent.gens:
            c = coset_id[g]
            if c != 0 and c not in gens:
                gens.append(c)
        self.gens = gens

    def mul(self, i: int, j: int) -> int:
        return self.coset_id[self.parent.mul(self.reps[i], self.reps[j])]

    def inv(self, i: int) -> int:
        return self.coset_id[self.parent.inv(self.reps[i])]

    def preimage(self, indices) -> tuple[int, ...]:
        want = set(indices)
        return tuple(x for x in range(self.parent.n) if self.coset_id[x] in want)


def closure(generators, mul_oracle, identity=None, cap: int = DEFAULT_CLOSURE_CAP) -> OracleGroup:
    """Generic closure: breadth-first over the given multiplication oracle."""
    gens = list(generators)
    if identity is None:
        if not gens:
            raise ContractViolation("cannot infer the identity from zero generators")
        # g has finite order, so some power g**k equals the identity; detect it
        # by walking powers until g reappears: g**(k+1) = g means g**k = e.
        g0 = gens[0]
        cur = g0
        while True:
            nxt = mul_oracle(cur, g0)
            if nxt == g0:
                identity = cur
                break
            cur = nxt
        if mul_oracle(identity, g0) != g0:
            raise ContractViolation("could not locate the identity; pass it explicitly")
    elements = [identity]
    index = {identity: 0}
    head = 0
    while head < len(elements):
        x = elements[head]
        head += 1
        for g in gens:
            y = mul_oracle(x, g)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                if len(elements) > cap:
                    raise ClosureCapExceeded(cap)
    gen_idx = []
    for g in gens:
        gi = index[g]
        if gi != 0 and gi not in gen_idx:
            gen_idx.append(gi)
    return OracleGroup(elements, index, mul_oracle, gen_idx)


def closure_from_permutations(perms, cap: int = DEFAULT_CLOSURE_CAP) -> PermBackedGroup:
    return PermBackedGroup(perm_closure([tuple(p) for p in perms], cap))


# ---------------------------------------------------------------------------
# linear algebra mod a prime (tiny dense systems for the cocycle solve)


def _solve_affine_mod(rows: list[list[int]], rhs: list[int], r: int, width: int):
    """Solve u . row = rhs (mod r) for all rows; returns (particular, nullspace).

    Returns None when inconsistent.  The nullspace basis is in echelon form.
    """
    aug = [row[:] + [b % r] for row, b in zip(rows, rhs)]
    pivots: list[int] = []
    rank = 0
    for col in range(width):
        piv = next((k for k in range(rank, len(aug)) if aug[k][col] % r), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = pow(aug[rank][col], r - 2, r)
        aug[rank] = [v * inv % r for v in aug[rank]]
        for k in range(len(aug)):
            if k != rank and aug[k][col] % r:
                m = aug[k][col] % r
                aug[k] = [(a - m * b) % r for a, b in zip(aug[k], aug[rank])]
        pivots.append(col)
        rank += 1
    for k in range(rank, len(aug)):
        if aug[k][width] % r:
            return None
    particular = [0] * width
    for k, col in enumerate(pivots):
        particular[col] = aug[k][width]
    free_cols = [c for c in range(width) if c not in pivots]
    null = []
    for fc in free_cols:
        vec = [0] * width
        vec[fc] = 1
        for k, col in enumerate(pivots):
            vec[col] = (-aug[k][fc]) % r
        null.append(vec)
    return particular, null


def _reduce_mod_span(vec: list[int], ech: list[tuple[int, list[int]]], r: int) -> tuple[int, ...]:
    v = [x % r for x in vec]
    for piv, row in ech:
        c = v[piv]
        if c:
            v = [(a - c * b) % r for a, b in zip(v, row)]
    return tuple(v)


def _echelonize(vectors: list[list[int]], r: int) -> list[tuple[int, list[int]]]:
    ech: list[tuple[int, list[int]]] = []
    for vec in vectors:
        v = _reduce_mod_span(list(vec), ech, r)
        piv = next((t for t, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = pow(v[piv], r - 2, r)
        ech.append((piv, [x * inv % r for x in v]))
    return ech


# ---------------------------------------------------------------------------
# complements of an abelian minimal normal subgroup


def _complement_classes(G: FiniteGroup, N: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Conjugacy class representatives of complements to N in G.

    N must be a minimal normal elementary abelian subgroup.  Complements
    correspond to solutions of the inhomogeneous cocycle equations
    c(xg) = delta(x,g) + c(x)^g + c(g) over F_r, solved in terms of the
    values on quotient generators; conjugation under N shifts solutions by
    coboundaries, so only one representative per coboundary coset is built
    and the remaining fusion under G-conjugacy is done on cocycle labels.
    """
    r = G.orders()[N[1]]
    k = 0
    size = len(N)
    while size > 1:
        size //= r
        k += 1
    if len(N) != r**k:
        raise UnsupportedGroupError("minimal normal subgroup is not elementary abelian")

    # coordinates on N
    coords: dict[int, tuple[int, ...]] = {0: (0,) * k}
    basis: list[int] = []
    for x in N:
        if x in coords:
            continue
        t = len(basis)
        basis.append(x)
        items = list(coords.items())
        for e, vec in items:
            acc = e
            for c in range(1, r):
                acc = G.mul(acc, x)
                nv = list(vec)
                nv[t] = c
                coords[acc] = tuple(nv)
    if len(coords) != len(N) or len(basis) != k:
        raise UnsupportedGroupError("normal subgroup is not elementary abelian")
    elem_of = {v: e for e, v in coords.items()}

    Q = G.quotient(N)
    if Q.n == 1:
        return []  # complement would be trivial: only when G = N, handled upstream
    lifts = Q.reps
    qgens = []
    have = {0}
    for g in Q.gens:
        if g not in have:
            qgens.append(g)
            have = set(Q.subgroup_closure(qgens))
    m = len(qgens)
    u = m * k

    def act_matrix(c: int) -> list[list[int]]:
        L = lifts[c]
        return [list(coords[G.conjugate(b, L)]) for b in basis]

    A = {g: act_matrix(g) for g in qgens}

    def mat_mul(M, B):  # (u x k) . (k x k)
        return [
            [sum(row[t] * B[t][col] for t in range(k)) % r for col in range(k)]
            for row in M
        ]

    def vec_mat(v, B):
        return [sum(v[t] * B[t][col] for t in range(k)) % r for col in range(k)]

    zero_mat = [[0] * k for _ in range(u)]
    Ms: dict[int, list[list[int]]] = {0: [row[:] for row in zero_mat]}
    bs: dict[int, list[int]] = {0: [0] * k}
    constraints: list[list[int]] = []
    rhs: list[int] = []
    queue = [0]
    head = 0
    while head < len(queue):
        c = queue[head]
        head += 1
        for t, g in enumerate(qgens):
            cg = Q.mul(c, g)
            # delta(c, g) = L(cg)^-1 L(c) L(g)
            dlt = G.mul(G.mul(G.inv(lifts[cg]), lifts[c]), lifts[g])
            dvec = coords[dlt]
            newM = mat_mul(Ms[c], A[g])
            for col in range(k):
                newM[t * k + col][col] = (newM[t * k + col][col] + 1) % r
            newb = [(x + y) % r for x, y in zip(vec_mat(bs[c], A[g]), dvec)]
            if cg not in Ms:
                Ms[cg] = newM
                bs[cg] = newb
                queue.append(cg)
            else:
                oldM, oldb = Ms[cg], bs[cg]
                for col in range(k):
                    row = [(newM[i][col] - oldM[i][col]) % r for i in range(u)]
                    if any(row):
                        constraints.append(row)
                        rhs.append((oldb[col] - newb[col]) % r)
                    elif (oldb[col] - newb[col]) % r:
                        return []  # inconsistent without unknowns: no complement

    if len(Ms) != Q.n:
        raise AssertionError("quotient generators failed to reach every coset")
    sol = _solve_affine_mod(constraints, rhs, r, u) if constraints else ([0] * u, [
        [1 if i == j else 0 for j in range(u)] for i in range(u)
    ])
    if sol is None:
        return []
    u0, null = sol

    # coboundaries: phi_n(g) = coords(n^g) - coords(n), as u-vectors
    cob = []
    for t, b in enumerate(basis):
        vec = []
        for g in qgens:
            row = A[g][t]
            vec.extend((row[col] - (1 if col == t else 0)) % r for col in range(k))
        cob.append(vec)
    cob_ech = _echelonize(cob, r)
    null_ech = _echelonize([list(v) for v in null], r)

    def label_of(uvec) -> tuple[int, ...]:
        # canonical H^1 label: reduce (u - u0) by the coboundary span
        return _reduce_mod_span([(a - b) % r for a, b in zip(uvec, u0)], cob_ech, r)

    # one representative per coboundary coset inside the solution space
    h1_vecs = [piv_row for piv_row in null_ech]
    comp_dirs = []
    for piv, row in h1_vecs:
        red = _reduce_mod_span(list(row), cob_ech, r)
        if any(red):
            comp_dirs.append(list(red))
    comp_dirs = [row for _, row in _echelonize(comp_dirs, r)]
    labels: list[tuple[int, ...]] = []
    seen_labels: set[tuple[int, ...]] = set()

    def enumerate_combos(idx, acc):
        if idx == len(comp_dirs):
            lab = _reduce_mod_span(acc, cob_ech, r)
            if lab not in seen_labels:
                seen_labels.add(lab)
                labels.append(lab)
            return
        for c in range(r):
            enumerate_combos(idx + 1, [(a + c * b) % r for a, b in zip(acc, comp_dirs[idx])])

    if len(comp_dirs) > 16:
        raise UnsupportedGroupError("first cohomology too large to enumerate")
    enumerate_combos(0, [0] * u)

    def build(uvec) -> tuple[int, ...]:
        out = []
        for c in range(Q.n):
            cv = tuple(
                (sum(uvec[i] * Ms[c][i][col] for i in range(u)) + bs[c][col]) % r
                for col in range(k)
            )
            out.append(G.mul(lifts[c], elem_of[cv]))
        return tuple(sorted(out))

    def extract(subgroup: tuple[int, ...]) -> list[int]:
        by_coset = {}
        for x in subgroup:
            by_coset[Q.coset_id[x]] = x
        vec: list[int] = []
        for g in qgens:
            nelt = G.mul(G.inv(lifts[g]), by_coset[g])
            vec.extend(coords[nelt])
        return vec

    # fuse labels under conjugation by the group generators
    parent: dict[tuple[int, ...], tuple[int, ...]] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for lab in labels:
        parent[lab] = lab
    for lab in labels:
        uvec = [(a + b) % r for a, b in zip(u0, lab)]
        M = build(uvec)
        for g in G.gens:
            lab2 = label_of(extract(G.conjugate_set(M, g)))
            if lab2 not in parent:  # numerical safety; should be present
                parent[lab2] = lab2
                labels.append(lab2)
            ra, rb = find(lab), find(lab2)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    reps = sorted({find(lab) for lab in labels})
    return [build([(a + b) % r for a, b in zip(u0, lab)]) for lab in reps]


# ---------------------------------------------------------------------------
# maximal subgroups, nilpotency, supersolvability


def maximal_subgroup_classes(G: FiniteGroup) -> list[tuple[int, ...]]:
    """One representative (sorted index tuple) per conjugacy class of maximals."""
    cached = getattr(G, "_max_classes", None)
    if cached is not None:
        return cached
    if G.n == 1:
        result: list[tuple[int, ...]] = []
        G._max_classes = result
        return result
    mns = G.minimal_normal_subgroups()
    N = min(mns, key=lambda t: (len(t), t))
    if len(N) == G.n:
        if not G.is_abelian():
            raise UnsupportedGroupError(
                "maximal subgroups of a nonabelian simple group are out of scope"
            )
        result = [(0,)]
        G._max_classes = result
        return result
    ngens = G.reduce_subgroup_generators(N)
    if any(G.mul(a, b) != G.mul(b, a) for a in ngens for b in ngens):
        raise UnsupportedGroupError(
            "maximal-subgroup recursion requires an abelian minimal normal subgroup"
        )
    Q = G.quotient(N)
    out = [Q.preimage(M) for M in maximal_subgroup_classes(Q)]
    out.extend(_complement_classes(G, N))
    result = sorted(set(out), key=lambda t: (-len(t), t))
    G._max_classes = result
    return result


def maximal_subgroups(G: FiniteGroup) -> list[list[tuple[int, ...]]]:
    """All maximal subgroups, grouped into conjugacy classes."""
    out = []
    for rep in maximal_subgroup_classes(G):
        orbit = {rep}
        queue = [rep]
        while queue:
            s = queue.pop()
            for g in G.gens:
                t = G.conjugate_set(s, g)
                if t not in orbit:
                    orbit.add(t)
                    queue.append(t)
        out.append(sorted(orbit))
    return out


def is_nilpotent(G: FiniteGroup) -> bool:
    """All maximal subgroups normal; cross-checked against normal Sylows."""
    via_maximal = all(G.is_normal_set(M) for M in maximal_subgroup_classes(G))
    orders = G.orders()
    via_sylow = True
    for p, e in factorize(G.n):
        want = p**e
        have = sum(1 for o in orders if want % o == 0)
        if have != want:
            via_sylow = False
            break
    if via_maximal != via_sylow:
        raise AssertionError("nilpotency criteria disagree; engine defect")
    return via_maximal


def is_supersolvable(G: FiniteGroup) -> bool:
    """Every maximal subgroup has prime index."""
    return all(is_prime(G.n // len(M)) for M in maximal_subgroup_classes(G))


def chief_factor_orders(G: FiniteGroup) -> list[int]:
    """Orders of the factors of one chief series (well defined up to reordering)."""
    out = []
    Q: FiniteGroup = G
    while Q.n > 1:
        N = min(Q.minimal_normal_subgroups(), key=lambda t: (len(t), t))
        out.append(len(N))
        Q = Q.quotient(N)
    return out


def is_supersolvable_chief(G: FiniteGroup) -> bool:
    """Cross-check route: supersolvable iff all chief factors have prime order."""
    return all(is_prime(x) for x in chief_factor_orders(G))


# ---------------------------------------------------------------------------
# normal covering numbers


@dataclass(frozen=True)
class CoverResult:
    kind: str  # "value" | "exceeds" | "undefined-cyclic"
    value: int | None = None
    witnesses: tuple[tuple[int, ...], ...] = ()

    def equals(self, k: int) -> bool:
        return self.kind == "value" and self.value == k


def normal_covering_number(G: FiniteGroup, kmax: int) -> CoverResult:
    """Least k with k maximal classes covering every conjugacy class.

    Cyclic groups get the distinguished undefined verdict: a generator lies
    in no proper subgroup, so no covering by conjugates of proper subgroups
    exists at all.
    """
    if kmax < 1:
        raise ContractViolation("kmax must be >= 1")
    if G.is_cyclic():
        return CoverResult("undefined-cyclic")
    classes = G.conjugacy_classes()
    cids = G.class_ids()
    reps = maximal_subgroup_classes(G)
    profiles = []
    for M in reps:
        profiles.append((frozenset(cids[x] for x in M), M))
    # drop dominated profiles
    profiles.sort(key=lambda t: (-len(t[0]), t[1]))
    kept: list[tuple[frozenset, tuple[int, ...]]] = []
    for prof, M in profiles:
        if not any(prof <= p for p, _ in kept):
            kept.append((prof, M))
    universe = frozenset(range(len(classes)))
    best_k = kmax + 1
    best_wit: tuple = ()

    def search(uncovered: frozenset, chosen: tuple):
        nonlocal best_k, best_wit
        if not uncovered:
            if len(chosen) < best_k:
                best_k = len(chosen)
                best_wit = chosen
            return
        if len(chosen) + 1 >= best_k + 1 or len(chosen) + 1 > kmax:
            return  # cannot improve within the budget
        # fail-first: branch on the uncovered class hit by fewest profiles
        options = None
        for c in sorted(uncovered):
            opts = [t for t in kept if c in t[0]]
            if options is None or len(opts) < len(options):
                options = opts
            if len(options) <= 1:
                break
        for prof, M in options:
            search(uncovered - prof, chosen + (M,))

    search(universe, ())
    if best_k <= kmax:
        return CoverResult("value", best_k, best_wit)
    return CoverResult("exceeds")


def covering_witness(G: FiniteGroup, subset) -> tuple[int, ...] | None:
    """Least maximal subgroup whose conjugates cover the given subset.

    The subset must be closed under conjugation (a union of classes); a
    maximal subgroup T works iff every class meeting the subset meets T,
    because conjugates of T meet exactly the same classes.
    """
    cids = G.class_ids()
    sset = set(subset)
    touched = {cids[x] for x in sset}
    for c in touched:
        if not set(G.conjugacy_classes()[c]) <= sset:
            raise ContractViolation("subset is not closed under conjugation")
    for M in sorted(maximal_subgroup_classes(G), key=lambda t: t):
        if touched <= {cids[x] for x in M}:
            return M
    return None


# ---------------------------------------------------------------------------
# subgroup lattice by cyclic extension (solvable groups, small orders)


@dataclass
class SubgroupLattice:
    subgroups: list[tuple[int, ...]]
    conjugacy_classes: list[list[int]] = field(default_factory=list)  # indices into subgroups
    maximal: list[bool] = field(default_factory=list)

    def count(self) -> int:
        return len(self.subgroups)


def all_subgroups(G: FiniteGroup, cap: int = DEFAULT_LATTICE_CAP) -> SubgroupLattice:
    """Every subgroup, by cyclic extension over prime steps.

    Valid for solvable groups: each subgroup has a subnormal chain with
    prime-index steps, so extending known subgroups by prime-order cosets of
    normalizing elements reaches everything.
    """
    if G.n > cap:
        raise LatticeCapExceeded(G.n, cap)
    if not G.is_solvable():
        raise UnsupportedGroupError("subgroup lattice by cyclic extension needs solvability")
    orders = G.orders()
    found: set[tuple[int, ...]] = {(0,)}
    frontier: list[tuple[int, ...]] = [(0,)]
    while frontier:
        S = frontier.pop()
        sset = set(S)
        sgens = G.reduce_subgroup_generators(S)
        for x in range(1, G.n):
            if x in sset:
                continue
            # least power of x landing in S must be prime
            e = 1
            y = x
            while y not in sset and y != 0:
                y = G.mul(y, x)
                e += 1
            if y not in sset and y != 0:
                continue
            if not is_prime(e):
                continue
            if any(G.conjugate(s, x) not in sset for s in sgens):
                continue
            T = G.subgroup_closure(list(sgens) + [x])
            if T not in found:
                found.add(T)
                frontier.append(T)
    subs = sorted(found, key=lambda t: (len(t), t))
    # conjugacy classes of subgroups
    index = {s: i for i, s in enumerate(subs)}
    assigned = [-1] * len(subs)
    classes: list[list[int]] = []
    for i, s in enumerate(subs):
        if assigned[i] >= 0:
            continue
        cid = len(classes)
        orbit = [i]
        assigned[i] = cid
        queue = [s]
        while queue:
            t = queue.pop()
            for g in G.gens:
                u = G.conjugate_set(t, g)
                ui = index[u]
                if assigned[ui] < 0:
                    assigned[ui] = cid
                    orbit.append(ui)
                    queue.append(u)
        classes.append(sorted(orbit))
    # maximality flags
    maximal = []
    full = subs[-1]
    bysize = sorted(range(len(subs)), key=lambda i: len(subs[i]))
    for i, s in enumerate(subs):
        if s == full:
            maximal.append(False)
            continue
        sset = set(s)
        is_max = True
        for j in bysize:
            t = subs[j]
            if len(t) <= len(s) or t == full or len(t) == len(s):
                continue
            if t != s and sset < set(t):
                is_max = False
                break
        maximal.append(is_max)
    return SubgroupLattice(subs, classes, maximal)


# ---------------------------------------------------------------------------
# module dimension divisibility (restriction to a normal subgroup)


def module_dim_divisibility(
    G: FiniteGroup,
    J,
    apply_vec,
    p: int,
    dim: int,
) -> bool:
    """Check dim(V)/dim(W) is an integer dividing [G : J].

    apply_vec(element_index, vector) realizes the linear action on F_p^dim;
    V must be irreducible under G (verified by spinning), J normal with
    abelian quotient (verified); W is a minimal J-spin of a nonzero vector.
    """
    J = tuple(sorted(J))
    if not G.is_normal_set(J):
        raise ContractViolation("J must be normal")
    der = G.derived_subgroup()
    if not set(der) <= set(J):
        raise ContractViolation("G/J must be abelian")
    ggens = G.reduced_generators() or [0]
    jgens = G.reduce_subgroup_generators(J) or [0]

    def spin_dim(start, gens) -> int:
        basis: list[tuple[int, ...]] = []
        pivots: list[int] = []

        def reduce_add(vec) -> bool:
            row = list(vec)
            for b, piv in zip(basis, pivots):
                c = row[piv] % p
                if c:
                    row = [(x - c * y) % p for x, y in zip(row, b)]
            piv = next((t for t, x in enumerate(row) if x % p), None)
            if piv is None:
                return False
            inv = pow(row[piv], p - 2, p)
            basis.append(tuple(x * inv % p for x in row))
            pivots.append(piv)
            return True

        stack = [start]
        reduce_add(start)
        while stack and len(basis) < dim:
            v = stack.pop()
            for g in gens:
                w = tuple(apply_vec(g, v))
                if reduce_add(w):
                    stack.append(w)
        return len(basis)

    unit_vectors = [tuple(1 if t == s else 0 for t in range(dim)) for s in range(dim)]
    if any(spin_dim(v, ggens) != dim for v in unit_vectors):
        raise ContractViolation("V is not irreducible under G")
    wdim = min(spin_dim(v, jgens) for v in _nonzero_probe(p, dim))
    index = G.n // len(J)
    return dim % wdim == 0 and index % (dim // wdim) == 0


def _nonzero_probe(p: int, dim: int):
    """All nonzero vectors of F_p^dim (dim stays tiny in our uses)."""
    total = p**dim
    for v in range(1, total):
        coords = []
        x = v
        for _ in range(dim):
            coords.append(x % p)
            x //= p
        yield tuple(coords)


# ---------------------------------------------------------------------------
# import/export of multiplication tables


def export_table(G: FiniteGroup) -> str:
    lines = [str(G.n)]
    for i in range(G.n):
        lines.append(" ".join(str(G.mul(i, j)) for j in range(G.n)))
    return "\n".join(lines) + "\n"


def import_table(text: str) -> TableGroup:
    tokens = text.split()
    if not tokens:
        raise ContractViolation("empty table input")
    n = int(tokens[0])
    vals = [int(t) for t in tokens[1:]]
    if len(vals) != n * n:
        raise ContractViolation(f"expected {n * n} table entries, got {len(vals)}")
    table = [vals[i * n : (i + 1) * n] for i in range(n)]
    return TableGroup(table)
