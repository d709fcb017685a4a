"""Subgroup calculus for the 1-dimensional semilinear group of F_{p^f}.

Elements are pairs (s, a) acting on the field by x -> x^(p^s) * g^a, where g
is the field's distinguished multiplicative generator.  Subgroups are named
by canonical triples (d, j, i) meaning <g^d, sigma^j g^i> with d | q-1,
j | f, 0 <= i < d and d | i*(p^f-1)/(p^j-1); the triple is an invariant of
the subgroup, so enumeration by triples is a bijection onto all subgroups.
"""

from __future__ import annotations

from functools import cached_property
from math import gcd
from typing import Iterable, NamedTuple

from . import _kernels
from .ffield import FieldTable
from .numth import divisors, is_prime, prime_divisors

Scalar = tuple[int, int]


class Gl1Subgroup(NamedTuple):
    d: int
    j: int
    i: int


class Gl1:
    """Element and subgroup operations, bound to one field table."""

    def __init__(self, table: FieldTable):
        self.table = table
        self.p = table.p
        self.f = table.f
        self.q = table.q
        self.q1 = table.q - 1
        self.identity: Scalar = (0, 0)

    # --- element arithmetic ---

    def multiply(self, g: Scalar, h: Scalar) -> Scalar:
        s1, a1 = g
        s2, a2 = h
        return ((s1 + s2) % self.f, (a1 * pow(self.p, s2, self.q1) + a2) % self.q1)

    def inverse(self, g: Scalar) -> Scalar:
        s, a = g
        si = (self.f - s) % self.f
        return (si, -a * pow(self.p, si, self.q1) % self.q1)

    def conjugate(self, g: Scalar, by: Scalar) -> Scalar:
        return self.multiply(self.multiply(self.inverse(by), g), by)

    def element_order(self, g: Scalar) -> int:
        k = 1
        x = g
        while x != self.identity:
            x = self.multiply(x, g)
            k += 1
        return k

    def fixes_nonzero(self, g: Scalar) -> bool:
        """Whether g fixes some nonzero field element.

        (s, a) fixes g**t iff t*(p^s - 1) = -a mod q-1 is solvable, i.e. iff
        p^gcd(s, f) - 1 divides a.
        """
        s, a = g
        return a % (self.p ** gcd(s, self.f) - 1) == 0

    def group_order(self) -> int:
        return self.f * self.q1

    # --- subgroup triples ---

    def subgroup_order(self, H: Gl1Subgroup) -> int:
        return (self.f // H.j) * (self.q1 // H.d)

    def _ratio(self, j: int, k: int) -> int:
        """(p^(j*k) - 1) / (p^j - 1), reduced mod q-1."""
        return (self.p ** (j * k) - 1) // (self.p**j - 1) % self.q1

    def contains(self, H: Gl1Subgroup, g: Scalar) -> bool:
        s, a = g
        if s % H.j:
            return False
        t = self._ratio(H.j, s // H.j)
        return (a - H.i * t) % H.d == 0

    def contains_subgroup(self, H: Gl1Subgroup, K: Gl1Subgroup) -> bool:
        return K.d % H.d == 0 and self.contains(H, (K.j % self.f, K.i))

    def elements(self, H: Gl1Subgroup) -> list[Scalar]:
        q1, d, j, i = self.q1, H.d, H.j, H.i
        out: list[Scalar] = []
        for k in range(self.f // j):
            base = i * self._ratio(j, k)
            s = j * k % self.f
            out.extend((s, (base + d * l) % q1) for l in range(q1 // d))
        return out

    def generators(self, H: Gl1Subgroup) -> list[Scalar]:
        return [(0, H.d % self.q1), (H.j % self.f, H.i)]

    def enumerate_subgroups(self) -> list[Gl1Subgroup]:
        """One canonical triple per subgroup, sorted by (d, j, i)."""
        return list(self._all_subgroups)

    @cached_property
    def _all_subgroups(self) -> tuple[Gl1Subgroup, ...]:
        out = []
        for d in divisors(self.q1):
            for j in divisors(self.f):
                r = self.q1 // (self.p**j - 1)
                out.extend(
                    Gl1Subgroup(d, j, i) for i in range(d) if i * r % d == 0
                )
        out.sort()
        return tuple(out)

    def fixing_elements(self, H: Gl1Subgroup) -> list[Scalar]:
        """Elements of H fixing some nonzero vector (conjugation-closed)."""
        return [g for g in self.elements(H) if self.fixes_nonzero(g)]

    def generated_subgroup(self, elems: Iterable[Scalar]) -> Gl1Subgroup:
        """Canonical triple of the subgroup generated by the given elements."""
        triple = self.trivial_subgroup()
        gens: list[Scalar] = []
        for g in sorted(set(elems)):
            if self.contains(triple, g):
                continue
            gens.append(g)
            triple = self._triple_of_set(self._close(gens))
        return triple

    def trivial_subgroup(self) -> Gl1Subgroup:
        return Gl1Subgroup(self.q1, self.f, 0)

    def full_group(self) -> Gl1Subgroup:
        return Gl1Subgroup(1, 1, 0)

    def _close(self, gens: list[Scalar]) -> set[Scalar]:
        elems = {self.identity}
        queue = [self.identity]
        while queue:
            x = queue.pop()
            for g in gens:
                y = self.multiply(x, g)
                if y not in elems:
                    elems.add(y)
                    queue.append(y)
        return elems

    def _triple_of_set(self, elems: set[Scalar]) -> Gl1Subgroup:
        torus = sum(1 for s, _ in elems if s == 0)
        d = self.q1 // torus
        fro = sorted({s for s, _ in elems if s})
        if not fro:
            return Gl1Subgroup(d, self.f, 0)
        j = fro[0]
        i = next(a for s, a in elems if s == j) % d
        return Gl1Subgroup(d, j, i)

    # --- structural predicates ---

    def is_nilpotent(self, H: Gl1Subgroup) -> bool:
        """Prime-set test: nilpotent iff every prime of (q-1)/d divides p^j - 1."""
        small = set(prime_divisors(self.p**H.j - 1))
        return set(prime_divisors(self.q1 // H.d)) <= small

    def is_irreducible(self, H: Gl1Subgroup) -> bool:
        """Exhaustive test: the orbit of every nonzero vector spans F_p^f."""
        if self.f == 1:
            return True
        return self.min_spin_dim(H) == self.f

    def min_spin_dim(self, H: Gl1Subgroup) -> int:
        return _kernels.gl1_min_spin_dim(self._spin_ctx, self.generators(H))

    @cached_property
    def _spin_ctx(self):
        return _kernels.make_gl1_ctx(self.p, self.f, self.table.exp_coords)

    def torus_conjugate(self, H: Gl1Subgroup, t: int) -> Gl1Subgroup:
        """Image of H under conjugation along the torus: i -> i + t(p^j - 1) mod d."""
        return Gl1Subgroup(H.d, H.j, (H.i + t * (self.p**H.j - 1)) % H.d)

    def torus_class_key(self, H: Gl1Subgroup) -> Gl1Subgroup:
        """Least triple in the torus-conjugacy orbit of H."""
        g = gcd(H.d, self.p**H.j - 1)
        return Gl1Subgroup(H.d, H.j, H.i % g)

    def is_quadratic_dihedral(self, H: Gl1Subgroup) -> bool:
        """Dihedral 2-subgroups <sigma, g^((p-1)e)> of a degree-2 field.

        Requires p = 3 mod 4, f = 2, e a proper divisor of p+1 (so the group
        is genuinely dihedral of order >= 4), some torus conjugate equal to
        ((p-1)e, 1, 0), and the inverting relation (g^d)^sigma = g^-d.
        """
        p = self.p
        if p % 4 != 3 or self.f != 2 or H.j != 1:
            return False
        order = self.subgroup_order(H)
        if order < 4 or order & (order - 1):
            return False
        if H.d % (p - 1):
            return False
        e = H.d // (p - 1)
        if (p + 1) % e:
            return False
        if H.i % gcd(H.d, p - 1):
            return False
        return (H.d * p + H.d) % self.q1 == 0

    # --- subgroup lattice within one H ---

    def subgroups_of(self, H: Gl1Subgroup) -> list[Gl1Subgroup]:
        return [
            K
            for K in self._all_subgroups
            if K.d % H.d == 0 and self.contains(H, (K.j % self.f, K.i))
        ]

    def maximal_subgroups_of(self, H: Gl1Subgroup) -> list[Gl1Subgroup]:
        """Proper subgroups of prime index (equivalent to maximality here).

        Prime index forces maximality in any group; conversely every subgroup
        of the (metacyclic, hence supersolvable) ambient group has all its
        maximal subgroups of prime index.
        """
        nH = self.subgroup_order(H)
        out = []
        for K in self.subgroups_of(H):
            nK = self.subgroup_order(K)
            if nK < nH and nH % nK == 0 and is_prime(nH // nK):
                out.append(K)
        return out

    # --- permutation images on the q field values ---

    def value_permutation(self, g: Scalar) -> tuple[int, ...]:
        """Action on value-encoded field elements (point 0 = zero element)."""
        t = self.table
        s, a = g
        img = [0] * self.q
        mult = pow(self.p, s, self.q1)
        for e in range(self.q1):
            img[t.exp_value[e]] = t.exp_value[(e * mult + a) % self.q1]
        return tuple(img)
