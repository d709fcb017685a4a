"""Finite fields F_{p^f} with a fixed multiplicative generator and Frobenius.

Nonzero elements are handled in log form: the integer e stands for the
e-th power of the distinguished generator (the residue of x modulo the
chosen primitive polynomial), and ZERO = -1 marks the zero element.  A
parallel "value" encoding packs the coefficient vector into an integer
base p (zero element = 0); the compiled kernels work on value-encoded
tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .numth import factorize, is_prime

ZERO = -1

MAX_Q = 1 << 20


@dataclass(frozen=True, eq=False)
class FieldTable:
    """Exp/log tables for F_{p^f} under the least primitive polynomial.

    eq=False keeps identity hashing: build_field is cached, so each (p, f)
    yields one shared instance and derived tables can be cached per field.
    """

    p: int
    f: int
    q: int
    modulus: tuple[int, ...]  # monic: (c0, ..., c_{f-1}, 1), poly = x^f + sum c_t x^t
    exp_coords: tuple[tuple[int, ...], ...]  # e -> coords of generator**e
    log_by_coords: dict[tuple[int, ...], int] = field(repr=False)
    exp_value: tuple[int, ...] = field(repr=False)  # e -> packed value
    log_by_value: dict[int, int] = field(repr=False)

    def add_exp(self, a: int, b: int) -> int:
        """log(g**a + g**b); either argument (and the result) may be ZERO."""
        self._check_enc(a)
        self._check_enc(b)
        if a == ZERO:
            return b
        if b == ZERO:
            return a
        coords = tuple(
            (x + y) % self.p
            for x, y in zip(self.exp_coords[a], self.exp_coords[b])
        )
        if not any(coords):
            return ZERO
        return self.log_by_coords[coords]

    def neg_exp(self, a: int) -> int:
        """log(-g**a)."""
        self._check_enc(a)
        if a == ZERO or self.p == 2:
            return a
        return (a + (self.q - 1) // 2) % (self.q - 1)

    def mul_exp(self, a: int, b: int) -> int:
        self._check_enc(a)
        self._check_enc(b)
        if a == ZERO or b == ZERO:
            return ZERO
        return (a + b) % (self.q - 1)

    def frobenius_exp(self, a: int, s: int) -> int:
        """Exponent of (g**a)**(p**s); applying f times is the identity."""
        if not 0 <= a < self.q - 1:
            raise ValueError(f"exponent out of range: {a}")
        return a * pow(self.p, s % self.f, self.q - 1) % (self.q - 1)

    def frobenius_enc(self, a: int, s: int) -> int:
        """frobenius_exp extended to the ZERO marker."""
        self._check_enc(a)
        return ZERO if a == ZERO else self.frobenius_exp(a, s)

    def as_fp_vector(self, a: int) -> tuple[int, ...]:
        """Coordinates in the power basis 1, g, ..., g**(f-1); ZERO -> zero vector."""
        self._check_enc(a)
        if a == ZERO:
            return (0,) * self.f
        return self.exp_coords[a]

    def enc_to_value(self, a: int) -> int:
        return 0 if a == ZERO else self.exp_value[a]

    def value_to_enc(self, v: int) -> int:
        return ZERO if v == 0 else self.log_by_value[v]

    def coords_to_value(self, coords) -> int:
        v = 0
        for c in reversed(tuple(coords)):
            v = v * self.p + c % self.p
        return v

    def value_to_coords(self, v: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.f):
            out.append(v % self.p)
            v //= self.p
        return tuple(out)

    def _check_enc(self, a: int) -> None:
        if not (a == ZERO or 0 <= a < self.q - 1):
            raise ValueError(f"invalid element encoding: {a}")

    # --- value-encoded operation tables for the kernels ---

    def value_tables(self):
        """(mul, add, frob) tables on value-encoded elements, as lists of lists.

        frob[s][x] = x**(p**s) for 0 <= s < f.
        """
        return _value_tables(self)


@lru_cache(maxsize=None)
def _value_tables(t: FieldTable):
    q = t.q
    val = t.exp_value
    mul = [[0] * q for _ in range(q)]
    for a in range(q - 1):
        va = val[a]
        row = mul[va]
        for b in range(q - 1):
            row[val[b]] = val[(a + b) % (q - 1)]
    add = [[0] * q for _ in range(q)]
    for x in range(q):
        cx = t.value_to_coords(x)
        for y in range(x, q):
            cy = t.value_to_coords(y)
            s = t.coords_to_value((a + b) % t.p for a, b in zip(cx, cy))
            add[x][y] = s
            add[y][x] = s
    frob = [[0] * q for _ in range(t.f)]
    for s in range(t.f):
        ps = pow(t.p, s, q - 1) if q > 2 else 1
        for a in range(q - 1):
            frob[s][val[a]] = val[a * ps % (q - 1)]
    return mul, add, frob


def _poly_times_x_mod(coords: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    f = len(coords)
    lead = coords[f - 1]
    out = [0] + coords[: f - 1]
    if lead:
        for t in range(f):
            out[t] = (out[t] - lead * modulus[t]) % p
    return out


@lru_cache(maxsize=None)
def build_field(p: int, f: int) -> FieldTable:
    """F_{p^f} under the lexicographically least primitive monic polynomial.

    Candidate moduli x^f + c_{f-1} x^{f-1} + ... + c_0 are scanned in
    lexicographic order of (c_0, ..., c_{f-1}); a candidate is accepted
    exactly when the residue of x has multiplicative order p^f - 1 (which
    forces irreducibility, so no separate test is needed).
    """
    if not is_prime(p):
        raise ValueError(f"characteristic must be prime, got {p}")
    if f < 1:
        raise ValueError(f"degree must be >= 1, got {f}")
    q = p**f
    if q > MAX_Q:
        raise ValueError(f"field size {q} exceeds the supported bound {MAX_Q}")

    def candidates():
        coeffs = [0] * f
        while True:
            yield tuple(coeffs)
            t = f - 1
            while t >= 0 and coeffs[t] == p - 1:
                coeffs[t] = 0
                t -= 1
            if t < 0:
                return
            coeffs[t] += 1

    for cand in candidates():
        if cand[0] == 0:  # x divides the candidate; residue of x not invertible
            continue
        modulus = cand + (1,)
        # walk the powers of x; bail out early if the order is a proper divisor
        one = tuple([1] + [0] * (f - 1))
        exp_coords = []
        cur = list(one)
        ok = True
        for e in range(q - 1):
            tup = tuple(cur)
            if e > 0 and tup == one:
                ok = False  # order < q-1
                break
            exp_coords.append(tup)
            cur = _poly_times_x_mod(cur, modulus, p)
        if not ok or tuple(cur) != one:
            continue
        log_by_coords = {c: e for e, c in enumerate(exp_coords)}
        base = [p**t for t in range(f)]
        exp_value = tuple(sum(c * b for c, b in zip(co, base)) for co in exp_coords)
        log_by_value = {v: e for e, v in enumerate(exp_value)}
        return FieldTable(
            p=p,
            f=f,
            q=q,
            modulus=modulus,
            exp_coords=tuple(exp_coords),
            log_by_coords=log_by_coords,
            exp_value=exp_value,
            log_by_value=log_by_value,
        )
    raise AssertionError(f"no primitive polynomial found for p={p}, f={f}")


def subfield_exponent_step(t: FieldTable, e: int) -> int:
    """Index of the subfield F_{p^e} inside the generator's power lattice.

    The nonzero elements of F_{p^e} are exactly the powers whose exponent
    is a multiple of (q-1)/(p^e-1).
    """
    if t.f % e:
        raise ValueError(f"{e} does not divide the field degree {t.f}")
    return (t.q - 1) // (t.p**e - 1)


def modulus_str(t: FieldTable) -> str:
    """Human-readable monic modulus, highest degree first."""
    terms = []
    for deg in range(t.f, -1, -1):
        c = t.modulus[deg] if deg < t.f else 1
        if c == 0:
            continue
        if deg == 0:
            terms.append(str(c))
        else:
            x = "x" if deg == 1 else f"x^{deg}"
            terms.append(x if c == 1 else f"{c}{x}")
    return " + ".join(terms)


def field_order_checks(t: FieldTable) -> None:
    """Assert the generator really has order q-1 (cheap sanity re-check)."""
    seen = set(t.exp_value)
    assert len(seen) == t.q - 1 and 0 not in seen
    for r, _ in factorize(t.q - 1):
        e = (t.q - 1) // r
        assert t.exp_coords[e] != t.exp_coords[0] or t.q == 2
