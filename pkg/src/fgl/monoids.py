"""Commutative monoids: free, finitely presented, and truncated p-adic.

The truncation monoid of a local ring collapses O \\ {0} to pairs
(valuation v < V, unit residue mod m^n), with one absorbing element BOTTOM
for everything of valuation >= V.  BOTTOM is part of the monoid; it is not
the zero that ring recovery later adjoins.
"""
from __future__ import annotations

import itertools
import math

from .rings import (
    EisensteinExtension,
    PadicIntegers,
    RingContext,
    RingElement,
    RingError,
)


class MonoidError(RingError):
    pass


class StructureMismatch(MonoidError):
    """Two monoids that cannot be matched generator-by-generator."""


BOTTOM = ("bot",)


class MonoidElement:
    __slots__ = ("monoid", "payload")

    def __init__(self, monoid: "Monoid", payload):
        self.monoid = monoid
        self.payload = payload

    def __mul__(self, other):
        if not isinstance(other, MonoidElement) or other.monoid.key() != self.monoid.key():
            raise MonoidError("elements of different monoids")
        return MonoidElement(self.monoid, self.monoid.mul(self.payload, other.payload))

    def __eq__(self, other):
        return (
            isinstance(other, MonoidElement)
            and self.monoid.key() == other.monoid.key()
            and self.payload == other.payload
        )

    def __hash__(self):
        return hash((self.monoid.key(), self.payload))

    def is_identity(self) -> bool:
        return self.payload == self.monoid.identity_payload()

    def label(self) -> str:
        return self.monoid.label(self.payload)

    def __repr__(self):
        return f"<monoid elt {self.label()}>"


class Monoid:
    """Base class: payload-level multiplication plus enumeration."""

    def el(self, payload) -> MonoidElement:
        return MonoidElement(self, self.check_payload(payload))

    def identity(self) -> MonoidElement:
        return MonoidElement(self, self.identity_payload())

    def check_payload(self, payload):
        raise NotImplementedError

    def identity_payload(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def is_finite(self) -> bool:
        raise NotImplementedError

    def payloads(self) -> list:
        raise MonoidError("not a finite monoid")

    def elements(self) -> list:
        return [MonoidElement(self, p) for p in self.payloads()]

    def label(self, payload) -> str:
        raise NotImplementedError

    def key(self) -> tuple:
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Monoid) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


class FreeCommutativeMonoid(Monoid):
    """Free commutative monoid on named generators; payload = exponent tuple."""

    def __init__(self, generators):
        generators = tuple(generators)
        if len(set(generators)) != len(generators):
            raise MonoidError("generator names must be distinct")
        self.generators = generators

    def check_payload(self, payload):
        payload = tuple(payload)
        if len(payload) != len(self.generators) or any(
            not isinstance(e, int) or e < 0 for e in payload
        ):
            raise MonoidError("payload must be a tuple of non-negative exponents")
        return payload

    def identity_payload(self):
        return (0,) * len(self.generators)

    def generator(self, name: str) -> MonoidElement:
        if name not in self.generators:
            raise MonoidError(f"unknown generator {name!r}")
        return self.el(tuple(1 if g == name else 0 for g in self.generators))

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def is_finite(self) -> bool:
        return len(self.generators) == 0

    def payloads(self):
        if self.generators:
            raise MonoidError("free monoid on generators is infinite")
        return [()]

    def label(self, payload) -> str:
        parts = [
            g if e == 1 else f"{g}^{e}"
            for g, e in zip(self.generators, payload)
            if e
        ]
        return "*".join(parts) if parts else "1"

    def key(self):
        return ("free", self.generators)

    def descriptor(self):
        return {"kind": "free", "generators": list(self.generators)}


class FinitelyPresentedMonoid(Monoid):
    """Finite commutative monoid with an explicit multiplication table.

    Payloads are canonical exponent tuples over the generators.  Either give
    the table directly or let bounded rewriting close the relations; in both
    cases the table is exhaustively checked for associativity, commutativity
    and the unit law, so a non-confluent rewriting system cannot slip through.
    """

    def __init__(self, generators, element_payloads, table):
        self.generators = tuple(generators)
        self._payloads = list(element_payloads)
        self._index = {p: i for i, p in enumerate(self._payloads)}
        self.table = dict(table)
        ident = (0,) * len(self.generators)
        if ident not in self._index:
            raise MonoidError("identity exponent vector missing")
        self._verify_table()

    @classmethod
    def from_relations(cls, generators, relations, max_elements: int = 4096):
        """relations: pairs (lhs, rhs) of exponent tuples, lhs = rhs in M."""
        generators = tuple(generators)
        rules = []
        for lhs, rhs in relations:
            lhs, rhs = tuple(lhs), tuple(rhs)
            if (sum(lhs), lhs) < (sum(rhs), rhs):
                lhs, rhs = rhs, lhs
            if lhs == rhs:
                continue
            rules.append((lhs, rhs))

        def normal(vec):
            vec = tuple(vec)
            changed = True
            while changed:
                changed = False
                for lhs, rhs in rules:
                    if all(v >= l for v, l in zip(vec, lhs)):
                        vec = tuple(v - l + r for v, l, r in zip(vec, lhs, rhs))
                        changed = True
                        break
            return vec

        ident = (0,) * len(generators)
        seen = {normal(ident)}
        frontier = [normal(ident)]
        gens = [
            tuple(1 if i == j else 0 for j in range(len(generators)))
            for i in range(len(generators))
        ]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = normal(tuple(c + e for c, e in zip(cur, g)))
                if nxt not in seen:
                    if len(seen) >= max_elements:
                        raise MonoidError("relation closure exceeded the element budget")
                    seen.add(nxt)
                    frontier.append(nxt)
        payloads = sorted(seen, key=lambda v: (sum(v), v))
        table = {}
        for a in payloads:
            for b in payloads:
                table[(a, b)] = normal(tuple(x + y for x, y in zip(a, b)))
        return cls(generators, payloads, table)

    def _verify_table(self):
        ident = (0,) * len(self.generators)
        ps = self._payloads
        for a in ps:
            if self.table[(ident, a)] != a or self.table[(a, ident)] != a:
                raise MonoidError(f"unit law fails at {a}")
        for a in ps:
            for b in ps:
                ab = self.table[(a, b)]
                if ab not in self._index:
                    raise MonoidError("table is not closed")
                if ab != self.table[(b, a)]:
                    raise MonoidError(f"commutativity fails at ({a}, {b})")
        for a in ps:
            for b in ps:
                ab = self.table[(a, b)]
                for c in ps:
                    if self.table[(ab, c)] != self.table[(a, self.table[(b, c)])]:
                        raise MonoidError(f"associativity fails at ({a}, {b}, {c})")

    def check_payload(self, payload):
        payload = tuple(payload)
        if payload not in self._index:
            raise MonoidError(f"{payload} is not a canonical element")
        return payload

    def identity_payload(self):
        return (0,) * len(self.generators)

    def mul(self, a, b):
        return self.table[(a, b)]

    def is_finite(self) -> bool:
        return True

    def payloads(self):
        return list(self._payloads)

    def label(self, payload) -> str:
        parts = [
            g if e == 1 else f"{g}^{e}"
            for g, e in zip(self.generators, payload)
            if e
        ]
        return "*".join(parts) if parts else "1"

    def key(self):
        return (
            "presented",
            self.generators,
            tuple(self._payloads),
            tuple(sorted(self.table.items())),
        )

    def descriptor(self):
        return {
            "kind": "presented",
            "generators": list(self.generators),
            "elements": [list(p) for p in self._payloads],
            "table": [
                {"a": list(a), "b": list(b), "ab": list(ab)}
                for (a, b), ab in sorted(self.table.items())
            ],
        }


class PadicTruncationMonoid(Monoid):
    """Multiplicative monoid (valuation < V, unit mod m^n) with absorbing BOTTOM."""

    def __init__(self, ctx: RingContext, n: int, V: int):
        if not isinstance(ctx, (PadicIntegers, EisensteinExtension)):
            raise MonoidError("truncation monoids need a p-adic or Eisenstein ring")
        if n < 1 or V < 1:
            raise MonoidError("need n >= 1 and V >= 1")
        if ctx.k < n:
            raise MonoidError(f"ring precision {ctx.k} cannot represent units mod m^{n}")
        self.ctx = ctx
        self.n = n
        self.V = V
        if isinstance(ctx, PadicIntegers):
            self.unit_ctx: RingContext = PadicIntegers(ctx.p, n)
            self.ram_index = 1
        else:
            self.unit_ctx = EisensteinExtension(ctx.p, n, ctx.poly)
            self.ram_index = ctx.e
        self._units = None

    def unit_payloads(self) -> list:
        """All units of O/m^n, deterministically ordered."""
        if self._units is None:
            u = self.unit_ctx
            if isinstance(u, PadicIntegers):
                self._units = [a for a in range(1, u.modulus) if a % u.p]
            else:
                ranges = [range(m) if m else range(1) for m in u.coef_mod]
                self._units = sorted(
                    t for t in itertools.product(*ranges) if t[0] % u.p
                )
        return list(self._units)

    def check_payload(self, payload):
        if payload == BOTTOM:
            return BOTTOM
        v, unit = payload
        if not isinstance(v, int) or not 0 <= v < self.V:
            raise MonoidError(f"valuation slot {v} out of range [0, {self.V})")
        unit = self.unit_ctx.normalize(unit)
        if self.unit_ctx.valuation(unit) != 0:
            raise MonoidError("unit slot is not a unit")
        return (v, unit)

    def identity_payload(self):
        return (0, self.unit_ctx.int_payload(1))

    def uniformizer_class(self) -> MonoidElement:
        if self.V < 2:
            return MonoidElement(self, BOTTOM)
        return self.el((1, self.unit_ctx.int_payload(1)))

    def mul(self, a, b):
        if a == BOTTOM or b == BOTTOM:
            return BOTTOM
        v = a[0] + b[0]
        if v >= self.V:
            return BOTTOM
        return (v, self.unit_ctx.mul(a[1], b[1]))

    def is_finite(self) -> bool:
        return True

    def payloads(self):
        out = []
        for v in range(self.V):
            for u in self.unit_payloads():
                out.append((v, u))
        out.append(BOTTOM)
        return out

    def class_of(self, elt: RingElement) -> MonoidElement:
        """Collapse a nonzero ring element to its truncation class."""
        if elt.ctx.key() != self.ctx.key():
            raise MonoidError("element of a different ring")
        v = elt.valuation()
        if v is math.inf:
            raise MonoidError("zero has no truncation class")
        if v >= self.V:
            return MonoidElement(self, BOTTOM)
        if self.ctx.k - v < self.n:
            raise MonoidError("not enough precision to read the unit part")
        raw = self.ctx.unit_part(elt.payload, v)
        return MonoidElement(self, (v, self.unit_ctx.normalize(raw)))

    def canonical_lift(self, payload) -> RingElement:
        """The fixed lift of a class into the full-precision ring."""
        if payload == BOTTOM:
            raise MonoidError("BOTTOM has no canonical lift")
        v, unit = payload
        if isinstance(self.ctx, PadicIntegers):
            return self.ctx.el(self.ctx.p**v * unit)
        lifted = self.ctx.el(unit)
        return lifted * self.ctx.uniformizer() ** v

    def label(self, payload) -> str:
        if payload == BOTTOM:
            return "bot"
        v, unit = payload
        return f"{v}:{self.unit_ctx.fmt(unit).split(' + O')[0]}"

    def key(self):
        return ("padic_truncation", self.ctx.key(), self.n, self.V)

    def descriptor(self):
        return {
            "kind": "padic_truncation",
            "ring": self.ctx.descriptor(),
            "n": self.n,
            "V": self.V,
        }


def padic_truncation_of(ctx: RingContext, n: int, V: int) -> PadicTruncationMonoid:
    """Truncation monoid of a local ring, with the element-count sanity check."""
    m = PadicTruncationMonoid(ctx, n, V)
    q = ctx.p  # residue field size; extensions here are totally ramified
    expected = (q - 1) * q ** (n - 1) * V + 1
    actual = len(m.unit_payloads()) * V + 1
    if actual != expected:
        raise MonoidError(f"element count {actual} != expected {expected}")
    return m


class RingSubsetMonoid(Monoid):
    """A finite window onto the multiplicative monoid of a ring.

    Holds an explicit element list (1 is always included); products may fall
    outside the window, so closure is not required and consumers must treat
    out-of-window products as unknown rather than absorbing.
    """

    def __init__(self, ctx: RingContext, payloads):
        self.ctx = ctx
        listed = [ctx.normalize(p) for p in payloads]
        one = ctx.int_payload(1)
        if one not in listed:
            listed.insert(0, one)
        seen = set()
        self.listed = []
        for p in listed:
            if p not in seen:
                seen.add(p)
                self.listed.append(p)

    def check_payload(self, payload):
        return self.ctx.normalize(payload)

    def identity_payload(self):
        return self.ctx.int_payload(1)

    def mul(self, a, b):
        return self.ctx.mul(a, b)

    def is_finite(self) -> bool:
        return True

    def payloads(self):
        return list(self.listed)

    def label(self, payload) -> str:
        if isinstance(payload, int):
            return str(payload)
        if not isinstance(payload, tuple):
            return self.ctx.fmt(payload)
        parts = []
        for i, c in enumerate(payload):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                head = "pi" if c == 1 else f"{c}*pi"
                parts.append(head if i == 1 else f"{head}^{i}")
        return "+".join(parts) if parts else "0"

    def key(self):
        return ("subset", self.ctx.key(), tuple(self.listed))

    def descriptor(self):
        return {
            "kind": "ring_subset",
            "ring": self.ctx.descriptor(),
            "elements": [self.ctx.value_to_json(p) for p in self.listed],
        }


def monoid_from_descriptor(d: dict) -> Monoid:
    from .rings import context_from_descriptor

    kind = d["kind"]
    if kind == "free":
        return FreeCommutativeMonoid(tuple(d["generators"]))
    if kind == "trivial":
        return FreeCommutativeMonoid(())
    if kind == "presented":
        table = {
            (tuple(row["a"]), tuple(row["b"])): tuple(row["ab"]) for row in d["table"]
        }
        return FinitelyPresentedMonoid(
            tuple(d["generators"]), [tuple(p) for p in d["elements"]], table
        )
    if kind == "padic_truncation":
        return PadicTruncationMonoid(
            context_from_descriptor(d["ring"]), d["n"], d["V"]
        )
    if kind == "ring_subset":
        ctx = context_from_descriptor(d["ring"])
        return RingSubsetMonoid(ctx, [ctx.value_from_json(v) for v in d["elements"]])
    raise MonoidError(f"unknown monoid kind {d['kind']!r}")


# ---------------------------------------------------------------------------
# unit group structure


class UnitGroup:
    """Invariant-factor decomposition of (O/m^n)^*, computed exhaustively.

    factors is ascending with d_1 | d_2 | ... | d_r; generators[i] has exact
    order factors[i], and the products g_1^{e_1} ... g_r^{e_r} with
    0 <= e_i < d_i enumerate the group without repetition (checked).
    """

    def __init__(self, monoid: PadicTruncationMonoid):
        self.monoid = monoid
        self.ctx = monoid.unit_ctx
        self._order_cache: dict = {}
        units = monoid.unit_payloads()
        self.size = len(units)
        self.factors, self.generators = self._decompose(units)
        self.dlog = self._discrete_log_table()

    # -- group primitives on unit payloads

    def _mul(self, a, b):
        return self.ctx.mul(a, b)

    def _pow(self, a, e: int):
        acc = self.ctx.int_payload(1)
        base = a
        while e:
            if e & 1:
                acc = self._mul(acc, base)
            base = self._mul(base, base)
            e >>= 1
        return acc

    def order_of(self, a) -> int:
        if a not in self._order_cache:
            ident = self.ctx.int_payload(1)
            t = self.size
            for ell in _factorize(self.size):
                while t % ell == 0 and self._pow(a, t // ell) == ident:
                    t //= ell
            self._order_cache[a] = t
        return self._order_cache[a]

    # -- structure

    def _decompose(self, units):
        total = len(units)
        if total == 1:
            return [], []
        primes = _factorize(total)
        per_prime: dict = {}
        for ell, a in primes.items():
            cofactor = total // ell**a
            part = sorted({self._pow(u, cofactor) for u in units},
                          key=self.ctx.sort_key)
            per_prime[ell] = self._p_group_basis(part, ell)
        # fuse each prime's cyclic orders slot-wise, largest with largest
        width = max(len(b) for b in per_prime.values())
        factors = []
        for slot in range(width):
            d = 1
            for basis in per_prime.values():
                if slot < len(basis):
                    d *= basis[slot][1]
            factors.append(d)
        factors.reverse()  # ascending divisibility chain d_1 | d_2 | ...
        if _product(factors) != total:
            raise MonoidError("invariant factors do not multiply to the group order")
        generators = self._canonical_generators(units, factors)
        return factors, generators

    def _canonical_generators(self, units, factors):
        """Per slot, largest factor first: the smallest payload of exact order
        d whose span with the earlier picks stays a direct product."""
        chosen: list = []
        for d in reversed(factors):
            found = False
            for x in sorted(
                (u for u in units if self.order_of(u) == d), key=self.ctx.sort_key
            ):
                try:
                    self._span(chosen + [(x, d)])
                except MonoidError:
                    continue
                chosen.append((x, d))
                found = True
                break
            if not found:
                raise MonoidError(f"no generator of order {d} completes the basis")
        chosen.reverse()
        for d, (g, o) in zip(factors, chosen):
            if self.order_of(g) != d or o != d:
                raise MonoidError("unit group generator has wrong order")
        return [g for g, _ in chosen]

    def _p_group_basis(self, part, ell):
        """Greedy basis of an abelian ell-group: repeatedly take an element of
        maximal order in the quotient by the span so far, then clear its span
        component so it generates a direct factor.  Ties go to the smallest
        canonical payload, which pins the output."""
        ident = self.ctx.int_payload(1)
        basis: list = []  # (payload, order), orders descending
        span = {ident: ()}
        while len(span) < len(part):
            best = None
            best_ord = 0
            for x in part:
                if x in span:
                    continue
                t = 1
                y = x
                while y not in span:
                    y = self._pow(y, ell)
                    t *= ell
                if t > best_ord or (
                    t == best_ord and self.ctx.sort_key(x) < self.ctx.sort_key(best)
                ):
                    best, best_ord = x, t
            inside = self._pow(best, best_ord)
            exps = span[inside]
            adjusted = best
            for (g, o), a in zip(basis, exps):
                if a % best_ord:
                    raise MonoidError("basis invariant violated; not an abelian group?")
                # clear the span component: multiply by g^(-a / best_ord)
                adjusted = self._mul(adjusted, self._pow(g, (-(a // best_ord)) % o))
            basis.append((adjusted, best_ord))
            span = self._span(basis)
        return basis

    def _span(self, basis):
        out = {self.ctx.int_payload(1): ()}
        for i, (g, o) in enumerate(basis):
            nxt = {}
            p = self.ctx.int_payload(1)
            for e in range(o):
                for payload, exps in out.items():
                    key = self._mul(payload, p)
                    if key in nxt:
                        raise MonoidError("span enumeration collided; not a direct product")
                    nxt[key] = exps + (e,)
                p = self._mul(p, g)
            out = nxt
        return out

    def _discrete_log_table(self):
        table = self._span([(g, d) for g, d in zip(self.generators, self.factors)])
        if len(table) != self.size:
            raise MonoidError("generators do not span the unit group")
        return table

    def exponents_of(self, unit_payload) -> tuple:
        return self.dlog[unit_payload]


def _factorize(n: int) -> dict:
    out: dict = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _product(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def unit_group_structure(monoid: PadicTruncationMonoid) -> UnitGroup:
    """Invariant factors and matching generators of the unit part."""
    return UnitGroup(monoid)


# ---------------------------------------------------------------------------
# morphisms and generator-matched isomorphisms


class MonoidMorphism:
    """A multiplicative map; finite sources carry a full payload table."""

    def __init__(self, source: Monoid, target: Monoid, table=None, gen_images=None):
        self.source = source
        self.target = target
        self.table = dict(table) if table is not None else None
        self.gen_images = dict(gen_images) if gen_images is not None else None
        if self.table is None and self.gen_images is None:
            raise MonoidError("morphism needs a table or generator images")

    def apply(self, elt: MonoidElement) -> MonoidElement:
        if elt.monoid.key() != self.source.key():
            raise MonoidError("element not from the source monoid")
        if self.table is not None:
            return MonoidElement(self.target, self.table[elt.payload])
        acc = self.target.identity()
        for g, e in zip(self.source.generators, elt.payload):
            img = self.gen_images[g]
            for _ in range(e):
                acc = acc * img
        return acc

    def __call__(self, elt):
        return self.apply(elt)

    def verify(self) -> None:
        """Identity and multiplicativity; exhaustive when the source is finite."""
        if self.table is not None:
            ident = self.source.identity()
            if self.apply(ident).payload != self.target.identity_payload():
                raise MonoidError("identity is not preserved")
            ps = self.source.payloads()
            images = {p: self.table[p] for p in ps}
            for a in ps:
                fa = images[a]
                for b in ps:
                    lhs = images[self.source.mul(a, b)]
                    rhs = self.target.mul(fa, images[b])
                    if lhs != rhs:
                        raise MonoidError(
                            f"multiplicativity fails at ({self.source.label(a)}, "
                            f"{self.source.label(b)})"
                        )
        else:
            for g in self.source.generators:
                if g not in self.gen_images:
                    raise MonoidError(f"no image for generator {g!r}")

    def inverse(self) -> "MonoidMorphism":
        if self.table is None:
            raise MonoidError("only table morphisms invert")
        inv = {}
        for a, b in self.table.items():
            if b in inv:
                raise MonoidError("morphism is not injective")
            inv[b] = a
        if len(inv) != len(self.target.payloads()):
            raise MonoidError("morphism is not surjective")
        return MonoidMorphism(self.target, self.source, table=inv)


def build_monoid_isomorphism(
    m1: PadicTruncationMonoid,
    m2: PadicTruncationMonoid,
    generator_powers: tuple | None = None,
) -> MonoidMorphism:
    """Generator-matched isomorphism between two truncation monoids.

    Requires equal valuation caps and equal unit-group invariant factors.
    The uniformizer class goes to the uniformizer class; unit generators are
    matched slot by slot, optionally twisted by generator_powers (one exponent
    per invariant factor, coprime to it).
    """
    if m1.V != m2.V:
        raise StructureMismatch(f"valuation caps differ: {m1.V} vs {m2.V}")
    u1 = unit_group_structure(m1)
    u2 = unit_group_structure(m2)
    if u1.factors != u2.factors:
        raise StructureMismatch(
            f"unit groups differ: {u1.factors} vs {u2.factors}"
        )
    if generator_powers is None:
        generator_powers = (1,) * len(u1.factors)
    if len(generator_powers) != len(u1.factors):
        raise StructureMismatch("one twist exponent per invariant factor")
    for t, d in zip(generator_powers, u1.factors):
        if math.gcd(t, d) != 1:
            raise StructureMismatch(f"twist {t} is not invertible mod {d}")
    twisted = [u2._pow(g, t) for g, t in zip(u2.generators, generator_powers)]
    # map every unit through matched exponents
    unit_map = {}
    for payload, exps in u1.dlog.items():
        img = u2.ctx.int_payload(1)
        for g, e in zip(twisted, exps):
            img = u2.ctx.mul(img, u2._pow(g, e))
        unit_map[payload] = img
    if len(set(unit_map.values())) != len(unit_map):
        raise StructureMismatch("twisted generator matching is not injective")
    table = {BOTTOM: BOTTOM}
    for v in range(m1.V):
        for u, img in unit_map.items():
            table[(v, u)] = (v, img)
    return MonoidMorphism(m1, m2, table=table)


def unit_isomorphism_variants(
    m1: PadicTruncationMonoid, m2: PadicTruncationMonoid, count: int = 3
):
    """A few distinct generator-matched isomorphisms: twist the largest
    invariant factor's generator by successive units.  Yields (powers, map)
    pairs so callers can report which twist produced which behaviour."""
    u1 = unit_group_structure(m1)
    if not u1.factors:
        yield (), build_monoid_isomorphism(m1, m2)
        return
    top = u1.factors[-1]
    emitted = 0
    for t in range(1, top):
        if math.gcd(t, top) != 1:
            continue
        powers = (1,) * (len(u1.factors) - 1) + (t,)
        yield powers, build_monoid_isomorphism(m1, m2, generator_powers=powers)
        emitted += 1
        if emitted >= count:
            return
