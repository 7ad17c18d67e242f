"""Recovering addition on M-with-0 from a monoid action.

For a strict action, [m1+m2](x) = F([m1](x), [m2](x)) determines the sum of
two monoid elements from purely multiplicative data plus the law.  Over a
truncation monoid this runs at class precision: the candidate class is read
off the linear coefficient, then the full series is checked at a per-degree
tolerance.  Sums whose valuation escapes the window are flagged rather than
folded into the absorbing class; the adjoined zero is the exact series 0.

transport_structure moves a recovered addition table along a multiplicative
isomorphism, which is how two rings sharing one monoid exhibit different
additions on the same carrier.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .laws import MonoidAction, congruent_payloads
from .lubin_tate import (
    build_action,
    build_fgl,
    padic_factorial_valuation,
    standard_datum,
)
from .monoids import (
    BOTTOM,
    MonoidElement,
    MonoidMorphism,
    PadicTruncationMonoid,
    RingSubsetMonoid,
    padic_truncation_of,
    unit_isomorphism_variants,
)
from .rings import EisensteinExtension, RingError
from .series import TruncatedSeries


class RecoveryError(RingError):
    pass


class NoMatch(RecoveryError):
    def __init__(self, message: str, capped: bool = False):
        self.capped = capped
        super().__init__(message)


ADJOINED_ZERO = ("zero",)
CAPPED = ("cap",)


def _payload_of(m):
    if isinstance(m, MonoidElement):
        return m.payload
    return m


def _series_powers(terms: dict, ctx, N: int, top: int):
    """terms, terms^2, ..., terms^top as one-variable term dicts."""
    powers = [None, dict(terms)]
    for _ in range(2, top + 1):
        prev = powers[-1]
        nxt: dict = {}
        for (i,), a in prev.items():
            for (j,), b in terms.items():
                if i + j > N:
                    continue
                key = (i + j,)
                c = ctx.mul(a, b)
                if key in nxt:
                    nxt[key] = ctx.add(nxt[key], c)
                else:
                    nxt[key] = c
        powers.append({k: v for k, v in nxt.items() if not ctx.is_zero(v)})
    return powers


def _pair_sum_terms(law, pow_a, pow_b):
    """Term dict of F([a](T), [b](T)) from cached powers of both series."""
    ctx = law.ctx
    N = law.trunc_degree
    out: dict = {}
    for (i, j), c in law.F.terms.items():
        if i and i >= len(pow_a):
            continue
        if j and j >= len(pow_b):
            continue
        if i and j:
            for (da,), ca in pow_a[i].items():
                if da >= N:
                    continue
                for (db,), cb in pow_b[j].items():
                    if da + db > N:
                        continue
                    _accumulate(out, ctx, (da + db,), ctx.mul(c, ctx.mul(ca, cb)))
        elif i:
            for (da,), ca in pow_a[i].items():
                _accumulate(out, ctx, (da,), ctx.mul(c, ca))
        elif j:
            for (db,), cb in pow_b[j].items():
                _accumulate(out, ctx, (db,), ctx.mul(c, cb))
    return {k: v for k, v in out.items() if not ctx.is_zero(v)}


def _accumulate(acc: dict, ctx, key, value):
    if key in acc:
        acc[key] = ctx.add(acc[key], value)
    else:
        acc[key] = value


def _truncation_sum_class(action: MonoidAction, monoid: PadicTruncationMonoid,
                          s_terms: dict):
    """Identify which carrier class the sum series belongs to."""
    ctx = action.law.ctx
    N = action.law.trunc_degree
    if not s_terms:
        return ADJOINED_ZERO
    alpha = s_terms.get((1,))
    if alpha is None or ctx.is_zero(alpha):
        raise NoMatch("sum series has no usable linear coefficient", capped=True)
    v = ctx.valuation(alpha)
    if v >= monoid.V:
        raise NoMatch(
            f"sum has valuation {v}, outside the window (cap {monoid.V})",
            capped=True,
        )
    cls = monoid.class_of(ctx.el(alpha))
    cand = action.endo_for(cls).series
    e = getattr(ctx, "e", 1)
    n = monoid.n
    zero = ctx.normalize(0)
    for deg in range(1, N + 1):
        tol = max(0, v + n - e * padic_factorial_valuation(deg, ctx.p))
        a = s_terms.get((deg,), zero)
        b = cand.terms.get((deg,), zero)
        if not congruent_payloads(ctx, a, b, tol):
            raise RecoveryError(
                f"series mismatch at degree {deg} for candidate "
                f"{monoid.label(cls.payload)}; action not strict here?"
            )
    return cls.payload


def recover_sum(action: MonoidAction, m1, m2):
    """The carrier element whose endomorphism matches F([m1], [m2]).

    Returns a monoid payload or the adjoined zero.  The candidate comes from
    the linear coefficient alone (injective per class at working precision),
    so a second match cannot exist; the full-series check then either
    confirms it or fails hard.
    """
    p1, p2 = _payload_of(m1), _payload_of(m2)
    if p1 == ADJOINED_ZERO:
        return p2
    if p2 == ADJOINED_ZERO:
        return p1
    monoid = action.monoid
    if p1 == BOTTOM or p2 == BOTTOM:
        raise NoMatch("absorbing operand has no additive meaning", capped=True)
    ea = action.endo_for(monoid.el(p1)).series
    eb = action.endo_for(monoid.el(p2)).series
    N = action.law.trunc_degree
    ctx = action.law.ctx
    top = max((i for (i, j) in action.law.F.terms), default=1)
    top_b = max((j for (i, j) in action.law.F.terms), default=1)
    pow_a = _series_powers(ea.terms, ctx, N, top)
    pow_b = _series_powers(eb.terms, ctx, N, top_b)
    s_terms = _pair_sum_terms(action.law, pow_a, pow_b)
    if isinstance(monoid, PadicTruncationMonoid):
        return _truncation_sum_class(action, monoid, s_terms)
    if isinstance(monoid, RingSubsetMonoid):
        if not s_terms:
            return ADJOINED_ZERO
        alpha = s_terms.get((1,))
        for payload in monoid.payloads():
            if payload == alpha:
                cand = action.endo_for(monoid.el(payload)).series
                if dict(cand.terms) != s_terms:
                    raise RecoveryError(
                        f"full series of {monoid.label(payload)} does not "
                        "match the sum"
                    )
                return payload
        raise NoMatch("sum lies outside the listed window")
    raise RecoveryError(f"no sum identification for {type(monoid).__name__}")


# ---------------------------------------------------------------------------
# full tables


class RecoveredRing:
    """Addition table on the carrier of a finite truncation monoid.

    Rows and columns are the non-absorbing classes; the adjoined zero is
    implicit (0 + m = m).  Entries are class payloads, ADJOINED_ZERO, or
    CAPPED for sums escaping the valuation window.

    Two flag kinds keep the finite-level semantics honest.  "cap": the sum's
    valuation reaches the window, there is no class to return.  "precision":
    the sum's valuation exceeds both operands', so its class depends on the
    choice of lifts inside the operand classes; the stored entry is the
    canonical-lift value, recorded but not trusted.  Axiom checks run only
    over unflagged entries, where class addition is independent of lifts.
    """

    def __init__(self, monoid: PadicTruncationMonoid, table: dict,
                 flags: dict, provenance: str,
                 action: MonoidAction | None = None):
        self.monoid = monoid
        self.elements = sorted(
            p for p in monoid.payloads() if p != BOTTOM
        )
        self.table = table
        self.flags = flags
        self.provenance = provenance
        self.action = action

    def add(self, a, b):
        pa, pb = _payload_of(a), _payload_of(b)
        if pa == ADJOINED_ZERO:
            return pb
        if pb == ADJOINED_ZERO:
            return pa
        return self.table[(pa, pb)]

    def entry_if_unflagged(self, a, b):
        if (a, b) in self.flags:
            return None
        return self.table[(a, b)]

    def mul(self, a, b):
        pa, pb = _payload_of(a), _payload_of(b)
        if pa == ADJOINED_ZERO or pb == ADJOINED_ZERO:
            return ADJOINED_ZERO
        return self.monoid.mul(pa, pb)

    def flag_counts(self) -> dict:
        out = {"cap": 0, "precision": 0}
        for kind in self.flags.values():
            out[kind] += 1
        return out

    def verify_ring_axioms(self) -> dict:
        """Commutativity, associativity, distributivity, zero neutrality on
        everything unflagged; cubic in the carrier size."""
        els = self.elements
        checked = {"commutativity": 0, "associativity": 0, "distributivity": 0}
        skipped = {"associativity": 0, "distributivity": 0}
        for a in els:
            for b in els:
                if self.table[(a, b)] != self.table[(b, a)]:
                    raise RecoveryError(f"table not symmetric at ({a}, {b})")
                checked["commutativity"] += 1
        for a in els:
            if self.add(ADJOINED_ZERO, a) != a:
                raise RecoveryError(f"zero is not neutral at {a}")
        for a in els:
            for b in els:
                ab = self.entry_if_unflagged(a, b)
                if ab is None or ab == ADJOINED_ZERO:
                    skipped["associativity"] += len(els)
                    continue
                for c in els:
                    bc = self.entry_if_unflagged(b, c)
                    if bc is None or bc == ADJOINED_ZERO:
                        skipped["associativity"] += 1
                        continue
                    left = self.entry_if_unflagged(ab, c)
                    right = self.entry_if_unflagged(a, bc)
                    if left is None or right is None:
                        skipped["associativity"] += 1
                        continue
                    if left != right:
                        raise RecoveryError(
                            f"associativity fails at ({a}, {b}, {c})"
                        )
                    checked["associativity"] += 1
        for m in els:
            for a in els:
                ma = self.monoid.mul(m, a)
                if ma == BOTTOM:
                    skipped["distributivity"] += len(els)
                    continue
                for b in els:
                    s = self.entry_if_unflagged(a, b)
                    mb = self.monoid.mul(m, b)
                    if s is None or s == ADJOINED_ZERO or mb == BOTTOM:
                        skipped["distributivity"] += 1
                        continue
                    ms = self.mul(m, s)
                    if ms == BOTTOM:
                        skipped["distributivity"] += 1
                        continue
                    other = self.entry_if_unflagged(ma, mb)
                    if other is None:
                        skipped["distributivity"] += 1
                        continue
                    if ms != other:
                        raise RecoveryError(
                            f"distributivity fails at m={m}, ({a}, {b})"
                        )
                    checked["distributivity"] += 1
        return {"checked": checked, "skipped": skipped}

    def to_json(self) -> dict:
        label = self.monoid.label
        rows = []
        for a in self.elements:
            row = []
            for b in self.elements:
                entry = self.table[(a, b)]
                if entry == CAPPED:
                    cell = "!cap"
                elif entry == ADJOINED_ZERO:
                    cell = "0"
                else:
                    cell = label(entry)
                if self.flags.get((a, b)) == "precision":
                    cell = cell + "?"
                row.append(cell)
            rows.append({"element": label(a), "sums": row})
        return {
            "monoid": self.monoid.descriptor(),
            "elements": [label(a) for a in self.elements],
            "provenance": self.provenance,
            "table": rows,
            "flags": self.flag_counts(),
        }


def _native_sum(monoid: PadicTruncationMonoid, a, b, sa, sb):
    """Native entry plus its flag, from the canonical lifts sa, sb of the
    classes a, b.  The flag is a property of the classes: "cap" when the sum
    leaves the window, "precision" when its valuation exceeds both operands'
    (then the class of the sum depends on the lifts chosen)."""
    ctx = monoid.ctx
    s = ctx.add(sa, sb)
    if ctx.is_zero(s):
        return ADJOINED_ZERO, "cap"
    v = ctx.valuation(s)
    if v >= monoid.V:
        return CAPPED, "cap"
    entry = monoid.class_of(ctx.el(s)).payload
    if v > min(a[0], b[0]):
        return entry, "precision"
    return entry, None


def build_addition_table(action: MonoidAction) -> RecoveredRing:
    """Every pairwise sum through the law, with the native cross-check.

    Each entry is recovered from the formal group, then asserted to agree
    with native ring addition of the canonical lifts, classified the same
    way.  Disagreement is a hard error: for a Lubin-Tate action the two
    computations must coincide."""
    monoid = action.monoid
    if not isinstance(monoid, PadicTruncationMonoid):
        raise RecoveryError("full tables need a finite truncation carrier")
    ctx = action.law.ctx
    N = action.law.trunc_degree
    els = sorted(p for p in monoid.payloads() if p != BOTTOM)
    lifts = {p: monoid.canonical_lift(p).payload for p in els}
    top_i = max((i for (i, j) in action.law.F.terms), default=1)
    top_j = max((j for (i, j) in action.law.F.terms), default=1)
    top = max(top_i, top_j)
    powers = {
        p: _series_powers(action.endo_for(monoid.el(p)).series.terms, ctx, N, top)
        for p in els
    }
    table: dict = {}
    flags: dict = {}
    for ia, a in enumerate(els):
        for b in els[ia:]:
            try:
                entry = _truncation_sum_class(
                    action, monoid, _pair_sum_terms(action.law, powers[a], powers[b])
                )
            except NoMatch as exc:
                if not exc.capped:
                    raise
                entry = CAPPED
            native, flag = _native_sum(monoid, a, b, lifts[a], lifts[b])
            if entry != native:
                raise RecoveryError(
                    f"recovered sum at ({monoid.label(a)}, {monoid.label(b)}) "
                    f"disagrees with native addition"
                )
            table[(a, b)] = entry
            table[(b, a)] = entry
            if flag is not None:
                flags[(a, b)] = flag
                flags[(b, a)] = flag
    return RecoveredRing(monoid, table, flags, "recovered", action)


def transport_structure(iso: MonoidMorphism, ring2: RecoveredRing) -> RecoveredRing:
    """Addition pulled back along a multiplicative isomorphism:
    a +' b = iso_inv(iso(a) + iso(b)).  Multiplication is untouched."""
    m1 = iso.source
    if iso.target.key() != ring2.monoid.key():
        raise RecoveryError("isomorphism target does not carry the given table")
    fwd = iso.table
    if fwd is None:
        raise RecoveryError("transport needs a full table morphism")
    inv = {b: a for a, b in fwd.items()}
    els = sorted(p for p in m1.payloads() if p != BOTTOM)
    table: dict = {}
    flags: dict = {}
    for ia, a in enumerate(els):
        fa = fwd[a]
        for b in els[ia:]:
            fpair = (fa, fwd[b])
            entry2 = ring2.table[fpair]
            if entry2 == CAPPED:
                entry = CAPPED
            elif entry2 == ADJOINED_ZERO:
                entry = ADJOINED_ZERO
            else:
                entry = inv[entry2]
            table[(a, b)] = entry
            table[(b, a)] = entry
            flag = ring2.flags.get(fpair)
            if flag is not None:
                flags[(a, b)] = flag
                flags[(b, a)] = flag
    return RecoveredRing(m1, table, flags, "transported")


# ---------------------------------------------------------------------------
# the end-to-end variation demo


@dataclass
class VariantOutcome:
    twist: tuple
    agreements: int
    disagreements: int
    flag_mismatches: int
    both_flagged: int = 0
    sample: list = field(default_factory=list)

    def to_json(self):
        return {
            "twist": list(self.twist),
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "flag_mismatches": self.flag_mismatches,
            "both_flagged": self.both_flagged,
            "sample": self.sample,
        }


@dataclass
class VariationReport:
    p: int
    poly1: tuple
    poly2: tuple
    n: int
    V: int
    trunc_degree: int
    precision: int
    carrier_size: int
    multiplication_identical: bool
    variants: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def all_variants_disagree(self) -> bool:
        return all(
            v.disagreements + v.flag_mismatches > 0 for v in self.variants
        )

    def to_json(self):
        return {
            "p": self.p,
            "poly1": list(self.poly1),
            "poly2": list(self.poly2),
            "n": self.n,
            "V": self.V,
            "degree": self.trunc_degree,
            "precision": self.precision,
            "carrier_size": self.carrier_size,
            "multiplication_identical": self.multiplication_identical,
            "every_variant_disagrees": self.all_variants_disagree,
            "variants": [v.to_json() for v in self.variants],
            "seconds": round(self.seconds, 2),
        }


def _entry_label(m1, entry):
    if entry == CAPPED:
        return "!cap"
    if entry == ADJOINED_ZERO:
        return "0"
    return m1.label(entry)


def _compare_tables(m1, native: RecoveredRing, transported: RecoveredRing,
                    sample_size: int = 10) -> VariantOutcome:
    """Pairs flagged on one side only count as flag mismatches; pairs flagged
    on both sides are set aside (their entries are lift artifacts on both
    carriers).  Unflagged pairs compare entry by entry."""
    els = sorted(p for p in m1.payloads() if p != BOTTOM)
    agreements = disagreements = flag_mismatches = both_flagged = 0
    sample = []
    for ia, a in enumerate(els):
        for b in els[ia:]:
            f1 = native.flags.get((a, b))
            f2 = transported.flags.get((a, b))
            if f1 is not None and f2 is not None:
                both_flagged += 1
                continue
            e1 = native.table[(a, b)]
            e2 = transported.table[(a, b)]
            if f1 is None and f2 is None:
                if e1 == e2:
                    agreements += 1
                    continue
                disagreements += 1
                kind = "entry"
            else:
                flag_mismatches += 1
                kind = "flag"
            if len(sample) < sample_size:
                lbl = m1.label
                sample.append(
                    {
                        "pair": [lbl(a), lbl(b)],
                        "native": _entry_label(m1, e1),
                        "transported": _entry_label(m1, e2),
                        "kind": kind,
                    }
                )
    return VariantOutcome(
        (), agreements, disagreements, flag_mismatches, both_flagged, sample
    )


def variation_demo(p: int, poly1: tuple, poly2: tuple, n: int, V: int,
                   trunc_degree: int = 2, precision: int | None = None,
                   variants: int = 3, verify_actions: bool = True) -> VariationReport:
    """Two ramified extensions, one multiplicative monoid, two additions.

    Pipeline: truncation monoids for both rings; generator-matched
    isomorphisms (several twists); a Lubin-Tate addition table on each side;
    transport of the second table to the first carrier; entry-by-entry
    comparison.  Multiplication is common to native and transported tables
    whenever the matching is multiplicative, which is verified exhaustively.
    """
    t0 = time.time()
    k = precision if precision is not None else n + V + 3
    ctx1 = EisensteinExtension(p, k, tuple(poly1))
    ctx2 = EisensteinExtension(p, k, tuple(poly2))
    m1 = padic_truncation_of(ctx1, n, V)
    m2 = padic_truncation_of(ctx2, n, V)
    d1 = standard_datum(ctx1)
    d2 = standard_datum(ctx2)
    law1 = build_fgl(d1, trunc_degree)
    law2 = build_fgl(d2, trunc_degree)
    a1 = build_action(d1, law1, monoid=m1)
    a2 = build_action(d2, law2, monoid=m2)
    if verify_actions:
        for act in (a1, a2):
            rep = act.verify()
            if not rep.ok:
                raise RecoveryError(
                    f"action verification failed: {rep.violations[0].to_json()}"
                )
    r1 = build_addition_table(a1)
    r2 = build_addition_table(a2)
    report = VariationReport(
        p=p,
        poly1=tuple(poly1),
        poly2=tuple(poly2),
        n=n,
        V=V,
        trunc_degree=trunc_degree,
        precision=k,
        carrier_size=len(m1.payloads()),
        multiplication_identical=True,
    )
    for powers, iso in unit_isomorphism_variants(m1, m2, count=variants):
        iso.verify()  # exhaustive multiplicativity; backs the shared tables
        transported = transport_structure(iso, r2)
        outcome = _compare_tables(m1, r1, transported)
        outcome.twist = powers
        report.variants.append(outcome)
    report.seconds = time.time() - t0
    return report
