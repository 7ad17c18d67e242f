"""Formal group laws at finite truncation, their endomorphisms, and monoid
actions by endomorphisms.

Everything is checked by direct expansion: a law is a two-variable series
F with F = x + y mod degree 2 satisfying unit, commutativity and
associativity identities mod degree N+1; an endomorphism is a one-variable
series e with e(F(x, y)) = F(e(x), e(y)).  Axiom failures report the first
offending monomial in graded-lex order, which is what you want when a
hand-edited series is off by one coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .rings import RingContext, RingElement, RingError, grlex_key
from .series import TruncatedSeries


class LawError(RingError):
    pass


class NonInvertibleDivision(LawError):
    """Logarithm integration hit a denominator that is not a unit."""

    def __init__(self, denominator: int, degree: int, message: str | None = None):
        self.denominator = denominator
        self.degree = degree
        super().__init__(
            message
            or f"division by {denominator} at degree {degree} is not defined here"
        )


@dataclass
class AxiomCheck:
    name: str
    ok: bool
    monomial: tuple | None = None
    delta: str | None = None

    def to_json(self):
        out = {"name": self.name, "ok": self.ok}
        if not self.ok:
            out["monomial"] = list(self.monomial)
            out["delta"] = self.delta
        return out


@dataclass
class AxiomReport:
    checks: list

    @property
    def all_pass(self) -> bool:
        return all(c.ok for c in self.checks)

    def first_failure(self) -> AxiomCheck | None:
        for c in self.checks:
            if not c.ok:
                return c
        return None

    def to_json(self):
        return {"all_pass": self.all_pass, "checks": [c.to_json() for c in self.checks]}


def _first_bad_term(delta: TruncatedSeries):
    terms = delta.sorted_terms()
    exp, c = terms[0]
    return exp, delta.ctx.fmt(c)


def _axiom(name: str, delta: TruncatedSeries) -> AxiomCheck:
    if delta.is_zero():
        return AxiomCheck(name, True)
    exp, c = _first_bad_term(delta)
    return AxiomCheck(name, False, exp, c)


class FormalGroupLaw:
    """A verified-or-reported truncated formal group law."""

    def __init__(self, F: TruncatedSeries, report: AxiomReport | None = None):
        if len(F.variables) != 2:
            raise LawError("a formal group law is a two-variable series")
        self.F = F
        self.ctx = F.ctx
        self.trunc_degree = F.trunc_degree
        self.x, self.y = F.variables
        self.report = report if report is not None else check_axioms_series(F)

    @classmethod
    def from_series(cls, F: TruncatedSeries, require: bool = True) -> "FormalGroupLaw":
        law = cls(F)
        if require and not law.report.all_pass:
            bad = law.report.first_failure()
            raise LawError(
                f"axiom {bad.name!r} fails at monomial {bad.monomial} (delta {bad.delta})"
            )
        return law

    @classmethod
    def additive(cls, ctx: RingContext, N: int) -> "FormalGroupLaw":
        F = TruncatedSeries(ctx, ("x", "y"), N, {(1, 0): 1, (0, 1): 1})
        return cls.from_series(F)

    @classmethod
    def multiplicative(cls, ctx: RingContext, N: int) -> "FormalGroupLaw":
        F = TruncatedSeries(ctx, ("x", "y"), N, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
        return cls.from_series(F)

    def coefficient(self, i: int, j: int) -> RingElement:
        return self.F.coefficient((i, j))

    def one_var(self, series_in_T: TruncatedSeries) -> TruncatedSeries:
        return series_in_T

    def plus(self, a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
        """F(a, b) for two series over the same target variables."""
        return self.F.substitute({self.x: a, self.y: b})

    def __str__(self):
        return str(self.F)

    def to_bundle(self) -> dict:
        return {
            "F": self.F.to_json(),
            "N": self.trunc_degree,
            "axioms": self.report.to_json(),
        }

    @classmethod
    def from_bundle(cls, obj: dict, require: bool = True) -> "FormalGroupLaw":
        F = TruncatedSeries.from_json(obj["F"])
        return cls.from_series(F, require=require)


def check_axioms_series(F: TruncatedSeries) -> AxiomReport:
    """Unit, low-degree shape, commutativity, associativity; first failing
    monomial per axiom in graded-lex order."""
    ctx = F.ctx
    N = F.trunc_degree
    xname, yname = F.variables
    checks = []

    # shape: F = x + y mod degree 2
    shape_terms = {}
    for exp, c in F.terms.items():
        if sum(exp) >= 2:
            continue
        shape_terms[exp] = c
    expected = {(1, 0): ctx.normalize(1), (0, 1): ctx.normalize(1)}
    if N == 0:
        expected = {}
    delta = TruncatedSeries(ctx, F.variables, min(N, 1))
    for exp in set(shape_terms) | set(expected):
        d = ctx.add(shape_terms.get(exp, ctx.normalize(0)),
                    ctx.neg(expected.get(exp, ctx.normalize(0))))
        if not ctx.is_zero(d):
            delta.terms[exp] = d
    checks.append(_axiom("linear_shape", delta))

    T = TruncatedSeries.variable(ctx, ("T",), N, "T")
    zero1 = TruncatedSeries.zero(ctx, ("T",), N)
    checks.append(_axiom("unit_right", F.substitute({xname: T, yname: zero1}) - T))
    checks.append(_axiom("unit_left", F.substitute({xname: zero1, yname: T}) - T))

    swapped = TruncatedSeries(ctx, F.variables, N,
                              {(b, a): c for (a, b), c in F.terms.items()})
    checks.append(_axiom("commutativity", F - swapped))

    vars3 = ("x", "y", "z")
    X = TruncatedSeries.variable(ctx, vars3, N, "x")
    Y = TruncatedSeries.variable(ctx, vars3, N, "y")
    Z = TruncatedSeries.variable(ctx, vars3, N, "z")
    inner_yz = F.substitute({xname: Y, yname: Z})
    left = F.substitute({xname: X, yname: inner_yz})
    inner_xy = F.substitute({xname: X, yname: Y})
    right = F.substitute({xname: inner_xy, yname: Z})
    checks.append(_axiom("associativity", left - right))

    return AxiomReport(checks)


def check_axioms(law: FormalGroupLaw) -> AxiomReport:
    return check_axioms_series(law.F)


def formal_inverse(law: FormalGroupLaw) -> TruncatedSeries:
    """The series i with F(T, i(T)) = 0 mod degree N+1, solved degree by
    degree: the degree-n residual is linear in the new coefficient."""
    ctx = law.ctx
    N = law.trunc_degree
    T = TruncatedSeries.variable(ctx, ("T",), N, "T")
    iota = -T
    for n in range(2, N + 1):
        residual = law.plus(T, iota)
        c = residual.terms.get((n,))
        if c is None:
            continue
        iota = iota - TruncatedSeries(ctx, ("T",), N, {(n,): c})
    final = law.plus(T, iota)
    if not final.is_zero():
        raise LawError("formal inverse did not close; ring too lossy?")
    return iota


def logarithm(law: FormalGroupLaw) -> TruncatedSeries:
    """The strict isomorphism to the additive law, l(T) = T + ...

    l'(T) = 1 / (dF/dy)(T, 0), integrated termwise.  Over a ring where some
    1/n does not exist the integration fails eagerly, naming the blocking
    denominator, unless that coefficient happens to be zero.
    """
    ctx = law.ctx
    N = law.trunc_degree
    if N < 1:
        raise LawError("need truncation degree at least 1")
    dFy = law.F.derivative(law.y)
    T = TruncatedSeries.variable(ctx, ("T",), N, "T")
    zero1 = TruncatedSeries.zero(ctx, ("T",), N)
    u = dFy.substitute({law.x: T, law.y: zero1})
    # the derivative's top slice uses unknown degree-(N+1) data; drop it
    u = u.truncate(max(0, N - 1))
    if u.constant_term() != ctx.one():
        raise LawError("dF/dy(0,0) must be 1 for a formal group law")
    w = u.multiplicative_inverse()
    ell = TruncatedSeries.zero(ctx, ("T",), N)
    for n in range(1, N + 1):
        c = w.terms.get((n - 1,))
        if c is None:
            continue
        try:
            inv_n = ctx.invert(ctx.normalize(n))
        except RingError:
            raise NonInvertibleDivision(n, n) from None
        ell.terms[(n,)] = ctx.mul(c, inv_n)
    # the defining property doubles as a self-check
    both = law.plus(
        TruncatedSeries.variable(ctx, ("x", "y"), N, "x"),
        TruncatedSeries.variable(ctx, ("x", "y"), N, "y"),
    )
    lhs = ell.substitute_single(both)
    rhs = ell.substitute_single(
        TruncatedSeries.variable(ctx, ("x", "y"), N, "x")
    ) + ell.substitute_single(TruncatedSeries.variable(ctx, ("x", "y"), N, "y"))
    if lhs != rhs:
        raise LawError("logarithm does not linearize the law; F is not a group law?")
    return ell


def exponential(log_series: TruncatedSeries) -> TruncatedSeries:
    return log_series.compositional_inverse()


def from_logarithm(f: TruncatedSeries) -> tuple:
    """F(x, y) = g(f(x) + f(y)) for g the reversion of f; f = T mod deg 2.

    Returns (law, g); g is the transporter used for scalar endomorphisms.
    """
    if len(f.variables) != 1:
        raise LawError("a logarithm is a one-variable series")
    ctx = f.ctx
    N = f.trunc_degree
    if not f.constant_term().is_zero() or f.coefficient((1,)) != ctx.one():
        raise LawError("need f = T mod degree 2")
    g = f.compositional_inverse()
    X = TruncatedSeries.variable(ctx, ("x", "y"), N, "x")
    Y = TruncatedSeries.variable(ctx, ("x", "y"), N, "y")
    fx = f.substitute_single(X)
    fy = f.substitute_single(Y)
    F = g.substitute_single(fx + fy)
    return FormalGroupLaw.from_series(F), g


class FglEndomorphism:
    """A one-variable series commuting with the group law."""

    def __init__(self, law: FormalGroupLaw, series: TruncatedSeries):
        if len(series.variables) != 1:
            raise LawError("endomorphisms are one-variable series")
        if not series.constant_term().is_zero():
            raise LawError("endomorphisms fix 0")
        if series.ctx.key() != law.ctx.key():
            raise LawError("endomorphism over a different ring than its law")
        self.law = law
        self.series = series

    def linear_coefficient(self) -> RingElement:
        return self.series.coefficient((1,))

    def defect(self) -> TruncatedSeries:
        """e(F(x,y)) - F(e(x), e(y)); zero iff this is an endomorphism."""
        law = self.law
        e = self.series
        lhs = e.substitute_single(law.F)
        ex = e.substitute_single(
            TruncatedSeries.variable(law.ctx, law.F.variables, law.trunc_degree, law.x)
        )
        ey = e.substitute_single(
            TruncatedSeries.variable(law.ctx, law.F.variables, law.trunc_degree, law.y)
        )
        return lhs - law.plus(ex, ey)

    def verify(self) -> None:
        d = self.defect()
        if not d.is_zero():
            exp, c = _first_bad_term(d)
            raise LawError(f"endomorphism law fails at {exp} (delta {c})")

    def compose(self, other: "FglEndomorphism") -> "FglEndomorphism":
        """self after other."""
        return FglEndomorphism(
            self.law, self.series.substitute_single(other.series)
        )

    def __eq__(self, other):
        return (
            isinstance(other, FglEndomorphism)
            and self.law.F == other.law.F
            and self.series == other.series
        )

    def __str__(self):
        return str(self.series)


def endomorphism_from_logarithm(
    law: FormalGroupLaw,
    log_series: TruncatedSeries,
    exp_series: TruncatedSeries,
    scalar: RingElement,
) -> FglEndomorphism:
    """[m](T) = g(m * f(T)); multiplication by m through the logarithm."""
    e = exp_series.substitute_single(log_series.scale(scalar))
    endo = FglEndomorphism(law, e)
    endo.verify()
    return endo


def isomorphism_via_logs(f1: FormalGroupLaw, f2: FormalGroupLaw) -> TruncatedSeries:
    """Strict isomorphism h = exp_2(log_1(T)), with h(F1) = F2(h, h) checked."""
    l1 = logarithm(f1)
    l2 = logarithm(f2)
    h = exponential(l2).substitute_single(l1)
    lhs = h.substitute_single(f1.F)
    hx = h.substitute_single(
        TruncatedSeries.variable(f1.ctx, f1.F.variables, f1.trunc_degree, f1.x)
    )
    hy = h.substitute_single(
        TruncatedSeries.variable(f1.ctx, f1.F.variables, f1.trunc_degree, f1.y)
    )
    rhs = f2.plus(hx, hy)
    if lhs != rhs:
        raise LawError("log-transport did not produce an isomorphism")
    return h


# ---------------------------------------------------------------------------
# monoid actions


def congruent_payloads(ctx: RingContext, a, b, pi_precision: int | None) -> bool:
    """Exact equality, or valuation(a - b) >= pi_precision when given."""
    if pi_precision is None:
        return a == b
    if pi_precision <= 0:
        return True
    diff = ctx.add(a, ctx.neg(b))
    return ctx.valuation(diff) >= pi_precision


def series_congruent(
    s1: TruncatedSeries, s2: TruncatedSeries, tolerance=None
) -> tuple | None:
    """First (exponent, delta) where the series differ beyond tolerance, else
    None.  tolerance maps a total degree to a pi-adic precision or None."""
    ctx = s1.ctx
    exps = set(s1.terms) | set(s2.terms)
    zero = ctx.normalize(0)
    for exp in sorted(exps, key=grlex_key):
        tol = tolerance(sum(exp)) if tolerance else None
        a = s1.terms.get(exp, zero)
        b = s2.terms.get(exp, zero)
        if not congruent_payloads(ctx, a, b, tol):
            return exp, ctx.fmt(ctx.add(a, ctx.neg(b)))
    return None


@dataclass
class ActionViolation:
    kind: str
    where: str
    monomial: tuple
    delta: str

    def to_json(self):
        return {
            "kind": self.kind,
            "where": self.where,
            "monomial": list(self.monomial),
            "delta": self.delta,
        }


@dataclass
class ActionReport:
    violations: list = field(default_factory=list)
    checked_pairs: int = 0
    skipped_pairs: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self):
        return {
            "ok": self.ok,
            "checked_pairs": self.checked_pairs,
            "skipped_pairs": self.skipped_pairs,
            "violations": [v.to_json() for v in self.violations],
        }


class MonoidAction:
    """A commutative monoid acting on a law by endomorphisms.

    assignment maps monoid element payloads to FglEndomorphism.  For free
    monoids only the generators are assigned; composite elements get the
    composition in generator order (earlier generators applied first).  For
    finite monoids every non-absorbing element must be assigned.
    """

    def __init__(self, monoid, law: FormalGroupLaw, assignment: dict,
                 composition_tolerance=None):
        self.monoid = monoid
        self.law = law
        self.assignment = dict(assignment)
        self.composition_tolerance = composition_tolerance
        self._endo_cache: dict = {}

    def endo_for(self, elt) -> FglEndomorphism:
        payload = elt.payload if hasattr(elt, "payload") else elt
        if payload in self._endo_cache:
            return self._endo_cache[payload]
        if payload in self.assignment:
            endo = self.assignment[payload]
        else:
            from .monoids import FreeCommutativeMonoid

            if not isinstance(self.monoid, FreeCommutativeMonoid):
                raise LawError(f"no endomorphism assigned for {payload}")
            ctx = self.law.ctx
            N = self.law.trunc_degree
            series = TruncatedSeries.variable(ctx, ("T",), N, "T")
            for gname, e in zip(self.monoid.generators, payload):
                gen_payload = self.monoid.generator(gname).payload
                gen_endo = self.assignment[gen_payload]
                for _ in range(e):
                    series = gen_endo.series.substitute_single(series)
            endo = FglEndomorphism(self.law, series)
        self._endo_cache[payload] = endo
        return endo

    def alpha1(self, elt) -> RingElement:
        return self.endo_for(elt).linear_coefficient()

    def verify(self) -> ActionReport:
        return verify_action(self)

    def to_bundle(self) -> dict:
        return {
            "monoid": self.monoid.descriptor(),
            "law": self.law.to_bundle(),
            "tolerance": "exact" if self.composition_tolerance is None
            else "truncation",
            "endomorphisms": [
                {
                    "element": self.monoid.label(p),
                    "payload": p,
                    "series": e.series.to_json(),
                }
                for p, e in sorted(self.assignment.items(), key=lambda t: str(t[0]))
            ],
        }


def verify_action(action: MonoidAction) -> ActionReport:
    """Identity, endomorphism law, composition, commutation.

    Finite monoids get every pair checked; free monoids get all generator
    pairs.  Pairs whose product is absorbing (no assignment) are skipped and
    counted.  composition_tolerance, when set, relaxes pair comparisons to a
    per-degree pi-adic precision; the endomorphism law itself stays exact.
    """
    from .monoids import FreeCommutativeMonoid

    report = ActionReport()
    law = action.law
    ctx = law.ctx
    N = law.trunc_degree
    ident_series = TruncatedSeries.variable(ctx, ("T",), N, "T")

    monoid = action.monoid
    id_endo = action.endo_for(monoid.identity())
    if id_endo.series != ident_series:
        bad = series_congruent(id_endo.series, ident_series)
        report.violations.append(
            ActionViolation("identity", "1", bad[0], bad[1])
        )

    if isinstance(monoid, FreeCommutativeMonoid):
        pairs = []
        gens = [monoid.generator(g) for g in monoid.generators]
        singles = gens
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                pairs.append((a, b))
    else:
        singles = [e for e in monoid.elements() if e.payload in action.assignment]
        pairs = [(a, b) for a in singles for b in singles]

    for a in singles:
        endo = action.endo_for(a)
        defect = endo.defect()
        if not defect.is_zero():
            exp, c = _first_bad_term(defect)
            report.violations.append(
                ActionViolation("endomorphism_law", a.label(), exp, c)
            )

    for a, b in pairs:
        ab = a * b
        ea, eb = action.endo_for(a), action.endo_for(b)
        comp = ea.series.substitute_single(eb.series)
        if isinstance(monoid, FreeCommutativeMonoid):
            other = eb.series.substitute_single(ea.series)
            bad = series_congruent(comp, other)
            if bad:
                report.violations.append(
                    ActionViolation("commutation", f"{a.label()},{b.label()}", *bad)
                )
            report.checked_pairs += 1
            continue
        if ab.payload not in action.assignment:
            report.skipped_pairs += 1
            continue
        eab = action.endo_for(ab)
        tol = None
        if action.composition_tolerance is not None:
            tol = action.composition_tolerance(a, b, ab)
        bad = series_congruent(comp, eab.series, tol)
        if bad:
            report.violations.append(
                ActionViolation(
                    "composition", f"{a.label()}*{b.label()}={ab.label()}", *bad
                )
            )
        report.checked_pairs += 1
    return report


def action_to_bundle(action: MonoidAction) -> dict:
    return action.to_bundle()


def _tuplify(obj):
    if isinstance(obj, list):
        return tuple(_tuplify(v) for v in obj)
    return obj


def action_from_bundle(obj: dict, require: bool = True) -> MonoidAction:
    """Rebuild an action from its bundle; require=False defers all
    verification to an explicit check."""
    from .monoids import PadicTruncationMonoid, monoid_from_descriptor

    monoid = monoid_from_descriptor(obj["monoid"])
    law = FormalGroupLaw.from_bundle(obj["law"], require=require)
    assignment = {}
    for entry in obj["endomorphisms"]:
        payload = _tuplify(entry["payload"])
        series = TruncatedSeries.from_json(entry["series"], law.ctx)
        assignment[payload] = FglEndomorphism(law, series)
    tolerance = None
    if obj.get("tolerance") == "truncation" and isinstance(monoid, PadicTruncationMonoid):
        from .lubin_tate import truncation_tolerance

        tolerance = truncation_tolerance(monoid)
    return MonoidAction(monoid, law, assignment, composition_tolerance=tolerance)
