"""Truncated multivariate power series over an exact ring context.

A series keeps every term of total degree <= trunc_degree and forgets the
rest; all operations re-truncate so the invariant holds by construction.
Terms are a dict from exponent tuples to nonzero coefficient payloads of the
ring context.  One to three variables is all the formal group machinery
needs, and substitution only accepts zero-constant-term arguments so that
composition commutes with truncation.
"""
from __future__ import annotations

from .rings import RingContext, RingElement, RingError, grlex_key


class SeriesError(RingError):
    pass


class TruncatedSeries:
    __slots__ = ("ctx", "variables", "trunc_degree", "terms")

    def __init__(self, ctx: RingContext, variables, trunc_degree: int, terms=None):
        variables = tuple(variables)
        if not 1 <= len(variables) <= 3:
            raise SeriesError("series support one to three variables")
        if len(set(variables)) != len(variables):
            raise SeriesError("variable names must be distinct")
        if trunc_degree < 0:
            raise SeriesError("truncation degree must be non-negative")
        self.ctx = ctx
        self.variables = variables
        self.trunc_degree = trunc_degree
        self.terms = {}
        if terms:
            for exp, c in (terms.items() if isinstance(terms, dict) else terms):
                exp = tuple(exp)
                if len(exp) != len(variables):
                    raise SeriesError("exponent arity mismatch")
                if any(e < 0 for e in exp):
                    raise SeriesError("negative exponent")
                if sum(exp) > trunc_degree:
                    continue
                c = ctx.normalize(c.payload if isinstance(c, RingElement) else c)
                if not ctx.is_zero(c):
                    if exp in self.terms:
                        s = ctx.add(self.terms[exp], c)
                        if ctx.is_zero(s):
                            del self.terms[exp]
                        else:
                            self.terms[exp] = s
                    else:
                        self.terms[exp] = c

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ctx, variables, trunc_degree):
        return cls(ctx, variables, trunc_degree)

    @classmethod
    def constant(cls, ctx, variables, trunc_degree, value):
        s = cls(ctx, variables, trunc_degree)
        payload = value.payload if isinstance(value, RingElement) else ctx.normalize(value)
        if not ctx.is_zero(payload):
            s.terms[(0,) * len(s.variables)] = payload
        return s

    @classmethod
    def variable(cls, ctx, variables, trunc_degree, name):
        variables = tuple(variables)
        if name not in variables:
            raise SeriesError(f"unknown variable {name!r}")
        s = cls(ctx, variables, trunc_degree)
        if trunc_degree >= 1:
            exp = tuple(1 if v == name else 0 for v in variables)
            s.terms[exp] = ctx.normalize(1)
        return s

    def _fresh(self, terms=None) -> "TruncatedSeries":
        s = TruncatedSeries(self.ctx, self.variables, self.trunc_degree)
        if terms:
            s.terms = terms
        return s

    def _check_compatible(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise SeriesError("expected a TruncatedSeries")
        if self.ctx.key() != other.ctx.key():
            raise SeriesError("series over different rings")
        if self.variables != other.variables:
            raise SeriesError(f"variable mismatch: {self.variables} vs {other.variables}")
        if self.trunc_degree != other.trunc_degree:
            raise SeriesError("truncation degrees differ")

    # ---- inspection ---------------------------------------------------

    def coefficient(self, exp) -> RingElement:
        exp = tuple(exp)
        return RingElement(self.ctx, self.terms.get(exp, self.ctx.normalize(0)))

    def constant_term(self) -> RingElement:
        return self.coefficient((0,) * len(self.variables))

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.ctx.key() == other.ctx.key()
            and self.variables == other.variables
            and self.trunc_degree == other.trunc_degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ctx.key(), self.variables, self.trunc_degree,
                     tuple(self.sorted_terms())))

    # ---- ring operations ----------------------------------------------

    def __add__(self, other):
        self._check_compatible(other)
        ctx = self.ctx
        acc = dict(self.terms)
        for exp, c in other.terms.items():
            if exp in acc:
                s = ctx.add(acc[exp], c)
                if ctx.is_zero(s):
                    del acc[exp]
                else:
                    acc[exp] = s
            else:
                acc[exp] = c
        return self._fresh(acc)

    def __neg__(self):
        ctx = self.ctx
        return self._fresh({e: ctx.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, RingElement)):
            return self.scale(other)
        self._check_compatible(other)
        ctx = self.ctx
        N = self.trunc_degree
        acc: dict = {}
        by_deg_a = self._by_degree()
        by_deg_b = other._by_degree()
        for da, bucket_a in by_deg_a.items():
            for db, bucket_b in by_deg_b.items():
                if da + db > N:
                    continue
                for ea, ca in bucket_a:
                    for eb, cb in bucket_b:
                        exp = tuple(x + y for x, y in zip(ea, eb))
                        c = ctx.mul(ca, cb)
                        if exp in acc:
                            acc[exp] = ctx.add(acc[exp], c)
                        else:
                            acc[exp] = c
        acc = {e: c for e, c in acc.items() if not ctx.is_zero(c)}
        return self._fresh(acc)

    __rmul__ = __mul__

    def _by_degree(self):
        out: dict = {}
        for exp, c in self.terms.items():
            out.setdefault(sum(exp), []).append((exp, c))
        return out

    def scale(self, value) -> "TruncatedSeries":
        ctx = self.ctx
        payload = value.payload if isinstance(value, RingElement) else ctx.normalize(value)
        if ctx.is_zero(payload):
            return self._fresh()
        acc = {}
        for exp, c in self.terms.items():
            p = ctx.mul(payload, c)
            if not ctx.is_zero(p):
                acc[exp] = p
        return self._fresh(acc)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise SeriesError("only non-negative integer powers")
        result = TruncatedSeries.constant(self.ctx, self.variables, self.trunc_degree, 1)
        for _ in range(n):
            result = result * self
        return result

    def truncate(self, new_degree: int) -> "TruncatedSeries":
        if new_degree > self.trunc_degree:
            raise SeriesError("cannot raise the truncation degree of computed data")
        return TruncatedSeries(self.ctx, self.variables, new_degree, dict(self.terms))

    def map_coefficients(self, fn, new_ctx=None) -> "TruncatedSeries":
        """Apply a payload map coefficient-wise, optionally into another ring."""
        ctx = new_ctx or self.ctx
        out = TruncatedSeries(ctx, self.variables, self.trunc_degree)
        for exp, c in self.terms.items():
            p = fn(c)
            p = ctx.normalize(p.payload if isinstance(p, RingElement) else p)
            if not ctx.is_zero(p):
                out.terms[exp] = p
        return out

    def rename(self, new_variables) -> "TruncatedSeries":
        """Same terms, different variable names (arity must match)."""
        new_variables = tuple(new_variables)
        if len(new_variables) != len(self.variables):
            raise SeriesError("arity change needs embed, not rename")
        return TruncatedSeries(self.ctx, new_variables, self.trunc_degree, dict(self.terms))

    def embed(self, new_variables) -> "TruncatedSeries":
        """View this series inside a superset variable list, matching by name."""
        new_variables = tuple(new_variables)
        positions = []
        for v in self.variables:
            if v not in new_variables:
                raise SeriesError(f"variable {v!r} missing from target list")
            positions.append(new_variables.index(v))
        out = TruncatedSeries(self.ctx, new_variables, self.trunc_degree)
        width = len(new_variables)
        for exp, c in self.terms.items():
            nexp = [0] * width
            for pos, e in zip(positions, exp):
                nexp[pos] = e
            out.terms[tuple(nexp)] = c
        return out

    # ---- calculus ------------------------------------------------------

    def derivative(self, name: str) -> "TruncatedSeries":
        """Formal partial derivative; the result is still carried at the same
        truncation degree (its top slice is genuinely known)."""
        if name not in self.variables:
            raise SeriesError(f"unknown variable {name!r}")
        idx = self.variables.index(name)
        ctx = self.ctx
        out = TruncatedSeries(ctx, self.variables, self.trunc_degree)
        for exp, c in self.terms.items():
            e = exp[idx]
            if e == 0:
                continue
            nexp = exp[:idx] + (e - 1,) + exp[idx + 1:]
            p = ctx.mul(ctx.normalize(e), c)
            if not ctx.is_zero(p):
                if nexp in out.terms:
                    p = ctx.add(out.terms[nexp], p)
                out.terms[nexp] = p
        return out

    # ---- composition ----------------------------------------------------

    def substitute(self, assignments: dict) -> "TruncatedSeries":
        """Plug a series in for each used variable.

        All assigned series must live in one common target context/variable
        list/truncation degree and have zero constant term; that makes the
        degree-N result depend only on degree-N data on both sides.
        """
        used = {v for exp in self.terms for v, e in zip(self.variables, exp) if e}
        targets = [assignments[v] for v in self.variables if v in assignments]
        missing = [v for v in used if v not in assignments]
        if missing:
            raise SeriesError(f"missing assignment for used variable {missing[0]!r}")
        if not targets:
            # constant-only series: keep it in place
            return self._fresh(dict(self.terms))
        model = targets[0]
        for t in targets[1:]:
            model._check_compatible(t)
        if model.ctx.key() != self.ctx.key():
            raise SeriesError("substitution targets live over a different ring")
        for v in used:
            if not assignments[v].constant_term().is_zero():
                raise SeriesError(f"assignment for {v!r} has a nonzero constant term")

        ctx = model.ctx
        power_cache: dict = {}

        def power(v: str, n: int) -> TruncatedSeries:
            key = (v, n)
            if key not in power_cache:
                if n == 0:
                    power_cache[key] = TruncatedSeries.constant(
                        ctx, model.variables, model.trunc_degree, 1)
                else:
                    power_cache[key] = power(v, n - 1) * assignments[v]
            return power_cache[key]

        acc: dict = {}
        zero_exp = (0,) * len(model.variables)
        for exp, c in self.terms.items():
            if sum(exp) > model.trunc_degree:
                continue  # assignments have zero constant term, lands beyond N
            piece = None
            for v, e in zip(self.variables, exp):
                if e == 0:
                    continue
                factor = power(v, e)
                piece = factor if piece is None else piece * factor
            if piece is None:
                cur = acc.get(zero_exp)
                acc[zero_exp] = c if cur is None else ctx.add(cur, c)
                continue
            for pexp, pc in piece.terms.items():
                val = ctx.mul(c, pc)
                cur = acc.get(pexp)
                acc[pexp] = val if cur is None else ctx.add(cur, val)
        out = TruncatedSeries(ctx, model.variables, model.trunc_degree)
        out.terms = {e: c for e, c in acc.items() if not ctx.is_zero(c)}
        return out

    def substitute_single(self, target: "TruncatedSeries") -> "TruncatedSeries":
        """Composition for one-variable series: self(target)."""
        if len(self.variables) != 1:
            raise SeriesError("substitute_single needs a one-variable series")
        return self.substitute({self.variables[0]: target})

    def compositional_inverse(self) -> "TruncatedSeries":
        """The reversion g with g(f(T)) = T = f(g(T)) mod degree N+1.

        Triangular solve: the degree-n coefficient of g(f(T)) is
        b_n * a_1^n plus terms using only b_k for k < n, so each b_n is
        determined by one division by a_1^n.
        """
        if len(self.variables) != 1:
            raise SeriesError("compositional inverse needs a one-variable series")
        if not self.constant_term().is_zero():
            raise SeriesError("compositional inverse needs zero constant term")
        ctx = self.ctx
        N = self.trunc_degree
        a1 = self.coefficient((1,))
        a1_inv = a1.inverse()
        g = TruncatedSeries.zero(ctx, self.variables, N)
        g.terms[(1,)] = a1_inv.payload
        if N >= 2:
            # cache powers of f for the running recomposition
            fpow = {1: self}
            for n in range(2, N + 1):
                fpow[n] = fpow[n - 1] * self
            a1_inv_pow = a1_inv
            for n in range(2, N + 1):
                a1_inv_pow = a1_inv_pow * a1_inv
                acc = ctx.normalize(0)
                for k in range(1, n):
                    bk = g.terms.get((k,))
                    if bk is None:
                        continue
                    ck = fpow[k].terms.get((n,))
                    if ck is None:
                        continue
                    acc = ctx.add(acc, ctx.mul(bk, ck))
                if not ctx.is_zero(acc):
                    bn = ctx.mul(ctx.neg(acc), a1_inv_pow.payload)
                    g.terms[(n,)] = bn
        check = g.substitute_single(self)
        ident = TruncatedSeries.variable(ctx, self.variables, N, self.variables[0])
        if check != ident:
            raise SeriesError("reversion failed to verify; coefficient ring too lossy?")
        return g

    def multiplicative_inverse(self) -> "TruncatedSeries":
        """1/f for f with unit constant term, by triangular solve."""
        ctx = self.ctx
        c0 = self.constant_term()
        c0_inv = c0.inverse()
        N = self.trunc_degree
        inv = TruncatedSeries.constant(ctx, self.variables, N, c0_inv)
        # w_{d} determined degree by degree from (f * w)_d = 0 for d >= 1
        f_by_deg = self._by_degree()
        for d in range(1, N + 1):
            acc: dict = {}
            inv_by_deg = inv._by_degree()
            for df, bucket_f in f_by_deg.items():
                if df == 0 or df > d:
                    continue
                bucket_w = inv_by_deg.get(d - df, [])
                for ea, ca in bucket_f:
                    for eb, cb in bucket_w:
                        exp = tuple(x + y for x, y in zip(ea, eb))
                        c = ctx.mul(ca, cb)
                        if exp in acc:
                            acc[exp] = ctx.add(acc[exp], c)
                        else:
                            acc[exp] = c
            for exp, c in acc.items():
                if ctx.is_zero(c):
                    continue
                corr = ctx.neg(ctx.mul(c, c0_inv.payload))
                cur = inv.terms.get(exp)
                inv.terms[exp] = corr if cur is None else ctx.add(cur, corr)
                if ctx.is_zero(inv.terms[exp]):
                    del inv.terms[exp]
        product = self * inv
        if product != TruncatedSeries.constant(ctx, self.variables, N, 1):
            raise SeriesError("series inversion failed to verify")
        return inv

    # ---- encoding -------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        # earlier variables first within a degree, so x + y rather than y + x
        display = sorted(self.terms.items(),
                         key=lambda t: (sum(t[0]), tuple(-e for e in t[0])))
        for exp, c in display:
            mono = []
            for name, e in zip(self.variables, exp):
                if e == 1:
                    mono.append(name)
                elif e > 1:
                    mono.append(f"{name}^{e}")
            cs = self.ctx.fmt(c)
            body = "*".join(mono)
            if not body:
                parts.append(cs)
            elif cs == "1":
                parts.append(body)
            elif cs == "-1":
                parts.append(f"-{body}")
            else:
                needs_wrap = ("+" in cs) or ("-" in cs[1:]) or (" " in cs)
                parts.append((f"({cs})" if needs_wrap else cs) + "*" + body)
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "ring": self.ctx.descriptor(),
            "vars": list(self.variables),
            "N": self.trunc_degree,
            "terms": [
                {"exp": list(exp), "coeff": self.ctx.value_to_json(c)}
                for exp, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict, ctx: RingContext | None = None) -> "TruncatedSeries":
        from .rings import context_from_descriptor

        if ctx is None:
            ctx = context_from_descriptor(obj["ring"])
        out = cls(ctx, tuple(obj["vars"]), obj["N"])
        for t in obj["terms"]:
            exp = tuple(t["exp"])
            c = ctx.value_from_json(t["coeff"])
            if sum(exp) <= out.trunc_degree and not ctx.is_zero(c):
                out.terms[exp] = c
        return out
