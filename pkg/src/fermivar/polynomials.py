"""Sparse exact multivariate polynomial and Laurent polynomial arithmetic.

Two value types:

* :class:`MultiPoly` -- a polynomial with nonnegative exponent vectors as
  dictionary keys and exact scalar coefficients (mpq or GaussianRational).
  No zero coefficient is ever stored; the zero polynomial has an empty
  term map.

* :class:`LaurentPoly` -- ``z^shift * core`` where ``core`` is a
  MultiPoly and ``shift`` is an integer vector.  Canonical form: no
  variable divides the core (the shift absorbs every monomial factor),
  so the representation of a value is unique.  The spectral variable
  ``lambda`` is never shifted.

The canonical text form (terms sorted lexicographically by exponent
vector) is shared by golden tests and the JSON reports.
"""

from __future__ import annotations

from operator import add as _add, sub as _sub

from .rationals import (
    GaussianRational,
    as_scalar,
    format_scalar,
    maybe_real,
    mpq,
    scalar_to_complex,
)

LAMBDA = "lambda"          # spectral variable: polynomial degree only, never shifted


def zvars(d: int) -> tuple[str, ...]:
    return tuple(f"z{j + 1}" for j in range(d))


def zl_vars(d: int) -> tuple[str, ...]:
    return zvars(d) + (LAMBDA,)


class MultiPoly:
    """Sparse polynomial over Q(i) with exact arithmetic."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        nv = len(self.vars)
        clean: dict = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nv:
                    raise ValueError(f"exponent {e} does not match {self.vars}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent {e} in MultiPoly")
                c = as_scalar(c)
                if c:
                    clean[e] = c
        self.terms = clean

    @classmethod
    def _raw(cls, variables, terms):
        # internal fast path: terms already clean (no zeros, tuple keys)
        p = object.__new__(cls)
        p.vars = variables
        p.terms = terms
        return p

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables, c):
        variables = tuple(variables)
        c = as_scalar(c)
        if not c:
            return cls._raw(variables, {})
        return cls._raw(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables, exps, c=1):
        variables = tuple(variables)
        c = as_scalar(c)
        if not c:
            return cls._raw(variables, {})
        e = tuple(exps)
        if len(e) != len(variables) or any(x < 0 for x in e):
            raise ValueError(f"bad exponent vector {e}")
        return cls._raw(variables, {e: c})

    @classmethod
    def variable(cls, variables, name):
        variables = tuple(variables)
        i = variables.index(name)
        e = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls._raw(variables, {e: mpq(1)})

    # -- structure -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        """The scalar value of a constant polynomial."""
        if not self.terms:
            return mpq(0)
        [(e, c)] = self.terms.items()
        if any(e):
            raise ValueError("polynomial is not constant")
        return c

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise ValueError(f"unknown variable {var!r} (have {self.vars})") from None

    def degree_in(self, var: str) -> int:
        """Largest exponent of ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        i = self._index(var)
        return max(e[i] for e in self.terms)

    def min_degree_in(self, var: str) -> int:
        if not self.terms:
            return 0
        i = self._index(var)
        return min(e[i] for e in self.terms)

    def total_degree(self, variables=None) -> int:
        """Max total degree over the given variables (default: all)."""
        if not self.terms:
            return -1
        if variables is None:
            idx = range(len(self.vars))
        else:
            idx = [self._index(v) for v in variables]
        return max(sum(e[i] for i in idx) for e in self.terms)

    def uses(self, var: str) -> bool:
        i = self._index(var)
        return any(e[i] for e in self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.vars != other.vars:
            raise ValueError(f"variable sets differ: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            return self + MultiPoly.constant(self.vars, other)
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for e, c in b.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly._raw(self.vars, {})
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(map(_add, e1, e2))
                s = get(e)
                if s is None:
                    out[e] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return MultiPoly._raw(self.vars, out)

    __rmul__ = __mul__

    def scale(self, c):
        c = as_scalar(c)
        if not c:
            return MultiPoly._raw(self.vars, {})
        return MultiPoly._raw(self.vars, {e: maybe_real(k * c) for e, k in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a MultiPoly")
        result = MultiPoly.constant(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def derivative(self, var: str) -> "MultiPoly":
        i = self._index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                nc = c * k
                s = out.get(ne)
                out[ne] = nc if s is None else s + nc
        return MultiPoly._raw(self.vars, {e: c for e, c in out.items() if c})

    # -- evaluation / substitution ------------------------------------------

    def _pow_tables(self, values):
        maxe = [0] * len(self.vars)
        for e in self.terms:
            for i, x in enumerate(e):
                if x > maxe[i]:
                    maxe[i] = x
        tables = []
        for i, v in enumerate(values):
            t = [1]
            for _ in range(maxe[i]):
                t.append(t[-1] * v)
            tables.append(t)
        return tables

    def evaluate(self, values):
        """Exact evaluation at a full point (sequence ordered like vars)."""
        values = [as_scalar(v) for v in values]
        if len(values) != len(self.vars):
            raise ValueError("wrong number of values")
        tables = self._pow_tables(values)
        acc = mpq(0)
        for e, c in self.terms.items():
            t = c
            for i, x in enumerate(e):
                if x:
                    t = t * tables[i][x]
            acc = acc + t
        return maybe_real(acc)

    def eval_complex(self, values) -> complex:
        """Floating evaluation at a complex point."""
        values = [complex(v) for v in values]
        tables = self._pow_tables(values)
        acc = 0j
        for e, c in self.terms.items():
            t = scalar_to_complex(c)
            for i, x in enumerate(e):
                if x:
                    t = t * tables[i][x]
            acc += t
        return acc

    def eval_partial(self, var: str, value) -> "MultiPoly":
        """Substitute an exact scalar for one variable."""
        i = self._index(var)
        value = as_scalar(value)
        maxe = self.degree_in(var)
        table = [mpq(1)]
        for _ in range(max(maxe, 0)):
            table.append(table[-1] * value)
        out: dict = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            nc = c * table[k] if k else c
            s = out.get(ne)
            out[ne] = nc if s is None else s + nc
        return MultiPoly._raw(self.vars, {e: maybe_real(c) for e, c in out.items() if c})

    def substitute(self, var: str, repl: "MultiPoly") -> "MultiPoly":
        """Substitute a polynomial for one variable (Horner scheme)."""
        self._check(repl)
        i = self._index(var)
        by_deg: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            by_deg.setdefault(k, {})[ne] = c
        if not by_deg:
            return MultiPoly.zero(self.vars)
        result = MultiPoly.zero(self.vars)
        for k in range(max(by_deg), -1, -1):
            result = result * repl
            layer = by_deg.get(k)
            if layer:
                result = result + MultiPoly._raw(self.vars, layer)
        return result

    # -- exponent remapping ---------------------------------------------------

    def stretch(self, factors) -> "MultiPoly":
        """Replace each variable v_j by v_j**factors[j]."""
        factors = tuple(factors)
        if len(factors) != len(self.vars):
            raise ValueError("one factor per variable required")
        out = {tuple(x * f for x, f in zip(e, factors)): c for e, c in self.terms.items()}
        return MultiPoly._raw(self.vars, out)

    def unstretch(self, divisors) -> "MultiPoly":
        """Inverse of :meth:`stretch`; errors on a non-divisible exponent."""
        divisors = tuple(divisors)
        out = {}
        for e, c in self.terms.items():
            ne = []
            for i, (x, q) in enumerate(zip(e, divisors)):
                if x % q:
                    raise ValueError(
                        f"exponent {x} of {self.vars[i]} in term {self._term_text(e, c)} "
                        f"is not divisible by {q}"
                    )
                ne.append(x // q)
            out[tuple(ne)] = c
        return MultiPoly._raw(self.vars, out)

    def with_vars(self, new_vars) -> "MultiPoly":
        """Re-express over a different variable tuple.

        Dropped variables must not occur; added variables get exponent 0.
        """
        new_vars = tuple(new_vars)
        pos = {v: i for i, v in enumerate(new_vars)}
        mapping = []
        for i, v in enumerate(self.vars):
            j = pos.get(v)
            if j is None and self.uses(v):
                raise ValueError(f"cannot drop live variable {v!r}")
            mapping.append(j)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vars)
            for i, x in enumerate(e):
                if x:
                    ne[mapping[i]] = x
            out[tuple(ne)] = c
        return MultiPoly._raw(new_vars, out)

    # -- univariate views -------------------------------------------------------

    def coeffs_in(self, var: str) -> list["MultiPoly"]:
        """Ascending coefficient list w.r.t. ``var`` (coefficients keep the
        full variable set with the exponent of ``var`` zeroed)."""
        i = self._index(var)
        n = self.degree_in(var)
        if n < 0:
            return []
        buckets: list[dict] = [dict() for _ in range(n + 1)]
        for e, c in self.terms.items():
            ne = e[:i] + (0,) + e[i + 1:]
            buckets[e[i]][ne] = c
        return [MultiPoly._raw(self.vars, b) for b in buckets]

    @classmethod
    def from_coeffs_in(cls, variables, var, coeffs) -> "MultiPoly":
        variables = tuple(variables)
        i = variables.index(var)
        out: dict = {}
        for k, p in enumerate(coeffs):
            if isinstance(p, MultiPoly):
                for e, c in p.terms.items():
                    out[e[:i] + (e[i] + k,) + e[i + 1:]] = c
            else:
                c = as_scalar(p)
                if c:
                    e = [0] * len(variables)
                    e[i] = k
                    out[tuple(e)] = c
        return cls._raw(variables, out)

    def to_univariate(self, var: str) -> list:
        """Dense ascending scalar coefficients; other variables must be absent."""
        i = self._index(var)
        n = self.degree_in(var)
        coeffs = [mpq(0)] * (n + 1)
        for e, c in self.terms.items():
            if any(x for j, x in enumerate(e) if j != i):
                raise ValueError(f"polynomial is not univariate in {var!r}")
            coeffs[e[i]] = c
        return coeffs

    # -- exact division ----------------------------------------------------------

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Exact polynomial division; raises ValueError if not divisible."""
        self._check(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero:
            return MultiPoly.zero(self.vars)
        dlead = max(divisor.terms)
        dlc = divisor.terms[dlead]
        dtail = [(e, c) for e, c in divisor.terms.items() if e != dlead]
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e = max(rem)
            c = rem.pop(e)
            qe = tuple(map(_sub, e, dlead))
            if any(x < 0 for x in qe):
                raise ValueError("not an exact polynomial division")
            qc = maybe_real(c / dlc)
            quot[qe] = qc
            for e2, c2 in dtail:
                ne = tuple(map(_add, qe, e2))
                s = rem.get(ne)
                if s is None:
                    rem[ne] = -qc * c2
                else:
                    s = s - qc * c2
                    if s:
                        rem[ne] = s
                    else:
                        del rem[ne]
        return MultiPoly._raw(self.vars, quot)

    # -- printing ------------------------------------------------------------------

    def _term_text(self, e, c) -> str:
        factors = []
        for v, x in zip(self.vars, e):
            if x == 1:
                factors.append(v)
            elif x:
                factors.append(f"{v}^{x}")
        mono = "*".join(factors)
        cs = format_scalar(c)
        if not mono:
            return cs
        if cs == "1":
            return mono
        if cs == "-1":
            return "-" + mono
        return f"{cs}*{mono}"

    def canonical_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            t = self._term_text(e, self.terms[e])
            if not parts:
                parts.append(t)
            elif t.startswith("-"):
                parts.append(" - " + t[1:])
            else:
                parts.append(" + " + t)
        return "".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.vars}, {self.canonical_text()!r})"


class LaurentPoly:
    """Canonical ``z^shift * core`` Laurent polynomial.

    ``shift`` entries corresponding to :data:`LAMBDA` are always zero;
    lambda enters as an ordinary polynomial variable of the core.
    """

    __slots__ = ("core", "shift")

    def __init__(self, core: MultiPoly, shift=None):
        if shift is None:
            shift = (0,) * len(core.vars)
        shift = tuple(shift)
        if len(shift) != len(core.vars):
            raise ValueError("shift length must match variable count")
        core, shift = self._canonical(core, shift)
        self.core = core
        self.shift = shift

    @staticmethod
    def _canonical(core: MultiPoly, shift):
        if core.is_zero:
            return core, (0,) * len(core.vars)
        mins = [min(e[i] for e in core.terms) for i in range(len(core.vars))]
        lam = [i for i, v in enumerate(core.vars) if v == LAMBDA]
        for i in lam:
            mins[i] = 0
        if any(mins):
            terms = {tuple(map(_sub, e, mins)): c for e, c in core.terms.items()}
            core = MultiPoly._raw(core.vars, terms)
            shift = tuple(s + m for s, m in zip(shift, mins))
        if any(shift[i] for i in lam):
            raise ValueError("lambda must not be shifted")
        return core, shift

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_terms(cls, variables, terms) -> "LaurentPoly":
        """Build from a map with possibly negative exponent vectors."""
        variables = tuple(variables)
        if not terms:
            return cls(MultiPoly.zero(variables))
        mins = None
        items = []
        for e, c in terms.items():
            e = tuple(e)
            items.append((e, c))
            mins = e if mins is None else tuple(map(min, mins, e))
        mins = tuple(min(m, 0) for m in mins)
        core = MultiPoly(variables, {tuple(map(_sub, e, mins)): c for e, c in items})
        return cls(core, mins)

    @classmethod
    def zero(cls, variables):
        return cls(MultiPoly.zero(variables))

    @classmethod
    def constant(cls, variables, c):
        return cls(MultiPoly.constant(variables, c))

    @classmethod
    def monomial(cls, variables, exps, c=1):
        return cls.from_terms(variables, {tuple(exps): as_scalar(c)})

    @classmethod
    def variable(cls, variables, name):
        return cls(MultiPoly.variable(variables, name))

    @classmethod
    def from_multipoly(cls, p: MultiPoly) -> "LaurentPoly":
        return cls(p)

    # -- structure -----------------------------------------------------------

    @property
    def vars(self):
        return self.core.vars

    @property
    def is_zero(self) -> bool:
        return self.core.is_zero

    def __bool__(self):
        return bool(self.core)

    def terms(self):
        """Iterate ``(exponent_vector, coefficient)`` of the value."""
        shift = self.shift
        for e, c in self.core.terms.items():
            yield tuple(map(_add, e, shift)), c

    def term_map(self) -> dict:
        return dict(self.terms())

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.vars == other.vars and self.shift == other.shift and self.core == other.core

    def __hash__(self):
        return hash((self.shift, self.core))

    def max_degree_in(self, var: str) -> int:
        i = self.core._index(var)
        return self.core.degree_in(var) + self.shift[i]

    def min_degree_in(self, var: str) -> int:
        i = self.core._index(var)
        return self.core.min_degree_in(var) + self.shift[i]

    def to_multipoly(self) -> MultiPoly:
        """The core shifted back out; requires a nonnegative shift."""
        if any(s < 0 for s in self.shift):
            raise ValueError(f"value has poles (shift {self.shift}); not a polynomial")
        if not any(self.shift):
            return self.core
        terms = {tuple(map(_add, e, self.shift)): c for e, c in self.core.terms.items()}
        return MultiPoly._raw(self.vars, terms)

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.vars != other.vars:
            raise ValueError(f"variable sets differ: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, MultiPoly):
                other = LaurentPoly(other)
            else:
                other = LaurentPoly.constant(self.vars, other)
        self._check(other)
        common = tuple(map(min, self.shift, other.shift))
        a = self.core * MultiPoly.monomial(self.vars, tuple(map(_sub, self.shift, common)))
        b = other.core * MultiPoly.monomial(self.vars, tuple(map(_sub, other.shift, common)))
        return LaurentPoly(a + b, common)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(-self.core, self.shift)

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, MultiPoly):
                other = LaurentPoly(other)
            else:
                other = LaurentPoly.constant(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, MultiPoly):
                other = LaurentPoly(other)
            else:
                return LaurentPoly(self.core.scale(other), self.shift)
        self._check(other)
        return LaurentPoly(self.core * other.core, tuple(map(_add, self.shift, other.shift)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a LaurentPoly; invert variables instead")
        return LaurentPoly(self.core ** n, tuple(s * n for s in self.shift))

    def scale(self, c):
        return LaurentPoly(self.core.scale(c), self.shift)

    def derivative(self, var: str) -> "LaurentPoly":
        """d/d var acting on the value (negative exponents included)."""
        i = self.core._index(var)
        out = {}
        for e, c in self.terms():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                nc = c * k
                s = out.get(ne)
                out[ne] = nc if s is None else s + nc
        return LaurentPoly.from_terms(self.vars, {e: c for e, c in out.items() if c})

    def invert_var(self, var: str) -> "LaurentPoly":
        """Substitute var -> var**-1."""
        i = self.core._index(var)
        if self.vars[i] == LAMBDA:
            raise ValueError("cannot invert lambda")
        out = {e[:i] + (-e[i],) + e[i + 1:]: c for e, c in self.terms()}
        return LaurentPoly.from_terms(self.vars, out)

    def pushforward(self, exponents) -> "LaurentPoly":
        """Substitute z_j -> z_j**q_j (lambda, if present, gets factor 1)."""
        exponents = self._zfactors(exponents)
        return LaurentPoly(self.core.stretch(exponents),
                           tuple(s * q for s, q in zip(self.shift, exponents)))

    def exponent_division(self, divisors) -> "LaurentPoly":
        """Unique preimage under :meth:`pushforward`; errors if impossible."""
        divisors = self._zfactors(divisors)
        for i, (s, q) in enumerate(zip(self.shift, divisors)):
            if s % q:
                raise ValueError(
                    f"shift {s} of {self.vars[i]} is not divisible by {q}")
        return LaurentPoly(self.core.unstretch(divisors),
                           tuple(s // q for s, q in zip(self.shift, divisors)))

    def _zfactors(self, factors) -> tuple[int, ...]:
        factors = list(factors)
        nz = sum(1 for v in self.vars if v != LAMBDA)
        if len(factors) == nz and len(factors) != len(self.vars):
            out = []
            it = iter(factors)
            for v in self.vars:
                out.append(1 if v == LAMBDA else next(it))
            return tuple(out)
        if len(factors) != len(self.vars):
            raise ValueError("one exponent per z-variable required")
        return tuple(factors)

    def eval_partial(self, var: str, value) -> "LaurentPoly":
        """Exact substitution of a scalar for one variable.

        The scalar must be nonzero when the variable carries a negative
        shift (a pole would be hit otherwise).
        """
        i = self.core._index(var)
        value = as_scalar(value)
        s = self.shift[i]
        if s < 0 and not value:
            raise ZeroDivisionError(f"{var} has a pole at 0")
        scaled = self.core.eval_partial(var, value)
        if s:
            scaled = scaled.scale(value ** s)
        shift = self.shift[:i] + (0,) + self.shift[i + 1:]
        return LaurentPoly(scaled, shift)

    def evaluate(self, values):
        """Exact evaluation; values of shifted variables must be nonzero."""
        values = [as_scalar(v) for v in values]
        acc = self.core.evaluate(values)
        for v, s in zip(values, self.shift):
            if s:
                acc = acc * v ** s
        return maybe_real(acc)

    def eval_complex(self, values) -> complex:
        values = [complex(v) for v in values]
        acc = self.core.eval_complex(values)
        for v, s in zip(values, self.shift):
            if s:
                acc *= v ** s
        return acc

    # -- printing --------------------------------------------------------------

    def canonical_text(self) -> str:
        if self.is_zero:
            return "0"
        tm = self.term_map()
        parts = []
        for e in sorted(tm):
            t = self.core._term_text(e, tm[e])
            if not parts:
                parts.append(t)
            elif t.startswith("-"):
                parts.append(" - " + t[1:])
            else:
                parts.append(" + " + t)
        return "".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self.vars}, {self.canonical_text()!r})"


def weighted_lowest_component(p: LaurentPoly, signs) -> LaurentPoly:
    """Lowest-degree component after relabeling sign -1 variables as inverses.

    ``signs`` has one entry (+1 or -1) per z-variable; lambda (when
    present) acts as a coefficient and does not count toward the degree.
    After relabeling w_j = z_j**(-1) for each sign -1 variable, ``p``
    must be a polynomial in the relabeled variables; the sum of its
    terms of minimal total degree is returned (in the original labels).
    """
    signs = list(signs)
    zidx = [i for i, v in enumerate(p.vars) if v != LAMBDA]
    if len(signs) != len(zidx):
        raise ValueError("one sign per z-variable required")
    if any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be +1 or -1")
    sign_of = dict(zip(zidx, signs))
    best = None
    groups: dict[int, dict] = {}
    for e, c in p.terms():
        deg = 0
        for i in zidx:
            w = sign_of[i] * e[i]
            if w < 0:
                name = p.vars[i]
                rel = name if sign_of[i] > 0 else f"{name}^-1"
                raise ValueError(f"not a polynomial in the relabeled variables "
                                 f"(term with {name}^{e[i]} vs relabeling {rel})")
            deg += w
        groups.setdefault(deg, {})[e] = c
        if best is None or deg < best:
            best = deg
    if best is None:
        return LaurentPoly.zero(p.vars)
    return LaurentPoly.from_terms(p.vars, groups[best])
