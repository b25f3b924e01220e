"""Exact multivariate and univariate polynomial arithmetic over Q.

All coefficients are ``fractions.Fraction``; nothing in the package ever
touches floating point.  ``Polynomial`` is a sparse dict from exponent
tuples to coefficients, ``UniPoly`` is a dense coefficient list in one
variable t, and ``RationalFunctionT`` is a reduced quotient of two
``UniPoly`` with monic denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Exponent = tuple[int, ...]
Scalar = Union[Fraction, int]


def grlex_key(exps: Exponent) -> tuple[int, Exponent]:
    """Sort key for graded lexicographic order (total degree, then lex)."""
    return (sum(exps), exps)


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected a rational scalar, got {type(value).__name__}")


class Polynomial:
    """Sparse polynomial in ``nvars`` variables with Fraction coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Scalar] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != nvars:
                    raise ValueError(f"exponent tuple {exps} has wrong length for {nvars} variables")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = _as_fraction(coeff)
                if c:
                    clean[tuple(exps)] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> Polynomial:
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: Scalar) -> Polynomial:
        c = _as_fraction(value)
        return cls(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> Polynomial:
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, exps: Exponent, coeff: Scalar = 1) -> Polynomial:
        return cls(len(exps), {tuple(exps): _as_fraction(coeff)})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        """Maximal total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def quasi_degrees(self, weights: Sequence[int]) -> set[int]:
        """Set of weighted degrees occurring among the terms."""
        if len(weights) != self.nvars:
            raise ValueError("weight vector has wrong length")
        return {sum(e * w for e, w in zip(exps, weights)) for exps in self.terms}

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in descending graded lexicographic order (deterministic)."""
        return sorted(self.terms.items(), key=lambda item: grlex_key(item[0]), reverse=True)

    def __iter__(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(self.sorted_terms())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- arithmetic -------------------------------------------------------

    def _check_compatible(self, other: Polynomial) -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: Polynomial) -> Polynomial:
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            new = terms.get(exps, Fraction(0)) + coeff
            if new:
                terms[exps] = new
            else:
                terms.pop(exps, None)
        result = Polynomial.__new__(Polynomial)
        result.nvars = self.nvars
        result.terms = terms
        return result

    def __neg__(self) -> Polynomial:
        result = Polynomial.__new__(Polynomial)
        result.nvars = self.nvars
        result.terms = {exps: -coeff for exps, coeff in self.terms.items()}
        return result

    def __sub__(self, other: Polynomial) -> Polynomial:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Polynomial | Scalar) -> Polynomial:
        if isinstance(other, (Fraction, int)):
            c = _as_fraction(other)
            result = Polynomial.__new__(Polynomial)
            result.nvars = self.nvars
            result.terms = {exps: coeff * c for exps, coeff in self.terms.items()} if c else {}
            return result
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                new = terms.get(exps, Fraction(0)) + c1 * c2
                if new:
                    terms[exps] = new
                else:
                    terms.pop(exps, None)
        result = Polynomial.__new__(Polynomial)
        result.nvars = self.nvars
        result.terms = terms
        return result

    __rmul__ = __mul__

    def __pow__(self, power: int) -> Polynomial:
        if power < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        n = power
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def partial(self, index: int) -> Polynomial:
        """Partial derivative with respect to variable ``index``."""
        if not 0 <= index < self.nvars:
            raise ValueError(f"variable index {index} out of range")
        terms: dict[Exponent, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e:
                lowered = exps[:index] + (e - 1,) + exps[index + 1:]
                terms[lowered] = terms.get(lowered, Fraction(0)) + coeff * e
        return Polynomial(self.nvars, terms)

    def substitute(self, images: Sequence[UniPoly]) -> UniPoly:
        """Evaluate with each variable replaced by a univariate polynomial in t."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        result = UniPoly.zero()
        for exps, coeff in self.terms.items():
            term = UniPoly.constant(coeff)
            for img, e in zip(images, exps):
                if e:
                    term = term * img**e
            result = result + term
        return result

    def subst_poly(self, images: Sequence[Polynomial]) -> Polynomial:
        """Evaluate with each variable replaced by a polynomial."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not images:
            return Polynomial.constant(0, self.constant_term())
        target = images[0].nvars
        result = Polynomial.zero(target)
        for exps, coeff in self.terms.items():
            term = Polynomial.constant(target, coeff)
            for img, e in zip(images, exps):
                if e:
                    term = term * img**e
            result = result + term
        return result

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("need one value per variable")
        values = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            prod = coeff
            for v, e in zip(values, exps):
                if e:
                    prod *= v**e
            total += prod
        return total

    # -- printing ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for exps, coeff in self.sorted_terms():
            factors = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e]
            mono = "*".join(factors)
            if not mono:
                body = str(coeff)
            elif coeff == 1:
                body = mono
            elif coeff == -1:
                body = f"-{mono}"
            else:
                body = f"{coeff}*{mono}"
            if parts and not body.startswith("-"):
                parts.append(f"+ {body}")
            elif parts:
                parts.append(f"- {body[1:]}")
            else:
                parts.append(body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


class UniPoly:
    """Dense univariate polynomial in t with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: list[Fraction] = cs

    @classmethod
    def zero(cls) -> UniPoly:
        return cls()

    @classmethod
    def constant(cls, value: Scalar) -> UniPoly:
        return cls([value])

    @classmethod
    def t_power(cls, e: int, coeff: Scalar = 1) -> UniPoly:
        if e < 0:
            raise ValueError("negative exponent")
        return cls([0] * e + [coeff])

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def order(self) -> int | None:
        """Lowest exponent with nonzero coefficient; None for zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def leading_coeff(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def coefficient(self, e: int) -> Fraction:
        if 0 <= e < len(self.coeffs):
            return self.coeffs[e]
        return Fraction(0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs))

    def __add__(self, other: UniPoly) -> UniPoly:
        if not isinstance(other, UniPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(
            [self.coefficient(i) + other.coefficient(i) for i in range(n)]
        )

    def __neg__(self) -> UniPoly:
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other: UniPoly) -> UniPoly:
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: UniPoly | Scalar) -> UniPoly:
        if isinstance(other, (Fraction, int)):
            c = _as_fraction(other)
            return UniPoly([a * c for a in self.coeffs]) if c else UniPoly()
        if not isinstance(other, UniPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> UniPoly:
        if power < 0:
            raise ValueError("negative power")
        result = UniPoly.constant(1)
        base = self
        n = power
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> UniPoly:
        return UniPoly([c * i for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, value: Scalar) -> Fraction:
        v = _as_fraction(value)
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * v + c
        return total

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = other.degree()
        lead = other.coeffs[-1]
        if len(rem) - 1 < dd:
            return UniPoly(), UniPoly(rem)
        quot = [Fraction(0)] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = c / lead
            quot[i - dd] = q
            for j, b in enumerate(other.coeffs):
                rem[i - dd + j] -= q * b
        return UniPoly(quot), UniPoly(rem)

    def __mod__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[1]

    def monic(self) -> UniPoly:
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        return UniPoly([c / lead for c in self.coeffs])

    def gcd(self, other: UniPoly) -> UniPoly:
        """Monic greatest common divisor (Euclid)."""
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def square_free_part(self) -> UniPoly:
        if self.degree() < 1:
            return self.monic() if self else self
        g = self.gcd(self.derivative())
        return self.divmod(g)[0].monic()

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if not c:
                continue
            if e == 0:
                body = str(c)
            else:
                var = "t" if e == 1 else f"t^{e}"
                if c == 1:
                    body = var
                elif c == -1:
                    body = f"-{var}"
                else:
                    body = f"{c}*{var}"
            if parts and not body.startswith("-"):
                parts.append(f"+ {body}")
            elif parts:
                parts.append(f"- {body[1:]}")
            else:
                parts.append(body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"UniPoly({self})"


@dataclass(frozen=True)
class RationalFunctionT:
    """Reduced rational function in t with monic denominator."""

    num: UniPoly
    den: UniPoly

    def __init__(self, num: UniPoly | Scalar, den: UniPoly | Scalar = 1):
        n = num if isinstance(num, UniPoly) else UniPoly.constant(num)
        d = den if isinstance(den, UniPoly) else UniPoly.constant(den)
        if not d:
            raise ZeroDivisionError("zero denominator")
        if not n:
            n, d = UniPoly(), UniPoly.constant(1)
        else:
            g = n.gcd(d)
            if g.degree() > 0:
                n = n.divmod(g)[0]
                d = d.divmod(g)[0]
            lead = d.leading_coeff()
            if lead != 1:
                n = n * (Fraction(1) / lead)
                d = d.monic()
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)

    @classmethod
    def zero(cls) -> RationalFunctionT:
        return cls(UniPoly())

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def __add__(self, other: RationalFunctionT) -> RationalFunctionT:
        if not isinstance(other, RationalFunctionT):
            return NotImplemented
        return RationalFunctionT(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> RationalFunctionT:
        return RationalFunctionT(-self.num, self.den)

    def __sub__(self, other: RationalFunctionT) -> RationalFunctionT:
        if not isinstance(other, RationalFunctionT):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: RationalFunctionT | Scalar) -> RationalFunctionT:
        if isinstance(other, (Fraction, int)):
            return RationalFunctionT(self.num * other, self.den)
        if not isinstance(other, RationalFunctionT):
            return NotImplemented
        return RationalFunctionT(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: RationalFunctionT) -> RationalFunctionT:
        if not isinstance(other, RationalFunctionT):
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunctionT(self.num * other.den, self.den * other.num)

    def evaluate(self, value: Scalar) -> Fraction:
        d = self.den.evaluate(value)
        if not d:
            raise ZeroDivisionError(f"pole at t = {value}")
        return self.num.evaluate(value) / d

    def __str__(self) -> str:
        if self.den.degree() == 0 and self.den.leading_coeff() == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"
