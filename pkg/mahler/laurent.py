"""Integer Laurent polynomials in several variables, with a small recursive-descent parser."""
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from utils.errors import DomainError, ParseError

MAX_EXPONENT = 10_000

Monomial = Tuple[Tuple[str, int], ...]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


@dataclass(frozen=True)
class LaurentPolynomial:
    """Sum of c * x1^k1 ... xn^kn; terms sorted by exponent vector, no zero coefficients"""
    terms: Tuple[Tuple[int, Tuple[int, ...]], ...]
    variables: Tuple[str, ...]

    def __post_init__(self):
        width = len(self.variables)
        combined: Dict[Tuple[int, ...], int] = {}
        for c, exps in self.terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != width:
                raise DomainError(f"exponent vector {exps} does not match variables {self.variables}")
            combined[exps] = combined.get(exps, 0) + int(c)
        terms = tuple(sorted(((c, e) for e, c in combined.items() if c), key=lambda t: t[1], reverse=True))
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "variables", tuple(self.variables))

    @property
    def nvars(self) -> int:
        return max(1, len(self.variables))

    @classmethod
    def constant(cls, c: int, variables: Sequence[str] = ()) -> "LaurentPolynomial":
        return cls(((c, (0,) * len(variables)),), tuple(variables))

    @classmethod
    def monomial(cls, c: int, exps: Sequence[int], variables: Sequence[str]) -> "LaurentPolynomial":
        return cls(((c, tuple(exps)),), tuple(variables))

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[int, Tuple[int, ...]]]:
        return iter(self.terms)

    def _check(self, other: "LaurentPolynomial") -> None:
        if other.variables != self.variables:
            raise DomainError(f"variables {self.variables} vs {other.variables}")

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        self._check(other)
        return LaurentPolynomial(self.terms + other.terms, self.variables)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial(tuple((-c, e) for c, e in self.terms), self.variables)

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        self._check(other)
        return LaurentPolynomial(
            tuple((c1 * c2, tuple(a + b for a, b in zip(e1, e2))) for c1, e1 in self.terms for c2, e2 in other.terms),
            self.variables,
        )

    def invert_variable(self, i: int) -> "LaurentPolynomial":
        """x_i -> 1/x_i"""
        return LaurentPolynomial(
            tuple((c, tuple(-k if j == i else k for j, k in enumerate(e))) for c, e in self.terms), self.variables
        )

    def permute(self, order: Sequence[int]) -> "LaurentPolynomial":
        """New variable j is old variable order[j]"""
        return LaurentPolynomial(
            tuple((c, tuple(e[o] for o in order)) for c, e in self.terms), tuple(self.variables[o] for o in order)
        )

    def exponent_range(self, i: int) -> Tuple[int, int]:
        ks = [e[i] for _, e in self.terms]
        return min(ks), max(ks)

    def coefficients_in(self, i: int) -> Dict[int, "LaurentPolynomial"]:
        """Split along variable i: {k: coefficient of x_i^k as a polynomial in the other variables}"""
        rest = self.variables[:i] + self.variables[i + 1:]
        groups: Dict[int, List[Tuple[int, Tuple[int, ...]]]] = {}
        for c, e in self.terms:
            groups.setdefault(e[i], []).append((c, e[:i] + e[i + 1:]))
        return {k: LaurentPolynomial(tuple(v), rest) for k, v in groups.items()}

    def evaluate(self, z: Sequence[np.ndarray]) -> np.ndarray:
        """P at points z_j (broadcastable arrays, one per variable)"""
        if not self.terms:
            raise DomainError("evaluating the zero polynomial")
        if len(z) != len(self.variables):
            raise DomainError(f"need {len(self.variables)} coordinate arrays, got {len(z)}")
        powers: Dict[Tuple[int, int], np.ndarray] = {}
        total = None
        for c, e in self.terms:
            term = complex(c)
            for j, k in enumerate(e):
                if k:
                    key = (j, k)
                    if key not in powers:
                        powers[key] = np.power(z[j], k)
                    term = term * powers[key]
            total = term if total is None else total + term
        return np.broadcast_to(total, np.broadcast(*z).shape) if z else np.asarray(total)

    def evaluate_angles(self, theta: np.ndarray) -> np.ndarray:
        """P(e^{i theta}) for theta of shape (..., nvars)"""
        theta = np.asarray(theta, dtype=float)
        z = [np.exp(1j * theta[..., j]) for j in range(len(self.variables))]
        return self.evaluate(z)

    def __str__(self):
        return format_laurent(self)


def format_laurent(p: LaurentPolynomial) -> str:
    if p.is_zero():
        return "0"
    out: List[str] = []
    for c, e in p.terms:
        factors = []
        for name, k in zip(p.variables, e):
            if k == 1:
                factors.append(name)
            elif k:
                factors.append(f"{name}^{k}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(("+ " if c > 0 else "- ") + body)
    return " ".join(out)


class _Parser:
    """expression := term (('+'|'-') term)*; term := factor ('*' factor)*;
    factor := integer | variable ['^' signed-integer] | '1/' variable | '(' expression ')'"""

    def __init__(self, text: str, variables: Optional[Sequence[str]]):
        self.text = text
        self.allowed = tuple(variables) if variables is not None else None
        self.order: List[str] = list(variables) if variables is not None else []
        self.tokens = self._tokenize(text)
        self.i = 0

    def _tokenize(self, text: str) -> List[Tuple[str, str, int]]:
        tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                # only whitespace left
                break
            num, ident, sym = m.groups()
            start = m.start(1) if num else m.start(2) if ident else m.start(3)
            if num:
                tokens.append(("int", num, start))
            elif ident:
                tokens.append(("var", ident, start))
            elif sym is not None:
                if sym not in "+-*/^()":
                    raise ParseError(f"unexpected character {sym!r}", start, text)
                tokens.append((sym, sym, start))
            pos = m.end()
        tokens.append(("end", "", len(text)))
        return tokens

    @property
    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, kind: Optional[str] = None) -> Tuple[str, str, int]:
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> Dict[Monomial, int]:
        if self.peek[0] == "end":
            raise ParseError("empty expression", 0, self.text)
        poly = self.expression()
        tok = self.peek
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return poly

    def expression(self) -> Dict[Monomial, int]:
        sign = 1
        if self.peek[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        acc = _scale(self.term(), sign)
        while self.peek[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            acc = _add(acc, _scale(self.term(), sign))
        return acc

    def term(self) -> Dict[Monomial, int]:
        acc = self.factor()
        while self.peek[0] == "*":
            self.take()
            acc = _mul(acc, self.factor())
        return acc

    def signed_int(self) -> int:
        if self.peek[0] == "(":
            self.take()
            value = self.signed_int()
            self.take(")")
            return value
        sign = 1
        if self.peek[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        tok = self.take("int")
        value = sign * int(tok[1])
        if abs(value) > MAX_EXPONENT:
            raise ParseError(f"exponent overflow ({value})", tok[2], self.text)
        return value

    def variable(self) -> str:
        tok = self.take("var")
        name = tok[1]
        if self.allowed is not None and name not in self.allowed:
            raise ParseError(f"unknown variable {name!r}", tok[2], self.text)
        if name not in self.order:
            self.order.append(name)
        return name

    def factor(self) -> Dict[Monomial, int]:
        kind, value, pos = self.peek
        if kind == "int":
            self.take()
            if self.peek[0] == "/":
                if value != "1":
                    raise ParseError("only 1/variable division is supported", pos, self.text)
                self.take()
                name = self.variable()
                k = 1
                if self.peek[0] == "^":
                    self.take()
                    k = self.signed_int()
                return {((name, -k),): 1}
            return {(): int(value)}
        if kind == "var":
            name = self.variable()
            k = 1
            if self.peek[0] == "^":
                self.take()
                k = self.signed_int()
            return {((name, k),) if k else (): 1}
        if kind == "(":
            self.take()
            inner = self.expression()
            self.take(")")
            return inner
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos, self.text)


def _normalize(mono: Dict[str, int]) -> Monomial:
    return tuple(sorted((v, k) for v, k in mono.items() if k))


def _add(a: Dict[Monomial, int], b: Dict[Monomial, int]) -> Dict[Monomial, int]:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + c
    return {m: c for m, c in out.items() if c}


def _scale(a: Dict[Monomial, int], s: int) -> Dict[Monomial, int]:
    return {m: s * c for m, c in a.items()}


def _mul(a: Dict[Monomial, int], b: Dict[Monomial, int]) -> Dict[Monomial, int]:
    out: Dict[Monomial, int] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            mono = dict(m1)
            for v, k in m2:
                mono[v] = mono.get(v, 0) + k
            key = _normalize(mono)
            out[key] = out.get(key, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def parse_laurent(text: str, variables: Optional[Sequence[str]] = None) -> LaurentPolynomial:
    """Parse text into canonical form; variables keep order of first appearance unless given"""
    parser = _Parser(text, variables)
    poly = parser.parse()
    names = tuple(parser.order)
    index = {v: i for i, v in enumerate(names)}
    terms = []
    for mono, c in poly.items():
        exps = [0] * len(names)
        for v, k in mono:
            exps[index[v]] = k
        terms.append((c, tuple(exps)))
    return LaurentPolynomial(tuple(terms), names)
