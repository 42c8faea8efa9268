"""Bivariate polynomials with complex coefficients, and an expression parser.

The expression grammar supports +, -, *, ^ with integer exponents,
parenthesised subexpressions, real/complex numeric literals (an ``i`` or
``j`` suffix marks an imaginary literal), and named constants.  There is no
division and no implicit multiplication.
"""
from __future__ import annotations

import re
from .constants import NAMED_CONSTANTS
from .errors import ParseError

# preferred display order for the variable pairs used by the curve models
_KNOWN_PAIRS = [("x", "y"), ("t", "s"), ("z", "w"), ("u", "v")]

_COEFF_CLEAN_REL = 1e-14


class BivariatePolynomial:
    """An expanded polynomial in two variables, stored as a term map.

    terms maps an exponent pair (i, j) to a nonzero complex coefficient,
    where i is the power of varnames[0] and j the power of varnames[1].
    Instances are treated as immutable.
    """

    __slots__ = ("terms", "varnames")

    def __init__(self, terms, varnames):
        if len(varnames) != 2 or varnames[0] == varnames[1]:
            raise ValueError("varnames must be two distinct names")
        cleaned = {}
        maxabs = max((abs(c) for c in terms.values()), default=0.0)
        floor = maxabs * _COEFF_CLEAN_REL
        for (i, j), c in terms.items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent in term map")
            c = complex(c)
            if c != 0 and abs(c) > floor:
                cleaned[(int(i), int(j))] = c
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "varnames", (str(varnames[0]), str(varnames[1])))

    def __setattr__(self, name, value):
        raise AttributeError("BivariatePolynomial is immutable")

    # ----- queries -----

    def degree(self, index):
        """Largest exponent of varnames[index]; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(key[index] for key in self.terms)

    def is_zero(self):
        return not self.terms

    def evaluate(self, u, v):
        total = 0j
        # group powers so repeated exponentiation is not recomputed per term
        upows = _powers(u, self.degree(0))
        vpows = _powers(v, self.degree(1))
        for (i, j), c in self.terms.items():
            total += c * upows[i] * vpows[j]
        return total

    def partial(self, index):
        """Partial derivative with respect to varnames[index]."""
        out = {}
        for (i, j), c in self.terms.items():
            e = (i, j)[index]
            if e == 0:
                continue
            key = (i - 1, j) if index == 0 else (i, j - 1)
            out[key] = out.get(key, 0j) + c * e
        return BivariatePolynomial(out, self.varnames)

    def coefficients_in_second(self):
        """Coefficient polynomials c_j of varnames[1]^j, as univariate term maps.

        Returns a list of length degree(1)+1; entry j maps exponent i of
        varnames[0] to the coefficient of varnames[0]^i * varnames[1]^j.
        """
        out = [dict() for _ in range(self.degree(1) + 1)]
        for (i, j), c in self.terms.items():
            out[j][i] = c
        return out

    # ----- arithmetic -----

    def _binop(self, other, sign):
        other = self._coerce(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0j) + sign * c
        return BivariatePolynomial(out, self.varnames)

    def __add__(self, other):
        return self._binop(other, 1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def __neg__(self):
        return BivariatePolynomial({k: -c for k, c in self.terms.items()}, self.varnames)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return BivariatePolynomial(
                {k: c * other for k, c in self.terms.items()}, self.varnames)
        other = self._coerce(other)
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0j) + c1 * c2
        return BivariatePolynomial(out, self.varnames)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = BivariatePolynomial({(0, 0): 1.0}, self.varnames)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, BivariatePolynomial):
            if other.varnames != self.varnames:
                raise ValueError(
                    f"variable mismatch: {self.varnames} vs {other.varnames}")
            return other
        if isinstance(other, (int, float, complex)):
            return BivariatePolynomial({(0, 0): complex(other)}, self.varnames)
        return NotImplemented

    # ----- identity -----

    def __eq__(self, other):
        return (isinstance(other, BivariatePolynomial)
                and self.varnames == other.varnames
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.varnames, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def almost_equal(self, other, tol=1e-12):
        if self.varnames != other.varnames:
            return False
        keys = set(self.terms) | set(other.terms)
        scale = max([abs(c) for c in self.terms.values()]
                    + [abs(c) for c in other.terms.values()] + [1.0])
        return all(abs(self.terms.get(k, 0) - other.terms.get(k, 0)) <= tol * scale
                   for k in keys)

    def sorted_terms(self):
        """Terms sorted by (total degree, exponents) descending; deterministic."""
        return sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in self.sorted_terms():
            parts.append(_format_term(c, i, j, self.varnames))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    __repr__ = __str__


def _powers(value, maxdeg):
    pows = [1.0 + 0j]
    for _ in range(max(maxdeg, 0)):
        pows.append(pows[-1] * value)
    return pows


def _format_coeff(c):
    re_, im_ = c.real, c.imag
    if im_ == 0:
        return _format_real(re_)
    if re_ == 0:
        return _format_real(im_) + "i"
    return f"({_format_real(re_)} + {_format_real(im_)}i)".replace("+ -", "- ")


def _format_real(r):
    if r == int(r) and abs(r) < 1e15:
        return str(int(r))
    return repr(r)


def _format_term(c, i, j, varnames):
    factors = []
    if i > 0:
        factors.append(varnames[0] if i == 1 else f"{varnames[0]}^{i}")
    if j > 0:
        factors.append(varnames[1] if j == 1 else f"{varnames[1]}^{j}")
    if not factors:
        return _format_coeff(c)
    if c == 1:
        return "*".join(factors)
    if c == -1:
        return "-" + "*".join(factors)
    return "*".join([_format_coeff(c)] + factors)


# --------------------------------------------------------------------------
# parser

_TOKEN_RE = re.compile(r"""
    (?P<num>(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?[ij]?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^()])
  | (?P<ws>\s+)
  | (?P<bad>.)
""", re.VERBOSE)


def _tokenize(text):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", m.start())
        tokens.append((kind, m.group(), m.start()))
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, constants):
        self.tokens = tokens
        self.pos = 0
        self.constants = constants
        self.seen_vars = []

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, value, at = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", at)
        return self.take()

    # expr := ['+'|'-'] term (('+'|'-') term)*
    def parse_expr(self):
        sign = 1
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.take()
            sign = -1 if value == "-" else 1
        node = self.parse_term()
        if sign == -1:
            node = ("neg", node)
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.take()
                rhs = self.parse_term()
                node = ("add" if value == "+" else "sub", node, rhs)
            else:
                return node

    # term := factor ('*' factor)*
    def parse_term(self):
        node = self.parse_factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.take()
                node = ("mul", node, self.parse_factor())
            else:
                return node

    # factor := '-' factor | atom ['^' exponent]
    def parse_factor(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            # unary minus binds looser than '^' so -x^2 means -(x^2)
            self.take()
            return ("neg", self.parse_factor())
        node = self.parse_atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.take()
            node = ("pow", node, self.parse_exponent())
        return node

    def parse_exponent(self):
        kind, value, at = self.peek()
        if kind == "num":
            self.take()
            if value[-1] in "ij" or "." in value or "e" in value or "E" in value:
                raise ParseError("exponent must be a plain integer", at)
            return int(value)
        raise ParseError("expected integer exponent after '^'", at)

    def parse_atom(self):
        kind, value, at = self.peek()
        if kind == "op" and value == "(":
            self.take()
            node = self.parse_expr()
            self.expect_op(")")
            return node
        if kind == "num":
            self.take()
            if value[-1] in "ij":
                return ("const", complex(0, float(value[:-1] or "1")))
            return ("const", complex(float(value)))
        if kind == "ident":
            self.take()
            if value in self.constants:
                return ("const", complex(self.constants[value]))
            if value not in self.seen_vars:
                self.seen_vars.append(value)
            return ("var", value)
        raise ParseError(f"unexpected token {value!r}" if value else "unexpected end of input", at)


def _infer_varnames(seen):
    if len(seen) == 2:
        for pair in _KNOWN_PAIRS:
            if set(seen) == set(pair):
                return pair
        return tuple(sorted(seen))
    if len(seen) == 1:
        v = seen[0]
        for pair in _KNOWN_PAIRS:
            if v in pair:
                return pair
        return None
    return None


def parse_polynomial(text, constants=None, varnames=None):
    """Parse an expression into an expanded BivariatePolynomial.

    constants supplements the defaults (i, j, rho, rho2, zeta); varnames
    fixes the variable pair explicitly, otherwise it is inferred from the
    identifiers in the text using the conventional pairs x/y, t/s, z/w, u/v.
    """
    table = dict(NAMED_CONSTANTS)
    if constants:
        table.update(constants)
    if varnames is not None:
        # explicit variable names shadow any equally-named constant
        for name in varnames:
            table.pop(name, None)
    parser = _Parser(_tokenize(text), table)
    tree = parser.parse_expr()
    kind, value, at = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing input {value!r}", at)

    if varnames is None:
        varnames = _infer_varnames(parser.seen_vars)
        if varnames is None:
            raise ParseError(
                "cannot infer the two variable names from "
                f"{parser.seen_vars!r}; pass varnames explicitly")
    else:
        varnames = (str(varnames[0]), str(varnames[1]))
        extra = [v for v in parser.seen_vars if v not in varnames]
        if extra:
            raise ParseError(f"unknown identifier {extra[0]!r}")

    return _build(tree, tuple(varnames))


def _build(node, varnames):
    op = node[0] if isinstance(node, tuple) else None
    if op == "const":
        return BivariatePolynomial({(0, 0): node[1]}, varnames)
    if op == "var":
        name = node[1]
        key = (1, 0) if name == varnames[0] else (0, 1)
        return BivariatePolynomial({key: 1.0}, varnames)
    if op == "neg":
        return -_build(node[1], varnames)
    if op == "add":
        return _build(node[1], varnames) + _build(node[2], varnames)
    if op == "sub":
        return _build(node[1], varnames) - _build(node[2], varnames)
    if op == "mul":
        return _build(node[1], varnames) * _build(node[2], varnames)
    if op == "pow":
        return _build(node[1], varnames) ** node[2]
    raise AssertionError(f"unhandled node {node!r}")
