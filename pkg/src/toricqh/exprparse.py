"""Recursive-descent parser for quantum polynomial expressions.

Grammar (documented in the README):

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' exponent)?
    atom     := RATIONAL | VAR | '(' expr ')' | '-' factor
    exponent := INT | '{' SIGNED_RATIONAL '}'
    VAR      := 'x' DIGITS | 'q' | 't'

Rationals are written p/q with no spaces; there is no division operator.
The value of an expression is a linear combination of atoms
(monomial in x1..xN, q-exponent, t-exponent) over Q.
"""

from fractions import Fraction

from .errors import ExprSyntaxError


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "+-*^(){}":
            tokens.append((c, c))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] == "/":
                k = j + 1
                while k < len(text) and text[k].isdigit():
                    k += 1
                if k == j + 1:
                    raise ExprSyntaxError(f"bad rational at {i}: {text[i:k]}")
                try:
                    tokens.append(("num", Fraction(text[i:k])))
                except ZeroDivisionError:
                    raise ExprSyntaxError(f"zero denominator at {i}")
                i = k
            else:
                tokens.append(("num", Fraction(text[i:j])))
                i = j
            continue
        if c == "x":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ExprSyntaxError(f"variable needs an index at {i}")
            tokens.append(("var", int(text[i + 1:j])))
            i = j
            continue
        if c == "q":
            tokens.append(("q", None))
            i += 1
            continue
        if c == "t":
            tokens.append(("t", None))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {c!r} at {i}")
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, tokens, n_vars):
        self.tokens = tokens
        self.pos = 0
        self.n = n_vars

    def peek(self):
        return self.tokens[self.pos][0]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok[0]!r}")
        self.pos += 1
        return tok

    # values: {(mono tuple, q exponent, t exponent): coefficient}

    def _const(self, c):
        return {((0,) * self.n, 0, Fraction(0)): Fraction(c)}

    def _scale(self, v, c):
        return {k: c * x for k, x in v.items() if c * x}

    def _add(self, a, b):
        out = dict(a)
        for k, c in b.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def _mul(self, a, b):
        out = {}
        for (m1, d1, k1), c1 in a.items():
            for (m2, d2, k2), c2 in b.items():
                key = (tuple(x + y for x, y in zip(m1, m2)), d1 + d2, k1 + k2)
                s = out.get(key, Fraction(0)) + c1 * c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    def parse(self):
        value = self.expr()
        self.take("end")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in "+-":
            op = self.take()[0]
            rhs = self.term()
            value = self._add(value, rhs if op == "+"
                              else self._scale(rhs, Fraction(-1)))
        return value

    def term(self):
        value = self.factor()
        while self.peek() == "*":
            self.take("*")
            value = self._mul(value, self.factor())
        return value

    def factor(self):
        if self.peek() == "-":
            self.take("-")
            return self._scale(self.factor(), Fraction(-1))
        value, kind = self.atom()
        if self.peek() == "^":
            self.take("^")
            exponent = self.exponent()
            if kind == "t":
                return {((0,) * self.n, 0, exponent): Fraction(1)}
            if kind == "q":
                if exponent.denominator != 1:
                    raise ExprSyntaxError("q exponents must be integers")
                return {((0,) * self.n, int(exponent), Fraction(0)):
                        Fraction(1)}
            if exponent.denominator != 1 or exponent < 0:
                raise ExprSyntaxError(
                    "variable exponents must be nonnegative integers")
            out = self._const(1)
            for _ in range(int(exponent)):
                out = self._mul(out, value)
            return out
        return value

    def atom(self):
        kind = self.peek()
        if kind == "num":
            return self._const(self.take()[1]), "num"
        if kind == "var":
            idx = self.take()[1]
            if not 1 <= idx <= self.n:
                raise ExprSyntaxError(
                    f"x{idx} is out of range; this polytope has {self.n} "
                    "facets")
            mono = tuple(1 if i == idx - 1 else 0 for i in range(self.n))
            return {(mono, 0, Fraction(0)): Fraction(1)}, "var"
        if kind == "q":
            self.take()
            return {((0,) * self.n, 1, Fraction(0)): Fraction(1)}, "q"
        if kind == "t":
            self.take()
            return {((0,) * self.n, 0, Fraction(1)): Fraction(1)}, "t"
        if kind == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value, "group"
        raise ExprSyntaxError(f"unexpected token {kind!r}")

    def exponent(self):
        if self.peek() == "{":
            self.take("{")
            sign = 1
            if self.peek() == "-":
                self.take("-")
                sign = -1
            value = self.take("num")[1]
            self.take("}")
            return sign * value
        if self.peek() == "-":
            self.take("-")
            return -self.take("num")[1]
        return Fraction(self.take("num")[1])


def parse_expression(text, n_vars):
    """Parse to {(monomial, q exponent, t exponent): coefficient}."""
    return _Parser(_tokenize(text), n_vars).parse()
