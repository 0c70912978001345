import re
import logging
from functools import lru_cache

from sympy import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import ring

logger = logging.getLogger(__name__)


class PolyParseError(ValueError):
    """Grammar violation in a polynomial string, located by 1-based line/column."""

    def __init__(self, message, text="", pos=0, line=None, column=None):
        if line is None or column is None:
            line, column = _locate(text, pos)
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


def _locate(text, pos):
    before = text[:pos]
    line = before.count("\n") + 1
    column = pos - (before.rfind("\n") + 1) + 1
    return line, column


@lru_cache(maxsize=None)
def chart_ring(nvars):
    """Polynomial ring QQ[z1..zn] shared by every object on the n-dimensional chart."""
    if nvars < 1:
        raise ValueError(f"chart dimension must be positive, got {nvars}")
    names = ",".join(f"z{i}" for i in range(1, nvars + 1))
    return ring(names, QQ, lex)[0]


def to_rational(value):
    """Exact rational from an int, a QQ element or a rational string such as '-3/4'."""
    if isinstance(value, str):
        m = _RATIONAL.fullmatch(value.strip().replace("−", "-"))
        if not m:
            raise PolyParseError(f"not a rational number: {value!r}", value, 0)
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise PolyParseError("zero denominator", value, 0)
        return QQ(num, den)
    return QQ.convert(value)


def format_rational(c):
    c = QQ.convert(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


_RATIONAL = re.compile(r"([+-]?\d+)(?:/(\d+))?")

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>z(?P<idx>\d+))|(?P<op>[-+*/^]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.replace("−", "-")
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise PolyParseError(f"unexpected character {text[start]!r}", text, start)
        if m.group("num") is not None:
            tokens.append(("num", int(m.group("num")), m.start("num")))
        elif m.group("var") is not None:
            tokens.append(("var", int(m.group("idx")), m.start("var")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return tokens, text


class _Parser:

    def __init__(self, text, nvars):
        self.tokens, self.text = _tokenize(text)
        self.nvars = nvars
        self.ring = chart_ring(nvars)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise PolyParseError("unexpected end of polynomial", self.text, len(self.text))
        self.i += 1
        return tok

    def fail(self, message, tok):
        pos = tok[2] if tok is not None else len(self.text)
        raise PolyParseError(message, self.text, pos)

    def parse(self):
        if not self.tokens:
            raise PolyParseError("empty polynomial", self.text, 0)
        total = self.ring.zero
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        total += self.term() * sign
        while self.peek() is not None:
            tok = self.take()
            if tok[0] != "op" or tok[1] not in "+-":
                self.fail(f"expected '+' or '-', found {tok[1]!r}", tok)
            sign = -1 if tok[1] == "-" else 1
            total += self.term() * sign
        return total

    def term(self):
        tok = self.peek()
        if tok is None:
            self.fail("expected a term", None)
        coeff = QQ(1)
        if tok[0] == "num":
            coeff = self.rational()
            if self.peek() is None or self.peek()[1] != "*":
                return self.ring(coeff)
            self.take()
        elif tok[0] != "var":
            self.fail(f"expected a number or a variable, found {tok[1]!r}", tok)
        monom = self.var_power()
        while self.peek() is not None and self.peek()[1] == "*":
            self.take()
            monom = monom * self.var_power()
        return monom * coeff

    def rational(self):
        tok = self.take()
        num = tok[1]
        if self.peek() is not None and self.peek()[1] == "/":
            self.take()
            den_tok = self.take()
            if den_tok[0] != "num":
                self.fail("expected a positive denominator", den_tok)
            if den_tok[1] == 0:
                self.fail("zero denominator", den_tok)
            return QQ(num, den_tok[1])
        return QQ(num)

    def var_power(self):
        tok = self.take()
        if tok[0] != "var":
            self.fail(f"expected a variable z<index>, found {tok[1]!r}", tok)
        idx = tok[1]
        if not 1 <= idx <= self.nvars:
            self.fail(f"variable z{idx} outside the chart z1..z{self.nvars}", tok)
        exponent = 1
        if self.peek() is not None and self.peek()[1] == "^":
            self.take()
            exp_tok = self.take()
            if exp_tok[0] != "num":
                self.fail("expected an exponent", exp_tok)
            exponent = exp_tok[1]
        return self.ring.gens[idx - 1] ** exponent


def parse_poly(text, nvars):
    """Parse a polynomial string of the manifest grammar into an element of chart_ring(nvars)."""
    if not isinstance(text, str):
        if isinstance(text, int):
            return chart_ring(nvars)(text)
        raise PolyParseError(f"polynomial must be a string, got {type(text).__name__}", "", 0)
    return _Parser(text, nvars).parse()


def format_poly(f):
    """Strict-grammar rendering: every term carries its rational, terms in descending lex order."""
    if not f:
        return "0"
    parts = []
    for monom, coeff in f.terms():
        factors = []
        for i, e in enumerate(monom):
            if e == 1:
                factors.append(f"z{i + 1}")
            elif e > 1:
                factors.append(f"z{i + 1}^{e}")
        body = format_rational(abs(coeff))
        if factors:
            body += "*" + "*".join(factors)
        if not parts:
            parts.append(f"-{body}" if coeff < 0 else body)
        else:
            parts.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return " ".join(parts)


def total_degree(f):
    if not f:
        return -1
    return max(sum(m) for m in f.itermonoms())


def in_coordinate_ideal(f, p):
    """Membership in the monomial ideal (z1, ..., zp)."""
    return all(any(m[:p]) for m in f.itermonoms())


def restrict_to_zero(f, p):
    """Set z1..zp = 0."""
    return f.ring.from_dict({m: c for m, c in f.iterterms() if not any(m[:p])})
