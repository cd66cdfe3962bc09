"""Line-oriented polynomial text format.

::

    # comment
    field: Q
    vars: x1 x2 x3
    2*x1^2*x3 - x2 + 1/3
    x1*x2

Terms are ``coef*var^e*...``; the coefficient is optional when it is 1, and
``^1`` may be omitted. Rationals are written ``p/q``. ``field:`` defaults to Q.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Sequence, Tuple

from . import orders
from .field import QQ, FieldError, parse_field
from .orders import TermOrder
from .polynomial import PolyRing, Polynomial


class FormatError(ValueError):
    """Malformed polynomial, DIMACS, graph or JSON input."""


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_NUMBER = re.compile(r"\d+(/\d+)?\Z")
_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    text = text.strip()
    if not text:
        raise FormatError("empty polynomial")
    field = ring.field
    index = {v: i for i, v in enumerate(ring.variables)}
    terms = {}
    pos = 0
    first = True
    while pos < len(text):
        match = _TERM.match(text, pos)
        if not match or (match.group(1) is None and not first):
            raise FormatError(f"cannot parse polynomial {text!r} near column {pos}")
        sign, body = match.group(1), match.group(2).strip()
        pos = match.end()
        first = False
        coef = Fraction(-1 if sign == "-" else 1)
        mono = [0] * ring.nvars
        factors = [f.strip() for f in body.split("*")]
        if not all(factors):
            raise FormatError(f"empty factor in term {body!r}")
        for k, factor in enumerate(factors):
            if _NUMBER.match(factor):
                if k != 0:
                    raise FormatError(f"coefficient must lead the term: {body!r}")
                num = Fraction(factor)
                if num.denominator == 0:
                    raise FormatError(f"zero denominator in {body!r}")
                coef *= num
                continue
            name, caret, exp = factor.partition("^")
            name, exp = name.strip(), exp.strip()
            if name not in index:
                raise FormatError(f"undeclared variable {name!r}")
            if caret and not exp.isdigit():
                raise FormatError(f"bad exponent in {factor!r}")
            e = int(exp) if caret else 1
            mono[index[name]] += e
        try:
            c = field.convert(coef)
        except (FieldError, ZeroDivisionError) as exc:
            raise FormatError(str(exc)) from None
        key = tuple(mono)
        c = field.add(terms[key], c) if key in terms else c
        if c == 0:
            terms.pop(key, None)
        else:
            terms[key] = c
    return Polynomial(ring, terms)


def _format_monomial(m, names) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(names[i])
        elif e > 1:
            parts.append(f"{names[i]}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial, order: TermOrder = orders.LEX) -> str:
    if p.is_zero():
        return "0"
    names = p.ring.variables
    out = []
    for k, (m, c) in enumerate(p.sorted_terms(order)):
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        mono = _format_monomial(m, names)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def parse_system(text: str) -> Tuple[PolyRing, List[Polynomial]]:
    """Parse a whole polynomial file into its ring and polynomial list."""
    field = QQ
    variables = None
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        key = head.strip().lower()
        if sep and key == "vars":
            if variables is not None:
                raise FormatError(f"line {lineno}: duplicate vars header")
            variables = rest.split()
            for v in variables:
                if not _NAME.match(v):
                    raise FormatError(f"line {lineno}: bad variable name {v!r}")
            continue
        if sep and key == "field":
            try:
                field = parse_field(rest)
            except FieldError as exc:
                raise FormatError(f"line {lineno}: {exc}") from None
            continue
        if sep:
            raise FormatError(f"line {lineno}: unknown header {head!r}")
        pending.append((lineno, line))
    if variables is None:
        raise FormatError("missing 'vars:' header")
    try:
        ring = PolyRing(tuple(variables), field)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    polys = []
    for lineno, line in pending:
        try:
            polys.append(parse_polynomial(line, ring))
        except FormatError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    return ring, polys


def format_system(
    ring: PolyRing,
    polys: Sequence[Polynomial],
    order: TermOrder = orders.LEX,
    comments: Sequence[str] = (),
) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"field: {ring.field}")
    lines.append("vars: " + " ".join(ring.variables))
    lines.extend(format_polynomial(p, order) for p in polys)
    return "\n".join(lines) + "\n"
