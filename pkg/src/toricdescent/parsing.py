"""Shared text grammar for polynomial input.

Univariate: integer coefficients, variable x, operators + - * ^; e.g.
"x^3-x" or "2*x^2+3".  Multivariate forms use the variables X, Y, Z, W with
the same operators, e.g. "X^3+Y^3+W*Z^2".  Juxtaposition ("2x") and
parentheses are not part of the grammar.
"""

import re


class ParseError(Exception):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(\d+)|([a-zA-Z])|([+\-*^]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), pos))
        elif m.group(2) is not None:
            tokens.append(("var", m.group(2), pos))
        else:
            tokens.append(("op", m.group(3), pos))
        pos = m.end()
    return tokens


def parse_polynomial(text, variables):
    """Parse into a dict: exponent tuple (one slot per variable) -> int.

    Terms are separated by + or -; a term is a * product of factors; a factor
    is an integer or a variable with an optional ^ exponent.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial", 0)
    var_index = {v: i for i, v in enumerate(variables)}
    result = {}
    i = 0
    sign = 1
    # optional leading sign
    if tokens[0][:2] == ("op", "-"):
        sign = -1
        i = 1
    elif tokens[0][:2] == ("op", "+"):
        i = 1
    while True:
        coeff = sign
        expo = [0] * len(variables)
        expect_factor = True
        while True:
            if i >= len(tokens):
                if expect_factor:
                    raise ParseError("term ends without a factor",
                                     tokens[-1][2] if tokens else 0)
                break
            kind, value, pos = tokens[i]
            if expect_factor:
                if kind == "int":
                    coeff *= value
                    i += 1
                elif kind == "var":
                    if value not in var_index:
                        raise ParseError(f"unknown variable {value!r}", pos)
                    power = 1
                    i += 1
                    if i < len(tokens) and tokens[i][:2] == ("op", "^"):
                        i += 1
                        if i >= len(tokens) or tokens[i][0] != "int":
                            raise ParseError("exponent must be an integer",
                                             tokens[i - 1][2])
                        power = tokens[i][1]
                        i += 1
                    expo[var_index[value]] += power
                else:
                    raise ParseError(f"unexpected operator {value!r}", pos)
                expect_factor = False
            else:
                if kind == "op" and value == "*":
                    i += 1
                    expect_factor = True
                elif kind == "op" and value in "+-":
                    break
                else:
                    raise ParseError(
                        f"unexpected token {value!r} (juxtaposition is not allowed)",
                        pos)
        key = tuple(expo)
        result[key] = result.get(key, 0) + coeff
        if i >= len(tokens):
            break
        # consume the separating + or -
        kind, value, pos = tokens[i]
        assert kind == "op" and value in "+-"
        sign = 1 if value == "+" else -1
        i += 1
        if i >= len(tokens):
            raise ParseError("dangling sign", pos)
    return {k: v for k, v in result.items() if v != 0}


def parse_univariate(text):
    """Coefficient list (low degree first) of a polynomial in x."""
    terms = parse_polynomial(text, ["x"])
    if not terms:
        return [0]
    degree = max(e[0] for e in terms)
    out = [0] * (degree + 1)
    for (e,), c in terms.items():
        out[e] = c
    return out


def parse_cubic_form(text):
    """Exponent dict of a homogeneous cubic in X, Y, Z, W."""
    terms = parse_polynomial(text, ["X", "Y", "Z", "W"])
    for expo in terms:
        if sum(expo) != 3:
            raise ParseError(
                f"monomial of degree {sum(expo)} in a cubic form", 0)
    return terms


def format_univariate(coeffs, var="x"):
    """Render integer coefficients (low first) in the shared grammar."""
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = int(coeffs[e])
        if c == 0:
            continue
        mag = abs(c)
        if e == 0:
            body = str(mag)
        elif e == 1:
            body = f"{var}" if mag == 1 else f"{mag}*{var}"
        else:
            body = f"{var}^{e}" if mag == 1 else f"{mag}*{var}^{e}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += sign + body
    return out
