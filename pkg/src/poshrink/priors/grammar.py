"""
Parser for the prior mini-language shared by the command line::

    jeffreys
    constant
    power:beta=0.5
    gamma:alpha=1,beta=0.5
    shift-point:alpha=0.5,eta=1
    point:alpha=0.5,center=2,2,2
    sym-point:alpha=0.5,center=2
    sym-subspace:alpha=0.5,vperp=@basis.csv
    sym-subspace:alpha=max,span=1,1,1,1
    coord-subspace:alpha=0.5,include=1,2,3
    mix-coord-subspace:alpha=0.5
    sum:(coord-subspace:alpha=0.5,include=1,2,3)+(coord-subspace:alpha=0.5,include=1,2,4)

Values are comma separated; a token without ``=`` extends the value of the preceding key. Every shrinkage family
also accepts ``beta=`` and ``epsilon=``. Coordinate indices are one-based. ``alpha=max`` selects the largest value
permitted by the proposition certifying the family.
"""

import re
import typing as t

import numpy as np
import pandas as pd
from scipy import linalg
from smart_open import open

from poshrink.core import exceptions as core_exc
from poshrink.priors import families
from poshrink.priors.exceptions import GrammarError, HypothesisError
from poshrink.priors.spec import FPrior, GammaPrior, PowerPrior, PriorSpec

NAME_PATTERN = re.compile(r"[a-z][a-z-]*")

F_KEYS = {"beta", "epsilon"}
ALLOWED_KEYS = {
    "jeffreys": set(),
    "constant": {"beta"},
    "power": {"beta"},
    "gamma": {"alpha", "beta"},
    "shift-point": {"alpha", "eta"} | F_KEYS,
    "point": {"alpha", "center"} | F_KEYS,
    "sym-point": {"alpha", "center"} | F_KEYS,
    "sym-subspace": {"alpha", "vperp", "span"} | F_KEYS,
    "coord-subspace": {"alpha", "include"} | F_KEYS,
    "mix-coord-subspace": {"alpha"} | F_KEYS,
}


class _Value(t.NamedTuple):
    tokens: t.List[str]
    position: int


def read_basis(path: str) -> np.ndarray:
    """
    Read basis vectors, one per row, from a header-less CSV file.
    """
    with open(path, "r") as file:
        return pd.read_csv(file, header=None).to_numpy(dtype=float)


def complement_basis(span: np.ndarray, d: int) -> np.ndarray:
    """
    Orthonormal basis of the orthogonal complement of the row span of ``span``, one vector per row.
    """
    return linalg.null_space(np.atleast_2d(span).reshape(-1, d)).T


class _Parser:
    def __init__(self, text: str, d: int, offset: int = 0):
        self.text = text
        self.d = d
        self.offset = offset

    def error(self, message: str, position: int) -> GrammarError:
        return GrammarError(message, self.offset + position, self.text)

    def parse(self) -> PriorSpec:
        stripped = self.text.strip()
        lead = len(self.text) - len(self.text.lstrip())
        match = NAME_PATTERN.match(stripped)
        if not match:
            raise self.error("Expected a prior name", lead)
        name = match.group(0)
        rest_position = lead + match.end()
        rest = stripped[match.end() :]
        if name == "sum":
            if not rest.startswith(":"):
                raise self.error("Expected ':' after `sum`", rest_position)
            return self._parse_sum(rest[1:], rest_position + 1)
        if name not in ALLOWED_KEYS:
            raise self.error(f"Unknown prior `{name}`", lead)
        params: t.Dict[str, _Value] = {}
        if rest:
            if not rest.startswith(":"):
                raise self.error("Expected ':' before parameters", rest_position)
            params = self._parse_params(rest[1:], rest_position + 1)
        for key, value in params.items():
            if key not in ALLOWED_KEYS[name]:
                raise self.error(f"Unknown parameter `{key}` for `{name}`", value.position)
        return self._build(name, params)

    def _parse_params(self, text: str, position: int) -> t.Dict[str, _Value]:
        params: t.Dict[str, _Value] = {}
        current = None
        cursor = position
        for token in text.split(","):
            token_position = cursor + len(token) - len(token.lstrip())
            cursor += len(token) + 1
            token = token.strip()
            if not token:
                raise self.error("Empty value", token_position)
            if "=" in token:
                key, value = token.split("=", 1)
                key = key.strip()
                if key in params:
                    raise self.error(f"Duplicate parameter `{key}`", token_position)
                if not value.strip():
                    raise self.error(f"Missing value for `{key}`", token_position)
                current = key
                params[key] = _Value([value.strip()], token_position)
            elif current is None:
                raise self.error(f"Expected `key=value`, got `{token}`", token_position)
            else:
                params[current].tokens.append(token)
        return params

    def _parse_sum(self, text: str, position: int) -> FPrior:
        parts = []
        index = 0
        while True:
            while index < len(text) and text[index].isspace():
                index += 1
            if index >= len(text) or text[index] != "(":
                raise self.error("Expected '(' opening a sum part", position + index)
            depth, end = 0, None
            for j in range(index, len(text)):
                if text[j] == "(":
                    depth += 1
                elif text[j] == ")":
                    depth -= 1
                    if depth == 0:
                        end = j
                        break
            if end is None:
                raise self.error("Unbalanced parenthesis", position + index)
            inner = _Parser(text[index + 1 : end], self.d, self.offset + position + index + 1).parse()
            if not isinstance(inner, FPrior):
                raise self.error("Sum parts must be shrinkage priors", position + index + 1)
            parts.append(inner)
            index = end + 1
            while index < len(text) and text[index].isspace():
                index += 1
            if index == len(text):
                break
            if text[index] != "+":
                raise self.error("Expected '+' between sum parts", position + index)
            index += 1
        betas = {part.beta for part in parts}
        epsilons = {part.epsilon for part in parts}
        if len(betas) > 1 or len(epsilons) > 1:
            raise self.error("Sum parts must share `beta` and `epsilon`", position)
        return FPrior(
            family=families.Sum(parts=tuple(part.family for part in parts)),
            beta=parts[0].beta,
            epsilon=parts[0].epsilon,
        )

    def _floats(self, value: _Value, key: str) -> t.List[float]:
        try:
            return [float(token) for token in value.tokens]
        except ValueError:
            raise self.error(f"`{key}` expects numbers, got `{','.join(value.tokens)}`", value.position)

    def _vector(self, params: t.Dict[str, _Value], key: str, default: float) -> t.Tuple[float, ...]:
        if key not in params:
            return (default,) * self.d
        numbers = self._floats(params[key], key)
        if len(numbers) == 1:
            return tuple(numbers * self.d)
        if len(numbers) != self.d:
            raise self.error(f"`{key}` has {len(numbers)} entries, expected 1 or d={self.d}", params[key].position)
        return tuple(numbers)

    def _scalar(self, params: t.Dict[str, _Value], key: str, default: t.Optional[float] = None) -> float:
        if key not in params:
            if default is None:
                raise self.error(f"Missing required parameter `{key}`", len(self.text))
            return default
        numbers = self._floats(params[key], key)
        if len(numbers) != 1:
            raise self.error(f"`{key}` expects a single number", params[key].position)
        return numbers[0]

    def _subspace_basis(self, params: t.Dict[str, _Value]) -> t.Tuple[t.Tuple[float, ...], ...]:
        if ("vperp" in params) == ("span" in params):
            raise self.error("`sym-subspace` needs exactly one of `vperp=@file` or `span=`", len(self.text))
        if "vperp" in params:
            value = params["vperp"]
            reference = ",".join(value.tokens)
            if not reference.startswith("@"):
                raise self.error("`vperp` expects a file reference `@path`", value.position)
            try:
                basis = read_basis(reference[1:])
            except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
                raise self.error(f"Cannot read basis from `{reference[1:]}`: {e}", value.position)
        else:
            numbers = np.asarray(self._floats(params["span"], "span"))
            if numbers.size == 0 or numbers.size % self.d:
                raise self.error(f"`span` length must be a multiple of d={self.d}", params["span"].position)
            basis = complement_basis(numbers, self.d)
            if basis.size == 0:
                raise self.error("`span` covers the whole space", params["span"].position)
        return tuple(tuple(float(v) for v in row) for row in np.atleast_2d(basis))

    def _family(self, name: str, params: t.Dict[str, _Value], alpha: float) -> families.Family:
        if name == "shift-point":
            return families.ShiftPoint(alpha=alpha, eta=self._scalar(params, "eta", 0.0))
        if name == "point":
            return families.Point(alpha=alpha, center=self._vector(params, "center", 0.0))
        if name == "sym-point":
            return families.SymPoint(alpha=alpha, center=self._vector(params, "center", 0.0))
        if name == "sym-subspace":
            return families.SymSubspace(alpha=alpha, vperp=self._subspace_basis(params))
        if name == "coord-subspace":
            if "include" not in params:
                raise self.error("Missing required parameter `include`", len(self.text))
            numbers = self._floats(params["include"], "include")
            if any(n != int(n) or not 1 <= n <= self.d for n in numbers):
                raise self.error(f"`include` expects indices in 1..{self.d}", params["include"].position)
            return families.CoordSubspace(alpha=alpha, include=tuple(int(n) - 1 for n in numbers))
        if name == "mix-coord-subspace":
            return families.mix_coord_subspace(self.d, alpha)
        return families.Constant()

    def _build(self, name: str, params: t.Dict[str, _Value]) -> PriorSpec:
        if name == "jeffreys":
            return PowerPrior.jeffreys(self.d)
        beta = self._vector(params, "beta", 0.5)
        if name == "power":
            return PowerPrior(beta=beta)
        if name == "gamma":
            return GammaPrior(alpha=self._vector(params, "alpha", 0.0), beta=beta)
        epsilon = self._scalar(params, "epsilon", 0.0)
        if name == "constant":
            return FPrior(family=families.Constant(), beta=beta, epsilon=epsilon)

        alpha_value = params.get("alpha")
        if alpha_value is None:
            raise self.error("Missing required parameter `alpha`", len(self.text))
        if alpha_value.tokens == ["max"]:
            candidate = self._family(name, params, 1.0)
            bound = families_bound(candidate, self.d, np.asarray(beta))
            if bound is None:
                raise self.error(f"`alpha=max` is undefined for `{name}`", alpha_value.position)
            if bound <= 0:
                raise HypothesisError(f"No positive alpha is admissible for `{name}` at d={self.d}")
            alpha = bound
        else:
            alpha = self._scalar(params, "alpha")
        return FPrior(family=self._family(name, params, alpha), beta=beta, epsilon=epsilon)


def families_bound(family: families.Family, d: int, beta: np.ndarray) -> t.Optional[float]:
    if isinstance(family, families.Sum):
        bounds = [families_bound(part, d, beta) for part in family.parts]
        return None if any(b is None for b in bounds) else min(bounds)
    bound = family.alpha_bound(d, beta)
    return None if bound is None else bound[0]


def parse_prior(text: str, d: int) -> PriorSpec:
    """
    Parse a prior expression for a problem of dimension ``d``.

    :param text: Expression in the prior mini-language.
    :param d: Number of coordinates.

    :return: :class:`PowerPrior`, :class:`GammaPrior` or :class:`FPrior`.
    :raise GrammarError: On malformed input, with the character position of the problem.
    """
    if d < 1:
        raise core_exc.InvalidArgumentError(f"Dimension must be positive, got {d}")
    return _Parser(text, d).parse()


def parse_priors(text: str, d: int) -> t.List[t.Tuple[str, PriorSpec]]:
    """
    Parse a ``;``-separated list of prior expressions, keeping each expression as its label.
    """
    result = []
    offset = 0
    for expression in text.split(";"):
        if expression.strip():
            try:
                result.append((expression.strip(), parse_prior(expression, d)))
            except GrammarError as e:
                raise GrammarError(str(e).rsplit(" (at position", 1)[0], e.position + offset, text)
        offset += len(expression) + 1
    return result
