"""
Exact overlap detection: two distinct words whose composed maps coincide,
either at one rational parameter or identically in the parameter.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from ..config.config import get_config
from ..config.logging_config import (get_logger, log_execution_time, log_function_entry,
                                     log_function_exit)
from ..ifs.errors import BudgetExceededError, FamilyValidationError, ParseError
from ..ifs.family import FamilySpec, Word, compose_word, word_depth_limit
from ..ifs.rational import format_fraction, parse_fraction
from ..measure.lattice import lattice_digits

logger = get_logger(__name__)


class OverlapKind(Enum):
    AT_PARAMETER = "at_parameter"
    IDENTICAL = "identical"


@dataclass(frozen=True)
class OverlapWitness:
    """A pair of distinct words with equal composed maps."""
    word_i: Word
    word_j: Word
    kind: OverlapKind
    parameter: Optional[Fraction] = None

    def __post_init__(self):
        if self.word_i == self.word_j:
            raise FamilyValidationError(f"Witness words must differ, got {self.word_i} twice")
        if (self.kind is OverlapKind.AT_PARAMETER) != (self.parameter is not None):
            raise FamilyValidationError("Only parameter witnesses carry a parameter")

    def to_line(self) -> str:
        where = "identical" if self.kind is OverlapKind.IDENTICAL else format_fraction(self.parameter)
        return f"{self.word_i} ~ {self.word_j} @ {where}"

    @classmethod
    def from_line(cls, line: str) -> "OverlapWitness":
        try:
            pair, where = line.split("@")
            left, right = pair.split("~")
        except ValueError as e:
            raise ParseError(f"Malformed witness line: {line!r}") from e
        where = where.strip()
        if where == "identical":
            return cls(Word.parse(left), Word.parse(right), OverlapKind.IDENTICAL)
        return cls(Word.parse(left), Word.parse(right), OverlapKind.AT_PARAMETER,
                   parse_fraction(where))

    def to_dict(self):
        return {
            "word_i": str(self.word_i),
            "word_j": str(self.word_j),
            "kind": self.kind.value,
            "parameter": format_fraction(self.parameter) if self.parameter is not None else None,
        }

    @classmethod
    def from_dict(cls, data) -> "OverlapWitness":
        parameter = data.get("parameter")
        return cls(Word.parse(data["word_i"]), Word.parse(data["word_j"]),
                   OverlapKind(data["kind"]),
                   parse_fraction(parameter) if parameter is not None else None)


def witness_from_line(line: str) -> OverlapWitness:
    return OverlapWitness.from_line(line)


def exact_overlap_at(family: FamilySpec, u: Fraction, w1: Word, w2: Word) -> bool:
    """Do phi_w1 and phi_w2 have identical ratio and translation at u?"""
    if isinstance(u, float):
        raise FamilyValidationError("Exact overlap checks need a rational parameter")
    family.check_parameter(u)
    return compose_word(family, w1).at(u) == compose_word(family, w2).at(u)


def exact_overlap_identically(family: FamilySpec, w1: Word, w2: Word) -> bool:
    """Are the composed ratio and translation polynomials coefficient-wise equal?"""
    return compose_word(family, w1) == compose_word(family, w2)


def _word_from_index(index: int, m: int, n: int) -> Word:
    symbols = []
    for _ in range(n):
        index, digit = divmod(index, m)
        symbols.append(digit + 1)
    return Word(tuple(reversed(symbols)))


def level_offsets(digits: List[int], base: int, n: int) -> np.ndarray:
    """
    Integer cylinder points of all m^n words, indexed lexicographically
    (first symbol most significant), on the lattice 1/(q L^(n-1)).
    """
    bound = (max(abs(d) for d in digits) + 1) * base ** n
    dtype = np.int64 if bound < 2 ** 62 else object
    digit_arr = np.array(digits, dtype=dtype)
    values = np.zeros(1, dtype=dtype)
    for _ in range(n):
        values = (values[:, None] * base + digit_arr[None, :]).ravel()
    return values


def _check_word_budget(m: int, n: int) -> None:
    budget = get_config().engine.max_level_words
    if m ** n > budget:
        raise BudgetExceededError(f"{m}^{n} words exceed the budget of {budget}",
                                  requested=n, feasible=word_depth_limit(m, budget))


def _least_minimal_pair(members: np.ndarray, first: np.ndarray,
                        last: np.ndarray) -> Optional[Tuple[int, int]]:
    # pairs sharing a first or last symbol extend a shallower collision
    for pos in range(len(members) - 1):
        i = members[pos]
        rest = members[pos + 1:]
        ok = (first[rest] != first[i]) & (last[rest] != last[i])
        if ok.any():
            return int(i), int(rest[np.argmax(ok)])
    return None


@log_execution_time()
def overlap_search(family: FamilySpec, u: Fraction, n_max: int) -> List[OverlapWitness]:
    """
    Exact overlaps among words of equal length up to n_max at a rational u.

    For each depth, level values are grouped by exact equality and each class
    yields its lexicographically least pair that is not an extension (shared
    first or last symbol) of a shallower collision.

    Args:
        family: Homogeneous family
        u: Rational parameter inside the interval
        n_max: Deepest word length searched

    Returns:
        Witnesses ordered by depth, then by word
    """
    if n_max < 1:
        raise FamilyValidationError(f"n_max must be at least 1, got {n_max}")
    log_function_entry(logger, "overlap_search", family=family.name, u=u, n_max=n_max)
    digits, _ = lattice_digits(family, u)
    m, base = family.m, family.homogeneous_base
    _check_word_budget(m, n_max)

    witnesses: List[OverlapWitness] = []
    for n in range(1, n_max + 1):
        values = level_offsets(digits, base, n)
        order = np.argsort(values, kind="stable")
        ordered = values[order]
        boundary = np.r_[True, ordered[1:] != ordered[:-1], True]
        edges = np.flatnonzero(boundary)

        indices = np.arange(m ** n, dtype=np.int64)
        first = indices // (m ** (n - 1))
        last = indices % m
        for start, stop in zip(edges[:-1], edges[1:]):
            if stop - start < 2:
                continue
            pair = _least_minimal_pair(order[start:stop], first, last)
            if pair is None:
                continue
            witnesses.append(OverlapWitness(
                _word_from_index(pair[0], m, n), _word_from_index(pair[1], m, n),
                OverlapKind.AT_PARAMETER, Fraction(u)))
        logger.debug(f"depth {n}: {len(witnesses)} witnesses so far")

    witnesses.sort(key=lambda w: (len(w.word_i), w.word_i.symbols, w.word_j.symbols))
    log_function_exit(logger, "overlap_search", f"{len(witnesses)} witnesses")
    return witnesses
